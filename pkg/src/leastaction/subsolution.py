"""Fan subsolutions: residuals, margins, feasibility, and the 2-parameter family.

A fan subsolution fills the wedge mu0 t < y < mu1 t with a state of density
rho1, mean velocity (u1, v1), kinetic level |u|^2 = C1 and Reynolds-type
stress entries gamma1 (traceless diagonal) and delta1 (off-diagonal).
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace

import numpy as np

from . import fixture as F
from .eos import DEFAULT_EOS, EosParams, State, pressure, pressure_potential
from .errors import DomainError, SolverError
from .riemann import RiemannData
from .tolerance import DEFAULT_TOL, ToleranceConfig

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class FanSubsolution:
    mu0: float
    mu1: float
    rho1: float
    u1: float
    v1: float
    gamma1: float
    delta1: float
    C1: float

    def __post_init__(self):
        if not self.rho1 > 0:
            raise DomainError(f"rho1 must be positive, got {self.rho1}")
        if not self.C1 > 0:
            raise DomainError(f"C1 must be positive, got {self.C1}")

    @property
    def state(self) -> State:
        """Mean state (rho1, u1, v1) handed to the Riemann problems at T0."""
        return State(self.rho1, self.u1, self.v1)

    def reflected(self) -> FanSubsolution:
        """Mirror image under y -> -y."""
        return FanSubsolution(-self.mu1, -self.mu0, self.rho1, self.u1, -self.v1,
                              self.gamma1, -self.delta1, self.C1)

    def unknowns(self) -> np.ndarray:
        return np.array([self.mu0, self.mu1, self.u1, self.v1, self.gamma1, self.delta1])

    @classmethod
    def from_unknowns(cls, x, rho1: float, C1: float) -> FanSubsolution:
        mu0, mu1, u1, v1, gamma1, delta1 = (float(z) for z in x)
        return cls(mu0, mu1, rho1, u1, v1, gamma1, delta1, C1)


@dataclass
class FeasibilityReport:
    rh_left: np.ndarray
    rh_right: np.ndarray
    rh_left_scaled: np.ndarray
    rh_right_scaled: np.ndarray
    subsolution_margins: np.ndarray
    admissibility_margins: np.ndarray
    speed_order: float
    violations: list[str] = field(default_factory=list)

    @property
    def feasible(self) -> bool:
        return not self.violations

    @property
    def verdict(self) -> str:
        return "feasible" if self.feasible else "infeasible(" + ", ".join(self.violations) + ")"

    @property
    def worst_residual(self) -> float:
        return float(max(np.max(np.abs(self.rh_left_scaled)), np.max(np.abs(self.rh_right_scaled))))

    def to_dict(self) -> dict:
        return {
            "feasible": self.feasible,
            "violations": list(self.violations),
            "rh_left": [float(x) for x in self.rh_left],
            "rh_right": [float(x) for x in self.rh_right],
            "worst_scaled_residual": self.worst_residual,
            "subsolution_margins": [float(x) for x in self.subsolution_margins],
            "admissibility_margins": [float(x) for x in self.admissibility_margins],
            "speed_order": float(self.speed_order),
        }


# --------------------------------------------------------------------------
# residuals and margins
# --------------------------------------------------------------------------


def _rh_left_terms(sub: FanSubsolution, left: State, eos: EosParams):
    r, u, v = left.rho, left.u, left.v
    r1 = sub.rho1
    stress = sub.C1 / 2 - sub.gamma1
    p, p1 = pressure(eos, r), pressure(eos, r1)
    return (
        (sub.mu0 * r, -sub.mu0 * r1, -r * v, r1 * sub.v1),
        (sub.mu0 * r * u, -sub.mu0 * r1 * sub.u1, -r * u * v, r1 * sub.delta1),
        (sub.mu0 * r * v, -sub.mu0 * r1 * sub.v1, -r * v * v, r1 * stress, -p, p1),
    )


def _rh_right_terms(sub: FanSubsolution, right: State, eos: EosParams):
    r, u, v = right.rho, right.u, right.v
    r1 = sub.rho1
    stress = sub.C1 / 2 - sub.gamma1
    p, p1 = pressure(eos, r), pressure(eos, r1)
    return (
        (sub.mu1 * r1, -sub.mu1 * r, -r1 * sub.v1, r * v),
        (sub.mu1 * r1 * sub.u1, -sub.mu1 * r * u, -r1 * sub.delta1, r * u * v),
        (sub.mu1 * r1 * sub.v1, -sub.mu1 * r * v, -r1 * stress, r * v * v, -p1, p),
    )


def rh_left_residuals(sub: FanSubsolution, left: State, eos: EosParams = DEFAULT_EOS) -> np.ndarray:
    """LHS - RHS of the three jump conditions on y = mu0 t."""
    return np.array([sum(t) for t in _rh_left_terms(sub, left, eos)])


def rh_right_residuals(sub: FanSubsolution, right: State, eos: EosParams = DEFAULT_EOS) -> np.ndarray:
    """LHS - RHS of the three jump conditions on y = mu1 t."""
    return np.array([sum(t) for t in _rh_right_terms(sub, right, eos)])


def _scales(terms) -> np.ndarray:
    return np.array([max(1.0, max(abs(x) for x in t)) for t in terms])


def subsolution_margins(sub: FanSubsolution) -> np.ndarray:
    """Both strict subsolution inequalities as left-hand sides (> 0 needed)."""
    m1 = sub.C1 - sub.u1**2 - sub.v1**2
    m2 = ((sub.C1 / 2 - sub.u1**2 + sub.gamma1) * (sub.C1 / 2 - sub.v1**2 - sub.gamma1)
          - (sub.delta1 - sub.u1 * sub.v1) ** 2)
    return np.array([m1, m2])


def _subsolution_scales(sub: FanSubsolution) -> np.ndarray:
    s1 = max(sub.C1, sub.u1**2, sub.v1**2)
    a = abs(sub.C1 / 2) + sub.u1**2 + abs(sub.gamma1)
    b = abs(sub.C1 / 2) + sub.v1**2 + abs(sub.gamma1)
    s2 = a * b + (abs(sub.delta1) + abs(sub.u1 * sub.v1)) ** 2
    return np.array([s1, s2])


def _wild_energy(sub, eos):
    e = 0.5 * sub.rho1 * sub.C1 + pressure_potential(eos, sub.rho1)
    return e, (e + pressure(eos, sub.rho1)) * sub.v1


def _classical_energy(s: State, eos):
    e = 0.5 * s.rho * s.speed2 + pressure_potential(eos, s.rho)
    return e, (e + pressure(eos, s.rho)) * s.v


def admissibility_margins(sub: FanSubsolution, left: State, right: State,
                          eos: EosParams = DEFAULT_EOS) -> np.ndarray:
    """RHS - LHS of the two energy inequalities (>= 0 needed)."""
    e1, f1 = _wild_energy(sub, eos)
    el, fl = _classical_energy(left, eos)
    er, fr = _classical_energy(right, eos)
    return np.array([(fl - f1) - sub.mu0 * (el - e1), (f1 - fr) - sub.mu1 * (e1 - er)])


def _admissibility_scales(sub, left, right, eos):
    e1, f1 = _wild_energy(sub, eos)
    el, fl = _classical_energy(left, eos)
    er, fr = _classical_energy(right, eos)
    return np.array([max(1.0, abs(fl), abs(f1), abs(sub.mu0) * el, abs(sub.mu0) * e1),
                     max(1.0, abs(fr), abs(f1), abs(sub.mu1) * er, abs(sub.mu1) * e1)])


def check_feasibility(sub: FanSubsolution, data: RiemannData,
                      tol: ToleranceConfig = DEFAULT_TOL) -> FeasibilityReport:
    eos = data.eos
    lt = _rh_left_terms(sub, data.left, eos)
    rt = _rh_right_terms(sub, data.right, eos)
    rl = np.array([sum(t) for t in lt])
    rr = np.array([sum(t) for t in rt])
    rls, rrs = rl / _scales(lt), rr / _scales(rt)
    sm = subsolution_margins(sub)
    am = admissibility_margins(sub, data.left, data.right, eos)

    violations = []
    if not sub.mu0 < sub.mu1:
        violations.append("order of speeds")
    for name, res in (("rh_left", rls), ("rh_right", rrs)):
        for k, label in enumerate(("mass", "x-momentum", "y-momentum")):
            if not abs(res[k]) <= tol.residual_abs:
                violations.append(f"{name} {label}")
    sscale = _subsolution_scales(sub)
    for k in range(2):
        if not sm[k] > tol.strict * sscale[k]:
            violations.append(f"subsolution margin {k + 1}")
    ascale = _admissibility_scales(sub, data.left, data.right, eos)
    for k, side in enumerate(("left", "right")):
        if not am[k] >= -tol.residual_abs * ascale[k]:
            violations.append(f"admissibility {side}")
    return FeasibilityReport(rl, rr, rls, rrs, sm, am, sub.mu1 - sub.mu0, violations)


# --------------------------------------------------------------------------
# the two-parameter family
# --------------------------------------------------------------------------


def _residual_vector(x, data: RiemannData, rho1: float, C1: float):
    mu0, mu1, u1, v1, g1, d1 = x
    l, r, eos = data.left, data.right, data.eos
    p_l, p_r, p1 = pressure(eos, l.rho), pressure(eos, r.rho), pressure(eos, rho1)
    stress = C1 / 2 - g1
    return np.array([
        mu0 * (l.rho - rho1) - (l.rho * l.v - rho1 * v1),
        mu0 * (l.rho * l.u - rho1 * u1) - (l.rho * l.u * l.v - rho1 * d1),
        mu0 * (l.rho * l.v - rho1 * v1) - (l.rho * l.v**2 - rho1 * stress + p_l - p1),
        mu1 * (rho1 - r.rho) - (rho1 * v1 - r.rho * r.v),
        mu1 * (rho1 * u1 - r.rho * r.u) - (rho1 * d1 - r.rho * r.u * r.v),
        mu1 * (rho1 * v1 - r.rho * r.v) - (rho1 * stress - r.rho * r.v**2 + p1 - p_r),
    ])


def _jacobian(x, data: RiemannData, rho1: float):
    mu0, mu1, u1, v1, _, _ = x
    l, r = data.left, data.right
    J = np.zeros((6, 6))
    J[0, 0], J[0, 3] = l.rho - rho1, rho1
    J[1, 0], J[1, 2], J[1, 5] = l.rho * l.u - rho1 * u1, -mu0 * rho1, rho1
    J[2, 0], J[2, 3], J[2, 4] = l.rho * l.v - rho1 * v1, -mu0 * rho1, -rho1
    J[3, 1], J[3, 3] = rho1 - r.rho, -rho1
    J[4, 1], J[4, 2], J[4, 5] = rho1 * u1 - r.rho * r.u, mu1 * rho1, -rho1
    J[5, 1], J[5, 3], J[5, 4] = rho1 * v1 - r.rho * r.v, mu1 * rho1, rho1
    return J


def solve_family(data: RiemannData, rho1: float, C1: float, seed: FanSubsolution,
                 tol: float = 1e-13, max_iter: int = 100, max_halvings: int = 30) -> FanSubsolution:
    """Damped Newton on the six jump conditions at fixed (rho1, C1).

    ``seed`` supplies starting values for (mu0, mu1, u1, v1, gamma1, delta1).
    Feasibility is not implied; run :func:`check_feasibility` on the result.
    """
    x = seed.unknowns().astype(float)
    scale = max(1.0, np.max(np.abs(_residual_vector(np.zeros(6), data, rho1, C1))))
    F = _residual_vector(x, data, rho1, C1)
    norm = np.linalg.norm(F) / scale
    for it in range(max_iter):
        if norm <= tol:
            break
        J = _jacobian(x, data, rho1)
        cond = np.linalg.cond(J)
        if not np.isfinite(cond) or cond > 1e14:
            raise SolverError(f"singular Jacobian (cond={cond:.3g})", residual=norm)
        log.debug("newton it=%d |F|=%.3e cond(J)=%.3e", it, norm, cond)
        step = np.linalg.solve(J, -F)
        lam = 1.0
        for _ in range(max_halvings):
            xn = x + lam * step
            Fn = _residual_vector(xn, data, rho1, C1)
            nn = np.linalg.norm(Fn) / scale
            if nn < norm:
                break
            lam *= 0.5
        else:
            raise SolverError("line search failed to reduce the residual", residual=norm)
        x, F, norm = xn, Fn, nn
    else:
        if norm > tol:
            raise SolverError(f"no convergence in {max_iter} iterations", residual=norm)
    return FanSubsolution.from_unknowns(x, rho1, C1)


@dataclass
class ScanRow:
    rho1: float
    C1: float
    sub: FanSubsolution | None
    report: FeasibilityReport | None
    K: float | None
    error: str = ""

    @property
    def feasible(self) -> bool:
        return self.report is not None and self.report.feasible


def scan_family(data: RiemannData, rho1_range: tuple[float, float], C1_range: tuple[float, float],
                shape: tuple[int, int], seed: FanSubsolution | None = None,
                tol: ToleranceConfig = DEFAULT_TOL, T: float = 1.0) -> list[ScanRow]:
    """Grid scan of solve_family + check_feasibility.

    For feasible cells whose glued solution is interaction-free up to T with
    T0 = T/2, ``K`` is its action divided by T**2 (window fitted to the pair
    with the 1-D solution).  Per-cell failures are recorded in ``error``.
    """
    from .action import glued_action_coefficient

    if seed is None:
        seed = paper_fixture().sub
    n_rho, n_c = shape
    rhos = np.linspace(*rho1_range, n_rho) if n_rho > 1 else np.array([rho1_range[0]])
    cs = np.linspace(*C1_range, n_c) if n_c > 1 else np.array([C1_range[0]])
    rows = []
    for rho1 in rhos:
        for C1 in cs:
            rho1, C1 = float(rho1), float(C1)
            try:
                start = replace(seed, rho1=rho1, C1=C1)
                sub = solve_family(data, rho1, C1, start)
            except (SolverError, DomainError) as exc:
                rows.append(ScanRow(rho1, C1, None, None, None, str(exc)))
                continue
            rep = check_feasibility(sub, data, tol)
            K, err = None, ""
            if rep.feasible:
                try:
                    K = glued_action_coefficient(data, sub, T=T, tol=tol)
                except Exception as exc:  # horizon or solver failure downstream
                    err = f"{type(exc).__name__}: {exc}"
            rows.append(ScanRow(rho1, C1, sub, rep, K, err))
    return rows


# --------------------------------------------------------------------------
# the explicit counterexample
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class PaperFixture:
    data: RiemannData
    sub: FanSubsolution
    speeds: dict
    intermediate: tuple[State, State]


def paper_fixture() -> PaperFixture:
    """Riemann data, fan subsolution and post-T0 wave structure of the
    two-shock counterexample (K = 1, gamma = 2)."""
    eos = EosParams(1.0, 2.0)
    data = RiemannData(State(F.RHO_MINUS, 0.0, F.V_MINUS), State(F.RHO_MINUS, 0.0, -F.V_MINUS), eos)
    sub = FanSubsolution(F.MU0, F.MU1, F.RHO1, F.U1, F.V1, F.GAMMA1, F.DELTA1, F.C1)
    speeds = {"mu0": F.MU0, "mu1": F.MU1, "mu2": F.MU2, "mu3": F.MU3, "mu4": F.MU4, "mu5": F.MU5}
    return PaperFixture(data, sub, speeds, (State(F.RHO2, 0.0, F.V2), State(F.RHO2, 0.0, -F.V2)))
