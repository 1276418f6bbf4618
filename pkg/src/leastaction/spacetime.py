"""Piecewise space-time solutions on (t, y) built from straight wave lines.

A solution is a list of time slabs.  Inside a slab, boundaries are lines
y = a + s (t - t_anchor) ordered left to right; region k lies between line
k-1 and line k.  Points on a line belong to the region on its right, and
t = T0 belongs to the later slab.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import riemann
from .eos import EosParams, State, energy_density, pressure, pressure_potential
from .errors import DomainError, HorizonError, InfeasibleError
from .riemann import RAREFACTION, RiemannData, Wave, WaveFan, solve_riemann
from .subsolution import (FanSubsolution, _admissibility_scales, admissibility_margins, check_feasibility,
                          rh_left_residuals, rh_right_residuals)
from .tolerance import DEFAULT_TOL, ToleranceConfig

INF = math.inf


@dataclass(frozen=True)
class Line:
    a: float
    s: float
    t_anchor: float = 0.0
    kind: str = ""

    def at(self, t):
        return self.a + self.s * (t - self.t_anchor)


@dataclass(frozen=True)
class Classical:
    state: State


@dataclass(frozen=True)
class Wild:
    """Wedge carrying a convex-integration subsolution: rho = rho1, |u|^2 = C1 a.e."""

    rho1: float
    u1: float
    v1: float
    C1: float

    def __post_init__(self):
        if not self.C1 > self.u1**2 + self.v1**2:
            raise DomainError("wild region needs C1 > u1^2 + v1^2")


@dataclass(frozen=True)
class FanInterior:
    """Inside a centred rarefaction; the state comes from the Riemann sampler."""

    fan: WaveFan
    wave: Wave

    def state_at(self, t, y) -> State:
        return riemann.sample(self.fan, t, y)


RegionState = Classical | Wild


@dataclass(frozen=True)
class Slab:
    t_start: float
    t_end: float
    lines: tuple[Line, ...]
    regions: tuple

    def __post_init__(self):
        if len(self.regions) != len(self.lines) + 1:
            raise ValueError("a slab needs exactly one more region than lines")


@dataclass(frozen=True)
class PiecewiseSolution:
    slabs: tuple[Slab, ...]
    eos: EosParams
    T: float
    horizon: float = INF
    horizon_pair: tuple[str, str] | None = None
    sub: FanSubsolution | None = None
    label: str = ""
    x_period: float | None = None

    @property
    def valid_until(self) -> float:
        return min(self.T, self.horizon)


# --------------------------------------------------------------------------
# construction
# --------------------------------------------------------------------------


def _fan_pieces(fan: WaveFan):
    t0, y0 = fan.center
    lines, regions = [], [Classical(fan.states[0])]
    for k, w in enumerate(fan.waves):
        if w.kind == RAREFACTION:
            lines.append(Line(y0, w.left_speed, t0, f"rarefaction-{w.family}-edge"))
            regions.append(FanInterior(fan, w))
            lines.append(Line(y0, w.right_speed, t0, f"rarefaction-{w.family}-edge"))
        else:
            lines.append(Line(y0, w.speed, t0, f"{w.kind}-{w.family}"))
        regions.append(Classical(fan.states[k + 1]))
    return lines, regions


def interaction_time(solution: PiecewiseSolution) -> float:
    return _interaction(solution.slabs)[0]


def _interaction(slabs, snap=DEFAULT_TOL.boundary):
    best, pair = INF, None
    for i, slab in enumerate(slabs):
        last = i == len(slabs) - 1
        for k in range(len(slab.lines) - 1):
            l1, l2 = slab.lines[k], slab.lines[k + 1]
            gap = l2.at(slab.t_start) - l1.at(slab.t_start)
            closing = l1.s - l2.s
            if closing <= 0:
                continue
            if gap <= snap * max(1.0, abs(l1.at(slab.t_start))):
                tc = slab.t_start
            else:
                tc = slab.t_start + gap / closing
            if not last and tc >= slab.t_end:
                continue
            if tc < best:
                best, pair = tc, (f"{l1.kind}@{l1.s:.6g}", f"{l2.kind}@{l2.s:.6g}")
    return best, pair


def _finish(slabs, eos, T, **kw) -> PiecewiseSolution:
    horizon, pair = _interaction(slabs)
    if T >= horizon:
        raise HorizonError(f"T={T:.6g} reaches the interaction horizon {horizon:.6g} "
                           f"where {pair[0]} meets {pair[1]}")
    return PiecewiseSolution(tuple(slabs), eos, T, horizon, pair, **kw)


def build_1d_solution(data: RiemannData, T: float, tol: ToleranceConfig = DEFAULT_TOL) -> PiecewiseSolution:
    """x-independent self-similar solution on [0, T]."""
    if not T > 0:
        raise DomainError("T must be positive")
    fan = solve_riemann(data, (0.0, 0.0), tol)
    lines, regions = _fan_pieces(fan)
    return _finish([Slab(0.0, T, tuple(lines), tuple(regions))], data.eos, T, label="1d")


def build_glued_solution(data: RiemannData, sub: FanSubsolution, T0: float, T: float,
                         tol: ToleranceConfig = DEFAULT_TOL, validate: bool = True) -> PiecewiseSolution:
    """Wild wedge on [0, T0] glued to the classical fans from its two corners.

    With ``validate=False`` the feasibility check is skipped and a wedge with
    C1 <= |u1|^2 is stored as a classical state; this allows gluing a
    classical solution to itself.
    """
    if not T > T0 > 0:
        raise DomainError("need T > T0 > 0")
    if validate:
        rep = check_feasibility(sub, data, tol)
        if not rep.feasible:
            raise InfeasibleError(f"subsolution infeasible: {rep.verdict}", rep.violations)
    if sub.C1 > sub.u1**2 + sub.v1**2:
        wedge = Wild(sub.rho1, sub.u1, sub.v1, sub.C1)
    else:
        wedge = Classical(sub.state)
    early = Slab(0.0, T0,
                 (Line(0.0, sub.mu0, 0.0, "wild-interface-left"), Line(0.0, sub.mu1, 0.0, "wild-interface-right")),
                 (Classical(data.left), wedge, Classical(data.right)))

    y0, y1 = sub.mu0 * T0, sub.mu1 * T0
    fan_l = solve_riemann(RiemannData(data.left, sub.state, data.eos), (T0, y0), tol)
    fan_r = solve_riemann(RiemannData(sub.state, data.right, data.eos), (T0, y1), tol)
    ll, rl = _fan_pieces(fan_l)
    lr, rr = _fan_pieces(fan_r)
    late = Slab(T0, T, tuple(ll + lr), tuple(rl[:-1] + rr))
    return _finish([early, late], data.eos, T, sub=sub, label="glued")


# --------------------------------------------------------------------------
# evaluation
# --------------------------------------------------------------------------


def _slab_at(solution, t, snap):
    k = 0
    for i, s in enumerate(solution.slabs):
        if t >= s.t_start - snap * max(1.0, abs(s.t_start)):
            k = i
    return solution.slabs[k]


def _check_time(solution, t):
    if not (0 < t <= solution.T and t < solution.horizon):
        raise DomainError(f"t={t} outside validity (0, {solution.valid_until}]")


def region_index(solution: PiecewiseSolution, t: float, y: float,
                 tol: ToleranceConfig = DEFAULT_TOL) -> tuple[Slab, int]:
    _check_time(solution, t)
    slab = _slab_at(solution, t, tol.boundary)
    idx = 0
    for ln in slab.lines:
        b = ln.at(t)
        if y >= b - tol.boundary * max(1.0, abs(b)):
            idx += 1
    return slab, idx


def regions_containing(solution: PiecewiseSolution, t: float, y: float,
                       tol: ToleranceConfig = DEFAULT_TOL) -> list[int]:
    """Indices of every region whose own inequalities admit (t, y).

    Used to check tiling independently of :func:`region_index`.
    """
    _check_time(solution, t)
    slab = _slab_at(solution, t, tol.boundary)
    hits = []
    for k in range(len(slab.regions)):
        lo = -INF if k == 0 else slab.lines[k - 1].at(t)
        hi = INF if k == len(slab.lines) else slab.lines[k].at(t)
        lo_ok = lo == -INF or y >= lo - tol.boundary * max(1.0, abs(lo))
        hi_ok = hi == INF or y < hi - tol.boundary * max(1.0, abs(hi))
        if lo_ok and hi_ok:
            hits.append(k)
    return hits


def evaluate(solution: PiecewiseSolution, t: float, y: float,
             tol: ToleranceConfig = DEFAULT_TOL) -> RegionState:
    slab, idx = region_index(solution, t, y, tol)
    reg = slab.regions[idx]
    if isinstance(reg, FanInterior):
        return Classical(reg.state_at(t, y))
    return reg


def outer_extent(solutions, T: float) -> float:
    """Smallest L2 beyond which every solution equals its outer data on (0, T)."""
    ext = 0.0
    for sol in solutions:
        for slab in sol.slabs:
            if slab.t_start >= T:
                continue
            ta, tb = slab.t_start, min(slab.t_end, T)
            for ln in slab.lines:
                ext = max(ext, abs(ln.at(ta)), abs(ln.at(tb)))
    return ext


# --------------------------------------------------------------------------
# boundary verification
# --------------------------------------------------------------------------


@dataclass
class BoundaryCheck:
    slab: int
    kind: str
    speed: float | None
    residuals: np.ndarray
    margin: float
    ok: bool
    where: str = ""
    details: dict = field(default_factory=dict)


def _payload_state(reg, t, y):
    if isinstance(reg, FanInterior):
        return reg.state_at(t, y)
    if isinstance(reg, Classical):
        return reg.state
    return None


def _energy(eos, reg, t, y):
    if isinstance(reg, Wild):
        return 0.5 * reg.rho1 * reg.C1 + pressure_potential(eos, reg.rho1), (reg.rho1, reg.rho1 * reg.u1, reg.rho1 * reg.v1)
    s = _payload_state(reg, t, y)
    return energy_density(eos, s), (s.rho, s.rho * s.u, s.rho * s.v)


def check_boundaries(solution: PiecewiseSolution, tol: ToleranceConfig = DEFAULT_TOL) -> list[BoundaryCheck]:
    """Jump conditions and energy margins on every internal boundary.

    Residuals and margins are divided by the largest term entering them.
    Includes the horizontal seams between slabs, where the energy must not
    increase going forward in time.
    """
    eos = solution.eos
    out: list[BoundaryCheck] = []
    for si, slab in enumerate(solution.slabs):
        tm = 0.5 * (slab.t_start + min(slab.t_end, solution.valid_until))
        for k, ln in enumerate(slab.lines):
            a, b = slab.regions[k], slab.regions[k + 1]
            if isinstance(a, FanInterior) or isinstance(b, FanInterior):
                y = ln.at(tm)
                eps = 1e-9 * max(1.0, abs(y))
                sa, sb = _payload_state(a, tm, y - eps), _payload_state(b, tm, y + eps)
                jump = np.array([sa.rho - sb.rho, sa.u - sb.u, sa.v - sb.v]) / max(1.0, sa.rho, abs(sa.v))
                ok = bool(np.all(np.abs(jump) <= 1e-6))
                out.append(BoundaryCheck(si, ln.kind, ln.s, jump, 0.0, ok, "rarefaction edge"))
                continue
            if isinstance(b, Wild):
                terms = rh_left_residuals(solution.sub, a.state, eos)
                res = terms / _wild_scale(solution.sub, a.state, eos, ln.s)
                margin, scale = _wild_margin(solution.sub, a.state, eos, left_side=True)
            elif isinstance(a, Wild):
                terms = rh_right_residuals(solution.sub, b.state, eos)
                res = terms / _wild_scale(solution.sub, b.state, eos, ln.s)
                margin, scale = _wild_margin(solution.sub, b.state, eos, left_side=False)
            else:
                res = riemann.check_rh(eos, ln.s, a.state, b.state) / np.maximum(
                    1.0, riemann.rh_scale(eos, ln.s, a.state, b.state))
                margin = riemann.check_energy_dissipation(eos, ln.s, a.state, b.state)
                scale = max(1.0, riemann.energy_scale(eos, ln.s, a.state, b.state))
            m = margin / scale
            ok = bool(np.all(np.abs(res) <= tol.residual_abs) and m >= -tol.residual_abs)
            out.append(BoundaryCheck(si, ln.kind, ln.s, res, m, ok))
        if si + 1 < len(solution.slabs):
            out.extend(_seam_checks(solution, si, tol))
    return out


def _wild_scale(sub, outer, eos, s):
    vals = [abs(s) * outer.rho, abs(s) * sub.rho1, outer.rho * abs(outer.v), sub.rho1 * abs(sub.v1),
            outer.rho * outer.v**2, sub.rho1 * abs(sub.C1 / 2 - sub.gamma1), pressure(eos, outer.rho),
            pressure(eos, sub.rho1), sub.rho1 * abs(sub.delta1), outer.rho * abs(outer.u * outer.v)]
    return max(1.0, max(vals))


def _wild_margin(sub, outer, eos, left_side):
    k = 0 if left_side else 1
    return (admissibility_margins(sub, outer, outer, eos)[k],
            _admissibility_scales(sub, outer, outer, eos)[k])


def _seam_checks(solution, si, tol):
    before, after = solution.slabs[si], solution.slabs[si + 1]
    ts = after.t_start
    eos = solution.eos
    cuts = sorted({ln.at(ts) for ln in before.lines} | {ln.at(ts) for ln in after.lines})
    if not cuts:
        probes = [0.0]
    else:
        inner = [0.5 * (p + q) for p, q in zip(cuts, cuts[1:]) if q - p > 1e-12 * max(1.0, abs(q))]
        probes = [cuts[0] - 1.0] + inner + [cuts[-1] + 1.0]
    out = []
    for y in probes:
        ia = sum(1 for ln in before.lines if y >= ln.at(ts))
        ib = sum(1 for ln in after.lines if y >= ln.at(ts))
        ea, qa = _energy(eos, before.regions[ia], ts, y)
        eb, qb = _energy(eos, after.regions[ib], ts, y)
        scale = max(1.0, abs(ea), abs(eb))
        res = (np.array(qa) - np.array(qb)) / max(1.0, *(abs(x) for x in qa + qb))
        margin = (ea - eb) / scale
        ok = bool(np.all(np.abs(res) <= tol.residual_abs) and margin >= -tol.residual_abs)
        out.append(BoundaryCheck(si, "seam", None, res, margin, ok, where=f"t={ts:.6g}, y={y:.6g}",
                                 details={"energy_before": ea, "energy_after": eb}))
    return out


# --------------------------------------------------------------------------
# serialization
# --------------------------------------------------------------------------


def _num(x):
    return None if x is None or not math.isfinite(x) else float(x)


def _payload_dict(reg):
    if isinstance(reg, Classical):
        s = reg.state
        return {"kind": "classical", "rho": s.rho, "u": s.u, "v": s.v}
    if isinstance(reg, Wild):
        return {"kind": "wild", "rho1": reg.rho1, "u1": reg.u1, "v1": reg.v1, "C1": reg.C1}
    w = reg.wave
    return {"kind": "rarefaction", "family": w.family, "center": list(reg.fan.center),
            "head": w.head, "tail": w.tail}


def to_dict(solution: PiecewiseSolution) -> dict:
    """JSON-ready region map.  ``horizon`` is null when no interaction occurs."""
    return {
        "label": solution.label,
        "eos": {"K": solution.eos.K, "gamma": solution.eos.gamma},
        "T": solution.T,
        "horizon": _num(solution.horizon),
        "x_period": solution.x_period,
        "slabs": [
            {
                "t_start": s.t_start,
                "t_end": s.t_end,
                "boundaries": [{"a": ln.a, "s": ln.s, "t_anchor": ln.t_anchor, "kind": ln.kind} for ln in s.lines],
                "regions": [_payload_dict(r) for r in s.regions],
            }
            for s in solution.slabs
        ],
    }
