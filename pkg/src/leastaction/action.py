"""Action functional: exact region integration, quadrature cross-check,
time profiles A(t) and its running integral, and solution comparison."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from . import _kernels
from .eos import EosParams, action_density, pressure_potential
from .errors import DomainError, HorizonError
from .riemann import RiemannData
from .spacetime import (Classical, FanInterior, PiecewiseSolution, Wild, build_1d_solution,
                        build_glued_solution, outer_extent)
from .subsolution import FanSubsolution
from .tolerance import DEFAULT_TOL, ToleranceConfig


@dataclass(frozen=True)
class ActionWindow:
    """Integration box |x| <= L1, |y| <= L2, 0 <= t <= T."""

    L1: float
    L2: float
    T: float

    def __post_init__(self):
        if not (self.L1 > 0 and self.L2 > 0 and self.T > 0):
            raise DomainError("window half-widths and final time must be positive")


def default_window(solutions, T: float, L1: float = 1.0) -> ActionWindow:
    """L2 = outer extent of the solutions (1 when every solution is constant)."""
    L2 = outer_extent(solutions, T)
    return ActionWindow(L1, L2 if L2 > 0 else 1.0, T)


def region_action_density(eos: EosParams, rs) -> float:
    if isinstance(rs, Wild):
        return 0.5 * rs.rho1 * rs.C1 - pressure_potential(eos, rs.rho1)
    if isinstance(rs, Classical):
        return action_density(eos, rs.state)
    raise TypeError(f"no constant action density for {type(rs).__name__}")


# --------------------------------------------------------------------------
# exact integration
# --------------------------------------------------------------------------


def _check_window(solution: PiecewiseSolution, window: ActionWindow, tol: ToleranceConfig):
    if window.T >= solution.horizon:
        raise HorizonError(f"T={window.T} reaches the interaction horizon {solution.horizon}")
    if window.T > solution.T * (1 + tol.boundary):
        raise DomainError(f"window T={window.T} exceeds the solution's final time {solution.T}")
    ext = outer_extent([solution], window.T)
    if window.L2 < ext * (1 - tol.boundary):
        warnings.warn(f"L2={window.L2} is below the outer extent {ext}; regions are clipped",
                      stacklevel=3)


def _bounds(slab, k):
    lo = slab.lines[k - 1] if k > 0 else None
    hi = slab.lines[k] if k < len(slab.lines) else None
    return lo, hi


def _clipped(line, t, L2, default):
    if line is None:
        return default
    return min(max(line.at(t), -L2), L2)


def _exit_times(slab, L2, ta, tb):
    """Times in (ta, tb) where some boundary line crosses y = +-L2."""
    out = set()
    for ln in slab.lines:
        if ln.s == 0:
            continue
        for edge in (-L2, L2):
            t = ln.t_anchor + (edge - ln.a) / ln.s
            if ta < t < tb:
                out.add(t)
    return sorted(out)


def _slab_span(slab, T):
    return slab.t_start, min(slab.t_end, T)


def _width(slab, k, t, L2):
    lo, hi = _bounds(slab, k)
    return max(0.0, _clipped(hi, t, L2, L2) - _clipped(lo, t, L2, -L2))


def _rarefaction_g(eos, reg: FanInterior, xa, xb, tol):
    w = reg.wave
    inv, u = w.invariant(eos), (w.left_state.u if w.family == 1 else w.right_state.u)
    val, _ = integrate.quad(lambda xi: _kernels.rarefaction_action(w.family, inv, u, xi, eos.K, eos.gamma),
                            xa, xb, epsabs=tol.quad, epsrel=tol.quad, limit=200)
    return val


def _rarefaction_row(eos, slab, k, t, L2, tol):
    """Integral over y of the action density across a rarefaction at time t."""
    reg = slab.regions[k]
    t0, y0 = reg.fan.center
    lo, hi = _bounds(slab, k)
    ya, yb = _clipped(lo, t, L2, -L2), _clipped(hi, t, L2, L2)
    if yb <= ya or t <= t0:
        return 0.0
    return (t - t0) * _rarefaction_g(eos, reg, (ya - y0) / (t - t0), (yb - y0) / (t - t0), tol)


def _rarefaction_clipped(slab, k, L2, ta, tb):
    lo, hi = _bounds(slab, k)
    for ln in (lo, hi):
        for t in (ta, tb):
            if abs(ln.at(t)) > L2:
                return True
    return False


def action_closed_form(solution: PiecewiseSolution, window: ActionWindow,
                       tol: ToleranceConfig = DEFAULT_TOL) -> float:
    """Sum over regions of density x clipped area x 2 L1.

    Clipped widths are piecewise linear in t, so trapezoids between their
    kinks are exact.  Rarefaction regions use adaptive quadrature in the
    similarity variable.
    """
    _check_window(solution, window, tol)
    L2, eos = window.L2, solution.eos
    total = 0.0
    for slab in solution.slabs:
        ta, tb = _slab_span(slab, window.T)
        if tb <= ta:
            continue
        knots = [ta] + _exit_times(slab, L2, ta, tb) + [tb]
        for k, reg in enumerate(slab.regions):
            if isinstance(reg, FanInterior):
                t0 = reg.fan.center[0]
                if not _rarefaction_clipped(slab, k, L2, ta, tb):
                    lo, hi = _bounds(slab, k)
                    g = _rarefaction_g(eos, reg, lo.s, hi.s, tol)
                    total += g * 0.5 * ((tb - t0) ** 2 - (ta - t0) ** 2)
                else:
                    val, _ = integrate.quad(lambda t: _rarefaction_row(eos, slab, k, t, L2, tol), ta, tb,
                                            points=knots[1:-1] or None, epsabs=tol.quad, epsrel=tol.quad,
                                            limit=200)
                    total += val
                continue
            a = region_action_density(eos, reg)
            area = sum(0.5 * (p1 - p0) * (_width(slab, k, p0, L2) + _width(slab, k, p1, L2))
                       for p0, p1 in zip(knots, knots[1:]))
            total += a * area
    return 2 * window.L1 * total


# --------------------------------------------------------------------------
# quadrature cross-check
# --------------------------------------------------------------------------


def compile_regions(solution: PiecewiseSolution):
    """Flatten a region map into the array layout used by the kernels."""
    eos = solution.eos
    slab_t0, line_ptr, region_ptr, lines, regions = [], [0], [0], [], []
    for slab in solution.slabs:
        slab_t0.append(slab.t_start)
        for ln in slab.lines:
            lines.append((ln.a, ln.s, ln.t_anchor))
        for reg in slab.regions:
            if isinstance(reg, FanInterior):
                w = reg.wave
                u = w.left_state.u if w.family == 1 else w.right_state.u
                t0, y0 = reg.fan.center
                regions.append((_kernels.RAREFACTION, 0.0, w.family, w.invariant(eos), u, t0, y0))
            else:
                regions.append((_kernels.CONSTANT, region_action_density(eos, reg), 0, 0, 0, 0, 0))
        line_ptr.append(len(lines))
        region_ptr.append(len(regions))
    return (np.array(slab_t0, dtype=np.float64), np.array(line_ptr, dtype=np.int64),
            np.array(lines, dtype=np.float64).reshape(-1, 3), np.array(region_ptr, dtype=np.int64),
            np.array(regions, dtype=np.float64).reshape(-1, 7))


def midpoint_nodes(window: ActionWindow, grid: tuple[int, int]):
    nt, ny = grid
    ts = window.T * (2 * np.arange(nt) + 1) / (2 * nt)
    ys = -window.L2 + window.L2 * (2 * np.arange(ny) + 1) / ny
    return ts, ys


def action_quadrature(solution: PiecewiseSolution, window: ActionWindow, grid: tuple[int, int] = (512, 512),
                      tol: ToleranceConfig = DEFAULT_TOL, kernel=None) -> float:
    """Tensor midpoint rule over (t, y), times 2 L1.

    Uses only pointwise region lookup, never region areas.  ``kernel`` can
    force a specific implementation (e.g. ``_kernels.midpoint_sum_numpy``).
    """
    _check_window(solution, window, tol)
    nt, ny = grid
    ts, ys = midpoint_nodes(window, grid)
    slab_t0, line_ptr, lines, region_ptr, regions = compile_regions(solution)
    fn = kernel or _kernels.midpoint_action_sum
    s = fn(ts, ys, slab_t0, line_ptr, lines, region_ptr, regions,
           float(solution.eos.K), float(solution.eos.gamma), float(tol.boundary))
    return float(2 * window.L1 * s * (window.T / nt) * (2 * window.L2 / ny))


# --------------------------------------------------------------------------
# time profiles
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Segment:
    t0: float
    t1: float
    A0: float  # limit from the right at t0
    A1: float  # limit from the left at t1

    @property
    def slope(self) -> float:
        return (self.A1 - self.A0) / (self.t1 - self.t0)


@dataclass(frozen=True)
class ActionProfile:
    """Piecewise-linear t -> A(t), right-continuous at breakpoints."""

    segments: tuple[Segment, ...]

    @property
    def breakpoints(self) -> list[float]:
        return [s.t0 for s in self.segments] + [self.segments[-1].t1]

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = np.empty_like(t)
        for i, s in enumerate(self.segments):
            last = i == len(self.segments) - 1
            m = (t >= s.t0) & ((t <= s.t1) if last else (t < s.t1))
            out[m] = s.A0 + s.slope * (t[m] - s.t0)
        return out if out.ndim else float(out)

    def jumps(self, rel: float = 1e-12) -> list[tuple[float, float]]:
        """(t, A(t+) - A(t-)) at every discontinuity."""
        out = []
        for a, b in zip(self.segments, self.segments[1:]):
            d = b.A0 - a.A1
            if abs(d) > rel * max(1.0, abs(a.A1), abs(b.A0)):
                out.append((b.t0, d))
        return out

    def integral(self) -> float:
        return sum(0.5 * (s.t1 - s.t0) * (s.A0 + s.A1) for s in self.segments)


def _A_at(solution, slab, t, L2, L1, tol):
    eos = solution.eos
    total = 0.0
    for k, reg in enumerate(slab.regions):
        if isinstance(reg, FanInterior):
            total += _rarefaction_row(eos, slab, k, t, L2, tol)
        else:
            total += region_action_density(eos, reg) * _width(slab, k, t, L2)
    return 2 * L1 * total


def action_profile(solution: PiecewiseSolution, window: ActionWindow,
                   tol: ToleranceConfig = DEFAULT_TOL) -> ActionProfile:
    """Exact A(t) with breakpoints at slab seams and window exits."""
    _check_window(solution, window, tol)
    segs = []
    for slab in solution.slabs:
        ta, tb = _slab_span(slab, window.T)
        if tb <= ta:
            continue
        knots = [ta] + _exit_times(slab, window.L2, ta, tb) + [tb]
        for k, reg in enumerate(slab.regions):
            if isinstance(reg, FanInterior) and _rarefaction_clipped(slab, k, window.L2, ta, tb):
                raise DomainError("A(t) is not piecewise linear when a rarefaction leaves the window; "
                                  "use L2 >= outer extent")
        for p0, p1 in zip(knots, knots[1:]):
            segs.append(Segment(p0, p1, _A_at(solution, slab, p0, window.L2, window.L1, tol),
                                _A_at(solution, slab, p1, window.L2, window.L1, tol)))
    return ActionProfile(tuple(segs))


@dataclass(frozen=True)
class CumulativeAction:
    """Piecewise-quadratic running integral of a profile."""

    profile: ActionProfile
    offsets: tuple[float, ...]

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        segs = self.profile.segments
        for i, s in enumerate(segs):
            last = i == len(segs) - 1
            m = (t >= s.t0) & ((t <= s.t1) if last else (t < s.t1))
            tau = t[m] - s.t0
            out[m] = self.offsets[i] + s.A0 * tau + 0.5 * s.slope * tau**2
        return out if out.ndim else float(out)

    def coefficients(self, p: float):
        """(value, derivative, second derivative) at p, from the segment containing p."""
        segs = self.profile.segments
        i = max(0, min(len(segs) - 1, int(np.searchsorted([s.t0 for s in segs], p, side="right")) - 1))
        s = segs[i]
        d = p - s.t0
        return (self.offsets[i] + s.A0 * d + 0.5 * s.slope * d * d, s.A0 + s.slope * d, s.slope)

    @property
    def final(self) -> float:
        s = self.profile.segments[-1]
        return self.offsets[-1] + 0.5 * (s.t1 - s.t0) * (s.A0 + s.A1)


def cumulative_action(profile: ActionProfile) -> CumulativeAction:
    offsets, acc = [], 0.0
    for s in profile.segments:
        offsets.append(acc)
        acc += 0.5 * (s.t1 - s.t0) * (s.A0 + s.A1)
    return CumulativeAction(profile, tuple(offsets))


# --------------------------------------------------------------------------
# comparison
# --------------------------------------------------------------------------


def _quadratic_roots(c0, c1, c2):
    """Real roots of c0 + c1 x + c2 x^2 (exact zero polynomial -> none)."""
    if c2 == 0:
        if c1 == 0:
            return []
        return [-c0 / c1]
    disc = c1 * c1 - 4 * c2 * c0
    if disc < 0:
        return []
    sq = math.sqrt(disc)
    q = -0.5 * (c1 + math.copysign(sq, c1))
    roots = [q / c2]
    if q != 0:
        roots.append(c0 / q)
    elif disc == 0:
        pass
    return roots


@dataclass
class Comparison:
    action_a: float
    action_b: float
    difference: float
    verdict: str
    crossings: list[float]
    window: ActionWindow
    profile_a: ActionProfile = field(repr=False)
    profile_b: ActionProfile = field(repr=False)
    cumulative_a: CumulativeAction = field(repr=False)
    cumulative_b: CumulativeAction = field(repr=False)

    @property
    def a_beats_b(self) -> bool:
        return self.verdict == "a_lower"

    def to_dict(self) -> dict:
        return {"action_a": self.action_a, "action_b": self.action_b, "difference": self.difference,
                "verdict": self.verdict, "crossings": list(self.crossings),
                "window": {"L1": self.window.L1, "L2": self.window.L2, "T": self.window.T}}


def compare(sol_a: PiecewiseSolution, sol_b: PiecewiseSolution, window: ActionWindow | None = None,
            T: float | None = None, tol: ToleranceConfig = DEFAULT_TOL, rel: float = 1e-12) -> Comparison:
    """Compare actions of two solutions sharing one window.

    ``crossings`` lists every real root in (0, T) of the difference of the
    running actions, found piece by piece in closed form.
    """
    if window is None:
        window = default_window([sol_a, sol_b], T if T is not None else min(sol_a.T, sol_b.T))
    pa, pb = action_profile(sol_a, window, tol), action_profile(sol_b, window, tol)
    ca, cb = cumulative_action(pa), cumulative_action(pb)
    va, vb = ca.final, cb.final
    diff = va - vb
    scale = max(abs(va), abs(vb), 1e-300)
    if abs(diff) <= rel * scale:
        verdict = "equal"
    else:
        verdict = "a_lower" if diff < 0 else "b_lower"

    knots = sorted(set(pa.breakpoints) | set(pb.breakpoints))
    Tw = window.T
    roots = []
    for p, q in zip(knots, knots[1:]):
        va0, da0, sa = ca.coefficients(p)
        vb0, db0, sb = cb.coefficients(p)
        c0, c1, c2 = va0 - vb0, da0 - db0, 0.5 * (sa - sb)
        # coefficients at rounding level are zero
        if abs(c0) <= rel * max(abs(va0), abs(vb0), 1e-300):
            c0 = 0.0
        if abs(c1) <= rel * max(abs(da0), abs(db0), 1e-300):
            c1 = 0.0
        if abs(c2) <= rel * max(abs(sa), abs(sb), 1e-300):
            c2 = 0.0
        for tau in _quadratic_roots(c0, c1, c2):
            t = p + tau
            if tau >= 0 and tau <= q - p and 1e-10 * Tw < t < Tw:
                if not roots or abs(t - roots[-1]) > 1e-10 * Tw:
                    roots.append(t)
    roots.sort()
    return Comparison(va, vb, diff, verdict, roots, window, pa, pb, ca, cb)


# --------------------------------------------------------------------------
# reports
# --------------------------------------------------------------------------


@dataclass
class ActionReport:
    value_closed_form: float
    value_quadrature: float | None
    quadrature_grid: tuple[int, int] | None
    profile: ActionProfile
    cumulative: CumulativeAction
    window: ActionWindow
    comparison: Comparison | None = None

    @property
    def K(self) -> float:
        """value / T**2; the action coefficient for self-similar families."""
        return self.value_closed_form / self.window.T**2

    def to_dict(self) -> dict:
        d = {
            "value_closed_form": self.value_closed_form,
            "value_quadrature": self.value_quadrature,
            "quadrature_grid": list(self.quadrature_grid) if self.quadrature_grid else None,
            "K": self.K,
            "window": {"L1": self.window.L1, "L2": self.window.L2, "T": self.window.T},
            "A_segments": [{"t0": s.t0, "t1": s.t1, "A0": s.A0, "A1": s.A1} for s in self.profile.segments],
            "A_tilde_at_breakpoints": [float(self.cumulative(t)) for t in self.profile.breakpoints],
            "A_jumps": [{"t": t, "jump": j} for t, j in self.profile.jumps()],
        }
        if self.comparison is not None:
            d["comparison"] = self.comparison.to_dict()
        return d


def action_report(solution: PiecewiseSolution, window: ActionWindow, grid: tuple[int, int] | None = None,
                  other: PiecewiseSolution | None = None, tol: ToleranceConfig = DEFAULT_TOL) -> ActionReport:
    prof = action_profile(solution, window, tol)
    cum = cumulative_action(prof)
    quad = action_quadrature(solution, window, grid, tol) if grid else None
    cmp_ = compare(solution, other, window, tol=tol) if other is not None else None
    return ActionReport(action_closed_form(solution, window, tol), quad, grid, prof, cum, window, cmp_)


def glued_action_coefficient(data: RiemannData, sub: FanSubsolution, T: float = 1.0,
                             tol: ToleranceConfig = DEFAULT_TOL) -> float:
    """Action / T**2 of the glued solution with T0 = T/2, window fitted to it
    and the 1-D solution."""
    glued = build_glued_solution(data, sub, T / 2, T, tol)
    oned = build_1d_solution(data, T, tol)
    return action_closed_form(glued, default_window([glued, oned], T), tol) / T**2
