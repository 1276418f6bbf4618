"""Exact solver for the planar (x-independent) Riemann problem.

The normal velocity v is the y-component; the tangential velocity u is
passively advected and jumps only across a contact moving with the middle
normal velocity.  Jumps are written ``[X] = X_left - X_right``.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .eos import DEFAULT_EOS, EosParams, State, energy_density, energy_flux, pressure, sound_speed
from .errors import DegenerateInputError, DomainError, SolverError, VacuumError
from .tolerance import DEFAULT_TOL, ToleranceConfig

log = logging.getLogger(__name__)

SHOCK = "shock"
RAREFACTION = "rarefaction"
CONTACT = "contact"


@dataclass(frozen=True)
class RiemannData:
    left: State
    right: State
    eos: EosParams = DEFAULT_EOS

    def reflected(self) -> RiemannData:
        """The y-mirrored problem: sides swap and normal velocities flip."""
        return RiemannData(self.right.reflected(), self.left.reflected(), self.eos)


@dataclass(frozen=True)
class Wave:
    """One elementary wave. Shocks and contacts carry ``speed``; rarefactions
    carry ``head`` (leading edge) and ``tail``."""

    kind: str
    family: int
    left_state: State
    right_state: State
    speed: float | None = None
    head: float | None = None
    tail: float | None = None

    @property
    def left_speed(self) -> float:
        if self.kind != RAREFACTION:
            return self.speed
        return min(self.head, self.tail)

    @property
    def right_speed(self) -> float:
        if self.kind != RAREFACTION:
            return self.speed
        return max(self.head, self.tail)

    def invariant(self, eos: EosParams) -> float:
        """Riemann invariant that is constant through a rarefaction fan."""
        if self.family == 1:
            s = self.left_state
            return s.v + 2 * sound_speed(eos, s.rho) / (eos.gamma - 1)
        s = self.right_state
        return s.v - 2 * sound_speed(eos, s.rho) / (eos.gamma - 1)


@dataclass(frozen=True)
class WaveFan:
    """Self-similar solution centred at ``center = (t0, y0)``."""

    center: tuple[float, float]
    waves: tuple[Wave, ...]
    states: tuple[State, ...]
    eos: EosParams = DEFAULT_EOS
    branches: tuple[str, str] = (SHOCK, SHOCK)
    rho_m: float = float("nan")

    @property
    def left(self) -> State:
        return self.states[0]

    @property
    def right(self) -> State:
        return self.states[-1]


@dataclass(frozen=True)
class MiddleState:
    rho: float
    v: float
    kinds: tuple[str, str]
    residual: float
    bracket: tuple[float, float] = field(default=(float("nan"), float("nan")))


# --------------------------------------------------------------------------
# wave curves
# --------------------------------------------------------------------------


def hugoniot_velocity_jump(eos: EosParams, rho_from: float, rho_to: float) -> float:
    """|dv| across a shock joining the two densities."""
    if rho_from <= 0 or rho_to <= 0:
        raise DomainError("densities must be positive")
    if rho_from == rho_to:
        raise DegenerateInputError("equal densities: no shock joins them")
    d = rho_to - rho_from
    return abs(d) * math.sqrt(_pressure_slope(eos, rho_from, rho_to) / (rho_to * rho_from))


def _pressure_slope(eos: EosParams, a: float, b: float) -> float:
    """(p(b) - p(a)) / (b - a) without cancellation for b close to a."""
    d = b - a
    return eos.K * a**eos.gamma * math.expm1(eos.gamma * math.log1p(d / a)) / d


def rarefaction_velocity_change(eos: EosParams, rho_from: float, rho_to: float) -> float:
    """Integral of c(r)/r from rho_from to rho_to, in closed form."""
    if rho_from <= 0 or rho_to <= 0:
        raise DomainError("densities must be positive")
    g = eos.gamma
    k = 2 * math.sqrt(eos.K * g) / (g - 1)
    return k * (rho_to ** ((g - 1) / 2) - rho_from ** ((g - 1) / 2))


def _curve_drop(eos, rho_side, rho):
    """Velocity drop along the outgoing wave curve from rho_side to rho.

    Shock branch for compression, rarefaction branch otherwise.  A 1-wave
    gives v_M = v_l - drop, a 3-wave gives v_M = v_r + drop.
    """
    if rho > rho_side:
        return hugoniot_velocity_jump(eos, rho_side, rho)
    return rarefaction_velocity_change(eos, rho_side, rho)


def _curve_drop_derivative(eos, rho_side, rho):
    if rho > rho_side:
        a = rho_side
        dp = pressure(eos, rho) - pressure(eos, a)
        g = (rho - a) * dp / (rho * a)
        dg = (dp + (rho - a) * eos.K * eos.gamma * rho ** (eos.gamma - 1)) / (rho * a) - g / rho
        return dg / (2 * math.sqrt(g))
    return sound_speed(eos, rho) / rho


def _mismatch(data, rho):
    eos = data.eos
    return (data.left.v - _curve_drop(eos, data.left.rho, rho)) - (
        data.right.v + _curve_drop(eos, data.right.rho, rho))


def _mismatch_derivative(data, rho):
    eos = data.eos
    return -_curve_drop_derivative(eos, data.left.rho, rho) - _curve_drop_derivative(eos, data.right.rho, rho)


def _check_monotone(data, lo, hi):
    grid = np.unique(np.linspace(lo, hi, 17))
    if grid.size < 3:  # bracket at rounding level
        return
    vals = np.array([_mismatch(data, r) for r in grid])
    noise = 1e-13 * max(1.0, float(np.max(np.abs(vals))), abs(data.left.v), abs(data.right.v))
    if not (np.all(np.diff(vals) < noise) and vals[0] > vals[-1]):
        raise SolverError(f"middle-state function not strictly decreasing on [{lo}, {hi}]")


def solve_middle_density(data: RiemannData, tol: ToleranceConfig = DEFAULT_TOL) -> MiddleState:
    """Density and normal velocity between the 1-wave and the 3-wave."""
    eos, left, right = data.eos, data.left, data.right
    g = eos.gamma
    budget = 2 * (sound_speed(eos, left.rho) + sound_speed(eos, right.rho)) / (g - 1)
    if right.v - left.v >= budget:
        raise VacuumError(
            f"vacuum forms: v_r - v_l = {right.v - left.v:.6g} exceeds rarefaction budget {budget:.6g}")

    hi = max(left.rho, right.rho)
    f_hi = _mismatch(data, hi)
    if f_hi == 0:
        lo = hi
    elif f_hi > 0:
        lo = hi
        for _ in range(2000):
            hi *= 2
            if _mismatch(data, hi) <= 0:
                break
        else:
            raise SolverError("could not bracket the middle density from above")
    else:
        lo = min(left.rho, right.rho)
        for _ in range(2000):
            if _mismatch(data, lo) >= 0:
                break
            lo /= 2
        else:
            raise SolverError("could not bracket the middle density from below")

    bracket = (lo, hi)
    if hi > lo:
        _check_monotone(data, lo, hi)
    while hi - lo > tol.root_width * max(1.0, hi):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if _mismatch(data, mid) > 0:
            lo = mid
        else:
            hi = mid
    rho = 0.5 * (lo + hi)
    f = _mismatch(data, rho)
    for _ in range(3):
        d = _mismatch_derivative(data, rho)
        if d == 0:
            break
        cand = rho - f / d
        if not (bracket[0] <= cand <= bracket[1]):
            break
        fc = _mismatch(data, cand)
        if abs(fc) > abs(f):
            break
        rho, f = cand, fc

    v = left.v - _curve_drop(eos, left.rho, rho)
    kinds = (SHOCK if rho > left.rho else RAREFACTION, SHOCK if rho > right.rho else RAREFACTION)
    return MiddleState(rho=rho, v=v, kinds=kinds, residual=abs(f), bracket=bracket)


def shock_speed(eos: EosParams, left: State, right: State) -> float:
    """Speed from the mass jump condition."""
    if left.rho == right.rho:
        raise DegenerateInputError("equal densities: use a contact instead")
    return (left.rho * left.v - right.rho * right.v) / (left.rho - right.rho)


def _lax_shock_speed(eos: EosParams, upstream: State, rho_down: float, family: int) -> float:
    """Shock speed from the upstream state; equal to the mass-RH quotient but
    well conditioned for weak shocks."""
    w = math.sqrt(rho_down / upstream.rho * _pressure_slope(eos, upstream.rho, rho_down))
    return upstream.v - w if family == 1 else upstream.v + w


def _trivial(a, b, tol):
    return abs(a - b) <= tol.strict * max(1.0, abs(a), abs(b))


def solve_riemann(data: RiemannData, center: tuple[float, float] = (0.0, 0.0),
                  tol: ToleranceConfig = DEFAULT_TOL) -> WaveFan:
    """Full wave fan. Zero-strength waves are omitted."""
    eos, left, right = data.eos, data.left, data.right
    if left == right:
        return WaveFan(center, (), (left,), eos, branches=("none", "none"), rho_m=left.rho)

    mid = solve_middle_density(data, tol)
    skip1 = _trivial(mid.rho, left.rho, tol)
    skip3 = _trivial(mid.rho, right.rho, tol)
    if skip1:
        rho_m, v_m = left.rho, left.v
    elif skip3:
        rho_m, v_m = right.rho, right.v
    else:
        rho_m, v_m = mid.rho, mid.v
    # states on either side of the contact
    ml = left if skip1 else State(rho_m, left.u, v_m)
    mr = right if skip3 else State(rho_m, right.u, v_m)

    waves: list[Wave] = []
    states: list[State] = [left]
    branches = ["none", "none"]
    if not skip1:
        branches[0] = mid.kinds[0]
        if mid.kinds[0] == SHOCK:
            waves.append(Wave(SHOCK, 1, left, ml, speed=_lax_shock_speed(eos, left, rho_m, 1)))
        else:
            waves.append(Wave(RAREFACTION, 1, left, ml,
                              head=left.v - sound_speed(eos, left.rho),
                              tail=v_m - sound_speed(eos, rho_m)))
        states.append(ml)
    if not _trivial(left.u, right.u, tol):
        waves.append(Wave(CONTACT, 2, states[-1], mr, speed=v_m))
        states.append(mr)
    if not skip3:
        branches[1] = mid.kinds[1]
        lft = states[-1]
        if mid.kinds[1] == SHOCK:
            waves.append(Wave(SHOCK, 3, lft, right, speed=_lax_shock_speed(eos, right, rho_m, 3)))
        else:
            waves.append(Wave(RAREFACTION, 3, lft, right,
                              tail=v_m + sound_speed(eos, rho_m),
                              head=right.v + sound_speed(eos, right.rho)))
        states.append(right)

    fan = WaveFan(center, tuple(waves), tuple(states), eos, tuple(branches), rho_m)
    log.debug("riemann fan at %s: branches=%s rho_M=%.17g", center, fan.branches, rho_m)
    return fan


# --------------------------------------------------------------------------
# evaluation
# --------------------------------------------------------------------------


def sample_xi(fan: WaveFan, xi: float, tol: ToleranceConfig = DEFAULT_TOL) -> State:
    """State at similarity coordinate xi = (y - y0)/(t - t0).

    A point on a discontinuity (to within ``tol.boundary``) takes the state
    on its right.
    """
    eos = fan.eos
    for i, wave in enumerate(fan.waves):
        a = wave.left_speed
        if xi < a - tol.boundary * max(1.0, abs(a)):
            return fan.states[i]
        if wave.kind == RAREFACTION:
            b = wave.right_speed
            if xi < b - tol.boundary * max(1.0, abs(b)):
                rho, v = _kernels.rarefaction_interior(wave.family, wave.invariant(eos), xi,
                                                       eos.K, eos.gamma)
                u = wave.left_state.u if wave.family == 1 else wave.right_state.u
                return State(rho, u, v)
    return fan.states[-1]


def sample(fan: WaveFan, t: float, y: float, tol: ToleranceConfig = DEFAULT_TOL) -> State:
    t0, y0 = fan.center
    if not t > t0:
        raise DomainError(f"fan centred at t0={t0} cannot be sampled at t={t}")
    return sample_xi(fan, (y - y0) / (t - t0), tol)


def sample_profile(fan: WaveFan, xi) -> np.ndarray:
    """Array of (rho, u, v) rows for an array of similarity coordinates."""
    out = np.empty((len(xi), 3))
    for k, x in enumerate(xi):
        s = sample_xi(fan, float(x))
        out[k] = (s.rho, s.u, s.v)
    return out


# --------------------------------------------------------------------------
# jump conditions
# --------------------------------------------------------------------------


def _fluxes(eos, s: State):
    p = pressure(eos, s.rho)
    return (np.array([s.rho, s.rho * s.u, s.rho * s.v]),
            np.array([s.rho * s.v, s.rho * s.u * s.v, s.rho * s.v * s.v + p]))


def check_rh(eos: EosParams, speed: float, left: State, right: State) -> np.ndarray:
    """(mass, x-momentum, y-momentum) residuals of s[q] - [f]."""
    ql, fl = _fluxes(eos, left)
    qr, fr = _fluxes(eos, right)
    return speed * (ql - qr) - (fl - fr)


def rh_scale(eos: EosParams, speed: float, left: State, right: State) -> np.ndarray:
    """Largest term magnitude entering each residual of :func:`check_rh`."""
    ql, fl = _fluxes(eos, left)
    qr, fr = _fluxes(eos, right)
    return np.maximum.reduce([abs(speed) * np.abs(ql), abs(speed) * np.abs(qr), np.abs(fl), np.abs(fr)])


def check_energy_dissipation(eos: EosParams, speed: float, left: State, right: State) -> float:
    """Entropy-production margin [F] - s[E]; admissible iff >= 0."""
    return (energy_flux(eos, left) - energy_flux(eos, right)) - speed * (
        energy_density(eos, left) - energy_density(eos, right))


def energy_scale(eos: EosParams, speed: float, left: State, right: State) -> float:
    return max(abs(energy_flux(eos, left)), abs(energy_flux(eos, right)),
               abs(speed) * energy_density(eos, left), abs(speed) * energy_density(eos, right))
