"""Polytropic barotropic gas: p(rho) = K rho**gamma."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class EosParams:
    K: float = 1.0
    gamma: float = 2.0

    def __post_init__(self):
        if not self.K > 0:
            raise DomainError(f"pressure coefficient K must be positive, got {self.K}")
        if not self.gamma > 1:
            raise DomainError(f"adiabatic exponent gamma must exceed 1, got {self.gamma}")


@dataclass(frozen=True)
class State:
    """Constant fluid state; u is tangential (x), v is normal (y) velocity."""

    rho: float
    u: float = 0.0
    v: float = 0.0

    def __post_init__(self):
        if not (self.rho > 0 and math.isfinite(self.rho)):
            raise DomainError(f"density must be positive and finite, got {self.rho}")

    def reflected(self) -> State:
        """Mirror image under y -> -y."""
        return State(self.rho, self.u, -self.v)

    @property
    def speed2(self) -> float:
        return self.u * self.u + self.v * self.v


DEFAULT_EOS = EosParams()


def _check_rho(rho):
    if np.any(np.asarray(rho) <= 0):
        raise DomainError(f"density must be positive, got {rho}")


def pressure(eos: EosParams, rho):
    _check_rho(rho)
    return eos.K * rho**eos.gamma


def pressure_derivative(eos: EosParams, rho):
    _check_rho(rho)
    return eos.K * eos.gamma * rho ** (eos.gamma - 1)


def pressure_potential(eos: EosParams, rho):
    """P(rho) = rho * int^rho p(r)/r^2 dr = K rho**gamma / (gamma - 1)."""
    _check_rho(rho)
    return eos.K * rho**eos.gamma / (eos.gamma - 1)


def sound_speed(eos: EosParams, rho):
    c = np.sqrt(pressure_derivative(eos, rho))
    return float(c) if np.ndim(c) == 0 else c


def action_density(eos: EosParams, state: State) -> float:
    """Lagrangian density 1/2 rho |u|^2 - P(rho)."""
    return 0.5 * state.rho * state.speed2 - pressure_potential(eos, state.rho)


def energy_density(eos: EosParams, state: State) -> float:
    return 0.5 * state.rho * state.speed2 + pressure_potential(eos, state.rho)


def energy_density_with_kinetic(eos: EosParams, rho: float, C: float) -> float:
    """Energy density when only |u|^2 = C is known (wild region)."""
    if C < 0:
        raise DomainError(f"kinetic level must be non-negative, got {C}")
    return 0.5 * rho * C + pressure_potential(eos, rho)


def energy_flux(eos: EosParams, state: State) -> float:
    """Normal energy flux (E + p) v."""
    return (energy_density(eos, state) + pressure(eos, state.rho)) * state.v
