"""Tolerance policy injected into every check."""
from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class ToleranceConfig:
    """Numerical tolerances.

    residual_abs: bound on residuals after dividing by max(1, term scale)
    residual_rel: relative bound used for wave-curve and speed consistency
    strict: strict inequalities need margin > strict * scale
    boundary: points within boundary * max(1, |b|) of a line resolve to its right
    root_width: bisection stops at width root_width * max(1, rho)
    quad: target accuracy of adaptive quadrature in rarefaction regions
    """

    residual_abs: float = 1e-9
    residual_rel: float = 1e-10
    strict: float = 1e-12
    boundary: float = 1e-12
    root_width: float = 1e-13
    quad: float = 1e-10


DEFAULT_TOL = ToleranceConfig()
