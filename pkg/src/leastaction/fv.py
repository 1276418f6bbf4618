"""First-order finite-volume reference for the planar Riemann problem.

Used only as an independent oracle for the exact solver in tests.
"""
from __future__ import annotations

import numpy as np

from ._kernels import rusanov_evolve
from .riemann import RiemannData


def fv_solve(data: RiemannData, t_end: float, y_range: tuple[float, float], n: int = 2000,
             cfl: float = 0.45, y0: float = 0.0):
    """Rusanov scheme on n cells with outflow ends; returns (y_centres, rho, u, v)."""
    lo, hi = y_range
    dy = (hi - lo) / n
    y = lo + dy * (np.arange(n) + 0.5)
    left = y < y0
    q = np.empty((n, 3))
    for mask, s in ((left, data.left), (~left, data.right)):
        q[mask] = (s.rho, s.rho * s.u, s.rho * s.v)
    q = rusanov_evolve(q, dy, t_end, cfl, float(data.eos.K), float(data.eos.gamma))
    rho = q[:, 0]
    return y, rho, q[:, 1] / rho, q[:, 2] / rho
