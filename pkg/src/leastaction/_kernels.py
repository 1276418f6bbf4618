"""Hot numeric kernels.

Each kernel has a numba ``@njit`` loop version and a vectorized numpy
version.  The dispatching names (``midpoint_action_sum``, ``rusanov_evolve``)
pick numba when it is importable and ``LEASTACTION_DISABLE_NUMBA`` is unset or
"0"; both variants stay importable so they can be compared directly.
"""
from __future__ import annotations

import math
import os

import numpy as np

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and os.environ.get("LEASTACTION_DISABLE_NUMBA", "0") in ("", "0")

# region kind codes for compiled region maps
CONSTANT = 0
RAREFACTION = 1


def _jit(fn):
    if HAVE_NUMBA:
        return numba.njit(cache=False)(fn)
    return fn


def _rarefaction_interior(family, w, xi, K, gamma):
    """(rho, v) inside a centred rarefaction at similarity coordinate xi.

    ``w`` is the Riemann invariant carried through the fan:
    v + 2c/(gamma-1) for family 1, v - 2c/(gamma-1) for family 3.
    """
    k = (gamma - 1.0) / (gamma + 1.0)
    if family == 1:
        c = k * (w - xi)
        v = xi + c
    else:
        c = k * (xi - w)
        v = xi - c
    rho = (c * c / (K * gamma)) ** (1.0 / (gamma - 1.0))
    return rho, v


rarefaction_interior = _jit(_rarefaction_interior)


def _rarefaction_action(family, w, u, xi, K, gamma):
    rho, v = rarefaction_interior(family, w, xi, K, gamma)
    return 0.5 * rho * (u * u + v * v) - K * rho**gamma / (gamma - 1.0)


rarefaction_action = _jit(_rarefaction_action)


# ---------------------------------------------------------------------------
# midpoint quadrature over a compiled region map
#
# Layout (all float64 / int64 arrays):
#   slab_t0[ns] (slab start times, increasing)
#   line_ptr[ns+1] -> rows of lines[:, (a, s, t_anchor)]; region_ptr[ns+1]
#   regions[:, (kind, value, family, w, u, t0, y0)]
# Within a slab the number of regions equals the number of lines plus one.
# ---------------------------------------------------------------------------


def _midpoint_sum_loop(ts, ys, slab_t0, line_ptr, lines, region_ptr, regions, K, gamma, snap):
    total = 0.0
    ns = slab_t0.shape[0]
    for i in range(ts.shape[0]):
        t = ts[i]
        k = 0
        for q in range(ns):
            if t >= slab_t0[q] - snap * max(1.0, abs(slab_t0[q])):
                k = q
        l0 = line_ptr[k]
        l1 = line_ptr[k + 1]
        r0 = region_ptr[k]
        row = 0.0
        for j in range(ys.shape[0]):
            y = ys[j]
            idx = 0
            for m in range(l0, l1):
                b = lines[m, 0] + lines[m, 1] * (t - lines[m, 2])
                if y >= b - snap * max(1.0, abs(b)):
                    idx += 1
            reg = r0 + idx
            if regions[reg, 0] == CONSTANT:
                row += regions[reg, 1]
            else:
                xi = (y - regions[reg, 6]) / (t - regions[reg, 5])
                row += rarefaction_action(int(regions[reg, 2]), regions[reg, 3],
                                          regions[reg, 4], xi, K, gamma)
        total += row
    return total


midpoint_sum_numba = _jit(_midpoint_sum_loop) if HAVE_NUMBA else None


def midpoint_sum_numpy(ts, ys, slab_t0, line_ptr, lines, region_ptr, regions, K, gamma, snap):
    total = 0.0
    for t in ts:
        k = int(np.searchsorted(slab_t0 - snap * np.maximum(1.0, np.abs(slab_t0)), t, side="right")) - 1
        k = max(k, 0)
        ln = lines[line_ptr[k]:line_ptr[k + 1]]
        b = ln[:, 0] + ln[:, 1] * (t - ln[:, 2])
        shifted = b - snap * np.maximum(1.0, np.abs(b))
        idx = (ys[:, None] >= shifted[None, :]).sum(axis=1)
        reg = regions[region_ptr[k]:region_ptr[k + 1]]
        vals = reg[idx, 1].copy()
        rare = reg[idx, 0] == RAREFACTION
        if rare.any():
            rr = reg[idx[rare]]
            xi = (ys[rare] - rr[:, 6]) / (t - rr[:, 5])
            vals[rare] = _rarefaction_action_vec(rr[:, 2], rr[:, 3], rr[:, 4], xi, K, gamma)
        total += vals.sum()
    return total


def _rarefaction_action_vec(family, w, u, xi, K, gamma):
    k = (gamma - 1.0) / (gamma + 1.0)
    c = np.where(family == 1, k * (w - xi), k * (xi - w))
    v = np.where(family == 1, xi + c, xi - c)
    rho = (c * c / (K * gamma)) ** (1.0 / (gamma - 1.0))
    return 0.5 * rho * (u * u + v * v) - K * rho**gamma / (gamma - 1.0)


def midpoint_action_sum(*args):
    """Sum of action density over all (t, y) grid points (no cell weights)."""
    if USE_NUMBA:
        return midpoint_sum_numba(*args)
    return midpoint_sum_numpy(*args)


# ---------------------------------------------------------------------------
# first-order Rusanov finite volumes for the planar barotropic system
# conserved q = (rho, rho u, rho v), flux in y: (rho v, rho u v, rho v^2 + p)
# ---------------------------------------------------------------------------


def _rusanov_loop(q, dy, t_end, cfl, K, gamma):
    n = q.shape[0]
    t = 0.0
    flux = np.empty((n + 1, 3))
    # per-cell primitives, one pow per cell per step
    v = np.empty(n)
    p = np.empty(n)
    a = np.empty(n)
    while t < t_end:
        smax = 0.0
        for i in range(n):
            rho = q[i, 0]
            v[i] = q[i, 2] / rho
            p[i] = K * rho**gamma
            a[i] = abs(v[i]) + math.sqrt(gamma * p[i] / rho)
            if a[i] > smax:
                smax = a[i]
        dt = cfl * dy / smax
        if t + dt > t_end:
            dt = t_end - t
        for f in range(n + 1):
            il = f - 1 if f > 0 else 0
            ir = f if f < n else n - 1
            s = max(a[il], a[ir])
            vl = v[il]
            vr = v[ir]
            flux[f, 0] = 0.5 * (q[il, 2] + q[ir, 2]) - 0.5 * s * (q[ir, 0] - q[il, 0])
            flux[f, 1] = 0.5 * (q[il, 1] * vl + q[ir, 1] * vr) - 0.5 * s * (q[ir, 1] - q[il, 1])
            flux[f, 2] = 0.5 * (q[il, 2] * vl + p[il] + q[ir, 2] * vr + p[ir]) - 0.5 * s * (q[ir, 2] - q[il, 2])
        for i in range(n):
            for m in range(3):
                q[i, m] -= dt / dy * (flux[i + 1, m] - flux[i, m])
        t += dt
    return q


rusanov_numba = _jit(_rusanov_loop) if HAVE_NUMBA else None


def rusanov_numpy(q, dy, t_end, cfl, K, gamma):
    t = 0.0
    while t < t_end:
        rho = q[:, 0]
        v = q[:, 2] / rho
        p = K * rho**gamma
        a = np.abs(v) + np.sqrt(gamma * p / rho)
        dt = min(cfl * dy / np.max(a), t_end - t)
        f = np.stack([q[:, 2], q[:, 1] * v, q[:, 2] * v + p], axis=1)
        il = np.concatenate([[0], np.arange(len(rho))])
        ir = np.concatenate([np.arange(len(rho)), [len(rho) - 1]])
        s = np.maximum(a[il], a[ir])[:, None]
        flux = 0.5 * (f[il] + f[ir]) - 0.5 * s * (q[ir] - q[il])
        q = q - dt / dy * (flux[1:] - flux[:-1])
        t += dt
    return q


def rusanov_evolve(q, dy, t_end, cfl, K, gamma):
    q = np.array(q, dtype=np.float64, copy=True)
    if USE_NUMBA:
        return rusanov_numba(q, dy, t_end, cfl, K, gamma)
    return rusanov_numpy(q, dy, t_end, cfl, K, gamma)
