"""Numba vs numpy kernels: midpoint action quadrature and Rusanov steps.

    python benchmarks/bench_kernels.py [--grids 255 1023 2047] [--repeat 3]

Both variants are called directly, so the LEASTACTION_DISABLE_NUMBA flag
does not matter here.  The first numba call (compilation) is timed separately.
"""
import argparse
import time

import numpy as np

from leastaction import _kernels
from leastaction.action import action_closed_form, compile_regions, default_window, midpoint_nodes
from leastaction.spacetime import build_1d_solution, build_glued_solution
from leastaction.subsolution import paper_fixture


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def bench_quadrature(grids, repeat):
    fx = paper_fixture()
    glued = build_glued_solution(fx.data, fx.sub, 0.5, 1.0)
    window = default_window([glued, build_1d_solution(fx.data, 1.0)], 1.0)
    exact = action_closed_form(glued, window)
    arrays = compile_regions(glued)
    extra = (float(glued.eos.K), float(glued.eos.gamma), 1e-12)

    ts, ys = midpoint_nodes(window, (8, 8))
    t0 = time.perf_counter()
    _kernels.midpoint_sum_numba(ts, ys, *arrays, *extra)
    print(f"numba compile + first call: {time.perf_counter() - t0:.2f} s\n")

    print(f"{'grid':>11} {'numba [s]':>11} {'numpy [s]':>11} {'speedup':>8} {'rel. error':>11} {'|diff|':>9}")
    for n in grids:
        ts, ys = midpoint_nodes(window, (n, n))
        w = 2 * window.L1 * (window.T / n) * (2 * window.L2 / n)
        tn, sn = best_of(lambda: _kernels.midpoint_sum_numba(ts, ys, *arrays, *extra), repeat)
        tp, sp = best_of(lambda: _kernels.midpoint_sum_numpy(ts, ys, *arrays, *extra), repeat)
        print(f"{n:>5}x{n:<5} {tn:>11.4f} {tp:>11.4f} {tp / tn:>8.1f} {(sn * w - exact) / exact:>11.2e} "
              f"{abs(sn - sp) / abs(sp):>9.1e}")


def bench_rusanov(cells, repeat):
    fx = paper_fixture()
    print(f"\n{'cells':>6} {'numba [s]':>11} {'numpy [s]':>11} {'speedup':>8} {'max |diff|':>11}")
    for n in cells:
        dy = 4.0 / n
        y = -2 + dy * (np.arange(n) + 0.5)
        q0 = np.empty((n, 3))
        for mask, s in ((y < 0, fx.data.left), (y >= 0, fx.data.right)):
            q0[mask] = (s.rho, s.rho * s.u, s.rho * s.v)
        args = (dy, 0.2, 0.45, 1.0, 2.0)
        _kernels.rusanov_numba(q0.copy(), *args)
        tn, qn = best_of(lambda: _kernels.rusanov_numba(q0.copy(), *args), repeat)
        tp, qp = best_of(lambda: _kernels.rusanov_numpy(q0.copy(), *args), repeat)
        print(f"{n:>6} {tn:>11.4f} {tp:>11.4f} {tp / tn:>8.1f} {np.max(np.abs(qn - qp)):>11.1e}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--grids", type=int, nargs="+", default=[255, 511, 1023, 2047])
    ap.add_argument("--cells", type=int, nargs="+", default=[200, 400, 800])
    ap.add_argument("--repeat", type=int, default=3)
    a = ap.parse_args()
    if not _kernels.HAVE_NUMBA:
        raise SystemExit("numba is not importable; nothing to compare")
    bench_quadrature(a.grids, a.repeat)
    bench_rusanov(a.cells, a.repeat)


if __name__ == "__main__":
    main()
