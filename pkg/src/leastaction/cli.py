"""Command-line interface.

Exit codes: 0 all checks pass, 2 a claim check failed, 3 input or config
error, 4 numerical solver failure.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import fixture as F
from .action import (ActionWindow, action_closed_form, action_profile, action_quadrature, compare,
                     cumulative_action, default_window, region_action_density)
from .config import ConfigError, RunConfig, load_config
from .constexpr import ConstExprError
from .eos import State, action_density
from .errors import DomainError, HorizonError, InfeasibleError, LeastActionError, SolverError
from .riemann import RiemannData, SHOCK, sample_profile, solve_middle_density, solve_riemann
from .spacetime import Classical, Wild, build_1d_solution, build_glued_solution, check_boundaries, outer_extent
from .subsolution import FanSubsolution, check_feasibility, scan_family, solve_family

EXIT_OK, EXIT_CLAIM, EXIT_CONFIG, EXIT_SOLVER = 0, 2, 3, 4

log = logging.getLogger("leastaction")


class StageFailure(Exception):
    def __init__(self, stage: str, code: int, message: str):
        super().__init__(message)
        self.stage, self.code = stage, code


# --------------------------------------------------------------------------
# output helpers
# --------------------------------------------------------------------------


def _clean(obj):
    """JSON-safe copy: numpy scalars to float, non-finite to None, tuples to lists."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else None
    return obj


def dumps(obj) -> str:
    return json.dumps(_clean(obj), sort_keys=True, indent=2)


def _write_csv(path: Path, header, rows):
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([repr(float(x)) if isinstance(x, (float, np.floating)) else x for x in r])


def _rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


class Checks:
    """Accumulates named pass/fail checks grouped by stage."""

    def __init__(self):
        self.items: list[dict] = []

    def add(self, stage, name, ok, value=None, expected=None, detail=""):
        self.items.append({"stage": stage, "check": name, "pass": bool(ok), "value": value,
                           "expected": expected, "detail": detail})
        return ok

    @property
    def ok(self) -> bool:
        return all(c["pass"] for c in self.items)

    def first_failure(self):
        return next((c for c in self.items if not c["pass"]), None)


# --------------------------------------------------------------------------
# verify
# --------------------------------------------------------------------------


def _paper_post_t0(cfg: RunConfig, checks: Checks):
    sub, data = cfg.sub, cfg.data
    fan_l = solve_riemann(RiemannData(data.left, sub.state, cfg.eos), (cfg.T0, sub.mu0 * cfg.T0), cfg.tol)
    fan_r = solve_riemann(RiemannData(sub.state, data.right, cfg.eos), (cfg.T0, sub.mu1 * cfg.T0), cfg.tol)
    ok = fan_l.branches == (SHOCK, SHOCK) and fan_r.branches == (SHOCK, SHOCK)
    checks.add("post_T0", "shock-shock fans", ok, [list(fan_l.branches), list(fan_r.branches)])
    if not ok:
        return
    (m2,), (m3,) = fan_l.states[1:2], fan_r.states[1:2]
    err = max(_rel(m2.rho, F.RHO2), _rel(m2.v, F.V2), _rel(m3.rho, F.RHO2), _rel(m3.v, -F.V2))
    checks.add("post_T0", "middle states (60, +-57 sqrt(35)/10)", err <= 1e-12, err, 1e-12)
    speeds = [w.speed for w in fan_l.waves + fan_r.waves]
    expected = [F.MU2, F.MU3, F.MU4, F.MU5]
    err = max(_rel(s, e) for s, e in zip(sorted(speeds), sorted(expected)))
    checks.add("post_T0", "speeds mu2..mu5", err <= 1e-12, err, 1e-12)


def run_verify(cfg: RunConfig, grid: tuple[int, int] | None = None) -> tuple[int, dict]:
    """Run the pipeline; returns (exit code, JSON-ready report)."""
    checks = Checks()
    results: dict = {"config": Path(cfg.source).name, "paper_claims": cfg.paper_claims,
                     "T": cfg.T, "T0": cfg.T0}
    data, sub, tol, T = cfg.data, cfg.sub, cfg.tol, cfg.T
    grid = grid or cfg.grid
    code = EXIT_OK
    stage = "riemann_1d"
    try:
        mid = solve_middle_density(data, tol)
        oned = build_1d_solution(data, T, tol)
        shocks = [w.speed for w in solve_riemann(data, tol=tol).waves if w.kind == SHOCK]
        results["riemann_1d"] = {"rho_M": mid.rho, "v_M": mid.v, "branches": list(mid.kinds),
                                 "residual": mid.residual, "shock_speeds": shocks}
        checks.add(stage, "middle-state residual", mid.residual <= 1e-11, mid.residual, 1e-11)
        sigma = None
        if cfg.paper_claims:
            sigma = max(shocks)
            results["riemann_1d"]["sigma"] = sigma
            checks.add(stage, "93 < rho_M < 94", 93 < mid.rho < 94, mid.rho)
            checks.add(stage, "1 < sigma < 1.1", 1 < sigma < 1.1, sigma)
            checks.add(stage, "sigma = v_-/(rho_M - 1)", _rel(sigma, F.V_MINUS / (mid.rho - 1)) <= 1e-12,
                       sigma, F.V_MINUS / (mid.rho - 1))

        glued = None
        if sub is not None:
            stage = "feasibility"
            rep = check_feasibility(sub, data, tol)
            results["feasibility"] = rep.to_dict()
            checks.add(stage, "fan subsolution feasible", rep.feasible, rep.verdict)
            if not rep.feasible:
                raise StageFailure(stage, EXIT_CLAIM, rep.verdict)

            stage = "glued"
            try:
                glued = build_glued_solution(data, sub, cfg.T0, T, tol)
            except HorizonError as exc:
                checks.add(stage, "T below interaction horizon", False, detail=str(exc))
                raise StageFailure(stage, EXIT_CLAIM, str(exc)) from exc
            results["glued"] = {"horizon": glued.horizon, "horizon_pair": list(glued.horizon_pair or ())}
            checks.add(stage, "T below interaction horizon", glued.horizon > T, glued.horizon, T)
            bad = [f"{b.kind}@slab{b.slab}{b.where}" for b in check_boundaries(glued, tol) if not b.ok]
            checks.add(stage, "all boundaries admissible", not bad, len(bad), 0, ", ".join(bad))
            if cfg.paper_claims:
                hz = cfg.T0 * (1 + F.MU1 / F.MU3)
                checks.add(stage, "horizon = T0(1 + mu1/mu3)", _rel(glued.horizon, hz) <= 1e-12, glued.horizon, hz)
                checks.add(stage, "horizon > 2 T0", glued.horizon > 2 * cfg.T0, glued.horizon, 2 * cfg.T0)
                _paper_post_t0(cfg, checks)

        stage = "boundaries_1d"
        bad = [f"{b.kind}@{b.where}" for b in check_boundaries(oned, tol) if not b.ok]
        checks.add(stage, "1-D boundaries admissible", not bad, len(bad), 0, ", ".join(bad))

        stage = "action"
        sols = [oned] + ([glued] if glued is not None else [])
        L2 = cfg.L2 if cfg.L2 is not None else (outer_extent(sols, T) or 1.0)
        window = ActionWindow(cfg.L1, L2, T)
        act = {"window": {"L1": window.L1, "L2": window.L2, "T": T}}
        act["1d"] = action_closed_form(oned, window, tol)
        results["action"] = act
        if glued is not None:
            act["glued"] = action_closed_form(glued, window, tol)
            quad = action_quadrature(glued, window, grid, tol)
            gap = _rel(quad, act["glued"])
            act["glued_quadrature"] = {"grid": list(grid), "value": quad, "relative_gap": gap}
            checks.add(stage, "quadrature agrees with closed form", gap <= 5e-3, gap, 5e-3)
            cmp_ = compare(glued, oned, window, tol=tol)
            act["comparison"] = cmp_.to_dict()
            results["counterexample"] = cmp_.verdict == "a_lower"
            if cfg.paper_claims:
                _paper_action_claims(cfg, glued, oned, window, mid.rho, sigma, cmp_, checks, act)
        else:
            results["counterexample"] = False
    except StageFailure as exc:
        code = exc.code
        results["failed_stage"] = exc.stage
        results["error"] = str(exc)
    except (SolverError, InfeasibleError) as exc:
        code = EXIT_SOLVER if isinstance(exc, SolverError) else EXIT_CLAIM
        checks.add(stage, "stage completed", False, detail=f"{type(exc).__name__}: {exc}")
        results["failed_stage"] = stage
        results["error"] = f"{type(exc).__name__}: {exc}"
    except (DomainError, ValueError) as exc:
        code = EXIT_CONFIG
        checks.add(stage, "stage completed", False, detail=f"{type(exc).__name__}: {exc}")
        results["failed_stage"] = stage
        results["error"] = f"{type(exc).__name__}: {exc}"

    if code == EXIT_OK and not checks.ok:
        code = EXIT_CLAIM
        results["failed_stage"] = checks.first_failure()["stage"]
    results["checks"] = checks.items
    results["pass"] = code == EXIT_OK
    return code, results


def _paper_action_claims(cfg, glued, oned, window, rho_m, sigma, cmp_, checks: Checks, act):
    st = "paper_action"
    eos, sub = cfg.eos, cfg.sub
    dens = {
        "a_minus": (action_density(eos, cfg.data.left), F.A_MINUS),
        "a_wild": (region_action_density(eos, Wild(sub.rho1, sub.u1, sub.v1, sub.C1)), F.A_WILD),
        "a_1": (region_action_density(eos, Classical(sub.state)), F.A_1),
        "a_2": (action_density(eos, State(F.RHO2, 0.0, F.V2)), F.A_2),
    }
    for k, (v, e) in dens.items():
        checks.add(st, f"{k} closed form", _rel(v, e) <= 1e-12, v, e)
    T = window.T
    kex, k1d = act["glued"] / T**2, act["1d"] / T**2
    act["K_ex"], act["K_1d"] = kex, k1d
    checks.add(st, "K_ex closed form", _rel(kex, F.K_EX) <= 1e-11, kex, F.K_EX)
    k1d_ref = F.k_1d(rho_m, sigma)
    checks.add(st, "K_1d closed form", _rel(k1d, k1d_ref) <= 1e-11, k1d, k1d_ref)
    # A proportional to T^2: same coefficients at T/2 with T0 scaled alike
    half = T / 2
    g2 = build_glued_solution(cfg.data, sub, cfg.T0 / 2, half, cfg.tol)
    o2 = build_1d_solution(cfg.data, half, cfg.tol)
    w2 = default_window([g2, o2], half, window.L1)
    r_ex = action_closed_form(g2, w2, cfg.tol) / half**2
    r_1d = action_closed_form(o2, w2, cfg.tol) / half**2
    checks.add(st, "K_ex at T/2", _rel(r_ex, F.K_EX) <= 1e-11, r_ex, F.K_EX)
    checks.add(st, "K_1d at T/2", _rel(r_1d, k1d_ref) <= 1e-11, r_1d, k1d_ref)
    diff = kex - k1d
    oracle = F.k_ex_minus_k_1d(rho_m, sigma)
    act["K_ex_minus_K_1d"] = diff
    checks.add(st, "K_ex - K_1d < 0", diff < 0, diff)
    checks.add(st, "K_ex - K_1d matches closed form", _rel(diff, oracle) <= 1e-9, diff, oracle)
    checks.add(st, "glued solution has the lower action", cmp_.verdict == "a_lower", cmp_.verdict)

    st = "profiles"
    ts = np.linspace(0, cfg.T0, 41)[1:-1]
    above = bool(np.all(cmp_.cumulative_a(ts) > cmp_.cumulative_b(ts)))
    checks.add(st, "A~_ex > A~_1d before T0", above, above)
    inside = [t for t in cmp_.crossings if cfg.T0 < t < T]
    checks.add(st, "one crossing in (T0, T)", len(cmp_.crossings) == 1 and len(inside) == 1,
               list(cmp_.crossings))
    jumps = cmp_.profile_a.jumps()
    ok = len(jumps) == 1 and abs(jumps[0][0] - cfg.T0) <= 1e-12 and jumps[0][1] < 0
    checks.add(st, "single downward jump of A_ex at T0", ok, [list(j) for j in jumps])


def _print_checks(report: dict, out=None):
    out = out or sys.stdout
    for c in report.get("checks", []):
        tag = "PASS" if c["pass"] else "FAIL"
        val = "" if c["value"] is None else f"  value={c['value']!r}"
        det = f"  ({c['detail']})" if c["detail"] else ""
        print(f"[{tag}] {c['stage']}: {c['check']}{val}{det}", file=out)
    if "error" in report:
        print(f"error in stage {report.get('failed_stage')}: {report['error']}", file=out)
    print(("PASS" if report.get("pass") else f"FAIL (stage {report.get('failed_stage')})"), file=out)


def cmd_verify(args, cfg: RunConfig) -> int:
    code, report = run_verify(cfg, args.grid)
    text = dumps(report)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "verify_report.json").write_text(text + "\n")
    if args.json:
        print(text)
    else:
        if "action" in report and "K_ex" in report["action"]:
            a = report["action"]
            print(f"K_ex = {a['K_ex']!r}   K_1d = {a['K_1d']!r}   difference = {a['K_ex_minus_K_1d']!r}")
        _print_checks(report)
    return code


# --------------------------------------------------------------------------
# riemann
# --------------------------------------------------------------------------


def _interface_problem(cfg: RunConfig, which: str):
    if which == "initial":
        return cfg.data, (0.0, 0.0)
    if cfg.sub is None:
        raise ConfigError("subsolution", f"interface {which!r} needs a subsolution")
    if which == "left":
        return RiemannData(cfg.data.left, cfg.sub.state, cfg.eos), (cfg.T0, cfg.sub.mu0 * cfg.T0)
    return RiemannData(cfg.sub.state, cfg.data.right, cfg.eos), (cfg.T0, cfg.sub.mu1 * cfg.T0)


def _state_dict(s: State):
    return {"rho": s.rho, "u": s.u, "v": s.v}


def cmd_riemann(args, cfg: RunConfig) -> int:
    data, center = _interface_problem(cfg, args.interface)
    fan = solve_riemann(data, center, cfg.tol)
    waves = []
    for w in fan.waves:
        d = {"kind": w.kind, "family": w.family, "left": _state_dict(w.left_state),
             "right": _state_dict(w.right_state)}
        if w.kind == "rarefaction":
            d.update(head=w.head, tail=w.tail)
        else:
            d["speed"] = w.speed
        waves.append(d)
    report = {"interface": args.interface, "center": list(center), "branches": list(fan.branches),
              "rho_M": fan.rho_m, "waves": waves, "states": [_state_dict(s) for s in fan.states]}
    if args.out:
        speeds = [w.left_speed for w in fan.waves] + [w.right_speed for w in fan.waves] or [0.0]
        lo, hi = min(speeds), max(speeds)
        pad = max(1.0, 0.25 * (hi - lo))
        xi = np.linspace(lo - pad, hi + pad, args.samples)
        prof = sample_profile(fan, xi)
        out = Path(args.out)
        _write_csv(out / f"riemann_{args.interface}.csv", ["xi", "rho", "u", "v"],
                   [(x, *row) for x, row in zip(xi, prof)])
        (out / f"riemann_{args.interface}.json").write_text(dumps(report) + "\n")
    if args.json:
        print(dumps(report))
        return EXIT_OK
    if not fan.waves:
        print("no waves")
        return EXIT_OK
    print(f"center (t, y) = {center}   branches = {fan.branches}   rho_M = {fan.rho_m!r}")
    print(f"{'wave':<12}{'family':>7}{'speed':>24}   left (rho, v) -> right (rho, v)")
    for w in fan.waves:
        sp = repr(w.speed) if w.kind != "rarefaction" else f"[{w.head:.12g}, {w.tail:.12g}]"
        ls, rs = w.left_state, w.right_state
        print(f"{w.kind:<12}{w.family:>7}{sp:>24}   ({ls.rho:.12g}, {ls.v:.12g}) -> ({rs.rho:.12g}, {rs.v:.12g})")
    return EXIT_OK


# --------------------------------------------------------------------------
# subsolution
# --------------------------------------------------------------------------


def _need_sub(cfg):
    if cfg.sub is None:
        raise ConfigError("subsolution", "missing section")
    return cfg.sub


def _print_feasibility(rep):
    d = rep.to_dict()
    print(f"verdict: {rep.verdict}")
    print(f"  worst scaled RH residual   {d['worst_scaled_residual']:.3e}")
    print("  RH residuals (left)        " + "  ".join(f"{x:.3e}" for x in d["rh_left"]))
    print("  RH residuals (right)       " + "  ".join(f"{x:.3e}" for x in d["rh_right"]))
    print("  subsolution margins        " + "  ".join(f"{x:.10g}" for x in d["subsolution_margins"]))
    print("  admissibility margins      " + "  ".join(f"{x:.10g}" for x in d["admissibility_margins"]))
    print(f"  speed order mu1 - mu0      {d['speed_order']:.10g}")


def cmd_subsolution(args, cfg: RunConfig) -> int:
    mode = args.mode
    if mode == "check":
        sub = _need_sub(cfg)
        rep = check_feasibility(sub, cfg.data, cfg.tol)
        if args.json:
            print(dumps(rep.to_dict()))
        else:
            _print_feasibility(rep)
        if args.out:
            Path(args.out).mkdir(parents=True, exist_ok=True)
            (Path(args.out) / "subsolution_check.json").write_text(dumps(rep.to_dict()) + "\n")
        return EXIT_OK if rep.feasible else EXIT_CLAIM

    if mode == "solve":
        ref = _need_sub(cfg)
        x = ref.unknowns() * (1 + args.perturb)
        seed = FanSubsolution.from_unknowns(x, ref.rho1, ref.C1)
        sub = solve_family(cfg.data, ref.rho1, ref.C1, seed)
        rep = check_feasibility(sub, cfg.data, cfg.tol)
        dev = float(np.max(np.abs(sub.unknowns() - ref.unknowns()) / np.maximum(1.0, np.abs(ref.unknowns()))))
        out = {"solution": {k: getattr(sub, k) for k in ("mu0", "mu1", "rho1", "u1", "v1", "gamma1", "delta1", "C1")},
               "perturbation": args.perturb, "deviation_from_config": dev, "feasibility": rep.to_dict()}
        if args.json:
            print(dumps(out))
        else:
            for k, v in out["solution"].items():
                print(f"  {k:<8}{v!r}")
            print(f"  max scaled deviation from config: {dev:.3e}")
            _print_feasibility(rep)
        if args.out:
            Path(args.out).mkdir(parents=True, exist_ok=True)
            (Path(args.out) / "subsolution_solve.json").write_text(dumps(out) + "\n")
        return EXIT_OK if rep.feasible else EXIT_CLAIM

    # scan
    shape = args.shape or cfg.scan_shape
    rho_r = tuple(args.rho1) if args.rho1 else cfg.scan_rho1
    c_r = tuple(args.C1) if args.C1 else cfg.scan_C1
    rows = scan_family(cfg.data, rho_r, c_r, shape, seed=cfg.sub, tol=cfg.tol, T=cfg.T)
    header = ["rho1", "C1", "feasible", "worst_residual", "subsolution_margin_1", "subsolution_margin_2",
              "admissibility_margin_1", "admissibility_margin_2", "K_if_feasible", "error"]
    table = []
    for r in rows:
        if r.report is None:
            table.append([r.rho1, r.C1, False, "", "", "", "", "", "", r.error])
            continue
        sm, am = r.report.subsolution_margins, r.report.admissibility_margins
        table.append([r.rho1, r.C1, r.feasible, r.report.worst_residual, sm[0], sm[1], am[0], am[1],
                      "" if r.K is None else r.K, r.error])
    if args.out:
        _write_csv(Path(args.out) / "subsolution_scan.csv", header, table)
    if args.json:
        print(dumps([dict(zip(header, [None if v == "" else v for v in row])) for row in table]))
    else:
        print(",".join(header))
        for row in table:
            print(",".join(repr(float(v)) if isinstance(v, (float, np.floating)) else str(v) for v in row))
    return EXIT_OK


# --------------------------------------------------------------------------
# figures
# --------------------------------------------------------------------------


def _solutions(cfg: RunConfig):
    sols = {"1d": build_1d_solution(cfg.data, cfg.T, cfg.tol)}
    if cfg.sub is not None:
        sols = {"ex": build_glued_solution(cfg.data, cfg.sub, cfg.T0, cfg.T, cfg.tol), **sols}
    return sols


def figure_data(cfg: RunConfig, samples: int = 201) -> dict:
    """Line segments in the y-t plane and sampled A, A~ curves."""
    sols = _solutions(cfg)
    T = cfg.T
    lines = []
    for name, sol in sols.items():
        for i, slab in enumerate(sol.slabs):
            t1 = min(slab.t_end, T)
            for ln in slab.lines:
                dt_dy = 1 / ln.s if ln.s != 0 else math.inf
                lines.append([name, i, ln.kind, slab.t_start, ln.at(slab.t_start), t1, ln.at(t1), ln.s, dt_dy])
    L2 = cfg.L2 if cfg.L2 is not None else (outer_extent(list(sols.values()), T) or 1.0)
    window = ActionWindow(cfg.L1, L2, T)
    profiles = {k: action_profile(s, window, cfg.tol) for k, s in sols.items()}
    cums = {k: cumulative_action(p) for k, p in profiles.items()}
    ts = sorted(set(np.linspace(0, T, samples).tolist()) | {t for p in profiles.values() for t in p.breakpoints})
    curves = [[t] + [v for k in sols for v in (profiles[k](t), cums[k](t))] for t in ts]
    header = ["t"] + [c for k in sols for c in (f"A_{k}", f"A_tilde_{k}")]
    meta = {
        "T": T, "T0": cfg.T0, "window": {"L1": window.L1, "L2": window.L2, "T": T},
        "breakpoints": {k: [{"t0": s.t0, "t1": s.t1, "A0": s.A0, "A1": s.A1} for s in p.segments]
                        for k, p in profiles.items()},
        "A_tilde_final": {k: c.final for k, c in cums.items()},
        "jumps": {k: [list(j) for j in p.jumps()] for k, p in profiles.items()},
    }
    if "ex" in sols:
        cmp_ = compare(sols["ex"], sols["1d"], window, tol=cfg.tol)
        meta["crossings"] = cmp_.crossings
        meta["difference"] = cmp_.difference
    return {"lines_header": ["solution", "slab", "kind", "t_start", "y_start", "t_end", "y_end", "speed", "dt_dy"],
            "lines": lines, "curves_header": header, "curves": curves, "meta": meta}


def cmd_figures(args, cfg: RunConfig) -> int:
    fig = figure_data(cfg, args.samples)
    out = Path(args.out or cfg.out_dir)
    _write_csv(out / "figure1_lines.csv", fig["lines_header"], fig["lines"])
    _write_csv(out / "figure2_profiles.csv", fig["curves_header"], fig["curves"])
    (out / "figure2_breakpoints.json").write_text(dumps(fig["meta"]) + "\n")
    if args.json:
        print(dumps(fig["meta"]))
    else:
        print(f"wrote {out / 'figure1_lines.csv'}, {out / 'figure2_profiles.csv'}, {out / 'figure2_breakpoints.json'}")
        if "crossings" in fig["meta"]:
            print(f"crossings of A~_ex - A~_1d: {fig['meta']['crossings']}")
    return EXIT_OK


# --------------------------------------------------------------------------
# argument parsing
# --------------------------------------------------------------------------


def _grid(text: str) -> tuple[int, int]:
    try:
        a, b = text.lower().split("x")
        g = (int(a), int(b))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected NxM, got {text!r}") from None
    if min(g) < 1:
        raise argparse.ArgumentTypeError("grid sizes must be >= 1")
    return g


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="run config JSON (default: shipped fixture)")
    common.add_argument("--out", metavar="DIR", help="directory for reports and CSV files")
    common.add_argument("--tol", type=float, metavar="X", help="scaled residual tolerance (default 1e-9)")
    common.add_argument("--grid", type=_grid, metavar="NxM", help="quadrature grid nt x ny")
    common.add_argument("--json", action="store_true", help="print the JSON report instead of text")
    common.add_argument("-v", "--verbose", action="store_true", help="debug logging to stderr")

    p = argparse.ArgumentParser(prog="leastaction", description=__doc__.splitlines()[0])
    sp = p.add_subparsers(dest="command", required=True)
    sp.add_parser("verify", parents=[common], help="run the full verification pipeline")
    r = sp.add_parser("riemann", parents=[common], help="solve and tabulate a Riemann problem")
    r.add_argument("--interface", choices=("initial", "left", "right"), default="initial",
                   help="initial data, or the left/right wedge corner at t = T0")
    r.add_argument("--samples", type=int, default=401, help="profile samples written to CSV")
    s = sp.add_parser("subsolution", parents=[common], help="check, solve or scan fan subsolutions")
    s.add_argument("mode", choices=("check", "solve", "scan"))
    s.add_argument("--perturb", type=float, default=1e-3, help="relative seed perturbation for solve")
    s.add_argument("--shape", type=_grid, metavar="NxM", help="scan grid in (rho1, C1)")
    s.add_argument("--rho1", type=float, nargs=2, metavar=("LO", "HI"))
    s.add_argument("--C1", type=float, nargs=2, metavar=("LO", "HI"))
    f = sp.add_parser("figures", parents=[common], help="emit CSV/JSON data for the figures")
    f.add_argument("--samples", type=int, default=201, help="uniform samples of A and A~")
    return p


COMMANDS = {"verify": cmd_verify, "riemann": cmd_riemann, "subsolution": cmd_subsolution, "figures": cmd_figures}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = load_config(args.config)
        if args.tol is not None:
            if not args.tol > 0:
                raise ConfigError("--tol", "must be positive")
            cfg = replace(cfg, tol=replace(cfg.tol, residual_abs=args.tol))
        return COMMANDS[args.command](args, cfg)
    except (ConfigError, ConstExprError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SolverError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except (HorizonError, InfeasibleError) as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return EXIT_CLAIM
    except (LeastActionError, ValueError) as exc:
        print(f"input error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CONFIG


def main_entry():
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
