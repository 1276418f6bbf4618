"""Run configuration: one JSON document whose numeric leaves may be
constant-expression strings (see :mod:`leastaction.constexpr`).

Schema (``?`` marks optional keys)::

    paper_claims?   bool, also check the closed-form claims of the fixture
    eos?            {K, gamma}                       default K = 1, gamma = 2
    riemann         {left: {rho, u?, v?}, right: {rho, u?, v?}}
    subsolution?    {mu0, mu1, rho1, u1, v1, gamma1, delta1, C1}
    times?          {T, T0?}                         default T = 1, T0 = T/2
    window?         {L1?, L2?}                       L2 null -> outer extent
    tolerances?     any field of ToleranceConfig
    quadrature?     {grid: [nt, ny]}
    scan?           {rho1: [lo, hi], C1: [lo, hi], shape: [n, m]}
    output?         {dir}
"""
from __future__ import annotations

import json
from dataclasses import dataclass, fields, replace
from importlib import resources
from pathlib import Path

from .constexpr import ConstExprError, evaluate
from .eos import EosParams, State
from .errors import LeastActionError
from .riemann import RiemannData
from .subsolution import FanSubsolution
from .tolerance import DEFAULT_TOL, ToleranceConfig

SUB_KEYS = ("mu0", "mu1", "rho1", "u1", "v1", "gamma1", "delta1", "C1")


class ConfigError(LeastActionError, ValueError):
    """Invalid configuration; ``where`` is the dotted key path."""

    def __init__(self, where: str, message: str):
        self.where = where
        super().__init__(f"{where}: {message}" if where else message)


@dataclass(frozen=True)
class RunConfig:
    eos: EosParams
    data: RiemannData
    sub: FanSubsolution | None
    T: float
    T0: float
    L1: float
    L2: float | None
    tol: ToleranceConfig
    grid: tuple[int, int]
    scan_rho1: tuple[float, float]
    scan_C1: tuple[float, float]
    scan_shape: tuple[int, int]
    out_dir: str
    paper_claims: bool = False
    source: str = "<dict>"


def _num(raw: dict, key: str, where: str, default=None, required=True) -> float:
    if key not in raw or raw[key] is None:
        if default is not None or not required:
            return default
        raise ConfigError(f"{where}.{key}".lstrip("."), "missing value")
    try:
        return evaluate(raw[key])
    except ConstExprError as exc:
        raise ConfigError(f"{where}.{key}".lstrip("."), str(exc)) from exc
    except TypeError as exc:
        raise ConfigError(f"{where}.{key}".lstrip("."), str(exc)) from exc


def _section(raw: dict, key: str, required=False) -> dict:
    sec = raw.get(key)
    if sec is None:
        if required:
            raise ConfigError(key, "missing section")
        return {}
    if not isinstance(sec, dict):
        raise ConfigError(key, "expected an object")
    return sec


def _pair(raw: dict, key: str, where: str, default, cast=float):
    v = raw.get(key, default)
    if not isinstance(v, (list, tuple)) or len(v) != 2:
        raise ConfigError(f"{where}.{key}", "expected a two-element list")
    try:
        return tuple(cast(evaluate(x)) for x in v)
    except (ConstExprError, TypeError) as exc:
        raise ConfigError(f"{where}.{key}", str(exc)) from exc


def _state(raw: dict, where: str, eos) -> State:
    if not isinstance(raw, dict):
        raise ConfigError(where, "expected an object")
    rho = _num(raw, "rho", where)
    try:
        return State(rho, _num(raw, "u", where, 0.0), _num(raw, "v", where, 0.0))
    except ValueError as exc:
        raise ConfigError(where, str(exc)) from exc


def config_from_dict(raw: dict, source: str = "<dict>") -> RunConfig:
    if not isinstance(raw, dict):
        raise ConfigError("", "top level must be a JSON object")
    e = _section(raw, "eos")
    try:
        eos = EosParams(_num(e, "K", "eos", 1.0), _num(e, "gamma", "eos", 2.0))
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError("eos", str(exc)) from exc

    r = _section(raw, "riemann", required=True)
    for side in ("left", "right"):
        if side not in r:
            raise ConfigError(f"riemann.{side}", "missing state")
    data = RiemannData(_state(r["left"], "riemann.left", eos), _state(r["right"], "riemann.right", eos), eos)

    sub = None
    s = raw.get("subsolution")
    if s is not None:
        if not isinstance(s, dict):
            raise ConfigError("subsolution", "expected an object")
        vals = {k: _num(s, k, "subsolution") for k in SUB_KEYS}
        try:
            sub = FanSubsolution(**vals)
        except ValueError as exc:
            raise ConfigError("subsolution", str(exc)) from exc

    t = _section(raw, "times")
    T = _num(t, "T", "times", 1.0)
    T0 = _num(t, "T0", "times", T / 2)
    if not T > 0:
        raise ConfigError("times.T", "must be positive")
    if not 0 < T0 < T:
        raise ConfigError("times.T0", "must lie in (0, T)")

    w = _section(raw, "window")
    L1 = _num(w, "L1", "window", 1.0)
    L2 = _num(w, "L2", "window", required=False)
    if L1 <= 0 or (L2 is not None and L2 <= 0):
        raise ConfigError("window", "half-widths must be positive")

    tol = DEFAULT_TOL
    tr = _section(raw, "tolerances")
    known = {f.name for f in fields(ToleranceConfig)}
    for k in tr:
        if k not in known:
            raise ConfigError(f"tolerances.{k}", "unknown tolerance")
    if tr:
        tol = replace(tol, **{k: _num(tr, k, "tolerances") for k in tr})

    q = _section(raw, "quadrature")
    grid = _pair(q, "grid", "quadrature", [1023, 1023], int)
    sc = _section(raw, "scan")
    scan_rho1 = _pair(sc, "rho1", "scan", [2.5, 3.5])
    scan_C1 = _pair(sc, "C1", "scan", [4300, 4400])
    scan_shape = _pair(sc, "shape", "scan", [5, 5], int)
    if min(grid) < 1 or min(scan_shape) < 1:
        raise ConfigError("quadrature.grid" if min(grid) < 1 else "scan.shape", "sizes must be >= 1")

    out = _section(raw, "output")
    claims = raw.get("paper_claims", False)
    if not isinstance(claims, bool):
        raise ConfigError("paper_claims", "expected true or false")
    return RunConfig(eos, data, sub, T, T0, L1, L2, tol, grid, scan_rho1, scan_C1, scan_shape,
                     str(out.get("dir", "out")), claims, source)


def load_config(path: str | Path | None = None) -> RunConfig:
    """Load a config file; ``None`` loads the shipped fixture."""
    if path is None:
        text = default_config_text()
        source = "paper_fixture.json"
    else:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError("", f"cannot read {path}: {exc}") from exc
        source = str(path)
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError("", f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return config_from_dict(raw, source)


def default_config_text() -> str:
    return resources.files("leastaction").joinpath("data/paper_fixture.json").read_text(encoding="utf-8")
