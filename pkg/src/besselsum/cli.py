"""Command-line front end: ``besselsum {eval,compare,sweep,bench,verify-asymptotics}``.

Exit status is 0 on success, 2 when the parameters are refused (domain or
convergence), 1 on any other failure.  Both error kinds print a JSON
object ``{"error": ..., "detail": ...}``.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import asympt
from .core import (
    DomainError,
    EvalResult,
    Kind,
    NonConvergence,
    SumParams,
    TruncationPolicy,
    validate,
)
from .directsum import sum_direct
from .expansions import expand

CSV_HEADER = [
    "nu", "p", "a", "x", "mu", "kind", "method",
    "value", "error_estimate", "terms_used", "convergence_class",
]
DEFAULT_TOL = 1e-12
_REFUSALS = (DomainError, NonConvergence)


class CliRefusal(Exception):
    """Raised for bad configuration input; reported with exit status 2."""


# ---------------------------------------------------------------------------
# JSON with round-trip floats
# ---------------------------------------------------------------------------

def _fmt_float(v: float) -> str:
    if math.isnan(v) or math.isinf(v):
        return "null"
    return format(v, ".17g")


def to_json(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON text with every float written to 17 significant digits."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {to_json(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [pad + to_json(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _emit(obj) -> None:
    sys.stdout.write(to_json(obj) + "\n")


# ---------------------------------------------------------------------------
# Evaluation helpers
# ---------------------------------------------------------------------------

def default_tol() -> float:
    env = os.environ.get("BESSELSUM_TOL")
    if env is None:
        return DEFAULT_TOL
    try:
        return float(env)
    except ValueError as exc:
        raise CliRefusal(f"BESSELSUM_TOL={env!r} is not a number") from exc


def _params(ns) -> SumParams:
    return validate(SumParams(ns.nu, ns.p, ns.a, ns.x, mu=ns.mu, kind=Kind(ns.kind)))


def _policy(tol: Optional[float]) -> TruncationPolicy:
    return TruncationPolicy(tol=default_tol() if tol is None else tol)


def evaluate(params: SumParams, method: str, policy: TruncationPolicy) -> EvalResult:
    if method == "direct":
        return sum_direct(params, policy)
    if method == "expansion":
        return expand(params, policy)
    if method != "auto":
        raise CliRefusal(f"unknown method {method!r}")
    try:
        res = expand(params, policy)
    except _REFUSALS:
        return sum_direct(params, policy)
    if res.error_estimate <= policy.tol * max(abs(res.value), 1e-300):
        return res
    return sum_direct(params, policy)


def compare(params: SumParams, policy: TruncationPolicy) -> dict:
    d = sum_direct(params, policy)
    e = expand(params, policy)
    diff = abs(d.value - e.value)
    allowed = max(policy.tol * abs(d.value), 10.0 * (d.error_estimate + e.error_estimate))
    return {
        "direct": d.as_dict(),
        "expansion": e.as_dict(),
        "abs_diff": diff,
        "within_tolerance": bool(diff <= allowed),
    }


# ---------------------------------------------------------------------------
# Sweeps
# ---------------------------------------------------------------------------

@dataclass
class SweepSpec:
    nu: list = field(default_factory=lambda: [0.0])
    p: list = field(default_factory=lambda: [1.0])
    a: list = field(default_factory=lambda: [0.1])
    x: list = field(default_factory=lambda: [1.0])
    mu: list = field(default_factory=lambda: [None])
    kind: str = "S"
    method: str = "both"
    format: str = "csv"
    tol: Optional[float] = None
    jobs: int = 1

    def __post_init__(self):
        for name in ("nu", "p", "a", "x", "mu"):
            if not getattr(self, name):
                raise CliRefusal(f"grid {name!r} is empty")
        if self.method not in ("direct", "expansion", "both"):
            raise CliRefusal(f"method must be direct, expansion or both, got {self.method!r}")
        if self.format not in ("csv", "json"):
            raise CliRefusal(f"format must be csv or json, got {self.format!r}")
        if self.kind not in {k.value for k in Kind}:
            raise CliRefusal(f"unknown kind {self.kind!r}")

    def points(self) -> list:
        return [
            SumParams(nu, p, a, x, mu=mu, kind=Kind(self.kind))
            for nu, p, a, x, mu in itertools.product(self.nu, self.p, self.a, self.x, self.mu)
        ]

    def methods(self) -> list:
        return ["direct", "expansion"] if self.method == "both" else [self.method]


_GRID_KEYS = ("nu", "p", "a", "x", "mu")
_SCALAR_KEYS = ("kind", "method", "format", "tol", "jobs")


def parse_sweep_config(text: str) -> SweepSpec:
    """Parse ``key=value`` lines.  Repeating a grid key adds a grid value.

    Blank lines and lines starting with ``#`` are ignored.
    """
    grids: dict = {}
    scalars: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise CliRefusal(f"line {lineno}: expected key=value, got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        try:
            if key in _GRID_KEYS:
                grids.setdefault(key, []).append(None if value.lower() == "none" else float(value))
            elif key == "tol":
                scalars[key] = float(value)
            elif key == "jobs":
                scalars[key] = int(value)
            elif key in _SCALAR_KEYS:
                scalars[key] = value
            else:
                raise CliRefusal(f"line {lineno}: unknown key {key!r}")
        except ValueError as exc:
            raise CliRefusal(f"line {lineno}: bad value {value!r} for {key}") from exc
    return SweepSpec(**grids, **scalars)


def _row(params: SumParams, method: str, policy: TruncationPolicy) -> dict:
    base = {
        "nu": params.nu, "p": params.p, "a": params.a, "x": params.x,
        "mu": params.mu, "kind": params.kind.value,
    }
    try:
        validate(params)
        res = evaluate(params, method, policy)
    except (*_REFUSALS, OverflowError, ValueError) as exc:
        return {**base, "method": "error", "value": None, "error_estimate": None,
                "terms_used": None, "convergence_class": None,
                "detail": f"{type(exc).__name__}: {exc}"}
    return {**base, **res.as_dict()}


def _row_job(job) -> dict:
    return _row(*job)


def run_sweep(spec: SweepSpec) -> list:
    policy = _policy(spec.tol)
    jobs = [(pt, m, policy) for pt in spec.points() for m in spec.methods()]
    if spec.jobs > 1:
        # map preserves submission order, so output order is deterministic
        with ProcessPoolExecutor(max_workers=spec.jobs) as pool:
            return list(pool.map(_row_job, jobs))
    return [_row_job(j) for j in jobs]


def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return _fmt_float(v) if math.isfinite(v) else str(v)
    return str(v)


def rows_to_csv(rows: list) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        cells = [_csv_cell(r[c]) for c in CSV_HEADER]
        if r["method"] == "error":
            cells.append(r["detail"])
        w.writerow(cells)
    return buf.getvalue()


# ---------------------------------------------------------------------------
# Bench
# ---------------------------------------------------------------------------

@dataclass
class BenchRecord:
    params: SumParams
    method: str
    terms_used: int
    wall_time: float
    value: float
    abs_diff: float

    def as_dict(self) -> dict:
        p = self.params
        return {
            "nu": p.nu, "p": p.p, "a": p.a, "x": p.x, "mu": p.mu, "kind": p.kind.value,
            "method": self.method, "terms_used": self.terms_used,
            "wall_time": self.wall_time, "value": self.value, "abs_diff": self.abs_diff,
        }


def _timed(fn, *args):
    t0 = time.perf_counter()
    res = fn(*args)
    return res, time.perf_counter() - t0


def fit_cost_exponent(a_values, terms) -> float:
    """Slope of log(terms) against log(a)."""
    slope, _ = np.polyfit(np.log(np.asarray(a_values, float)), np.log(np.asarray(terms, float)), 1)
    return float(slope)


def run_bench(nu: float, p: float, x: float, a_values, kind: str, policy: TruncationPolicy) -> dict:
    records = []
    direct_terms = []
    last = None
    for a in a_values:
        params = validate(SumParams(nu, p, a, x, kind=Kind(kind)))
        d, td = _timed(sum_direct, params, policy)
        try:
            e, te = _timed(expand, params, policy)
        except _REFUSALS:
            # no expansion here; the direct cost law is still measured
            e = None
        diff = abs(d.value - e.value) if e is not None else math.nan
        records.append(BenchRecord(params, "direct", d.terms_used, td, d.value, diff))
        if e is not None:
            records.append(BenchRecord(params, "expansion", e.terms_used, te, e.value, diff))
        direct_terms.append(d.terms_used)
        if last is None or a < last[0]:
            last = (a, d.terms_used, None if e is None else e.terms_used)
    summary = {
        "direct_cost_exponent": fit_cost_exponent(a_values, direct_terms) if len(a_values) > 1 else None,
        "expected_exponent": -1.0 / p,
        "smallest_a": last[0],
        # a zero-term expansion still costs one evaluation of its leading part
        "speedup": None if last[2] is None else last[1] / max(last[2], 1),
    }
    return {"records": [r.as_dict() for r in records], "summary": summary}


# ---------------------------------------------------------------------------
# Asymptotics
# ---------------------------------------------------------------------------

def _check_dict(c: asympt.AsymptoticCheck) -> dict:
    d = {"k": c.k, "exact": c.exact, "estimate": c.estimate, "ratio": c.ratio, "node": c.node}
    if c.t is not None:
        d["t"] = c.t
    return d


def _monotone_decrease(devs) -> bool:
    return all(b < a for a, b in zip(devs, devs[1:]))


def verify_asymptotics(mode: str, nu: float, x: float, ks, N: int, t_max: float, t_step: float) -> dict:
    if mode in ("neg", "pos"):
        checker = asympt.neg_checks if mode == "neg" else asympt.pos_checks
        checks = checker(nu, x, sorted(ks))
        usable = [c for c in checks if not c.node]
        devs = [abs(c.ratio - 1.0) for c in usable]
        if nu == -0.5 and mode == "neg":
            passed = all(d <= 1e-12 for d in devs)
            rule = "ratio equals 1 to 1e-12"
        else:
            passed = _monotone_decrease(devs) and all(
                abs(c.ratio - 1.0) <= 5.0 / c.k for c in usable if c.k >= 100
            )
            rule = "|ratio-1| decreases with k and is <= 5/k for k >= 100"
        return {"mode": mode, "nu": nu, "x": x, "checks": [_check_dict(c) for c in checks],
                "rule": rule, "pass": bool(passed)}
    if mode != "remainder":
        raise CliRefusal(f"unknown mode {mode!r}")
    steps = int(round(t_max / t_step))
    grid = [i * t_step for i in range(steps + 1)]
    grid2 = [i * t_step for i in range(2 * steps + 1)]
    k1 = asympt.fitted_constant(asympt.remainder_bound_profile(N, nu, x, grid))
    prof = asympt.remainder_bound_profile(N, nu, x, grid2)
    k2 = asympt.fitted_constant(prof)
    return {"mode": mode, "nu": nu, "x": x, "N": N, "checks": [_check_dict(c) for c in prof],
            "K": k1, "K_doubled": k2, "rule": "K changes by at most 20% when the t range doubles",
            "pass": bool(abs(k2 / k1 - 1.0) <= 0.2)}


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------

def _add_point_flags(sp) -> None:
    sp.add_argument("--kind", choices=[k.value for k in Kind], default="S")
    sp.add_argument("--nu", type=float, required=True)
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--a", type=float, required=True)
    sp.add_argument("--x", type=float, required=True)
    sp.add_argument("--mu", type=float, default=None)
    sp.add_argument("--tol", type=float, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="besselsum", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("eval", help="evaluate one sum")
    _add_point_flags(sp)
    sp.add_argument("--method", choices=["direct", "expansion", "auto"], default="auto")

    sp = sub.add_parser("compare", help="direct summation against the expansion")
    _add_point_flags(sp)

    sp = sub.add_parser("sweep", help="evaluate a parameter grid")
    sp.add_argument("--config", help="key=value file; repeated keys form grids")
    for name in _GRID_KEYS:
        sp.add_argument(f"--{name}", type=float, nargs="+")
    sp.add_argument("--kind", choices=[k.value for k in Kind])
    sp.add_argument("--method", choices=["direct", "expansion", "both"])
    sp.add_argument("--format", choices=["csv", "json"])
    sp.add_argument("--tol", type=float)
    sp.add_argument("--jobs", type=int)

    sp = sub.add_parser("bench", help="term counts and timings over decreasing a")
    sp.add_argument("--kind", choices=["S", "T"], default="S")
    sp.add_argument("--nu", type=float, default=0.0)
    sp.add_argument("--p", type=float, default=1.0)
    sp.add_argument("--x", type=float, default=1.0)
    sp.add_argument("--a-list", type=float, nargs="+", default=[1e-1, 1e-2, 1e-3, 1e-4])
    sp.add_argument("--tol", type=float, default=None)

    sp = sub.add_parser("verify-asymptotics", help="large-k ratio checks")
    sp.add_argument("--mode", choices=["neg", "pos", "remainder"], default="neg")
    sp.add_argument("--nu", type=float, required=True)
    sp.add_argument("--x", type=float, required=True)
    sp.add_argument("--k-list", type=int, nargs="+", default=[20, 40, 80, 160])
    sp.add_argument("--N", type=int, default=10)
    sp.add_argument("--t-max", type=float, default=20.0)
    sp.add_argument("--t-step", type=float, default=0.25)
    return parser


def _sweep_spec(ns) -> SweepSpec:
    if ns.config:
        with open(ns.config, encoding="utf-8") as fh:
            spec = parse_sweep_config(fh.read())
    else:
        spec = SweepSpec()
    for name in _GRID_KEYS + _SCALAR_KEYS:
        v = getattr(ns, name, None)
        if v is not None:
            setattr(spec, name, v)
    spec.__post_init__()
    return spec


def _dispatch(ns) -> int:
    if ns.command == "eval":
        _emit(evaluate(_params(ns), ns.method, _policy(ns.tol)).as_dict())
    elif ns.command == "compare":
        _emit(compare(_params(ns), _policy(ns.tol)))
    elif ns.command == "sweep":
        spec = _sweep_spec(ns)
        rows = run_sweep(spec)
        if spec.format == "csv":
            sys.stdout.write(rows_to_csv(rows))
        else:
            _emit(rows)
    elif ns.command == "bench":
        _emit(run_bench(ns.nu, ns.p, ns.x, ns.a_list, ns.kind, _policy(ns.tol)))
    else:
        _emit(verify_asymptotics(ns.mode, ns.nu, ns.x, ns.k_list, ns.N, ns.t_max, ns.t_step))
    return 0


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        return _dispatch(ns)
    except (*_REFUSALS, CliRefusal) as exc:
        _emit({"error": type(exc).__name__, "detail": str(exc)})
        return 2
    except Exception as exc:  # noqa: BLE001 - reported as JSON, exit 1
        _emit({"error": type(exc).__name__, "detail": str(exc)})
        return 1


if __name__ == "__main__":
    sys.exit(main())
