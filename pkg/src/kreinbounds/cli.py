"""Command-line front end.

Exit codes: 0 success, 1 a bound or check failed, 2 bad input,
3 solver failure (the error class name is printed).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import __version__
from .angles import angle_report
from .bounds import CSV_COLUMNS, check_bounds, fmt17, tsuff_check
from .core import J_SELF_ADJOINT, load_instance
from .enclosures import (
    numerical_range_sample,
    point_cloud_csv,
    qnr_halfplane_check,
    sample_qnr,
    verify_enclosure,
)
from .errors import DimensionMismatch, KreinBoundsError, NotHermitian, SetsIntersect
from .instances import DISPOSITIONS, random_instance, sharp_checks
from .oscillator import build_oscillator, oscillator_report
from .riccati import (
    dual_residual,
    dual_solution,
    solve_riccati_contractive,
    transformed_riccati_residual,
)

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT, EXIT_SOLVER = 0, 1, 2, 3
ENSEMBLE_COLUMNS = ("trial", "n0", "n1", "disposition", "v_over_d") + CSV_COLUMNS


class InputError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    seed: int = 0
    tol: Optional[float] = None
    out: Optional[str] = None
    fmt: str = "text"
    params: dict = field(default_factory=dict)


def _clean(obj):
    """JSON-safe copy: numpy scalars to Python, non-finite floats to None."""
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        return float(obj) if math.isfinite(obj) else None
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load(path):
    try:
        return load_instance(path)
    except (OSError, json.JSONDecodeError, DimensionMismatch, NotHermitian,
            ValueError, TypeError) as exc:
        raise InputError(f"{type(exc).__name__}: {exc}") from exc


# -- analyze ----------------------------------------------------------------

def run_analyze(cfg: RunConfig) -> int:
    inst = _load(cfg.params["instance"])
    sol = solve_riccati_contractive(inst)
    ang = angle_report(inst, sol)
    rep = check_bounds(inst, sol, ang)
    tol = cfg.tol if cfg.tol is not None else rep.slack_tol
    enc = verify_enclosure(inst, strict=False)
    try:
        ts = tsuff_check(inst)
        tsuff = {"cond_i": ts.cond_i, "cond_ii": ts.cond_ii, "gap_sum": ts.gap_sum}
    except SetsIntersect:
        tsuff = None
    bundle = {
        "norm_k": sol.norm_k,
        "riccati_residual": sol.residual,
        "dual_residual": dual_residual(dual_solution(sol.k), inst),
        "transformed_residual": transformed_riccati_residual(sol, inst),
        "diagonalization_defect": sol.diagonalization_defect(inst),
        "method": sol.method,
        "angles": ang.to_dict(),
        "bounds": rep.to_dict(),
        "enclosure": enc.to_dict(),
        "sufficient_conditions": tsuff,
    }
    violations = rep.violations(tol)
    if cfg.fmt == "json":
        _emit(json.dumps(_clean(bundle), indent=1) + "\n", cfg.out)
    elif cfg.fmt == "csv":
        _emit(rep.to_csv(), cfg.out)
    else:
        lines = [
            f"||K||                   {fmt17(sol.norm_k)}",
            f"Riccati residual        {fmt17(sol.residual)}",
            f"diagonalization defect  {fmt17(bundle['diagonalization_defect'])}",
            f"||tan Theta||           {fmt17(ang.norm_tan)}",
            f"d, delta0, delta1, dhat {fmt17(rep.d)} {fmt17(rep.delta0)} "
            f"{fmt17(rep.delta1)} {fmt17(rep.delta_hat)}",
            f"enclosure r_V           {fmt17(enc.r_v)} (inclusion {enc.inclusion_ok})",
            "",
            f"{'bound':<11} {'applicable':<10} {'lhs':>22} {'rhs':>22} {'slack':>22}",
        ]
        for r in rep.records:
            lines.append(f"{r.bound_id:<11} {str(r.applicable):<10} {fmt17(r.lhs):>22} "
                         f"{fmt17(r.rhs):>22} {fmt17(r.slack):>22}")
        lines.append("")
        lines.append("FAIL " + ", ".join(r.bound_id for r in violations) if violations
                     else "all applicable bounds hold")
        _emit("\n".join(lines) + "\n", cfg.out)
    return EXIT_VIOLATION if violations else EXIT_OK


# -- examples ---------------------------------------------------------------

def run_examples(cfg: RunConfig) -> int:
    tol = cfg.tol if cfg.tol is not None else 1e-10
    checks = sharp_checks(tol)
    if cfg.fmt == "json":
        rows = [{"name": c.name, "lhs": c.lhs, "rhs": c.rhs, "ok": c.ok} for c in checks]
        _emit(json.dumps(_clean(rows), indent=1) + "\n", cfg.out)
    else:
        lines = [f"{'PASS' if c.ok else 'FAIL'}  {c.name}  |diff| = {abs(c.lhs - c.rhs):.3e}"
                 for c in checks]
        lines.append(f"{sum(c.ok for c in checks)}/{len(checks)} equalities hold")
        _emit("\n".join(lines) + "\n", cfg.out)
    failed = [c.name for c in checks if not c.ok]
    for name in failed:
        print(f"failing equality: {name}", file=sys.stderr)
    return EXIT_VIOLATION if failed else EXIT_OK


# -- ensemble ---------------------------------------------------------------

def ensemble_trial(args):
    """One trial; module level so that worker processes can pickle it."""
    index, seed, n0, n1, v_over_d, disposition = args
    rng = np.random.default_rng(seed + index)
    inst = random_instance(rng, n0, n1, 1.0, v_over_d, disposition)
    sol = solve_riccati_contractive(inst)
    rep = check_bounds(inst, sol, angle_report(inst, sol))
    prefix = [str(index), str(n0), str(n1), disposition, fmt17(v_over_d)]
    return [prefix + row for row in rep.csv_rows()], rep.min_slack


def _parse_dims(text):
    try:
        n0, n1 = (int(p) for p in text.split(","))
    except ValueError as exc:
        raise InputError(f"--dims expects 'n0,n1', got {text!r}") from exc
    if n0 < 1 or n1 < 1:
        raise InputError("dimensions must be positive")
    return n0, n1


def run_ensemble(cfg: RunConfig) -> int:
    p = cfg.params
    n0, n1 = _parse_dims(p["dims"])
    ratio = p["v_over_d"]
    limit = 0.5 if p["allow_gap_only"] else 1 / math.pi
    if not 0 <= ratio < limit:
        raise InputError(f"--v-over-d must lie in [0, {limit:.6g})")
    if p["trials"] < 0:
        raise InputError("--trials must be nonnegative")
    jobs = [(i, cfg.seed, n0, n1, ratio, p["disposition"]) for i in range(p["trials"])]
    try:
        if p["jobs"] > 1 and jobs:
            with ProcessPoolExecutor(max_workers=p["jobs"]) as pool:
                results = list(pool.map(ensemble_trial, jobs, chunksize=16))
        else:
            results = [ensemble_trial(j) for j in jobs]
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(ENSEMBLE_COLUMNS)
    min_slack = math.inf
    for rows, slack in results:
        w.writerows(rows)
        min_slack = min(min_slack, slack)
    _emit(buf.getvalue(), cfg.out)
    tol = cfg.tol if cfg.tol is not None else 1e-8
    print(f"trials {len(results)}  min slack {fmt17(min_slack)}", file=sys.stderr)
    return EXIT_VIOLATION if min_slack < -tol else EXIT_OK


# -- oscillator -------------------------------------------------------------

def run_oscillator(cfg: RunConfig) -> int:
    p = cfg.params
    if p["beta"] < 0 or p["m"] < 2:
        raise InputError("need beta >= 0 and m >= 2")
    model = build_oscillator(p["m"], p["beta"], p["profile"])
    rep = oscillator_report(model)
    data = rep.to_dict()
    data.update(beta=model.beta, m=model.truncation_m, norm_v_trunc=model.norm_v_trunc)
    if rep.regime == "observation":
        print(f"beta = {model.beta} >= 1/2: checks are not asserted, reported as observation",
              file=sys.stderr)
    if cfg.fmt == "json":
        _emit(json.dumps(_clean(data), indent=1) + "\n", cfg.out)
    else:
        lines = [f"{k:<17} {data[k]}" for k in
                 ("beta", "m", "norm_v_trunc", "regime", "max_imag", "real_ok", "r_v_used",
                  "max_displacement", "enclosure_ok", "norm_tan", "angle_bound_rhs",
                  "angle_ok", "passed")]
        _emit("\n".join(lines) + "\n", cfg.out)
    return EXIT_OK if rep.passed else EXIT_VIOLATION


# -- qnr --------------------------------------------------------------------

def run_qnr(cfg: RunConfig) -> int:
    inst = _load(cfg.params["instance"])
    n = cfg.params["samples"]
    if n < 1:
        raise InputError("--samples must be positive")
    qnr = sample_qnr(inst, n, cfg.seed)
    nr = numerical_range_sample(inst.matrix, n, cfg.seed + 1)
    spectrum = np.sort_complex(np.linalg.eigvals(inst.matrix))
    _emit(point_cloud_csv(qnr.points, nr, spectrum), cfg.out)
    if inst.mode != J_SELF_ADJOINT:
        print("half-plane check inapplicable (general mode)", file=sys.stderr)
        return EXIT_OK
    kwargs = {} if cfg.tol is None else {"tol": cfg.tol}
    ok = qnr_halfplane_check(inst, qnr, **kwargs)
    print(f"half-plane check {'passed' if ok else 'FAILED'}", file=sys.stderr)
    return EXIT_OK if ok else EXIT_VIOLATION


# -- entry point ------------------------------------------------------------

RUNNERS = {
    "analyze": run_analyze,
    "examples": run_examples,
    "ensemble": run_ensemble,
    "oscillator": run_oscillator,
    "qnr": run_qnr,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_INPUT)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="base random seed (default 0)")
    common.add_argument("--tol", type=float, default=None, help="tolerance override")
    common.add_argument("--out", default=None, help="write output here instead of stdout")
    common.add_argument("--format", dest="fmt", choices=("json", "csv", "text"), default=None)

    parser = _Parser(prog="kreinbounds", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("analyze", parents=[common], help="solve and check one instance")
    p.add_argument("instance", help="instance JSON file")

    p = sub.add_parser("examples", parents=[common], help="check the built-in sharp cases")
    p.add_argument("--json", action="store_true", help="same as --format json")

    p = sub.add_parser("ensemble", parents=[common], help="random bound-checking ensemble")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--dims", default="4,4", help="n0,n1")
    p.add_argument("--v-over-d", dest="v_over_d", type=float, default=0.25)
    p.add_argument("--disposition", choices=DISPOSITIONS, default="subordinated")
    p.add_argument("--allow-gap-only", action="store_true",
                   help="permit ||V||/d up to 1/2 instead of 1/pi")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")

    p = sub.add_parser("oscillator", parents=[common], help="truncated oscillator model")
    p.add_argument("--beta", type=float, default=0.2)
    p.add_argument("--m", type=int, default=64, help="number of Hermite modes")
    p.add_argument("--profile", default="sin", choices=("sin",))

    p = sub.add_parser("qnr", parents=[common], help="sample the quadratic numerical range")
    p.add_argument("instance", help="instance JSON file")
    p.add_argument("--samples", type=int, default=10000)
    return parser


_DEFAULT_FORMAT = {"analyze": "text", "examples": "text", "ensemble": "csv",
                   "oscillator": "text", "qnr": "csv"}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    fmt = args.fmt or ("json" if getattr(args, "json", False) else _DEFAULT_FORMAT[args.command])
    params = {k: v for k, v in vars(args).items()
              if k not in ("command", "seed", "tol", "out", "fmt", "json")}
    cfg = RunConfig(args.command, args.seed, args.tol, args.out, fmt, params)
    try:
        return RUNNERS[cfg.command](cfg)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except KreinBoundsError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
