"""Command-line front end.

Subcommands ``eval``, ``derivs``, ``scan``, ``turan``, ``lemma3`` and
``find-p0``.  Reports go to standard output or, with ``--output``, to a file
written atomically.

Exit status: 0 when every asserted cell holds, 1 when any cell fails,
2 on usage errors, 3 when asserted cells are inconclusive but none fail.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import asdict, replace

import numpy as np

from . import __version__
from .calculus import derivative_report
from .convexity import (
    Mode,
    Property,
    Verdict,
    find_p0,
    lemma3_check,
    lemma3_constant,
    scan,
    thread_count,
    zeta3,
)
from .core import FunctionKind, evaluate
from .errors import GentrigError, NoSignChange
from .quadrature import DEFAULT_CONFIG
from .report import (
    SCHEMA_VERSION,
    atomic_write,
    exit_status,
    fmt,
    rows_to_csv,
    scan_to_csv,
    scan_to_json,
)

EXIT_OK, EXIT_FAILS, EXIT_USAGE, EXIT_INCONCLUSIVE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _positive(text: str) -> float:
    v = float(text)
    if not (v > 0 and math.isfinite(v)):
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text!r}")
    return v


def _steps(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("steps must be >= 1")
    return v


def _kinds(text: str) -> str:
    try:
        return FunctionKind.parse(text).value
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _common(sp, *, grid: bool, kind: bool = True):
    if kind:
        sp.add_argument("--kind", type=_kinds, required=True, help="sin, cos, tan, sinh, cosh or tanh")
    sp.add_argument("--p", type=float, help="single parameter value")
    sp.add_argument("--y", type=float, help="single argument value")
    if grid:
        sp.add_argument("--p-min", type=float)
        sp.add_argument("--p-max", type=float)
        sp.add_argument("--p-steps", type=_steps)
        sp.add_argument("--p-spacing", choices=("geometric", "linear"), default="geometric")
        sp.add_argument("--y-min", type=float)
        sp.add_argument("--y-max", type=float)
        sp.add_argument("--y-steps", type=_steps)
    sp.add_argument("--tol", type=_positive, default=DEFAULT_CONFIG.rel_tol,
                    help="relative quadrature tolerance and floor of every error bound")
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.add_argument("--output", help="file path; standard output when omitted")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="gentrig", description="Generalized trigonometric functions and their p-convexity.")
    ap.add_argument("--version", action="version", version=f"gentrig {__version__}")
    sub = ap.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    sp = sub.add_parser("eval", help="forward value with diagnostics")
    _common(sp, grid=False)

    sp = sub.add_parser("derivs", help="p-derivatives at one point")
    _common(sp, grid=False)

    sp = sub.add_parser("scan", help="certify a convexity property on a grid")
    sp.add_argument("--property", required=True,
                    help="log-concave, log-convex, concave or turan-<kind>")
    sp.add_argument("--mode", choices=("analytic", "finite-diff"), default="analytic")
    _common(sp, grid=True)

    sp = sub.add_parser("turan", help="Turan-type margins")
    _common(sp, grid=True)

    sp = sub.add_parser("lemma3", help="the tan estimate and its p = 1 constant")
    sp.add_argument("--p", type=float)
    sp.add_argument("--s", type=float)
    sp.add_argument("--p-min", type=float, default=1.5)
    sp.add_argument("--p-max", type=float, default=10.0)
    sp.add_argument("--p-steps", type=_steps, default=10)
    sp.add_argument("--s-min", type=float, default=0.05)
    sp.add_argument("--s-max", type=float, default=0.95)
    sp.add_argument("--s-steps", type=_steps, default=10)
    sp.add_argument("--tol", type=_positive, default=DEFAULT_CONFIG.rel_tol)
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.add_argument("--output")

    sp = sub.add_parser("find-p0", help="exploratory search for the sin_p concavity threshold")
    sp.add_argument("--y-min", type=float, default=0.05)
    sp.add_argument("--y-max", type=float, default=0.95)
    sp.add_argument("--y-steps", type=_steps, default=10)
    sp.add_argument("--p-min", type=float, default=0.05)
    sp.add_argument("--p-max", type=float, default=1.0)
    sp.add_argument("--tol", type=_positive, default=1e-4, help="bisection tolerance in p")
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.add_argument("--output")
    return ap


def _axis(single, lo, hi, steps, name, spacing="linear") -> np.ndarray:
    if single is not None:
        if any(v is not None for v in (lo, hi, steps)):
            raise UsageError(f"--{name} cannot be combined with --{name}-min/max/steps")
        return np.array([single])
    if lo is None or hi is None:
        raise UsageError(f"give --{name} or both --{name}-min and --{name}-max")
    if lo > hi:
        raise UsageError(f"--{name}-min must not exceed --{name}-max")
    steps = steps or 1
    if steps == 1:
        if lo != hi:
            raise UsageError(f"--{name}-steps 1 needs --{name}-min == --{name}-max")
        return np.array([lo])
    if not lo < hi:
        raise UsageError(f"--{name}-min must be below --{name}-max")
    if spacing == "geometric":
        if not lo > 0:
            raise UsageError(f"geometric --{name} spacing needs a positive minimum")
        g = np.geomspace(lo, hi, steps)
        g[0], g[-1] = lo, hi
        return g
    return np.linspace(lo, hi, steps)


def _config(args):
    return replace(DEFAULT_CONFIG, rel_tol=args.tol)


def _emit(text: str, args, out) -> None:
    if args.output:
        atomic_write(args.output, text)
    else:
        out.write(text)


def _dump(doc) -> str:
    return json.dumps(doc, indent=1, allow_nan=False, default=fmt) + "\n"


def _clean(d: dict) -> dict:
    return {k: (fmt(v) if isinstance(v, float) and not math.isfinite(v) else v) for k, v in d.items()}


def _cmd_eval(args, out) -> int:
    if args.p is None or args.y is None:
        raise UsageError("eval needs --p and --y")
    ev = evaluate(args.kind, args.p, args.y, _config(args))
    row = {"kind": ev.kind.value, "p": ev.p, "y": ev.y, "value": ev.value, "quad_err": float(ev.quad_err),
           "root_residual": float(ev.root_residual), "value_err": float(ev.value_err)}
    if args.format == "json":
        _emit(_dump({"schema_version": SCHEMA_VERSION, **_clean(row)}), args, out)
    else:
        _emit(rows_to_csv(row.keys(), [row.values()]), args, out)
    return EXIT_OK


def _cmd_derivs(args, out) -> int:
    if args.p is None or args.y is None:
        raise UsageError("derivs needs --p and --y")
    rep = derivative_report(args.kind, args.p, args.y, _config(args))
    row = {k: (v.value if isinstance(v, FunctionKind) else float(v)) for k, v in asdict(rep).items()}
    if args.format == "json":
        _emit(_dump({"schema_version": SCHEMA_VERSION, **_clean(row)}), args, out)
    else:
        _emit(rows_to_csv(row.keys(), [row.values()]), args, out)
    return EXIT_OK


def _scan_like(args, out, prop: Property, mode: str) -> int:
    pg = _axis(args.p, args.p_min, args.p_max, args.p_steps, "p", args.p_spacing)
    yg = _axis(args.y, args.y_min, args.y_max, args.y_steps, "y")
    try:
        threads = thread_count()
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    rep = scan(prop, pg, yg, mode, kind=args.kind, cfg=_config(args), threads=threads)
    rep.config.update({"threads": threads, "p_spacing": args.p_spacing})
    _emit(scan_to_json(rep) if args.format == "json" else scan_to_csv(rep), args, out)
    return exit_status(rep)


def _cmd_scan(args, out) -> int:
    try:
        prop = Property.parse(args.property)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    tk = prop.turan_kind
    if tk is not None and tk.value != args.kind:
        raise UsageError(f"property {prop.value} concerns kind {tk.value}")
    return _scan_like(args, out, prop, args.mode)


def _cmd_turan(args, out) -> int:
    try:
        prop = Property.turan_for(args.kind)
    except GentrigError as exc:
        raise UsageError(str(exc)) from None
    return _scan_like(args, out, prop, Mode.ANALYTIC)


def _cmd_lemma3(args, out) -> int:
    cfg = _config(args)
    if (args.p is None) != (args.s is None):
        raise UsageError("give both --p and --s, or neither")
    if args.p is not None:
        ps, ss = [args.p], [args.s]
    else:
        ps = np.linspace(args.p_min, args.p_max, args.p_steps)
        ss = np.linspace(args.s_min, args.s_max, args.s_steps)
    rows = []
    status = EXIT_OK
    for p in ps:
        for s in ss:
            lhs, rhs = lemma3_check(p, s, cfg)
            ok = lhs < rhs
            status = status if ok else EXIT_FAILS
            rows.append(("check", p, s, lhs, rhs, (Verdict.HOLDS if ok else Verdict.FAILS).value))
    const = lemma3_constant(cfg)
    agree = abs(const.quadrature - const.closed_form) <= 1e-9 and const.closed_form > 0
    status = status if agree else EXIT_FAILS
    rows.append(("constant", 1.0, 1.0, const.quadrature, const.closed_form,
                 (Verdict.HOLDS if agree else Verdict.FAILS).value))
    header = ("row", "p", "s", "lhs", "rhs", "verdict")
    if args.format == "json":
        doc = {
            "schema_version": SCHEMA_VERSION,
            "checks": [dict(zip(header, r)) for r in rows[:-1]],
            "constant": {"quadrature": const.quadrature, "closed_form": const.closed_form,
                         "zeta3": const.zeta3, "zeta3_err": zeta3().err},
            "config": {**asdict(cfg)},
        }
        _emit(_dump(doc), args, out)
    else:
        _emit(rows_to_csv(header, rows), args, out)
    return status


def _cmd_find_p0(args, out) -> int:
    yg = _axis(None, args.y_min, args.y_max, args.y_steps, "y")
    res = find_p0(yg, (args.p_min, args.p_max), args.tol)
    rows = []
    for y, w in res.witness.items():
        if isinstance(w, NoSignChange):
            rows.append((y, "nan", "NoSignChange"))
        else:
            rows.append((y, w, "SignChange"))
    if args.format == "json":
        doc = {
            "schema_version": SCHEMA_VERSION,
            "p0_estimate": fmt(res.p0_estimate) if math.isnan(res.p0_estimate) else res.p0_estimate,
            "witness": [{"y": r[0], "threshold": r[1], "outcome": r[2]} for r in rows],
            "config": {"p_search": list(res.p_search), "tol": res.tol},
        }
        _emit(_dump(doc), args, out)
    else:
        _emit(rows_to_csv(("y", "threshold", "outcome"), rows), args, out)
    return EXIT_OK


_COMMANDS = {
    "eval": _cmd_eval,
    "derivs": _cmd_derivs,
    "scan": _cmd_scan,
    "turan": _cmd_turan,
    "lemma3": _cmd_lemma3,
    "find-p0": _cmd_find_p0,
}


def run(argv=None, out=None, err=None) -> int:
    """Parse ``argv``, run the subcommand and return the exit status."""
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.subcommand](args, out)
    except UsageError as exc:
        err.write(f"gentrig: error: {exc}\n")
        return EXIT_USAGE
    except (GentrigError, ValueError) as exc:
        # invalid parameters reach here (e.g. p <= 0, y outside the domain)
        err.write(f"gentrig: error: {type(exc).__name__}: {exc}\n")
        return EXIT_USAGE


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
