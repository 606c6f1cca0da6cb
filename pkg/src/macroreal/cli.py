"""Command-line entry point: ``macroreal <subcommand> ...``.

Exit codes: 0 success, 1 runtime or certification failure, 2 usage error.
Errors go to stderr only.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Sequence

from . import __version__
from .errors import DomainError, MacrorealError, UnknownSpecError
from .inequalities import evaluate_named, get_spec, nsit_delta
from .montecarlo import estimate_inequality
from .optimize import (
    DEFAULT_GRID,
    catalog_max,
    critical_lambda,
    lgi_critical_lambda,
    lgi_max,
    maximize_violation,
)
from .oracle import certify_catalog
from .qm import ModelParams

SCAN_HEADER = ("lambda", "wlgi3_max", "lgi3_margin", "lgi4_margin", "nsit_max")


class UsageError(Exception):
    pass


def _fmt(x: float) -> str:
    # fixed 6 decimals, never "-0.000000"
    s = f"{x:.6f}"
    return "0.000000" if s == "-0.000000" else s


def _angle(args, value: float) -> float:
    return math.radians(value) if args.degrees else value


def _params(args) -> ModelParams:
    return ModelParams(_angle(args, args.theta), _angle(args, args.phi), _angle(args, args.tau), args.lam)


def _emit(args, line: str, payload: dict) -> None:
    if getattr(args, "json", False):
        print(json.dumps(payload, sort_keys=True))
    else:
        print(line)


def _lgi_n(name: str) -> int | None:
    if name.startswith("lgi:"):
        return get_spec(name).n_times
    return None


def threads() -> int:
    raw = os.environ.get("MACROREAL_THREADS", "0").strip() or "0"
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"MACROREAL_THREADS must be an integer, got {raw!r}")
    if n < 0:
        raise UsageError("MACROREAL_THREADS must be >= 0")
    return n or (os.cpu_count() or 1)


# --- subcommands -----------------------------------------------------------

def cmd_eval(args) -> int:
    params = _params(args)
    res = evaluate_named(args.spec, params)
    line = f"{args.spec} value={_fmt(res.value)} bound={_fmt(res.bound)} margin={_fmt(res.margin)}"
    _emit(args, line, {"spec": args.spec, "value": res.value, "bound": res.bound, "margin": res.margin})
    return 0


def cmd_maximize(args) -> int:
    rep = maximize_violation(args.spec, args.lam, tuple(args.grid))
    p = rep.best_params
    line = (
        f"{args.spec} lambda={_fmt(args.lam)} value={_fmt(rep.best_value)} margin={_fmt(rep.margin)} "
        f"theta={_fmt(p.theta)} phi={_fmt(p.phi)} tau={_fmt(p.tau)} "
        f"grad_norm={rep.gradient_norm_at_optimum:.3e}"
    )
    _emit(args, line, {
        "spec": args.spec, "lambda": args.lam, "value": rep.best_value, "margin": rep.margin,
        "theta": p.theta, "phi": p.phi, "tau": p.tau,
        "gradient_norm": rep.gradient_norm_at_optimum, "phi_pinned": rep.phi_pinned,
    })
    return 0


def cmd_critical_lambda(args) -> int:
    n = _lgi_n(args.spec)
    if n is not None:
        value, violated = lgi_critical_lambda(n), True
    else:
        given = [args.theta, args.phi, args.tau]
        if all(v is None for v in given):
            p = maximize_violation(args.spec, 1.0).best_params
            point = (p.theta, p.phi, p.tau)
        elif any(v is None for v in given):
            raise UsageError("give all of --theta, --phi, --tau or none of them")
        else:
            point = tuple(_angle(args, v) for v in given)
            ModelParams(*point)
        res = critical_lambda(args.spec, point)
        value, violated = res.value, res.violated
    line = f"{args.spec} critical_lambda={_fmt(value)} violated={'true' if violated else 'false'}"
    _emit(args, line, {"spec": args.spec, "critical_lambda": value, "violated": violated})
    return 0


def scan_row(lam: float, grid=DEFAULT_GRID) -> tuple[float, ...]:
    wlgi = catalog_max(lam, grid).best_value
    k3, _ = lgi_max(3, lam)
    k4, _ = lgi_max(4, lam)
    nsit = nsit_delta(ModelParams(math.pi / 4, math.pi / 2, math.pi / 4, lam))
    return lam, wlgi, k3 - 1.0, k4 - 2.0, nsit


def cmd_scan(args) -> int:
    lo, hi, steps = args.lambda_min, args.lambda_max, args.steps
    if not (0.0 < lo < hi <= 1.0) or steps < 2:
        raise UsageError("need 0 < --lambda-min < --lambda-max <= 1 and --steps >= 2")
    lams = [lo + (hi - lo) * i / (steps - 1) for i in range(steps)]
    lams[-1] = hi
    with ThreadPoolExecutor(max_workers=threads()) as pool:
        rows = list(pool.map(scan_row, lams))
    try:
        with open(args.out, "w", newline="", encoding="ascii") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(SCAN_HEADER)
            for row in rows:
                w.writerow([_fmt(v) for v in row])
    except OSError as exc:
        print(f"error: cannot write {args.out}: {exc.strerror or exc}", file=sys.stderr)
        return 1
    return 0


def cmd_validate(args) -> int:
    report = certify_catalog()
    if args.verbose:
        for entry in report.entries:
            print(entry)
    _emit(args, report.summary(), {
        "summary": report.summary(),
        "passed": report.passed,
        "entries": [
            {"name": e.name, "classical_max": e.classical_max, "classical_min": e.classical_min,
             "declared_upper": e.declared_upper, "declared_lower": e.declared_lower, "passed": e.passed}
            for e in report.entries
        ],
    })
    return 0 if report.passed else 1


def cmd_mc(args) -> int:
    if args.samples < 1:
        raise UsageError("--samples must be >= 1")
    if args.seed < 0:
        raise UsageError("--seed must be >= 0")
    est = estimate_inequality(args.spec, _params(args), args.samples, args.seed)
    line = (
        f"{args.spec} estimate={_fmt(est.estimate)} std_error={_fmt(est.std_error)} "
        f"samples={args.samples} seed={args.seed}"
    )
    _emit(args, line, {
        "spec": args.spec, "estimate": est.estimate, "std_error": est.std_error,
        "samples": args.samples, "seed": args.seed,
        "terms": [{"event": e, "frequency": f, "std_error": s} for e, f, s in est.frequencies],
    })
    return 0


# --- parser ----------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(2)


def _add_point(p: argparse.ArgumentParser, required_tau: bool = True, defaults: bool = True) -> None:
    d = 0.0 if defaults else None
    p.add_argument("--theta", type=float, default=d, help="initial-state angle (rad)")
    p.add_argument("--phi", type=float, default=d, help="initial-state phase (rad)")
    p.add_argument("--tau", type=float, required=required_tau, default=None if required_tau else d,
                   help="phase between neighbouring times, Delta E * Delta t (rad)")
    p.add_argument("--degrees", action="store_true", help="read angles in degrees")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="macroreal", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("eval", help="evaluate a criterion at one point")
    p.add_argument("spec")
    _add_point(p)
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("maximize", help="maximize a criterion over theta, phi, tau")
    p.add_argument("spec")
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--grid", type=int, nargs=3, default=list(DEFAULT_GRID),
                   metavar=("N_THETA", "N_TAU", "N_PHI"))
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_maximize)

    p = sub.add_parser("critical-lambda", help="critical sharpness of a criterion")
    p.add_argument("spec")
    _add_point(p, required_tau=False, defaults=False)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_critical_lambda)

    p = sub.add_parser("scan", help="write a lambda scan as CSV")
    p.add_argument("--lambda-min", type=float, required=True)
    p.add_argument("--lambda-max", type=float, default=1.0)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("validate", help="certify classical bounds by enumeration")
    p.add_argument("--verbose", action="store_true", help="list every spec")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("mc", help="Monte Carlo estimate of a criterion")
    p.add_argument("spec")
    _add_point(p)
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_mc)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, UnknownSpecError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except MacrorealError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
