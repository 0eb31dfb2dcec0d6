"""Command-line front end: ``solve``, ``attack`` and ``oracle-k1``.

Every command prints exactly one JSON document on stdout. Exit codes:
0 success, 2 parse/validation error, 3 budget or size cap exceeded,
4 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import attack, model
from .maxflow import max_flow
from .network import NetworkError, format_rational, parse_flow, parse_network, parse_rational

EXIT_OK, EXIT_INPUT, EXIT_BUDGET, EXIT_INTERNAL = 0, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        _emit({"error": message})
        self.exit(EXIT_INPUT)


def _emit(doc: dict) -> None:
    json.dump(doc, sys.stdout, indent=2)
    sys.stdout.write("\n")


def _ms(start: float) -> float:
    return round((time.perf_counter() - start) * 1e3, 3)


def _load(args) -> tuple:
    start = time.perf_counter()
    path = Path(args.file)
    fmt = args.format or ("json" if path.suffix.lower() == ".json" else "dimacs")
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise NetworkError(f"cannot read {path}: {exc.strerror}") from None
    return parse_network(text, fmt), _ms(start)


def _approx(doc: dict, keys) -> None:
    doc["approx"] = {
        key: float(Fraction(doc[key])) for key in keys if doc.get(key) is not None
    }


def cmd_solve(args) -> int:
    net, parse_ms = _load(args)
    if not 1 <= args.k <= net.m:
        raise NetworkError(f"k must lie in 1..{net.m} (number of destroyable arcs), got {args.k}")
    mode = args.mode.replace("-", "_")
    sol = model.solve_kamrfp(
        net, args.k, mode,
        certify=not args.no_certify, max_vars=args.max_vars,
        lp_method=args.lp_method, budget=args.budget,
    )
    flow = [{"arc": a, "value": format_rational(v)} for a, v in sorted(sol.flow.values.items())]
    doc = {
        "command": "solve",
        "mode": mode,
        "n": net.n,
        "m": net.m,
        "k": args.k,
        "scenarios": math.comb(net.m, args.k),
        "variables": sol.variables,
        "fstar": format_rational(sol.fstar),
        "theta": format_rational(sol.theta),
        "loss": format_rational(sol.loss),
        "flow": flow,
        "worst_attack": list(sol.worst_attack) if sol.worst_attack is not None else None,
        "certified": bool(sol.certified) and not args.no_certify,
        "lp_method": sol.lp_method,
        "timings_ms": {"parse": parse_ms, **{k: round(v, 3) for k, v in sol.timings_ms.items()}},
    }
    if args.float:
        _approx(doc, ("fstar", "theta", "loss"))
        for item in flow:
            item["value_float"] = float(Fraction(item["value"]))
    _emit(doc)
    return EXIT_OK


def cmd_attack(args) -> int:
    net, parse_ms = _load(args)
    if not 1 <= args.k <= net.m:
        raise NetworkError(f"k must lie in 1..{net.m} (number of destroyable arcs), got {args.k}")
    try:
        flow_text = Path(args.flow).read_text(encoding="utf-8")
    except OSError as exc:
        raise NetworkError(f"cannot read {args.flow}: {exc.strerror}") from None
    phi = parse_flow(flow_text, net)
    start = time.perf_counter()
    report = attack.worst_case(net, phi, args.k, budget=args.budget, workers=args.workers)
    doc = {
        "command": "attack",
        "n": net.n,
        "m": net.m,
        "k": args.k,
        "scenarios": math.comb(net.m, args.k),
        "attacked_flow_value": format_rational(report.attacked_flow_value),
        "residual": format_rational(report.residual),
        "loss": format_rational(report.loss),
        "worst_attack": list(report.worst_attack),
        "subsets_evaluated": report.subsets_evaluated,
        "timings_ms": {"parse": parse_ms, "attack": _ms(start)},
    }
    if args.float:
        _approx(doc, ("attacked_flow_value", "residual", "loss"))
    _emit(doc)
    return EXIT_OK


def cmd_oracle_k1(args) -> int:
    net, parse_ms = _load(args)
    try:
        tol = parse_rational(args.tol)
    except ValueError as exc:
        raise NetworkError(str(exc)) from None
    if tol <= 0:
        raise NetworkError("tolerance must be positive")
    start = time.perf_counter()
    fstar = max_flow(net).value
    doc = {"command": "oracle-k1", "n": net.n, "m": net.m, "fstar": format_rational(fstar),
           "tolerance": format_rational(tol)}
    if fstar == 0:
        doc.update({"lambda": None, "theta": None, "skipped": True})
    else:
        lam = attack.k1_bisection_oracle(net, tol)
        doc.update({"lambda": format_rational(lam), "theta": format_rational(fstar - lam),
                    "skipped": False})
    doc["timings_ms"] = {"parse": parse_ms, "oracle": _ms(start)}
    if args.float:
        _approx(doc, ("fstar", "lambda", "theta"))
    _emit(doc)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="kamrfp", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("file")
        p.add_argument("--format", choices=("dimacs", "json"), default=None,
                       help="input format (default: by file extension)")
        p.add_argument("--float", action="store_true",
                       help="add decimal approximations next to the exact values")

    p = sub.add_parser("solve", help="optimal adaptive flow against k arc deletions")
    common(p)
    p.add_argument("-k", type=int, required=True)
    p.add_argument("--mode", choices=("two-phase", "combined"), default="two-phase")
    p.add_argument("--no-certify", action="store_true")
    p.add_argument("--max-vars", type=int, default=model.DEFAULT_MAX_VARS)
    p.add_argument("--lp-method", choices=("auto", "exact", "guided"), default="auto")
    p.add_argument("--budget", type=int, default=attack.DEFAULT_BUDGET)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("attack", help="exhaustive worst k-arc attack on a given flow")
    common(p)
    p.add_argument("-k", type=int, required=True)
    p.add_argument("--flow", required=True)
    p.add_argument("--budget", type=int, default=attack.DEFAULT_BUDGET)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_attack)

    p = sub.add_parser("oracle-k1", help="bisection oracle for the single-arc case")
    common(p)
    p.add_argument("--tol", default="1/1000000")
    p.set_defaults(func=cmd_oracle_k1)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (model.ModelTooLarge, attack.BudgetExceeded) as exc:
        code, msg = EXIT_BUDGET, str(exc)
    except (NetworkError, ValueError) as exc:
        code, msg = EXIT_INPUT, str(exc)
    except model.InvariantViolation as exc:
        code, msg = EXIT_INTERNAL, str(exc)
    _emit({"command": args.command, "error": msg, "exit_code": code})
    return code


if __name__ == "__main__":
    sys.exit(main())
