"""Command-line interface.

Subcommands:

* ``solve EQUATION``   — closed-form particular + homogeneous basis
                         (``--initial`` fits constants, ``--verify N`` checks,
                         ``--trace`` shows the derivation, ``--format json``)
* ``apply OP EXPR``    — apply an operator polynomial to an expression
* ``verify EQ SOL``    — check a candidate solution independently

Exit codes: 0 success, 1 parse/semantic error, 2 unsupported right-hand side,
3 verification mismatch, 4 internal error.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Any

from .expr import SequenceExpr, UnsupportedRhsError, apply_operator
from .oracle import MissingInitialConditionsError, VerifyReport, verify_solution
from .parser import ParseError, parse_equation, parse_expression, parse_initial, parse_operator
from .solver import (Equation, ExactMode, SingularSystemError, Solution,
                     solve)

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_UNSUPPORTED = 2
EXIT_VERIFY = 3
EXIT_INTERNAL = 4


class _UsageError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # keep argparse from sys.exit(2)
        raise _UsageError(message)


def _build_cli() -> _ArgumentParser:
    ap = _ArgumentParser(
        prog="fdsolve",
        description="Closed-form solutions of linear constant-coefficient "
                    "difference equations.")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="solve an equation like 'y(t+2) - 5y(t+1) + 4y(t) = 3^t'")
    s.add_argument("equation")
    s.add_argument("--initial", metavar="CONDS",
                   help="comma-separated conditions, e.g. 'y(0)=1, y(1)=2'")
    s.add_argument("--verify", metavar="N", nargs="?", type=int, const=50, default=None,
                   help="verify the result out to horizon N (default 50)")
    s.add_argument("--trace", action="store_true", help="show the derivation steps")
    s.add_argument("--format", choices=("text", "json"), default="text")

    a = sub.add_parser("apply", help="apply an operator polynomial to an expression")
    a.add_argument("operator", help="e.g. 'T^2 - 5*T + 4'")
    a.add_argument("expression", help="e.g. '3^t + t^2'")
    a.add_argument("--format", choices=("text", "json"), default="text")

    v = sub.add_parser("verify", help="check a candidate solution against an equation")
    v.add_argument("equation")
    v.add_argument("solution", help="candidate closed form for y(t)")
    v.add_argument("--initial", metavar="CONDS")
    v.add_argument("--horizon", type=int, default=50)
    v.add_argument("--format", choices=("text", "json"), default="text")
    return ap


def _fraction_str(v: Fraction | float) -> Any:
    return str(v) if isinstance(v, Fraction) else v


def _report_doc(report: VerifyReport) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "method": report.method,
        "range": list(report.t_range),
        "status": report.status,
    }
    if report.mismatch_t is not None:
        doc["mismatch_t"] = report.mismatch_t
        doc["expected"] = _fraction_str(report.expected)
        doc["got"] = _fraction_str(report.got)
    if report.max_deviation is not None:
        doc["max_deviation"] = report.max_deviation
    return doc


def _solution_doc(eq: Equation, sol: Solution, report: VerifyReport | None,
                  trace: bool) -> dict[str, Any]:
    homog = []
    for mode in sol.homogeneous:
        if isinstance(mode, ExactMode):
            homog.append({"type": "exact", "expr": mode.render(pretty=True)})
        else:
            homog.append({"type": "numeric", "modulus": mode.modulus,
                          "angle": mode.angle, "power": mode.power,
                          "kind": mode.kind})
    doc: dict[str, Any] = {
        "input": {
            "equation": str(eq),
            "initial": [[t, str(v)] for t, v in eq.initial] if eq.initial else None,
        },
        "operator": [str(c) for c in reversed(eq.operator.coeffs)],
        "particular": sol.particular.render(pretty=True),
        "homogeneous": homog,
        "constants": [_fraction_str(c) for c in sol.constants]
                     if sol.constants is not None else None,
    }
    general = sol.general_expr()
    if general is not None:
        doc["general"] = general.render(pretty=True)
    if trace:
        doc["trace"] = [{"rule": s.rule, "detail": s.detail,
                         "before": s.before, "after": s.after}
                        for s in sol.trace.steps]
    doc["verification"] = _report_doc(report) if report else None
    return doc


def _print_solution_text(doc: dict[str, Any]) -> None:
    print(f"equation:    {doc['input']['equation']}")
    if doc["input"]["initial"]:
        conds = ", ".join(f"y({t}) = {v}" for t, v in doc["input"]["initial"])
        print(f"initial:     {conds}")
    print(f"particular:  {doc['particular']}")
    if doc["homogeneous"]:
        rendered = []
        for m in doc["homogeneous"]:
            if m["type"] == "exact":
                rendered.append(m["expr"])
            else:
                power = "" if m["power"] == 0 else (" * t" if m["power"] == 1
                                                    else f" * t^{m['power']}")
                osc = "" if m["angle"] == 0 else f" * {m['kind']}({m['angle']:.10g}*t)"
                rendered.append(f"{m['modulus']:.10g}^t{power}{osc}")
        print(f"homogeneous: {', '.join(rendered)}")
    else:
        print("homogeneous: (empty basis)")
    if doc["constants"] is not None:
        pretty = ", ".join(
            f"c{i+1} = {c if isinstance(c, str) else format(c, '.10g')}"
            for i, c in enumerate(doc["constants"]))
        print(f"constants:   {pretty}")
    if "general" in doc:
        print(f"general:     {doc['general']}")
    if "trace" in doc:
        print("trace:")
        for i, s in enumerate(doc["trace"], 1):
            print(f"  {i}. [{s['rule']}] {s['detail']}")
            print(f"     {s['before']}  =>  {s['after']}")
    if doc["verification"]:
        print(f"verification: {_describe(doc['verification'])}")


def _describe(v: dict[str, Any]) -> str:
    lo, hi = v["range"]
    where = f"t in [{lo}, {hi}]"
    if v["status"] == "exact-match":
        return f"exact-match over {where} ({v['method']})"
    if v["status"] == "max-abs-deviation":
        return f"max-abs-deviation {v['max_deviation']:.3e} over {where} ({v['method']})"
    return (f"mismatch at t={v['mismatch_t']}: expected {v['expected']}, "
            f"got {v['got']} ({v['method']})")


def _emit(doc: dict[str, Any], fmt: str, text_printer) -> None:
    if fmt == "json":
        print(json.dumps(doc, indent=2))
    else:
        text_printer(doc)


def _cmd_solve(args: argparse.Namespace) -> int:
    eq = parse_equation(args.equation)
    if args.initial:
        eq = Equation(eq.operator, eq.rhs, parse_initial(args.initial))
    sol = solve(eq)
    report = None
    if args.verify is not None:
        report = verify_solution(eq, sol, horizon=args.verify)
    doc = _solution_doc(eq, sol, report, args.trace)
    _emit(doc, args.format, _print_solution_text)
    if report is not None and not report.ok:
        return EXIT_VERIFY
    return EXIT_OK


def _cmd_apply(args: argparse.Namespace) -> int:
    op = parse_operator(args.operator)
    e = parse_expression(args.expression)
    result = apply_operator(op, e)
    doc = {
        "input": {"operator": str(op), "expression": str(e)},
        "result": result.render(pretty=True),
    }
    _emit(doc, args.format, lambda d: print(d["result"]))
    return EXIT_OK


def _cmd_verify(args: argparse.Namespace) -> int:
    eq = parse_equation(args.equation)
    if args.initial:
        eq = Equation(eq.operator, eq.rhs, parse_initial(args.initial))
    candidate = parse_expression(args.solution)
    report = verify_solution(eq, candidate, horizon=args.horizon)
    doc = {
        "input": {"equation": str(eq), "solution": str(candidate)},
        "verification": _report_doc(report),
    }
    _emit(doc, args.format, lambda d: print(_describe(d["verification"])))
    return EXIT_OK if report.ok else EXIT_VERIFY


def _print_parse_error(err: ParseError) -> None:
    print(f"error: {err}", file=sys.stderr)
    if err.snippet:
        print(f"  {err.snippet}", file=sys.stderr)
        print(f"  {' ' * err.caret}^", file=sys.stderr)


def main(argv: list[str] | None = None) -> int:
    try:
        args = _build_cli().parse_args(argv)
    except _UsageError as err:
        print(f"usage error: {err}", file=sys.stderr)
        return EXIT_PARSE
    try:
        if args.command == "solve":
            return _cmd_solve(args)
        if args.command == "apply":
            return _cmd_apply(args)
        return _cmd_verify(args)
    except UnsupportedRhsError as err:
        print(f"unsupported right-hand side: {err}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except ParseError as err:
        _print_parse_error(err)
        return EXIT_PARSE
    except (SingularSystemError, MissingInitialConditionsError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_PARSE
    except Exception as err:  # pragma: no cover - defensive
        print(f"internal error: {type(err).__name__}: {err}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
