"""Command-line entry point: ``almostprime <subcommand> [flags]``.

Exit codes: 0 success (for ``verify``: bracket certified positive), 1 a
computational failure or a non-positive bracket, 2 infeasible parameters,
64 usage errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

from . import __version__
from .bound_model import HEADLINE_DELTA, HEADLINE_MARGIN, HEADLINE_THETA, BoundParams, bracket, feasible
from .errors import AlmostPrimeError
from .quadrature import QuadConfig

SCHEMA_VERSION = "1"
EXIT_OK, EXIT_FAIL, EXIT_INFEASIBLE, EXIT_USAGE = 0, 1, 2, 64

TRACE_COLUMNS = ["theta", "delta", "main", "corr1", "corr2", "corr3", "total", "err"]
SURVEY_COLUMNS = ["q", "worst_a", "p2", "ratio", "omega", "residues", "flagged"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _cell(v) -> str:
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, bool):
        return "1" if v else "0"
    return "" if v is None else str(v)


def _csv_text(columns, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_cell(row.get(c)) for c in columns])
    return buf.getvalue()


def _json_text(payload: dict) -> str:
    return json.dumps({"schema_version": SCHEMA_VERSION, **payload}, indent=2) + "\n"


def _emit(args, text_summary: str, machine: dict) -> None:
    """Write the machine payload and/or the human summary.

    ``machine`` maps a format name to the rendered payload text.
    """
    fmt = args.format or args.default_format
    if args.output:
        if fmt == "text":
            fmt = next(iter(machine))
        Path(args.output).write_text(machine[fmt])
        sys.stdout.write(text_summary)
    elif fmt == "text":
        sys.stdout.write(text_summary)
    else:
        sys.stdout.write(machine[fmt])


def _cfg(args) -> QuadConfig:
    return QuadConfig(abs_tol=args.abs_tol)


def cmd_verify(args) -> int:
    try:
        p = BoundParams(args.theta, args.delta, args.epsilon)
    except ValueError as exc:
        sys.stderr.write(f"infeasible parameters: {exc}\n")
        return EXIT_INFEASIBLE
    ok, reasons = feasible(p)
    if not ok:
        sys.stderr.write("infeasible parameters:\n" + "".join(f"  - {r}\n" for r in reasons))
        return EXIT_INFEASIBLE
    b = bracket(p, _cfg(args))
    margin = b.total - b.err
    lines = [
        f"theta = {p.theta!r}, delta = {p.delta!r}, epsilon = {p.epsilon!r}",
        f"main term   {b.main:.15f}",
        f"correction1 {b.corr1:.15f}",
        f"correction2 {b.corr2:.15f}",
        f"correction3 {b.corr3:.15f}",
        f"bracket     {b.total:.15e}  (err <= {b.err:.3e})",
        f"certified margin {margin:.15e}",
    ]
    if p.theta == HEADLINE_THETA and p.delta == HEADLINE_DELTA:
        lines.append(f"exceeds {HEADLINE_MARGIN}: {b.total - b.err > HEADLINE_MARGIN}")
    lines.append("CERTIFIED" if margin > 0 else "NOT CERTIFIED")
    row = b.as_row()
    _emit(
        args,
        "\n".join(lines) + "\n",
        {
            "json": _json_text({"bracket": row, "certified_margin": margin, "certified": margin > 0}),
            "csv": _csv_text(TRACE_COLUMNS, [row]),
        },
    )
    return EXIT_OK if margin > 0 else EXIT_FAIL


def cmd_optimize(args) -> int:
    from .optimizer import min_theta

    r = min_theta(args.lo, args.hi, args.tol, _cfg(args), grid=args.grid, golden_iters=args.golden)
    summary = (
        f"theta* = {r.theta_star!r} (resolution {r.tol!r})\n"
        f"delta* = {r.delta_star!r}\n"
        f"margin = {r.margin!r} (err <= {r.margin_err:.3e})\n"
        f"evaluations = {len(r.trace)}\n"
    )
    rows = r.trace_rows()
    _emit(
        args,
        summary,
        {
            "csv": _csv_text(TRACE_COLUMNS, rows),
            "json": _json_text(
                {
                    "theta_star": r.theta_star,
                    "delta_star": r.delta_star,
                    "margin": r.margin,
                    "margin_err": r.margin_err,
                    "tol": r.tol,
                    "trace": rows,
                }
            ),
        },
    )
    return EXIT_OK


def tabulate_rows(step: float, lo: float = 1.0, hi: float = 6.0, cfg: QuadConfig | None = None) -> list[dict]:
    from .sieve_functions import F_MAX, lower_f, upper_F

    cfg = cfg or QuadConfig()
    count = int(math.floor((hi - lo) / step + 1e-9)) + 1
    rows = []
    for k in range(count):
        u = round(lo + k * step, 12)
        F, eF = upper_F(u, cfg) if u <= F_MAX else (None, 0.0)
        f, ef = lower_f(u, cfg)
        rows.append({"u": u, "F": F, "f": f, "err": max(eF, ef)})
    return rows


def cmd_tabulate(args) -> int:
    if not args.step > 0:
        raise UsageError("--step must be positive")
    rows = tabulate_rows(args.step, cfg=_cfg(args))
    cols = ["u", "F", "f", "err"]
    text = "".join(
        f"{r['u']:6.3f}  {'' if r['F'] is None else format(r['F'], '.12f'):>16}  {r['f']:.12f}\n" for r in rows
    )
    _emit(args, text, {"csv": _csv_text(cols, rows), "json": _json_text({"rows": rows})})
    return EXIT_OK


def cmd_survey(args) -> int:
    from .lab.factor import survey

    res = survey(args.q_lo, args.q_hi, args.theta, cap_factor=args.cap_factor)
    rows = [
        {
            "q": r.q,
            "worst_a": r.worst_a,
            "p2": r.p2,
            "ratio": r.ratio,
            "omega": r.omega,
            "residues": r.residues,
            "flagged": r.flagged,
        }
        for r in res.rows
    ]
    summary = (
        f"moduli {args.q_lo}..{args.q_hi}: max log P2/log q = {res.max_ratio!r} at (q, a) = {res.argmax}\n"
        f"moduli with ratio above {args.theta}: {res.exceed_count}\n"
        f"flagged rows (no P2 below {args.cap_factor} q^2): {len(res.flagged)}\n"
    )
    _emit(
        args,
        summary,
        {
            "csv": _csv_text(SURVEY_COLUMNS, rows),
            "json": _json_text(
                {
                    "max_ratio": res.max_ratio,
                    "argmax": list(res.argmax),
                    "exceed_count": res.exceed_count,
                    "flagged": res.flagged,
                    "rows": rows,
                }
            ),
        },
    )
    return EXIT_FAIL if res.flagged else EXIT_OK


def cmd_selberg(args) -> int:
    from .lab.selberg import selberg_weights, sieve_inequality_check

    system = selberg_weights(args.z, args.d1)
    lines = [
        f"z = {system.z}, D1 = {system.level_D1}, exact = {system.exact}",
        f"G = {float(system.g_sum)!r}, 1/G = {1 / float(system.g_sum)!r}",
        f"identity holds: {system.identity_lhs == 1 / system.g_sum if system.exact else abs(float(system.identity_lhs) - 1 / float(system.g_sum)) < 1e-12}",
        f"asymptotic ratio = {system.asymptotic_ratio!r}",
        f"max |lambda+| = {float(max(abs(w) for w in system.weights.values()))!r}",
    ]
    if args.check_n:
        chk = sieve_inequality_check(system, args.check_n)
        lines.append(f"sieve inequality holds for n <= {args.check_n}; min slack {float(chk.min_slack)!r}")
    payload = system.to_json() + "\n"
    rows = [
        {"d": d, "lambda_plus": float(w), "omega1": float(system.omega1(d))} for d, w in sorted(system.weights.items())
    ]
    _emit(args, "\n".join(lines) + "\n", {"json": payload, "csv": _csv_text(["d", "lambda_plus", "omega1"], rows)})
    return EXIT_OK


def cmd_weighted_sum(args) -> int:
    from .lab.weighted import weighted_sum

    params = BoundParams(args.theta, args.delta)
    r = weighted_sum(args.x, args.q, args.a, params, z=args.z, y=args.y)
    lines = [
        f"x = {r.x}, q = {r.q}, a = {r.a}, z = {r.z}, y = {r.y}, lambda = {r.lam!r}",
        f"|A| = {r.size_A}, S(A, z) = {r.S_Az}",
        f"W (definition) = {r.W!r}",
        f"W (expansion)  = {r.W_expansion!r}",
        f"coefficient vectors agree: {r.forms_agree}",
        f"split of the prime sum: {', '.join(repr(v) for v in r.split)}",
        f"members with Omega <= 2: {r.count_p2}",
        f"squarefull tail (Omega >= 3, mu = 0): {r.count_squarefull_tail}",
        f"squarefree Omega >= 3 checked for negative weight: {r.negative_checked}, violations {len(r.negative_violations)}",
    ]
    summary = {
        "x": r.x, "q": r.q, "a": r.a, "z": r.z, "y": r.y, "lambda": r.lam,
        "W": r.W, "W_expansion": r.W_expansion, "forms_agree": r.forms_agree,
        "size_A": r.size_A, "S_Az": r.S_Az, "split": list(r.split),
        "count_p2": r.count_p2, "count_squarefull_tail": r.count_squarefull_tail,
        "negative_checked": r.negative_checked, "negative_violations": [list(v) for v in r.negative_violations],
        "breakdown": r.breakdown_rows(),
    }
    _emit(
        args,
        "\n".join(lines) + "\n",
        {"csv": _csv_text(["p", "c_p", "S_Ap"], r.breakdown_rows()), "json": _json_text(summary)},
    )
    ok = r.forms_agree and not r.negative_violations and (not r.p2_implied or r.count_p2 >= 1)
    return EXIT_OK if ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--abs-tol", type=float, default=1e-10, help="quadrature absolute tolerance")
    common.add_argument("--format", choices=["csv", "json", "text"], default=None)
    common.add_argument("--output", "-o", default=None, help="write the machine-readable result here")

    parser = _Parser(prog="almostprime", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("verify", parents=[common], help="evaluate the bracket at (theta, delta)")
    p.add_argument("--theta", type=float, default=HEADLINE_THETA)
    p.add_argument("--delta", type=float, default=HEADLINE_DELTA)
    p.add_argument("--epsilon", type=float, default=0.0)
    p.set_defaults(func=cmd_verify, default_format="text")

    p = sub.add_parser("optimize", parents=[common], help="smallest certifiable theta")
    p.add_argument("--lo", type=float, default=1.70)
    p.add_argument("--hi", type=float, default=1.90)
    p.add_argument("--tol", type=float, default=1e-4)
    p.add_argument("--grid", type=int, default=64)
    p.add_argument("--golden", type=int, default=40)
    p.set_defaults(func=cmd_optimize, default_format="text")

    p = sub.add_parser("tabulate", parents=[common], help="table of F(u), f(u) on [1, 6]")
    p.add_argument("--step", type=float, default=0.1)
    p.set_defaults(func=cmd_tabulate, default_format="csv")

    p = sub.add_parser("survey", parents=[common], help="worst least P2 per modulus")
    p.add_argument("--q-lo", type=int, default=2)
    p.add_argument("--q-hi", type=int, default=200)
    p.add_argument("--theta", type=float, default=HEADLINE_THETA)
    p.add_argument("--cap-factor", type=int, default=64)
    p.set_defaults(func=cmd_survey, default_format="csv")

    p = sub.add_parser("selberg", parents=[common], help="explicit Lambda^2 weights for omega_1")
    p.add_argument("--z", type=int, default=30)
    p.add_argument("--d1", type=int, default=900)
    p.add_argument("--check-n", type=int, default=0, help="also verify the sieve inequality up to this n")
    p.set_defaults(func=cmd_selberg, default_format="json")

    p = sub.add_parser("weighted-sum", parents=[common], help="Richert weighted sum on a progression")
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--theta", type=float, default=HEADLINE_THETA)
    p.add_argument("--delta", type=float, default=HEADLINE_DELTA)
    p.add_argument("--z", type=int, default=None)
    p.add_argument("--y", type=int, default=None)
    p.set_defaults(func=cmd_weighted_sum, default_format="text")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not args.abs_tol > 0:
        parser.error("--abs-tol must be positive")
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except (AlmostPrimeError, ValueError, ArithmeticError) as exc:
        sys.stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n")
        return EXIT_FAIL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
