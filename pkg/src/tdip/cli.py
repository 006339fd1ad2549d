"""Command-line surface.

Exit codes: 0 success/feasible, 1 infeasible or failed check, 2 parse or
schema error, 3 empty clause in the input formula, 4 violated solver or size
precondition.  Diagnostics go to stderr; data lands in files only.
"""

from __future__ import annotations

import argparse
import random
import sys
from pathlib import Path

from . import gaifman, reduction, solvers, treedepth
from .sip import (
    InfiniteLowerBound,
    ParseError,
    SipError,
    parse_sip,
    parse_solution,
    serialize_sip,
    serialize_solution,
    evaluate,
)


def _read(path: str) -> str:
    return Path(path).read_text()


def _write(path: str, text: str) -> None:
    Path(path).write_text(text + "\n")


def cmd_reduce(args) -> int:
    cnf = reduction.parse_dimacs(_read(args.cnf))
    normalized = reduction.normalize(cnf)
    dropped = len(cnf.clauses) - len(normalized.clauses)
    if dropped:
        print(f"note: dropped {dropped} tautological clause(s)", file=sys.stderr)
    if any(len(a) != len(b) for a, b in zip(normalized.clauses, cnf.clauses)):
        print("note: removed duplicate literals", file=sys.stderr)
    out = reduction.reduce(normalized)
    _write(args.out, serialize_sip(out.sip))
    _write(args.cert, treedepth.forest_to_json(out.certificate))
    provenance_path = args.provenance or args.out + ".prov.json"
    _write(provenance_path, reduction.serialize_provenance(out))
    depth = treedepth.check_forest(gaifman.incidence_graph(out.sip.A), out.certificate)
    print(
        f"rows={out.sip.A.rows} cols={out.sip.A.cols} "
        f"max_entry={out.sip.A.max_abs()} depth={depth}"
    )
    return 0


def cmd_analyze(args) -> int:
    sip = parse_sip(_read(args.sip))
    a = sip.A
    maxdeg_c, maxdeg_v = gaifman.degree_stats(a)
    inc = gaifman.incidence_graph(a)
    pri = gaifman.primal_graph(a)
    dua = gaifman.dual_graph(a)
    print(f"rows={a.rows} cols={a.cols} max_entry={a.max_abs()}")
    print(f"maxdeg_C={maxdeg_c} maxdeg_V={maxdeg_v}")
    print(
        "components:"
        f" incidence={len(gaifman.connected_components(inc))}"
        f" primal={len(gaifman.connected_components(pri))}"
        f" dual={len(gaifman.connected_components(dua))}"
    )
    if args.exact_td:
        depth, _forest = treedepth.exact_treedepth(inc)
        print(f"td_incidence={depth}")
    return 0


def cmd_solve(args) -> int:
    sip = parse_sip(_read(args.sip))
    if args.method == "brute":
        result = solvers.brute_force(sip)
    elif args.method == "few-rows":
        result = solvers.solve_few_rows(sip)
    elif args.method == "vertex-cover":
        result = solvers.solve_vertex_cover(sip)
    else:  # reduction-y
        if not args.provenance:
            print("error: --provenance is required with --method reduction-y", file=sys.stderr)
            return 2
        out = reduction.parse_provenance(sip, _read(args.provenance))
        result = reduction.decide_reduction(out)
    if result.feasible:
        if args.witness:
            _write(args.witness, serialize_solution(result.x))
        print("FEASIBLE")
        return 0
    print("INFEASIBLE")
    return 1


def cmd_verify(args) -> int:
    sip = parse_sip(_read(args.sip))
    x = parse_solution(_read(args.solution))
    if evaluate(sip, x):
        print("OK")
        return 0
    print("VIOLATION")
    return 1


def cmd_check_forest(args) -> int:
    sip = parse_sip(_read(args.sip))
    forest = treedepth.forest_from_json(_read(args.forest))
    graph = {
        "incidence": gaifman.incidence_graph,
        "primal": gaifman.primal_graph,
        "dual": gaifman.dual_graph,
    }[args.graph](sip.A)
    try:
        depth = treedepth.check_forest(graph, forest)
    except treedepth.ForestError as exc:
        print(f"violation: {exc}")
        return 1
    print(f"depth={depth}")
    return 0


def cmd_roundtrip(args) -> int:
    rng = random.Random(args.seed)
    agree = 0
    for _ in range(args.count):
        formula = reduction.random_formula(args.vars, args.clauses, rng)
        formula = reduction.normalize(formula)
        decided = reduction.decide_reduction(reduction.reduce(formula)).feasible
        expected = reduction.sat_brute_force(formula)
        if decided == expected:
            agree += 1
    print(f"{agree}/{args.count} agree")
    return 0 if agree == args.count else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tdip",
        description="Standard-form integer program feasibility toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("reduce", help="encode a DIMACS CNF file as an instance")
    p.add_argument("cnf", help="input DIMACS CNF file")
    p.add_argument("--out", required=True, help="output instance JSON")
    p.add_argument("--cert", required=True, help="output elimination forest JSON")
    p.add_argument("--provenance", help="output provenance JSON (default: <out>.prov.json)")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("analyze", help="print matrix and graph statistics")
    p.add_argument("sip", help="instance JSON file")
    p.add_argument("--exact-td", action="store_true", help="also compute exact incidence treedepth")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("solve", help="decide feasibility")
    p.add_argument("sip", help="instance JSON file")
    p.add_argument(
        "--method",
        required=True,
        choices=["brute", "few-rows", "vertex-cover", "reduction-y"],
    )
    p.add_argument("--provenance", help="provenance JSON (required for reduction-y)")
    p.add_argument("--witness", help="write the witness vector here when feasible")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check a solution file against an instance")
    p.add_argument("sip", help="instance JSON file")
    p.add_argument("solution", help="solution JSON file")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("check-forest", help="validate an elimination forest certificate")
    p.add_argument("sip", help="instance JSON file")
    p.add_argument("forest", help="forest JSON file")
    p.add_argument("--graph", default="incidence", choices=["incidence", "primal", "dual"])
    p.set_defaults(func=cmd_check_forest)

    p = sub.add_parser("roundtrip", help="random formulas: encoder decision vs. truth-table")
    p.add_argument("--vars", type=int, default=4)
    p.add_argument("--clauses", type=int, default=4)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--count", type=int, default=100)
    p.set_defaults(func=cmd_roundtrip)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, reduction.DimacsParseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except reduction.EmptyClause as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (
        treedepth.TooLarge,
        reduction.TooManyVariables,
        solvers.SolverError,
        InfiniteLowerBound,
        ValueError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except SipError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
