"""Command-line interface: plan, compare, render, generate, verify."""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import replace
from pathlib import Path

from . import oracle as oracle_mod
from . import render as render_mod
from .errors import (
    BudgetPathError,
    GenerationFailed,
    Infeasible,
    MaxIterations,
    NumericalBreakdown,
    ParseError,
    TooManyNodes,
    ValidationError,
)
from .generate import generate_scenario
from .pipeline import plan
from .scenario import load_scenario, load_solution, save_scenario

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INFEASIBLE = 2
EXIT_SOLVER = 3


def _read_scenario(args):
    text = Path(args.scenario).read_text(encoding="utf-8")
    scn = load_scenario(text)
    overrides = {}
    if getattr(args, "levels", None) is not None:
        overrides["levels"] = args.levels
    if getattr(args, "tol", None) is not None:
        overrides["tol"] = args.tol
    if overrides:
        scn = replace(scn, **overrides)
    for note in scn.notes:
        print(f"note: {note}", file=sys.stderr)
    return scn


def _write_or_print(text: str, output: str | None):
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        print(text)


def _run_plan(scn, args):
    return plan(
        scn,
        feastol=args.feastol,
        gaptol=args.gaptol,
        max_iter=args.max_iter,
    )


def cmd_plan(args) -> int:
    scn = _read_scenario(args)
    report = _run_plan(scn, args)
    print(f"straight-line length: {scn.straight_length():.6f}")
    if report.straight is not None:
        print(f"refined length: {report.straight.total_length:.6f} (straight line)")
    else:
        print(
            f"graph-only length: {report.graph.total_length:.6f} "
            f"({report.node_count} nodes, {report.edge_count} edges)"
        )
        print(f"refined length: {report.refined.total_length:.6f}")
        print(f"sequence: {list(report.sequence)}")
    if args.dump_graph and report.graph is not None:
        from . import budget_graph, wavefront

        nodes = wavefront.generate_candidates(scn)
        g = budget_graph.build_graph(scn, nodes)
        Path(args.dump_graph).write_text(json.dumps(g.to_dict()), encoding="utf-8")
    solution = report.best
    _write_or_print(solution.to_json(), args.output)
    if args.graph_output and report.graph is not None:
        Path(args.graph_output).write_text(report.graph.to_json(), encoding="utf-8")
    if args.svg:
        sols = [s for s in (report.graph, report.refined, report.straight) if s is not None]
        Path(args.svg).write_text(render_mod.render_svg(scn, sols), encoding="utf-8")
    return EXIT_OK


def cmd_compare(args) -> int:
    try:
        deltas = [int(v) for v in args.deltas.split(",") if v.strip()]
    except ValueError as exc:
        raise ParseError(f"bad --deltas list: {exc}") from exc
    if not deltas:
        raise ParseError("--deltas needs at least one level count")
    scn = _read_scenario(args)
    rows = ["delta,nodes,graph_len,refined_len,ms"]
    for delta in deltas:
        run_scn = replace(scn, levels=delta)
        t0 = time.perf_counter()
        report = _run_plan(run_scn, args)
        ms = (time.perf_counter() - t0) * 1000.0
        if report.straight is not None:
            graph_len = refined_len = report.straight.total_length
            nodes = 0
        else:
            graph_len = report.graph.total_length
            refined_len = report.refined.total_length
            nodes = report.node_count
        rows.append(f"{delta},{nodes},{graph_len:.9f},{refined_len:.9f},{ms:.1f}")
    _write_or_print("\n".join(rows), args.output)
    return EXIT_OK


def cmd_render(args) -> int:
    scn = _read_scenario(args)
    solutions = [
        load_solution(Path(p).read_text(encoding="utf-8")) for p in args.solutions
    ]
    svg = render_mod.render_svg(scn, solutions)
    Path(args.output).write_text(svg, encoding="utf-8")
    print(f"wrote {args.output}")
    return EXIT_OK


def cmd_generate(args) -> int:
    try:
        bounds = tuple(float(v) for v in args.bounds.split(","))
    except ValueError as exc:
        raise ParseError(f"bad --bounds: {exc}") from exc
    if len(bounds) != 4:
        raise ParseError("--bounds needs four comma-separated numbers: xmin,xmax,ymin,ymax")
    scn = generate_scenario(
        num_regions=args.regions,
        bounds=bounds,
        budget=args.budget,
        seed=args.seed,
        levels=args.levels,
        min_radius=args.min_radius,
        max_radius=args.max_radius,
    )
    _write_or_print(save_scenario(scn), args.output)
    return EXIT_OK


def cmd_verify(args) -> int:
    scn = _read_scenario(args)
    report = _run_plan(scn, args)
    refined = report.best
    length, waypoints = oracle_mod.dense_oracle(scn, args.oracle_spacing)
    visits = oracle_mod.extract_visits(scn, waypoints)
    print(f"refined length: {refined.total_length:.6f} (sequence {list(refined.sequence)})")
    print(f"oracle length:  {length:.6f} (spacing {args.oracle_spacing}, sequence {list(visits)})")
    print(f"difference:     {length - refined.total_length:.6f}")
    print(f"sequence match: {'yes' if tuple(visits) == tuple(refined.sequence) else 'no'}")
    return EXIT_OK


def _add_solver_flags(p: argparse.ArgumentParser):
    p.add_argument("--levels", type=int, default=None, help="override wavefront level count")
    p.add_argument("--tol", type=float, default=None, help="override geometric tolerance")
    p.add_argument("--feastol", type=float, default=1e-7)
    p.add_argument("--gaptol", type=float, default=1e-7)
    p.add_argument("--max-iter", type=int, default=50_000, dest="max_iter")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="budgetpath",
        description=(
            "Shortest planar paths under a travel budget that resets inside "
            "convex replenishment regions."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("plan", help="plan a scenario and emit the solution JSON")
    p.add_argument("scenario")
    _add_solver_flags(p)
    p.add_argument("--output", help="solution JSON path (default: stdout)")
    p.add_argument("--graph-output", help="also write the graph-only solution JSON")
    p.add_argument("--dump-graph", help="write the search graph as JSON")
    p.add_argument("--svg", help="render the scenario and paths to an SVG file")
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("compare", help="plan at several level counts, print a CSV table")
    p.add_argument("scenario")
    p.add_argument("--deltas", required=True, help="comma-separated level counts, e.g. 2,4,8")
    _add_solver_flags(p)
    p.add_argument("--output", help="CSV path (default: stdout)")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("render", help="render a scenario plus solution files to SVG")
    p.add_argument("scenario")
    p.add_argument("solutions", nargs="+", help="solution JSON files")
    p.add_argument("--output", required=True, help="SVG output path")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("generate", help="generate a random scenario JSON")
    p.add_argument("--regions", type=int, default=15)
    p.add_argument("--bounds", default="0,18,0,14", help="xmin,xmax,ymin,ymax")
    p.add_argument("--budget", type=float, default=3.0)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--levels", type=int, default=4)
    p.add_argument("--min-radius", type=float, default=1.2, dest="min_radius")
    p.add_argument("--max-radius", type=float, default=2.2, dest="max_radius")
    p.add_argument("--output", help="scenario JSON path (default: stdout)")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("verify", help="compare the planned path against the dense oracle")
    p.add_argument("scenario")
    _add_solver_flags(p)
    p.add_argument(
        "--oracle-spacing",
        type=float,
        default=0.01,
        dest="oracle_spacing",
        help="boundary sample spacing for the oracle",
    )
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except Infeasible:
        print("infeasible: no budget-feasible path", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (ParseError, ValidationError, GenerationFailed, TooManyNodes) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (MaxIterations, NumericalBreakdown) as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except BudgetPathError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
