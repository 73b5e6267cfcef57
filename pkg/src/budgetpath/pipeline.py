"""End-to-end planning: wavefront, graph search, then convex refinement."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import budget_graph, refine, wavefront
from .errors import Infeasible, MaxIterations
from .scenario import (
    METHOD_GRAPH,
    METHOD_REFINED,
    PathSolution,
    Scenario,
    make_solution,
    straight_line_solution,
)


@dataclass(frozen=True, eq=False)
class PlanReport:
    """Everything one planning run produced, per stage."""

    scenario: Scenario
    straight: PathSolution | None = None
    graph: PathSolution | None = None
    refined: PathSolution | None = None
    node_count: int = 0
    edge_count: int = 0
    sequence: tuple[int, ...] = ()
    refine_result: refine.RefineResult | None = None
    timings: dict = field(default_factory=dict)

    @property
    def best(self) -> PathSolution:
        for sol in (self.refined, self.straight, self.graph):
            if sol is not None:
                return sol
        raise ValueError("empty report")


def _graph_solution(g: budget_graph.BudgetGraph, path: list[int], seq) -> PathSolution:
    waypoints = g.positions[path]
    flags = []
    for u, v in zip(path[:-1], path[1:]):
        flags.append(bool(g.pid[u] >= 0 and g.pid[u] == g.pid[v]))
    return make_solution(waypoints, flags, sequence=tuple(seq), method_tag=METHOD_GRAPH)


def plan(
    scn: Scenario,
    feastol: float = 1e-7,
    gaptol: float = 1e-7,
    max_iter: int = 50_000,
) -> PlanReport:
    """Plan a scenario end to end.

    Raises Infeasible when no budget-feasible path exists and
    MaxIterations when the refinement solver fails to converge.
    """
    timings = {}
    if scn.straight_length() <= scn.budget:
        return PlanReport(scenario=scn, straight=straight_line_solution(scn))

    t0 = time.perf_counter()
    nodes = wavefront.generate_candidates(scn)
    timings["wavefront_s"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    g = budget_graph.build_graph(scn, nodes)
    timings["graph_build_s"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    path, _ = budget_graph.shortest_graph_path(g, 0, 1)
    timings["dijkstra_s"] = time.perf_counter() - t0

    seq, warm = budget_graph.extract_sequence(g, path)
    graph_sol = _graph_solution(g, path, seq)

    if len(seq) == 0:
        # Direct hop within budget; nothing to refine.
        refined_sol = make_solution(
            [scn.start, scn.end], [False], sequence=(), method_tag=METHOD_REFINED
        )
        return PlanReport(
            scenario=scn,
            graph=graph_sol,
            refined=refined_sol,
            node_count=g.num_nodes,
            edge_count=g.num_edges,
            sequence=(),
            timings=timings,
        )

    problem = refine.assemble_problem(scn, seq)
    entries = [w[0] for w in warm]
    exits = [w[1] for w in warm]
    t0 = time.perf_counter()
    result = refine.solve(
        problem,
        warm_start=(np.asarray(entries), np.asarray(exits)),
        feastol=feastol,
        gaptol=gaptol,
        max_iter=max_iter,
    )
    timings["refine_s"] = time.perf_counter() - t0
    if result.status == refine.STATUS_INFEASIBLE:
        # Unreachable when a graph path exists; kept as a defensive check.
        raise Infeasible("refinement reports an impossible hop along the graph sequence")
    if result.status != refine.STATUS_OPTIMAL:
        raise MaxIterations(
            f"refinement did not converge (status {result.status}, "
            f"residual {result.kkt_residual:.2e})",
            best=result,
        )
    refined_sol = refine.assemble_solution(scn, seq, result)

    return PlanReport(
        scenario=scn,
        graph=graph_sol,
        refined=refined_sol,
        node_count=g.num_nodes,
        edge_count=g.num_edges,
        sequence=tuple(seq),
        refine_result=result,
        timings=timings,
    )
