"""Shortest planar paths under a travel budget that resets inside convex regions.

The planner works in two stages: a wavefront-discretized graph search
finds the optimal region visitation order, then a convex program places
the exact entry and exit points. A dense boundary-sampling oracle is
included for independent verification.
"""

from .budget_graph import (
    BudgetGraph,
    PolytopeSequence,
    bellman_ford_labels,
    build_graph,
    extract_sequence,
    shortest_graph_path,
)
from .errors import (
    BudgetPathError,
    DegeneratePolytope,
    EmptyPolytope,
    GenerationFailed,
    Infeasible,
    InvalidSequence,
    MaxIterations,
    NumericalBreakdown,
    ParseError,
    SequenceRepetition,
    TooManyNodes,
    UnboundedPolytope,
    ValidationError,
)
from .generate import generate_scenario
from .geometry import (
    Polytope,
    Segment,
    circle_boundary_intersections,
    contains,
    enumerate_vertices,
    polyline_length,
    polytope_distance,
    segment_budget_feasible,
)
from .oracle import dense_oracle
from .pipeline import PlanReport, plan
from .refine import (
    ConicProblem,
    RefineResult,
    assemble_problem,
    assemble_solution,
    evaluate_objective,
    solve,
)
from .render import render_svg
from .scenario import (
    PathSolution,
    Scenario,
    check_path_feasible,
    load_scenario,
    load_solution,
    make_solution,
    save_scenario,
    straight_line_solution,
)
from .wavefront import CandidateNode, generate_candidates, seed_points

__version__ = "0.1.0"

__all__ = [
    "BudgetGraph",
    "BudgetPathError",
    "CandidateNode",
    "ConicProblem",
    "DegeneratePolytope",
    "EmptyPolytope",
    "GenerationFailed",
    "Infeasible",
    "InvalidSequence",
    "MaxIterations",
    "NumericalBreakdown",
    "ParseError",
    "PathSolution",
    "PlanReport",
    "Polytope",
    "PolytopeSequence",
    "RefineResult",
    "Scenario",
    "Segment",
    "SequenceRepetition",
    "TooManyNodes",
    "UnboundedPolytope",
    "ValidationError",
    "assemble_problem",
    "assemble_solution",
    "bellman_ford_labels",
    "build_graph",
    "check_path_feasible",
    "circle_boundary_intersections",
    "contains",
    "dense_oracle",
    "enumerate_vertices",
    "evaluate_objective",
    "extract_sequence",
    "generate_candidates",
    "generate_scenario",
    "load_scenario",
    "load_solution",
    "make_solution",
    "plan",
    "polyline_length",
    "polytope_distance",
    "render_svg",
    "save_scenario",
    "seed_points",
    "segment_budget_feasible",
    "shortest_graph_path",
    "solve",
    "straight_line_solution",
]
