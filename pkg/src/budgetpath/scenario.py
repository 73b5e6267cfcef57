"""Problem-instance model, JSON (de)serialization, and path feasibility checks."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BudgetPathError,
    DegeneratePolytope,
    EmptyPolytope,
    ParseError,
    UnboundedPolytope,
    ValidationError,
)
from .geometry import DEFAULT_TOL, Polytope, as_point, polyline_length, polytope_distance

DEFAULT_LEVELS = 4

METHOD_GRAPH = "graph_only"
METHOD_REFINED = "refined"
METHOD_STRAIGHT = "straight_line"
_METHODS = (METHOD_GRAPH, METHOD_REFINED, METHOD_STRAIGHT)


@dataclass(frozen=True, eq=False)
class Scenario:
    """A full planning instance: endpoints, budget, regions, and resolution knobs.

    Immutable after construction; safe for concurrent reads.
    """

    start: np.ndarray
    end: np.ndarray
    budget: float
    polytopes: tuple[Polytope, ...]
    levels: int = DEFAULT_LEVELS
    tol: float = DEFAULT_TOL
    notes: tuple[str, ...] = field(default=())

    @property
    def num_regions(self) -> int:
        return len(self.polytopes)

    def straight_length(self) -> float:
        return float(np.linalg.norm(self.end - self.start))

    def region_containing(self, p, tol: float | None = None) -> int | None:
        """Index of the region containing ``p``, or None. Regions are disjoint."""
        if tol is None:
            tol = self.tol
        for poly in self.polytopes:
            if poly.contains(p, tol):
                return poly.id
        return None


@dataclass(frozen=True, eq=False)
class PathSolution:
    """A planned path: waypoints, per-segment lengths, and region-interior flags.

    ``segment_in_region[i]`` marks the segment from ``waypoints[i]`` to
    ``waypoints[i+1]`` as interior to some region and therefore exempt from
    the budget. ``sequence`` lists the visited region indices in order.
    """

    waypoints: np.ndarray
    segment_lengths: np.ndarray
    segment_in_region: tuple[bool, ...]
    sequence: tuple[int, ...]
    total_length: float
    method_tag: str

    def __post_init__(self):
        if self.method_tag not in _METHODS:
            raise ValueError(f"unknown method tag {self.method_tag!r}")

    def to_dict(self) -> dict:
        return {
            "method": self.method_tag,
            "total_length": self.total_length,
            "waypoints": [[float(x), float(y)] for x, y in self.waypoints],
            "sequence": list(self.sequence),
            "segment_lengths": [float(v) for v in self.segment_lengths],
            "segment_in_region": list(self.segment_in_region),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def make_solution(waypoints, segment_in_region, sequence, method_tag: str) -> PathSolution:
    """Build a PathSolution, deriving segment lengths and the total."""
    pts = np.atleast_2d(np.asarray(waypoints, dtype=float))
    lengths = np.linalg.norm(np.diff(pts, axis=0), axis=1)
    flags = tuple(bool(b) for b in segment_in_region)
    if len(flags) != len(pts) - 1:
        raise ValueError("need one in-region flag per segment")
    return PathSolution(
        waypoints=pts,
        segment_lengths=lengths,
        segment_in_region=flags,
        sequence=tuple(int(i) for i in sequence),
        total_length=float(np.sum(lengths)),
        method_tag=method_tag,
    )


def load_solution(text: str | bytes) -> PathSolution:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"solution is not valid JSON: {exc}") from exc
    try:
        return PathSolution(
            waypoints=np.asarray(data["waypoints"], dtype=float),
            segment_lengths=np.asarray(data["segment_lengths"], dtype=float),
            segment_in_region=tuple(bool(b) for b in data["segment_in_region"]),
            sequence=tuple(int(i) for i in data["sequence"]),
            total_length=float(data["total_length"]),
            method_tag=str(data["method"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"solution JSON does not match the schema: {exc}") from exc


def _build_polytope(entry: dict, index: int, tol: float) -> Polytope:
    if not isinstance(entry, dict):
        raise ParseError(f"polytope {index} must be an object")
    try:
        if "vertices" in entry:
            return Polytope.from_vertices(entry["vertices"], id=index, tol=tol)
        if "H" in entry and "h" in entry:
            return Polytope.from_halfspaces(entry["H"], entry["h"], id=index, tol=tol)
    except (UnboundedPolytope, EmptyPolytope, DegeneratePolytope) as exc:
        kind = {
            UnboundedPolytope: "unbounded polytope",
            EmptyPolytope: "empty polytope",
            DegeneratePolytope: "degenerate polytope",
        }[type(exc)]
        raise ValidationError(f"{kind}: region {index}: {exc}") from exc
    except ValueError as exc:
        raise ParseError(f"polytope {index}: {exc}") from exc
    raise ParseError(f"polytope {index} needs either 'vertices' or 'H' and 'h'")


def scenario_from_dict(data: dict) -> Scenario:
    if not isinstance(data, dict):
        raise ParseError("scenario JSON must be an object")
    for key in ("start", "end", "budget"):
        if key not in data:
            raise ParseError(f"scenario is missing required key {key!r}")
    tol = float(data.get("tol", DEFAULT_TOL))
    if tol < 0:
        raise ValidationError("tolerance must be nonnegative")
    try:
        start = as_point(data["start"])
        end = as_point(data["end"])
    except ValueError as exc:
        raise ValidationError(f"start/end coordinates non-finite or malformed: {exc}") from exc

    budget = float(data["budget"])
    if not budget > 0:
        raise ValidationError(f"nonpositive budget: {budget}")
    levels = int(data.get("levels", DEFAULT_LEVELS))
    if levels < 1:
        raise ValidationError(f"levels must be >= 1, got {levels}")

    raw_polys = data.get("polytopes", [])
    if not isinstance(raw_polys, list):
        raise ParseError("'polytopes' must be a list")
    polytopes = tuple(_build_polytope(entry, i, tol) for i, entry in enumerate(raw_polys))

    for i in range(len(polytopes)):
        for j in range(i + 1, len(polytopes)):
            if polytope_distance(polytopes[i], polytopes[j]) <= tol:
                raise ValidationError(f"overlapping polytopes: regions {i} and {j} are not disjoint")

    notes = []
    for label, p in (("start", start), ("end", end)):
        inside = next((poly.id for poly in polytopes if poly.contains(p, tol)), None)
        if inside is not None:
            notes.append(f"{label} point lies inside region {inside}")

    return Scenario(
        start=start,
        end=end,
        budget=budget,
        polytopes=polytopes,
        levels=levels,
        tol=tol,
        notes=tuple(notes),
    )


def load_scenario(text: str | bytes) -> Scenario:
    """Parse and fully validate a scenario from JSON text."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"scenario is not valid JSON: {exc}") from exc
    return scenario_from_dict(data)


def scenario_to_dict(scn: Scenario) -> dict:
    return {
        "start": [float(scn.start[0]), float(scn.start[1])],
        "end": [float(scn.end[0]), float(scn.end[1])],
        "budget": float(scn.budget),
        "levels": int(scn.levels),
        "tol": float(scn.tol),
        "polytopes": [
            {"vertices": [[float(x), float(y)] for x, y in poly.vertices]}
            for poly in scn.polytopes
        ],
    }


def save_scenario(scn: Scenario) -> str:
    return json.dumps(scenario_to_dict(scn), indent=2)


def _inside_interval(poly: Polytope, p: np.ndarray, q: np.ndarray, tol: float):
    """Parameter range of segment p->q lying inside ``poly``, or None."""
    d = q - p
    lo, hi = 0.0, 1.0
    base = poly.H @ p - poly.h
    slope = poly.H @ d
    for b, s in zip(base, slope):
        if abs(s) < 1e-15:
            if b > tol:
                return None
            continue
        t = (tol - b) / s  # boundary crossing of this half-plane
        if s > 0:
            hi = min(hi, t)
        else:
            lo = max(lo, t)
    if lo > hi:
        return None
    return lo, hi


def check_path_feasible(scn: Scenario, sol: PathSolution) -> bool:
    """Replay a solution against the budget-with-reset rule.

    Walks the waypoints accumulating traveled distance. Touching any
    region resets the accumulator (incidental mid-segment crossings count
    as reset opportunities). Returns False if any stretch between resets
    exceeds the budget plus tolerance, if the endpoints do not match the
    scenario, or if an interior-tagged segment does not have both
    endpoints in one common region.
    """
    tol = scn.tol
    pts = sol.waypoints
    if len(pts) == 0:
        return False
    if np.linalg.norm(pts[0] - scn.start) > max(tol, 1e-9):
        return False
    if np.linalg.norm(pts[-1] - scn.end) > max(tol, 1e-9):
        return False

    budget_slack = scn.budget + max(tol, 1e-9)
    acc = 0.0
    for i in range(len(pts) - 1):
        p, q = pts[i], pts[i + 1]
        seg_len = float(np.linalg.norm(q - p))
        if sol.segment_in_region[i]:
            shared = any(
                poly.contains(p, tol) and poly.contains(q, tol) for poly in scn.polytopes
            )
            if not shared:
                return False
            acc = 0.0
            continue
        intervals = []
        for poly in scn.polytopes:
            span = _inside_interval(poly, p, q, tol)
            if span is not None:
                intervals.append(span)
        intervals.sort()
        cursor = 0.0
        for lo, hi in intervals:
            acc += max(lo - cursor, 0.0) * seg_len
            if acc > budget_slack:
                return False
            acc = 0.0
            cursor = max(cursor, hi)
        acc += max(1.0 - cursor, 0.0) * seg_len
        if acc > budget_slack:
            return False
    return True


def straight_line_solution(scn: Scenario) -> PathSolution:
    """The direct start-to-end path (valid whenever its length fits the budget)."""
    return make_solution(
        [scn.start, scn.end], [False], sequence=(), method_tag=METHOD_STRAIGHT
    )


__all__ = [
    "Scenario",
    "PathSolution",
    "make_solution",
    "load_scenario",
    "load_solution",
    "save_scenario",
    "scenario_from_dict",
    "scenario_to_dict",
    "check_path_feasible",
    "straight_line_solution",
    "polyline_length",
    "BudgetPathError",
    "METHOD_GRAPH",
    "METHOD_REFINED",
    "METHOD_STRAIGHT",
]
