"""Candidate graph nodes from budget-bounded circles around seed points.

Seeds are the start, the end, and every region vertex. For each level
radius ``j * budget / levels`` a circle around each seed is intersected
with every region boundary the seed is not already inside; the
intersection points become candidate nodes tagged with their host region.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import circle_boundary_intersections
from .scenario import Scenario

ORIGIN_START = "start"
ORIGIN_END = "end"
ORIGIN_VERTEX = "vertex_seed"
ORIGIN_WAVEFRONT = "wavefront"

# Nodes closer than this are merged; looser than the geometric tolerance so
# adjacent levels do not spray near-duplicates into the graph.
DEDUPE_RADIUS = 1e-7


@dataclass(frozen=True, eq=False)
class CandidateNode:
    """A potential waypoint: a seed or a circle/boundary intersection."""

    position: np.ndarray
    polytope_id: int | None
    origin: str
    level: int | None = None
    seed_index: int | None = None


class _DedupeGrid:
    """First-wins spatial dedupe on a uniform grid of cell size ``radius``."""

    def __init__(self, radius: float):
        self.radius = radius
        self.cells: dict[tuple[int, int], list[np.ndarray]] = {}

    def add(self, p: np.ndarray) -> bool:
        cx = int(np.floor(p[0] / self.radius))
        cy = int(np.floor(p[1] / self.radius))
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                for q in self.cells.get((cx + dx, cy + dy), ()):
                    if np.linalg.norm(p - q) <= self.radius:
                        return False
        self.cells.setdefault((cx, cy), []).append(p)
        return True


def seed_points(scn: Scenario) -> list[np.ndarray]:
    """Start, end, and all region vertices, deduplicated within tol."""
    grid = _DedupeGrid(max(scn.tol, 1e-15))
    seeds = []
    for p in (scn.start, scn.end):
        if grid.add(p):
            seeds.append(p)
    for poly in scn.polytopes:
        for v in poly.vertices:
            if grid.add(v):
                seeds.append(v)
    return seeds


def generate_candidates(scn: Scenario) -> list[CandidateNode]:
    """All candidate nodes for the scenario, deduplicated and in deterministic order.

    Order: start, end, region vertices, then wavefront hits sorted by
    (level, seed, region, angle along the intersection list). The level
    radii are ``j * budget / levels`` for j = 1..levels, so the top level
    is exactly the budget.
    """
    grid = _DedupeGrid(DEDUPE_RADIUS)
    nodes: list[CandidateNode] = []

    def push(node: CandidateNode):
        if grid.add(node.position):
            nodes.append(node)

    push(CandidateNode(position=scn.start, polytope_id=None, origin=ORIGIN_START))
    push(CandidateNode(position=scn.end, polytope_id=None, origin=ORIGIN_END))
    for poly in scn.polytopes:
        for v in poly.vertices:
            push(CandidateNode(position=v, polytope_id=poly.id, origin=ORIGIN_VERTEX))

    seeds = seed_points(scn)
    for level in range(1, scn.levels + 1):
        radius = level * scn.budget / scn.levels
        for seed_index, seed in enumerate(seeds):
            for poly in scn.polytopes:
                if poly.contains(seed, scn.tol):
                    continue
                hits = circle_boundary_intersections(poly, seed, radius, scn.tol)
                hits.sort(key=lambda p: np.arctan2(p[1] - seed[1], p[0] - seed[0]))
                for hit in hits:
                    push(
                        CandidateNode(
                            position=hit,
                            polytope_id=poly.id,
                            origin=ORIGIN_WAVEFRONT,
                            level=level,
                            seed_index=seed_index,
                        )
                    )
    return nodes
