"""Random scenario generation for benchmarks and tests."""

from __future__ import annotations

import numpy as np

from .errors import DegeneratePolytope, GenerationFailed
from .geometry import DEFAULT_TOL, Polytope, polytope_distance
from .scenario import Scenario, scenario_from_dict, scenario_to_dict

# Keep regions clearly separated so disjointness never hinges on tolerance.
_MIN_GAP = 0.05


def generate_scenario(
    num_regions: int,
    bounds: tuple[float, float, float, float],
    budget: float,
    seed: int,
    levels: int = 4,
    tol: float = DEFAULT_TOL,
    min_radius: float = 1.2,
    max_radius: float = 2.2,
    max_rejections: int = 10_000,
) -> Scenario:
    """Scenario with ``num_regions`` disjoint random convex polygons.

    The path runs between opposite corners of ``bounds`` (xmin, xmax,
    ymin, ymax). Each region has 3 to 8 vertices on a random-radius
    circle centered uniformly over the box (regions may overhang it);
    overlapping or sliver draws are rejected. Deterministic per seed.
    """
    if num_regions < 0:
        raise ValueError("num_regions must be nonnegative")
    xmin, xmax, ymin, ymax = (float(v) for v in bounds)
    if not (xmax > xmin and ymax > ymin):
        raise ValueError("bounds must describe a nonempty box")

    rng = np.random.default_rng(seed)
    polys: list[Polytope] = []
    rejections = 0
    while len(polys) < num_regions:
        if rejections >= max_rejections:
            raise GenerationFailed(
                f"gave up after {max_rejections} rejected polygons "
                f"({len(polys)}/{num_regions} placed)"
            )
        radius = float(rng.uniform(min_radius, max_radius))
        cx = float(rng.uniform(xmin, xmax))
        cy = float(rng.uniform(ymin, ymax))
        count = int(rng.integers(3, 9))
        angles = np.sort(rng.uniform(0.0, 2.0 * np.pi, count))
        verts = np.column_stack(
            [cx + radius * np.cos(angles), cy + radius * np.sin(angles)]
        )
        try:
            poly = Polytope.from_vertices(verts, id=len(polys), tol=tol)
        except DegeneratePolytope:
            rejections += 1
            continue
        if _area(poly) < 0.3 * radius * radius:
            rejections += 1  # sliver; angles too clustered
            continue
        if any(polytope_distance(poly, other) <= _MIN_GAP for other in polys):
            rejections += 1
            continue
        polys.append(poly)

    scn = Scenario(
        start=np.array([xmin, ymin]),
        end=np.array([xmax, ymax]),
        budget=float(budget),
        polytopes=tuple(polys),
        levels=int(levels),
        tol=float(tol),
    )
    # Round-trip through the JSON form so generated scenarios are exactly
    # what loading their serialization yields (including notes).
    return scenario_from_dict(scenario_to_dict(scn))


def _area(poly: Polytope) -> float:
    x, y = poly.vertices[:, 0], poly.vertices[:, 1]
    return 0.5 * abs(float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y)))
