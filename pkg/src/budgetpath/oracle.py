"""Independent brute-force verifier: dense boundary sampling plus graph search.

Nodes are placed every ``spacing`` of arc length along every region
boundary (starting at vertex 0, counter-clockwise), so halving the
spacing yields a superset of nodes and a monotonically improving bound.
The search is a matrix-free Dijkstra under the same edge rule as the
planner graph (distance within budget, or both endpoints in one region),
but implemented independently of the planner's heap/CSR machinery.
"""

from __future__ import annotations

import numpy as np

from .errors import Infeasible, TooManyNodes
from .geometry import Polytope
from .scenario import Scenario

NODE_BUDGET = 20_000


def boundary_nodes(poly: Polytope, spacing: float) -> np.ndarray:
    """Points every ``spacing`` of arc length along the boundary, CCW from vertex 0."""
    ring = np.vstack([poly.vertices, poly.vertices[:1]])
    seg = np.linalg.norm(np.diff(ring, axis=0), axis=1)
    cum = np.concatenate([[0.0], np.cumsum(seg)])
    perimeter = cum[-1]
    count = int(np.floor(perimeter / spacing))
    s = np.arange(count + 1) * spacing
    s = s[s < perimeter]
    x = np.interp(s, cum, ring[:, 0])
    y = np.interp(s, cum, ring[:, 1])
    return np.column_stack([x, y])


def dense_oracle(scn: Scenario, spacing: float) -> tuple[float, list[np.ndarray]]:
    """Near-ground-truth path length from dense boundary discretization.

    Returns (length, waypoint list). The value is an upper bound on the
    true optimum and converges to it as the spacing shrinks.
    """
    if spacing <= 0:
        raise ValueError("spacing must be positive")
    points = [scn.start, scn.end]
    pids = [-1, -1]
    for label, idx in (("start", 0), ("end", 1)):
        owner = scn.region_containing(points[idx], scn.tol)
        if owner is not None:
            pids[idx] = owner
    for poly in scn.polytopes:
        ring = boundary_nodes(poly, spacing)
        points.extend(ring)
        pids.extend([poly.id] * len(ring))
        if len(points) > NODE_BUDGET:
            raise TooManyNodes(
                f"dense grid needs more than {NODE_BUDGET} nodes at spacing {spacing}"
            )

    pos = np.asarray(points, dtype=float)
    pid = np.asarray(pids, dtype=np.int64)
    n = len(pos)
    cutoff = scn.budget + scn.tol

    dist = np.full(n, np.inf)
    pred = np.full(n, -1, dtype=np.int64)
    settled = np.zeros(n, dtype=bool)
    dist[0] = 0.0
    target = 1
    while True:
        masked = np.where(settled, np.inf, dist)
        u = int(np.argmin(masked))
        if not np.isfinite(masked[u]):
            raise Infeasible("dense verification graph is disconnected")
        if u == target:
            break
        settled[u] = True
        d = np.linalg.norm(pos - pos[u], axis=1)
        allowed = (d <= cutoff) | ((pid == pid[u]) & (pid[u] >= 0))
        cand = dist[u] + d
        improve = allowed & ~settled & (cand < dist)
        dist[improve] = cand[improve]
        pred[improve] = u

    path = [target]
    while path[-1] != 0:
        path.append(int(pred[path[-1]]))
    path.reverse()
    return float(dist[target]), [pos[i] for i in path]


def extract_visits(scn: Scenario, waypoints) -> tuple[int, ...]:
    """Region visitation order of a waypoint list (consecutive runs collapsed)."""
    visits: list[int] = []
    for p in waypoints:
        owner = scn.region_containing(p, scn.tol)
        if owner is None:
            continue
        if not visits or visits[-1] != owner:
            visits.append(owner)
    return tuple(visits)
