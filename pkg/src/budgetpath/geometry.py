"""Planar convex-polytope primitives and polyline arithmetic.

Everything here is a pure function of immutable values: points are
float64 numpy arrays of shape (2,), polytopes carry both a half-space
system ``H x <= h`` and the matching counter-clockwise vertex ring.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, NamedTuple

import numpy as np

from .errors import DegeneratePolytope, EmptyPolytope, UnboundedPolytope

DEFAULT_TOL = 1e-9

# Directions probed for a recession ray when checking boundedness.
_COMPASS = np.stack(
    [
        np.array([math.cos(2.0 * math.pi * t / 16), math.sin(2.0 * math.pi * t / 16)])
        for t in range(16)
    ]
)


def as_point(value) -> np.ndarray:
    """Coerce a 2-sequence to a float64 point, rejecting non-finite input."""
    p = np.asarray(value, dtype=float)
    if p.shape != (2,):
        raise ValueError(f"expected a 2-d point, got shape {p.shape}")
    if not np.all(np.isfinite(p)):
        raise ValueError(f"point has non-finite coordinates: {p}")
    return p


class Segment(NamedTuple):
    start: np.ndarray
    end: np.ndarray


def polyline_length(points) -> float:
    """Total Euclidean length of the polyline through ``points`` (0 for one point)."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if len(pts) < 1:
        raise ValueError("polyline needs at least one point")
    if len(pts) == 1:
        return 0.0
    return float(np.sum(np.linalg.norm(np.diff(pts, axis=0), axis=1)))


def segment_budget_feasible(seg: Segment, budget: float) -> bool:
    """True iff the segment can be traversed on one full budget charge."""
    if budget <= 0:
        raise ValueError("budget must be positive")
    return float(np.linalg.norm(np.asarray(seg.end, dtype=float) - np.asarray(seg.start, dtype=float))) <= budget


def _dedupe_points(points: np.ndarray, tol: float) -> np.ndarray:
    """Drop points closer than ``tol`` to an earlier one, keeping first occurrences."""
    kept: list[np.ndarray] = []
    for p in points:
        if all(np.linalg.norm(p - q) > tol for q in kept):
            kept.append(p)
    return np.array(kept) if kept else np.empty((0, 2))


def _ccw_sort(points: np.ndarray) -> np.ndarray:
    center = points.mean(axis=0)
    angles = np.arctan2(points[:, 1] - center[1], points[:, 0] - center[0])
    return points[np.argsort(angles, kind="stable")]


def _polygon_area(vertices: np.ndarray) -> float:
    x, y = vertices[:, 0], vertices[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def enumerate_vertices(H, h, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Vertices of ``{x : H x <= h}`` in counter-clockwise order.

    Intersects every pair of constraint lines, keeps the points feasible
    within ``tol``, deduplicates, and sorts around the centroid. O(k^3) in
    the number of rows, which is fine for the small systems used here.

    Raises:
        UnboundedPolytope: a compass direction admits no violated constraint.
        EmptyPolytope: no pairwise intersection point is feasible.
        DegeneratePolytope: the feasible set has (near-)empty interior.
    """
    H = np.asarray(H, dtype=float)
    h = np.asarray(h, dtype=float)
    if H.ndim != 2 or H.shape[1] != 2 or h.shape != (H.shape[0],):
        raise ValueError("H must be (k, 2) and h must be (k,)")
    k = H.shape[0]
    if k < 3:
        raise ValueError("need at least 3 half-planes for a bounded 2-d polytope")

    # A direction along which no constraint grows is a recession ray.
    growth = _COMPASS @ H.T  # (16, k)
    if np.any(np.all(growth <= 1e-12, axis=1)):
        raise UnboundedPolytope("half-space system admits a recession direction")

    scale = max(1.0, float(np.max(np.abs(h))))
    candidates = []
    for i in range(k):
        for j in range(i + 1, k):
            A = H[[i, j]]
            det = A[0, 0] * A[1, 1] - A[0, 1] * A[1, 0]
            if abs(det) < 1e-12:
                continue  # parallel constraint lines
            x = np.linalg.solve(A, h[[i, j]])
            if np.all(H @ x <= h + tol + 1e-12 * scale):
                candidates.append(x)

    if not candidates:
        raise EmptyPolytope("no feasible intersection point; system is empty")

    vertices = _dedupe_points(np.array(candidates), max(tol, 1e-12))
    if len(vertices) < 3:
        raise DegeneratePolytope("feasible set has fewer than 3 distinct vertices")
    vertices = _ccw_sort(vertices)
    if _polygon_area(vertices) <= max(tol * tol, 1e-18):
        raise DegeneratePolytope("feasible set has (near-)zero area")
    return vertices


def _convex_hull(points: np.ndarray) -> np.ndarray:
    """Andrew's monotone chain; returns hull vertices in CCW order."""
    pts = sorted(map(tuple, points))
    if len(pts) <= 2:
        return np.array(pts, dtype=float)

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower: list[tuple] = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[tuple] = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return np.array(lower[:-1] + upper[:-1], dtype=float)


@dataclass(frozen=True, eq=False)
class Polytope:
    """Bounded convex region ``{x : H x <= h}`` with its CCW vertex ring.

    Rows of ``H`` are scaled to unit norm on construction so tolerances on
    ``H x - h`` read as geometric distances.
    """

    id: int
    H: np.ndarray
    h: np.ndarray
    vertices: np.ndarray
    tol: float = field(default=DEFAULT_TOL)

    def __post_init__(self):
        for arr in (self.H, self.h, self.vertices):
            arr.setflags(write=False)

    @classmethod
    def from_halfspaces(cls, H, h, id: int = 0, tol: float = DEFAULT_TOL) -> "Polytope":
        H = np.asarray(H, dtype=float)
        h = np.asarray(h, dtype=float)
        norms = np.linalg.norm(H, axis=1)
        if np.any(norms < 1e-15):
            raise ValueError("half-space normal rows must be nonzero")
        H = H / norms[:, None]
        h = h / norms
        vertices = enumerate_vertices(H, h, tol)
        return cls(id=id, H=H, h=h, vertices=vertices, tol=tol)

    @classmethod
    def from_vertices(cls, vertices, id: int = 0, tol: float = DEFAULT_TOL) -> "Polytope":
        pts = np.asarray(vertices, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2:
            raise ValueError("vertices must be an (m, 2) array")
        if not np.all(np.isfinite(pts)):
            raise ValueError("vertices contain non-finite coordinates")
        hull = _convex_hull(pts)
        if len(hull) < 3:
            raise DegeneratePolytope("vertex list spans fewer than 3 hull points")
        if _polygon_area(hull) <= max(tol * tol, 1e-18):
            raise DegeneratePolytope("vertex hull has (near-)zero area")
        # Outward edge normal of a CCW ring: rotate the edge direction by -90 deg.
        rows, offsets = [], []
        for a, b in zip(hull, np.roll(hull, -1, axis=0)):
            d = b - a
            n = np.array([d[1], -d[0]])
            n /= np.linalg.norm(n)
            rows.append(n)
            offsets.append(float(n @ a))
        return cls(id=id, H=np.array(rows), h=np.array(offsets), vertices=hull, tol=tol)

    @property
    def num_constraints(self) -> int:
        return self.H.shape[0]

    def contains(self, p, tol: float | None = None) -> bool:
        if tol is None:
            tol = self.tol
        if tol < 0:
            raise ValueError("tol must be nonnegative")
        return bool(np.all(self.H @ np.asarray(p, dtype=float) <= self.h + tol))

    def edges(self) -> Iterator[tuple[np.ndarray, np.ndarray]]:
        for a, b in zip(self.vertices, np.roll(self.vertices, -1, axis=0)):
            yield a, b

    def perimeter(self) -> float:
        return polyline_length(np.vstack([self.vertices, self.vertices[:1]]))

    def centroid(self) -> np.ndarray:
        return self.vertices.mean(axis=0)

    def project(self, p) -> np.ndarray:
        """Closest point of the polytope to ``p`` (exact, via the edge ring)."""
        p = np.asarray(p, dtype=float)
        if self.contains(p, 0.0):
            return p.copy()
        best, best_d = None, math.inf
        for a, b in self.edges():
            q = _closest_on_segment(p, a, b)
            d = float(np.linalg.norm(p - q))
            if d < best_d:
                best, best_d = q, d
        return best

    def distance(self, p) -> float:
        """Euclidean distance from ``p`` to the polytope (0 inside)."""
        p = np.asarray(p, dtype=float)
        if self.contains(p, 0.0):
            return 0.0
        return float(np.linalg.norm(p - self.project(p)))


def contains(poly: Polytope, p, tol: float = DEFAULT_TOL) -> bool:
    """Membership test ``H p <= h + tol`` componentwise."""
    return poly.contains(p, tol)


def circle_boundary_intersections(
    poly: Polytope, center, radius: float, tol: float = DEFAULT_TOL
) -> list[np.ndarray]:
    """Points at distance ``radius`` from ``center`` on the polytope boundary.

    Solved per edge from the foot of the perpendicular, which is more
    robust than the raw quadratic. A line whose distance to the center is
    within ``tol`` of the radius counts as tangent and yields one point.
    Coincident hits on neighboring edges are merged within ``tol``.
    """
    if radius <= 0:
        raise ValueError("radius must be positive")
    center = np.asarray(center, dtype=float)
    hits: list[np.ndarray] = []
    for a, b in poly.edges():
        d = b - a
        length = float(np.linalg.norm(d))
        if length < 1e-15:
            continue
        t_foot = float((center - a) @ d) / (length * length)
        foot = a + t_foot * d
        line_dist = float(np.linalg.norm(center - foot))
        if abs(line_dist - radius) <= tol:
            ts = [t_foot]
        elif line_dist < radius:
            half = math.sqrt(max(radius * radius - line_dist * line_dist, 0.0)) / length
            ts = [t_foot - half, t_foot + half]
        else:
            continue
        slack = tol / length
        for t in ts:
            if -slack <= t <= 1.0 + slack:
                hits.append(a + min(max(t, 0.0), 1.0) * d)
    merged = _dedupe_points(np.array(hits), tol) if hits else np.empty((0, 2))
    return [p for p in merged]


def _closest_on_segment(p: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    d = b - a
    denom = float(d @ d)
    if denom < 1e-30:
        return a.copy()
    t = min(max(float((p - a) @ d) / denom, 0.0), 1.0)
    return a + t * d


def _segments_intersect(a1, a2, b1, b2) -> bool:
    r = a2 - a1
    s = b2 - b1
    denom = r[0] * s[1] - r[1] * s[0]
    q_minus_p = b1 - a1
    if abs(denom) < 1e-15:
        return False  # parallel; endpoint proximity is handled by the caller
    t = (q_minus_p[0] * s[1] - q_minus_p[1] * s[0]) / denom
    u = (q_minus_p[0] * r[1] - q_minus_p[1] * r[0]) / denom
    return 0.0 <= t <= 1.0 and 0.0 <= u <= 1.0


def segment_distance(a1, a2, b1, b2) -> float:
    """Min distance between two segments (0 when they cross)."""
    a1, a2, b1, b2 = (np.asarray(v, dtype=float) for v in (a1, a2, b1, b2))
    if _segments_intersect(a1, a2, b1, b2):
        return 0.0
    return min(
        float(np.linalg.norm(p - _closest_on_segment(p, c, d)))
        for p, c, d in ((a1, b1, b2), (a2, b1, b2), (b1, a1, a2), (b2, a1, a2))
    )


def polytope_distance(p1: Polytope, p2: Polytope) -> float:
    """Min distance between two convex polytopes (0 when they overlap)."""
    if any(p2.contains(v, 0.0) for v in p1.vertices) or any(
        p1.contains(v, 0.0) for v in p2.vertices
    ):
        return 0.0
    return min(
        segment_distance(a1, a2, b1, b2)
        for a1, a2 in p1.edges()
        for b1, b2 in p2.edges()
    )
