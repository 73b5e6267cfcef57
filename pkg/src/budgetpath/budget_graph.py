"""Budget-constrained candidate graph: construction, search, and sequence extraction.

Edges connect node pairs whose distance fits the budget; pairs inside the
same region are exempt from the bound (the budget is full again when
leaving). Over-budget pairs are simply omitted. The shortest path is
found with Dijkstra on lexicographic (distance, hop count) labels and a
deterministic predecessor rule, so results are reproducible; a vectorized
Bellman-Ford over the same labels serves as the independent cross-check.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

import numpy as np

from .errors import Infeasible, SequenceRepetition
from .scenario import Scenario
from .wavefront import CandidateNode

_EDGE_BLOCK = 2048
_UNREACHED_HOPS = 2**62  # sentinel that survives +1 without overflow


@dataclass(frozen=True, eq=False)
class PolytopeSequence:
    """Ordered, repetition-free list of visited region indices."""

    indices: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)


@dataclass(frozen=True, eq=False)
class BudgetGraph:
    """Immutable graph over candidate nodes with CSR adjacency."""

    nodes: tuple[CandidateNode, ...]
    positions: np.ndarray  # (N, 2)
    pid: np.ndarray  # (N,) region id per node, -1 outside all regions
    budget: float
    tol: float
    indptr: np.ndarray
    indices: np.ndarray
    weights: np.ndarray
    exempt: np.ndarray

    @property
    def num_nodes(self) -> int:
        return len(self.nodes)

    @property
    def num_edges(self) -> int:
        return len(self.indices) // 2

    def neighbors(self, u: int):
        sl = slice(self.indptr[u], self.indptr[u + 1])
        return self.indices[sl], self.weights[sl], self.exempt[sl]

    def edge_list(self):
        """Undirected edges as (u, v, weight, exempt) with u < v."""
        out = []
        for u in range(self.num_nodes):
            nbrs, w, ex = self.neighbors(u)
            for v, wv, exv in zip(nbrs, w, ex):
                if u < v:
                    out.append((u, int(v), float(wv), bool(exv)))
        return out

    def to_dict(self) -> dict:
        return {
            "nodes": [
                {
                    "xy": [float(n.position[0]), float(n.position[1])],
                    "polytope": None if self.pid[i] < 0 else int(self.pid[i]),
                    "origin": n.origin,
                }
                for i, n in enumerate(self.nodes)
            ],
            "edges": [[u, v, w, ex] for u, v, w, ex in self.edge_list()],
        }


def build_graph(scn: Scenario, nodes: list[CandidateNode]) -> BudgetGraph:
    """All-pairs edge construction under the budget rule (O(N^2), blocked)."""
    n = len(nodes)
    positions = np.array([node.position for node in nodes], dtype=float)
    pid = np.empty(n, dtype=np.int64)
    for i, node in enumerate(nodes):
        if node.polytope_id is not None:
            pid[i] = node.polytope_id
        else:
            owner = scn.region_containing(node.position, scn.tol)
            pid[i] = -1 if owner is None else owner

    cutoff = scn.budget + scn.tol
    us, vs, ws, exs = [], [], [], []
    cols = np.arange(n)
    for s in range(0, n, _EDGE_BLOCK):
        e = min(s + _EDGE_BLOCK, n)
        diff = positions[s:e, None, :] - positions[None, :, :]
        dist = np.linalg.norm(diff, axis=2)
        same = (pid[s:e, None] == pid[None, :]) & (pid[s:e, None] >= 0)
        keep = ((dist <= cutoff) | same) & (cols[None, :] > (s + np.arange(e - s))[:, None])
        bi, bj = np.nonzero(keep)
        us.append(bi + s)
        vs.append(bj)
        ws.append(dist[bi, bj])
        exs.append(same[bi, bj])

    u = np.concatenate(us) if us else np.empty(0, dtype=np.int64)
    v = np.concatenate(vs) if vs else np.empty(0, dtype=np.int64)
    w = np.concatenate(ws) if ws else np.empty(0)
    ex = np.concatenate(exs) if exs else np.empty(0, dtype=bool)

    src = np.concatenate([u, v])
    dst = np.concatenate([v, u])
    ww = np.concatenate([w, w])
    ee = np.concatenate([ex, ex])
    order = np.argsort(src, kind="stable")
    counts = np.bincount(src, minlength=n)
    indptr = np.concatenate([[0], np.cumsum(counts)]).astype(np.int64)

    return BudgetGraph(
        nodes=tuple(nodes),
        positions=positions,
        pid=pid,
        budget=scn.budget,
        tol=scn.tol,
        indptr=indptr,
        indices=dst[order],
        weights=ww[order],
        exempt=ee[order],
    )


def _dijkstra_labels(g: BudgetGraph, source: int) -> tuple[np.ndarray, np.ndarray]:
    n = g.num_nodes
    dist = np.full(n, np.inf)
    hops = np.full(n, _UNREACHED_HOPS, dtype=np.int64)
    dist[source] = 0.0
    hops[source] = 0
    settled = np.zeros(n, dtype=bool)
    heap = [(0.0, 0, source)]
    while heap:
        d, hp, u = heapq.heappop(heap)
        if settled[u]:
            continue
        settled[u] = True
        nbrs, w, _ = g.neighbors(u)
        cand = d + w
        better = (cand < dist[nbrs]) | ((cand == dist[nbrs]) & (hp + 1 < hops[nbrs]))
        for vtx, dv in zip(nbrs[better], cand[better]):
            dist[vtx] = dv
            hops[vtx] = hp + 1
            heapq.heappush(heap, (float(dv), hp + 1, int(vtx)))
    return dist, hops


def bellman_ford_labels(g: BudgetGraph, source: int) -> tuple[np.ndarray, np.ndarray]:
    """Same (distance, hops) labels as Dijkstra, by edge relaxation rounds."""
    n = g.num_nodes
    src = np.repeat(np.arange(n), np.diff(g.indptr))
    dst = g.indices
    w = g.weights

    dist = np.full(n, np.inf)
    dist[source] = 0.0
    for _ in range(n):
        new = dist.copy()
        np.minimum.at(new, dst, dist[src] + w)
        if np.array_equal(new, dist, equal_nan=True):
            break
        dist = new

    tight = dist[src] + w == dist[dst]
    tsrc, tdst = src[tight], dst[tight]
    hops = np.full(n, _UNREACHED_HOPS, dtype=np.int64)
    hops[source] = 0
    for _ in range(n):
        new = hops.copy()
        reachable = hops[tsrc] < _UNREACHED_HOPS
        np.minimum.at(new, tdst[reachable], hops[tsrc[reachable]] + 1)
        if np.array_equal(new, hops):
            break
        hops = new
    return dist, hops


def reconstruct_path(
    g: BudgetGraph, dist: np.ndarray, hops: np.ndarray, source: int, target: int
) -> list[int]:
    """Deterministic path from final labels: smallest-index optimal predecessor."""
    if not np.isfinite(dist[target]):
        raise Infeasible("no budget-feasible path exists in the graph")
    path = [target]
    v = target
    while v != source:
        nbrs, w, _ = g.neighbors(v)
        good = (dist[nbrs] + w == dist[v]) & (hops[nbrs] + 1 == hops[v])
        if not np.any(good):
            raise Infeasible("label reconstruction failed; inconsistent graph labels")
        v = int(np.min(nbrs[good]))
        path.append(v)
    path.reverse()
    return path


def shortest_graph_path(
    g: BudgetGraph, source: int, target: int
) -> tuple[list[int], float]:
    """Minimum-length node path and its length; ties prefer fewer hops.

    Raises Infeasible when no finite-cost path exists, which doubles as
    the planner's feasibility verdict for the whole instance.
    """
    if not (0 <= source < g.num_nodes and 0 <= target < g.num_nodes):
        raise ValueError("source/target out of range")
    if source == target:
        return [source], 0.0
    dist, hops = _dijkstra_labels(g, source)
    path = reconstruct_path(g, dist, hops, source, target)
    return path, float(dist[target])


def extract_sequence(
    g: BudgetGraph, path: list[int]
) -> tuple[PolytopeSequence, list[tuple[np.ndarray, np.ndarray]]]:
    """Visited region ids along a node path, plus per-region warm-start points.

    Consecutive nodes on one region collapse to a single entry whose
    warm-start pair is the first and last node position on that region.
    A non-consecutive repeat means the graph rule was violated upstream.
    """
    runs: list[list] = []  # [region id, first position, last position]
    for idx in path:
        node = g.nodes[idx]
        if node.origin in ("start", "end"):
            continue
        rid = node.polytope_id if node.polytope_id is not None else int(g.pid[idx])
        if rid is None or rid < 0:
            continue
        if runs and runs[-1][0] == rid:
            runs[-1][2] = node.position
        else:
            runs.append([rid, node.position, node.position])

    ids = [r[0] for r in runs]
    if len(set(ids)) != len(ids):
        raise SequenceRepetition(f"region sequence repeats non-consecutively: {ids}")
    warm = [(r[1], r[2]) for r in runs]
    return PolytopeSequence(indices=tuple(ids)), warm
