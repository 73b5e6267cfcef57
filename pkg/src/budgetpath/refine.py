"""Exact entry/exit placement for a fixed region sequence.

Minimizes the total polyline length start -> entry_1 -> exit_1 -> ... ->
exit_k -> end subject to region membership of each entry/exit pair and a
budget bound on every between-region hop (inside-region hops are exempt).
The objective is a sum of Euclidean norms, so the problem is convex and a
consensus ADMM with closed-form proximal steps finds the global optimum.

The solve runs in budget-normalized coordinates, which makes the result
exactly positively homogeneous in the scenario scale. A snap pass then
moves each entry (exit) to the first (last) boundary contact along its
incoming (outgoing) segment, which never lengthens the path, and a blend
pass pulls any residually over-budget hop toward the hop's closest-pair
witness so emitted paths are budget-feasible to machine precision.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .budget_graph import PolytopeSequence
from .errors import InvalidSequence, NumericalBreakdown
from .geometry import Polytope, _closest_on_segment
from .scenario import METHOD_REFINED, PathSolution, Scenario, make_solution

STATUS_OPTIMAL = "optimal"
STATUS_INFEASIBLE = "infeasible"
STATUS_MAX_ITERATIONS = "max_iterations"

_RELAXATION = 1.7
_RHO_PERIOD = 25
_RHO_FACTOR = 2.0


@dataclass(frozen=True, eq=False)
class ConicProblem:
    """Structural form of the refinement program for one region sequence."""

    start: np.ndarray
    end: np.ndarray
    budget: float
    sequence: tuple[int, ...]
    polytopes: tuple[Polytope, ...]  # one per sequence entry, in order

    @property
    def k(self) -> int:
        return len(self.polytopes)

    @property
    def num_points(self) -> int:
        return 2 * self.k

    @property
    def num_norm_terms(self) -> int:
        return 2 * self.k + 1

    @property
    def num_soc_constraints(self) -> int:
        return self.k + 1

    def linear_blocks(self) -> list[tuple[np.ndarray, np.ndarray]]:
        """Membership rows per decision point: entry_i, exit_i, interleaved."""
        blocks = []
        for poly in self.polytopes:
            blocks.append((poly.H, poly.h))
            blocks.append((poly.H, poly.h))
        return blocks


@dataclass(frozen=True, eq=False)
class RefineResult:
    entry_points: tuple[np.ndarray, ...]
    exit_points: tuple[np.ndarray, ...]
    objective_value: float
    status: str
    solver_iterations: int
    kkt_residual: float


def assemble_problem(scn: Scenario, seq: PolytopeSequence) -> ConicProblem:
    ids = tuple(seq)
    if len(ids) == 0:
        raise InvalidSequence("sequence is empty; the straight-line case bypasses refinement")
    for i in ids:
        if not 0 <= i < scn.num_regions:
            raise InvalidSequence(f"region index {i} out of range 0..{scn.num_regions - 1}")
    return ConicProblem(
        start=scn.start,
        end=scn.end,
        budget=scn.budget,
        sequence=ids,
        polytopes=tuple(scn.polytopes[i] for i in ids),
    )


def evaluate_objective(problem: ConicProblem, entries, exits) -> float:
    """Polyline length through start, entry/exit pairs, end."""
    chain = [problem.start]
    for a, b in zip(entries, exits):
        chain.extend([a, b])
    chain.append(problem.end)
    pts = np.asarray(chain, dtype=float)
    return float(np.sum(np.linalg.norm(np.diff(pts, axis=0), axis=1)))


def _scaled_polytopes(problem: ConicProblem) -> list[Polytope]:
    q = problem.budget
    return [
        Polytope(id=p.id, H=p.H, h=p.h / q, vertices=p.vertices / q, tol=p.tol)
        for p in problem.polytopes
    ]


def _hop_witnesses(start, end, polys: list[Polytope]) -> list[tuple[np.ndarray, np.ndarray, float]]:
    """Closest achievable pair for every budget hop, in chain order."""
    out = []
    p = polys[0].project(start)
    out.append((start, p, float(np.linalg.norm(start - p))))
    for left, right in zip(polys[:-1], polys[1:]):
        q1, q2, d = _polytope_closest_pair(left, right)
        out.append((q1, q2, d))
    p = polys[-1].project(end)
    out.append((p, end, float(np.linalg.norm(end - p))))
    return out


def _polytope_closest_pair(p1: Polytope, p2: Polytope) -> tuple[np.ndarray, np.ndarray, float]:
    best = None
    for v in p1.vertices:
        for a, b in p2.edges():
            q = _closest_on_segment(v, a, b)
            d = float(np.linalg.norm(v - q))
            if best is None or d < best[2]:
                best = (v.copy(), q, d)
    for v in p2.vertices:
        for a, b in p1.edges():
            q = _closest_on_segment(v, a, b)
            d = float(np.linalg.norm(v - q))
            if best is None or d < best[2]:
                best = (q, v.copy(), d)
    return best


def _shrink(v: np.ndarray, amount: float, cap: float | None) -> np.ndarray:
    """prox of amount*||.|| (optionally + indicator of the cap-radius ball)."""
    nv = float(np.linalg.norm(v))
    if nv <= 0.0:
        return np.zeros_like(v)
    t = max(nv - amount, 0.0)
    if cap is not None:
        t = min(t, cap)
    return v * (t / nv)


def _chain(start, z, end) -> np.ndarray:
    return np.vstack([start[None, :], z, end[None, :]])


def _snap_to_boundary(start, end, z, polys: list[Polytope]) -> np.ndarray:
    """Move entries/exits to first/last region contact along adjacent segments."""
    z = z.copy()
    chain = _chain(start, z, end)
    for i, poly in enumerate(polys):
        prev = chain[2 * i]
        entry = chain[2 * i + 1]
        t = _entry_parameter(poly, prev, entry)
        if t is not None:
            z[2 * i] = prev + t * (entry - prev)
            chain[2 * i + 1] = z[2 * i]
        exit_ = chain[2 * i + 2]
        nxt = chain[2 * i + 3]
        t = _exit_parameter(poly, exit_, nxt)
        if t is not None:
            z[2 * i + 1] = exit_ + t * (nxt - exit_)
            chain[2 * i + 2] = z[2 * i + 1]
    return z


def _membership_interval(poly: Polytope, p, d):
    lo, hi = 0.0, 1.0
    base = poly.H @ p - poly.h
    slope = poly.H @ d
    for b, s in zip(base, slope):
        if abs(s) < 1e-15:
            if b > 1e-12:
                return None
            continue
        t = -b / s
        if s > 0:
            hi = min(hi, t)
        else:
            lo = max(lo, t)
    if lo > hi:
        return None
    return lo, hi


def _entry_parameter(poly, prev, entry):
    d = entry - prev
    if np.linalg.norm(d) < 1e-15:
        return None
    span = _membership_interval(poly, prev, d)
    if span is None:
        return None
    lo = min(max(span[0], 0.0), 1.0)
    return lo


def _exit_parameter(poly, exit_, nxt):
    d = nxt - exit_
    if np.linalg.norm(d) < 1e-15:
        return None
    span = _membership_interval(poly, exit_, d)
    if span is None:
        return None
    hi = min(max(span[1], 0.0), 1.0)
    return hi


def _polish_chain(start, end, z, polys: list[Polytope], passes: int = 60) -> np.ndarray:
    """Cyclic exact minimization over each point's two adjacent length terms.

    Any point on the segment between a point's neighbors that lies in its
    region minimizes that point's share of the objective, so moving there
    never lengthens the path. Entries take the earliest such segment
    parameter and exits the latest, which selects the first/last-contact
    solution on flat optimal faces (and respects the budget cap on the
    point's one constrained hop).
    """
    z = z.copy()
    for _ in range(passes):
        moved = 0.0
        chain = _chain(start, z, end)
        for i, poly in enumerate(polys):
            # Entry: segment from the previous waypoint to the exit.
            left = chain[2 * i]
            right = chain[2 * i + 2]
            d = right - left
            length = float(np.linalg.norm(d))
            if length > 1e-15:
                span = _membership_interval(poly, left, d)
                if span is not None:
                    lo = max(span[0], 0.0)
                    hi = min(span[1], 1.0, 1.0 / length)  # hop left->entry stays in budget
                    if lo <= hi:
                        new = left + lo * d
                        moved = max(moved, float(np.linalg.norm(new - z[2 * i])))
                        z[2 * i] = new
                        chain[2 * i + 1] = new
            # Exit: segment from the (updated) entry to the next waypoint.
            left = chain[2 * i + 1]
            right = chain[2 * i + 3]
            d = right - left
            length = float(np.linalg.norm(d))
            if length > 1e-15:
                span = _membership_interval(poly, left, d)
                if span is not None:
                    lo = max(span[0], 0.0, 1.0 - 1.0 / length)  # hop exit->right in budget
                    hi = min(span[1], 1.0)
                    if lo <= hi:
                        new = left + hi * d
                        moved = max(moved, float(np.linalg.norm(new - z[2 * i + 1])))
                        z[2 * i + 1] = new
                        chain[2 * i + 2] = new
        if moved < 1e-15:
            break
    return z


def _repair_budget_hops(start, end, z, witnesses, max_passes: int = 12) -> np.ndarray:
    """Blend over-budget hops toward their closest-pair witnesses (exact fix)."""
    z = z.copy()
    m = len(z)
    for _ in range(max_passes):
        chain = _chain(start, z, end)
        hops = chain[1:] - chain[:-1]
        lengths = np.linalg.norm(hops, axis=1)
        bad = [t for t in range(0, m + 1, 2) if lengths[t] > 1.0]
        if not bad:
            break
        for t in bad:
            w_left, w_right, d_star = witnesses[t // 2]
            excess = lengths[t] - 1.0
            denom = lengths[t] - d_star
            if denom <= 1e-15:
                continue  # hop already at its geometric minimum; cannot shrink
            theta = min(excess / denom * 1.0000001, 1.0)
            if t > 0:
                z[t - 1] = (1 - theta) * z[t - 1] + theta * w_left
            if t < m:
                z[t] = (1 - theta) * z[t] + theta * w_right
    return z


def solve(
    problem: ConicProblem,
    warm_start: tuple | None = None,
    feastol: float = 1e-7,
    gaptol: float = 1e-7,
    max_iter: int = 50_000,
) -> RefineResult:
    """Solve the refinement program to (near) machine accuracy.

    ``warm_start`` is an optional (entries, exits) pair of point lists,
    typically the first/last graph-path nodes per region. Returns status
    ``infeasible`` without iterating when some budget hop is geometrically
    impossible, i.e. its closest-pair distance exceeds the budget.
    """
    if feastol <= 0 or gaptol <= 0:
        raise ValueError("feastol and gaptol must be positive")
    q = problem.budget
    start = problem.start / q
    end = problem.end / q
    polys = _scaled_polytopes(problem)
    k = problem.k
    m = 2 * k

    witnesses = _hop_witnesses(start, end, polys)
    worst = max(w[2] for w in witnesses)
    if worst > 1.0 + feastol / q:
        entries = tuple(witnesses[i][1] * q for i in range(k))
        exits = tuple(witnesses[i + 1][0] * q for i in range(k))
        return RefineResult(
            entry_points=entries,
            exit_points=exits,
            objective_value=float("inf"),
            status=STATUS_INFEASIBLE,
            solver_iterations=0,
            kkt_residual=float((worst - 1.0) * q),
        )

    if warm_start is not None:
        entries, exits = warm_start
        z = np.empty((m, start.shape[0]))
        z[0::2] = np.asarray(entries, dtype=float) / q
        z[1::2] = np.asarray(exits, dtype=float) / q
    else:
        z = np.array([p.centroid() for p in polys for _ in range(2)])

    # Consensus copies: hop t owns a copy of its right endpoint (yr[t]) and
    # of its left endpoint (yl[t-1]); membership of point j owns yp[j].
    yr = z.copy()
    yl = z.copy()
    yp = z.copy()
    ur = np.zeros_like(z)
    ul = np.zeros_like(z)
    up = np.zeros_like(z)
    rho = 1.0

    # Budget-capped hops sit at even chain positions; among the batched
    # middle hops t = 1..m-1 those are the even t.
    mid_t = np.arange(1, m)
    mid_budget = mid_t % 2 == 0

    target = min(feastol, gaptol, 1e-9) / max(q, 1.0)
    target = max(target, 1e-13)
    converged = False
    iterations = 0
    residual = float("inf")

    while iterations < max_iter:
        iterations += 1
        z_old = z

        # Proximal step per hop (closed form via sum/difference split).
        lam = 1.0 / rho
        v0 = z[0] - ur[0]
        yr_new = yr.copy()
        yl_new = yl.copy()
        yr_new[0] = start + _shrink(v0 - start, lam, 1.0)
        vm = z[m - 1] - ul[m - 1]
        yl_new[m - 1] = end - _shrink(end - vm, lam, 1.0)
        if m > 1:
            v_left = z[:-1] - ul[:-1]
            v_right = z[1:] - ur[1:]
            s = v_left + v_right
            d0 = v_right - v_left
            nd = np.linalg.norm(d0, axis=1)
            t_len = np.maximum(nd - 2.0 * lam, 0.0)
            t_len = np.where(mid_budget, np.minimum(t_len, 1.0), t_len)
            scale = np.divide(t_len, nd, out=np.zeros_like(nd), where=nd > 0)
            d = d0 * scale[:, None]
            yl_new[:-1] = (s - d) / 2.0
            yr_new[1:] = (s + d) / 2.0

        yp_new = np.empty_like(z)
        for j in range(m):
            yp_new[j] = polys[j // 2].project(z[j] - up[j])

        # Over-relaxed consensus update.
        yr_hat = _RELAXATION * yr_new + (1.0 - _RELAXATION) * z_old
        yl_hat = _RELAXATION * yl_new + (1.0 - _RELAXATION) * z_old
        yp_hat = _RELAXATION * yp_new + (1.0 - _RELAXATION) * z_old
        z = ((yr_hat + ur) + (yl_hat + ul) + (yp_hat + up)) / 3.0
        ur = ur + yr_hat - z
        ul = ul + yl_hat - z
        up = up + yp_hat - z
        yr, yl, yp = yr_new, yl_new, yp_new

        if not np.all(np.isfinite(z)):
            raise NumericalBreakdown(f"solver iterate became non-finite at iteration {iterations}")

        if iterations % 10 == 0 or iterations == max_iter:
            r_primal = max(
                float(np.max(np.linalg.norm(yr - z, axis=1))),
                float(np.max(np.linalg.norm(yl - z, axis=1))),
                float(np.max(np.linalg.norm(yp - z, axis=1))),
            )
            r_dual = rho * float(np.max(np.linalg.norm(z - z_old, axis=1)))
            residual = max(r_primal, r_dual)
            if residual <= target:
                converged = True
                break
            if iterations % _RHO_PERIOD == 0:
                if r_primal > 10.0 * r_dual:
                    rho = min(rho * _RHO_FACTOR, 1e4)
                    ur /= _RHO_FACTOR
                    ul /= _RHO_FACTOR
                    up /= _RHO_FACTOR
                elif r_dual > 10.0 * r_primal:
                    rho = max(rho / _RHO_FACTOR, 1e-4)
                    ur *= _RHO_FACTOR
                    ul *= _RHO_FACTOR
                    up *= _RHO_FACTOR

    # Exact membership, then boundary snap, descent polish, and budget repair.
    z_final = np.vstack([polys[j // 2].project(z[j]) for j in range(m)])
    z_final = _snap_to_boundary(start, end, z_final, polys)
    z_final = _polish_chain(start, end, z_final, polys)
    z_final = _repair_budget_hops(start, end, z_final, witnesses)

    entries = tuple(z_final[0::2] * q)
    exits = tuple(z_final[1::2] * q)
    objective = evaluate_objective(problem, entries, exits)
    return RefineResult(
        entry_points=entries,
        exit_points=exits,
        objective_value=objective,
        status=STATUS_OPTIMAL if converged else STATUS_MAX_ITERATIONS,
        solver_iterations=iterations,
        kkt_residual=float(residual * q),
    )


def assemble_solution(scn: Scenario, seq: PolytopeSequence, result: RefineResult) -> PathSolution:
    """PathSolution through the refined entry/exit points."""
    if result.status != STATUS_OPTIMAL:
        raise ValueError(f"cannot assemble a solution from status {result.status!r}")
    waypoints = [scn.start]
    flags: list[bool] = []
    for a, b in zip(result.entry_points, result.exit_points):
        waypoints.extend([a, b])
        flags.extend([False, True])
    waypoints.append(scn.end)
    flags.append(False)
    return make_solution(waypoints, flags, sequence=tuple(seq), method_tag=METHOD_REFINED)
