import json

import numpy as np
import pytest

from budgetpath.budget_graph import (
    _dijkstra_labels,
    bellman_ford_labels,
    build_graph,
    extract_sequence,
    reconstruct_path,
    shortest_graph_path,
)
from budgetpath.errors import Infeasible, SequenceRepetition
from budgetpath.generate import generate_scenario
from budgetpath.scenario import check_path_feasible, load_scenario, make_solution
from budgetpath.wavefront import CandidateNode, generate_candidates

from conftest import square_scenario_json


def node(x, y, pid=None, origin="wavefront"):
    return CandidateNode(position=np.array([x, y], dtype=float), polytope_id=pid, origin=origin)


def bare_scenario(budget=3.0, polytopes=(), start=(0, 0), end=(4, 0)):
    return load_scenario(
        json.dumps(
            {
                "start": list(start),
                "end": list(end),
                "budget": budget,
                "polytopes": list(polytopes),
            }
        )
    )


SQUARE = {"vertices": [[1.5, -0.5], [2.5, -0.5], [2.5, 0.5], [1.5, 0.5]]}


class TestBuildGraph:
    def test_single_edge_within_budget(self):
        scn = bare_scenario(end=(2, 0))
        g = build_graph(scn, [node(0, 0, origin="start"), node(2, 0, origin="end")])
        edges = g.edge_list()
        assert edges == [(0, 1, 2.0, False)]

    def test_over_budget_pair_has_no_edge(self):
        scn = bare_scenario()
        g = build_graph(scn, [node(0, 0, origin="start"), node(4, 0, origin="end")])
        assert g.edge_list() == []

    def test_same_region_pair_is_exempt(self):
        scn = bare_scenario(budget=0.5, polytopes=[SQUARE])
        g = build_graph(scn, [node(1.5, 0, pid=0), node(2.5, 0, pid=0)])
        edges = g.edge_list()
        assert len(edges) == 1
        u, v, w, exempt = edges[0]
        assert w == pytest.approx(1.0, abs=1e-12)
        assert exempt

    def test_non_exempt_edges_within_budget(self):
        scn = load_scenario(square_scenario_json())
        g = build_graph(scn, generate_candidates(scn))
        for u, v, w, exempt in g.edge_list():
            if not exempt:
                assert w <= scn.budget + scn.tol

    def test_dump_shape(self):
        scn = bare_scenario(end=(2, 0))
        g = build_graph(scn, [node(0, 0, origin="start"), node(2, 0, origin="end")])
        d = g.to_dict()
        assert set(d) == {"nodes", "edges"}
        assert d["edges"][0][:2] == [0, 1]


class TestShortestPath:
    def test_two_node_graph(self):
        scn = bare_scenario(end=(2, 0))
        g = build_graph(scn, [node(0, 0, origin="start"), node(2, 0, origin="end")])
        path, length = shortest_graph_path(g, 0, 1)
        assert path == [0, 1]
        assert length == pytest.approx(2.0, abs=1e-12)

    def test_disconnected_graph_is_infeasible(self):
        scn = bare_scenario()
        g = build_graph(scn, [node(0, 0, origin="start"), node(4, 0, origin="end")])
        with pytest.raises(Infeasible):
            shortest_graph_path(g, 0, 1)

    def test_direct_edge_dominates(self):
        # With the endpoints within budget, the path is exactly [start, end]
        # even though region nodes offer equal-length collinear detours.
        scn = bare_scenario(budget=3.0, end=(2.6, 0), polytopes=[SQUARE])
        g = build_graph(scn, generate_candidates(scn))
        path, length = shortest_graph_path(g, 0, 1)
        assert path == [0, 1]
        assert length == pytest.approx(2.6, abs=1e-12)

    def test_graph_path_replays_feasibly(self):
        scn = load_scenario(square_scenario_json(end=[5, 0]))
        g = build_graph(scn, generate_candidates(scn))
        path, _ = shortest_graph_path(g, 0, 1)
        seq, _ = extract_sequence(g, path)
        flags = [
            bool(g.pid[u] >= 0 and g.pid[u] == g.pid[v])
            for u, v in zip(path[:-1], path[1:])
        ]
        sol = make_solution(g.positions[path], flags, tuple(seq), "graph_only")
        assert check_path_feasible(scn, sol)

    def test_removing_a_node_never_helps(self):
        scn = load_scenario(square_scenario_json(end=[5, 0]))
        nodes = generate_candidates(scn)
        g = build_graph(scn, nodes)
        _, base = shortest_graph_path(g, 0, 1)
        rng = np.random.default_rng(5)
        for k in rng.choice(np.arange(2, len(nodes)), size=6, replace=False):
            sub = [n for i, n in enumerate(nodes) if i != k]
            g2 = build_graph(scn, sub)
            try:
                _, length = shortest_graph_path(g2, 0, 1)
            except Infeasible:
                continue
            assert length >= base - 1e-9

    def test_dijkstra_matches_bellman_ford(self):
        for trial in range(10):
            rng = np.random.default_rng(trial)
            m = int(rng.integers(0, 4))
            scn = generate_scenario(
                m,
                (0, 5 + trial % 4, 0, 4),
                budget=float(rng.uniform(1.5, 3.0)),
                seed=700 + trial,
                levels=int(rng.integers(1, 4)),
                min_radius=0.7,
                max_radius=1.3,
            )
            g = build_graph(scn, generate_candidates(scn))
            dist_d, hops_d = _dijkstra_labels(g, 0)
            dist_b, hops_b = bellman_ford_labels(g, 0)
            assert np.array_equal(dist_d, dist_b, equal_nan=True)
            assert np.array_equal(hops_d, hops_b)
            if np.isfinite(dist_d[1]):
                assert reconstruct_path(g, dist_d, hops_d, 0, 1) == reconstruct_path(
                    g, dist_b, hops_b, 0, 1
                )


class TestExtractSequence:
    def _two_region_graph(self):
        polys = [
            {"vertices": [[1, -0.5], [2, -0.5], [2, 0.5], [1, 0.5]]},
            {"vertices": [[3, -0.5], [4, -0.5], [4, 0.5], [3, 0.5]]},
        ]
        scn = bare_scenario(budget=2.0, end=(5, 0), polytopes=polys)
        nodes = [
            node(0, 0, origin="start"),
            node(1, 0, pid=0),
            node(2, 0, pid=0),
            node(3, 0, pid=1),
            node(4, 0, pid=1),
            node(2, 0.5, pid=0),
            node(5, 0, origin="end"),
        ]
        return build_graph(scn, nodes)

    def test_collapses_consecutive_duplicates(self):
        g = self._two_region_graph()
        seq, warm = extract_sequence(g, [0, 1, 2, 3, 6])
        assert tuple(seq) == (0, 1)
        assert np.array_equal(warm[0][0], [1, 0])
        assert np.array_equal(warm[0][1], [2, 0])

    def test_empty_sequence(self):
        g = self._two_region_graph()
        seq, warm = extract_sequence(g, [0, 6])
        assert tuple(seq) == ()
        assert warm == []

    def test_nonconsecutive_repeat_raises(self):
        g = self._two_region_graph()
        with pytest.raises(SequenceRepetition):
            extract_sequence(g, [0, 1, 3, 5, 6])
