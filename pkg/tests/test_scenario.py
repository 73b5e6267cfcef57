import json

import numpy as np
import pytest

from budgetpath.errors import ParseError, ValidationError
from budgetpath.scenario import (
    check_path_feasible,
    load_scenario,
    load_solution,
    make_solution,
    save_scenario,
    straight_line_solution,
)

from conftest import square_scenario_json


def minimal_json(**overrides):
    data = {"start": [0, 0], "end": [1, 0], "budget": 3}
    data.update(overrides)
    return json.dumps(data)


class TestLoadScenario:
    def test_minimal(self):
        scn = load_scenario(minimal_json())
        assert scn.num_regions == 0
        assert scn.budget == 3
        assert scn.levels == 4  # default level count

    def test_overlapping_squares_rejected(self):
        text = minimal_json(
            polytopes=[
                {"vertices": [[0, 0], [1, 0], [1, 1], [0, 1]]},
                {"vertices": [[0.5, 0], [1.5, 0], [1.5, 1], [0.5, 1]]},
            ]
        )
        with pytest.raises(ValidationError, match="disjoint"):
            load_scenario(text)

    def test_paper_style_instance(self):
        from budgetpath.generate import generate_scenario

        scn = generate_scenario(15, (0, 18, 0, 14), budget=3.0, seed=1)
        loaded = load_scenario(save_scenario(scn))
        assert loaded.num_regions == 15
        assert loaded.levels == 4
        assert loaded.straight_length() == pytest.approx(22.8035, abs=1e-3)

    def test_halfspace_form_accepted(self):
        text = minimal_json(
            polytopes=[{"H": [[-1, 0], [0, -1], [1, 0], [0, 1]], "h": [0, 0, 1, 1]}]
        )
        scn = load_scenario(text)
        assert len(scn.polytopes[0].vertices) == 4

    def test_nonpositive_budget(self):
        with pytest.raises(ValidationError, match="budget"):
            load_scenario(minimal_json(budget=0))

    def test_non_finite_start(self):
        with pytest.raises(ValidationError):
            load_scenario(minimal_json(start=[float("nan"), 0]))

    def test_malformed_json(self):
        with pytest.raises(ParseError):
            load_scenario("{not json")

    def test_missing_key(self):
        with pytest.raises(ParseError, match="budget"):
            load_scenario(json.dumps({"start": [0, 0], "end": [1, 0]}))

    def test_unbounded_polytope_named(self):
        text = minimal_json(polytopes=[{"H": [[-1, 0], [0, -1], [1, 0]], "h": [0, 0, 1]}])
        with pytest.raises(ValidationError, match="unbounded"):
            load_scenario(text)

    def test_start_inside_region_is_note_not_error(self):
        text = minimal_json(
            start=[0.5, 0.5],
            polytopes=[{"vertices": [[0, 0], [1, 0], [1, 1], [0, 1]]}],
        )
        scn = load_scenario(text)
        assert any("start" in note for note in scn.notes)

    def test_round_trip_identity(self):
        scn = load_scenario(square_scenario_json())
        again = load_scenario(save_scenario(scn))
        assert np.array_equal(scn.start, again.start)
        assert np.array_equal(scn.end, again.end)
        assert scn.budget == again.budget
        assert scn.levels == again.levels
        for a, b in zip(scn.polytopes, again.polytopes):
            assert np.array_equal(a.vertices, b.vertices)


class TestSolutionJson:
    def test_round_trip(self):
        sol = make_solution(
            [[0, 0], [1.5, 0], [2.5, 0], [4, 0]],
            [False, True, False],
            sequence=(0,),
            method_tag="refined",
        )
        loaded = load_solution(sol.to_json())
        assert loaded.method_tag == "refined"
        assert np.allclose(loaded.waypoints, sol.waypoints)
        assert loaded.sequence == (0,)
        assert loaded.total_length == pytest.approx(sol.total_length, abs=1e-12)

    def test_lengths_sum_to_total(self):
        sol = make_solution([[0, 0], [3, 4], [3, 8]], [False, False], (), "graph_only")
        assert sol.total_length == pytest.approx(sum(sol.segment_lengths), abs=1e-9)


class TestCheckPathFeasible:
    def test_straight_within_budget(self):
        scn = load_scenario(minimal_json(end=[2, 0]))
        assert check_path_feasible(scn, straight_line_solution(scn))

    def test_straight_over_budget(self):
        scn = load_scenario(minimal_json(end=[4, 0]))
        assert not check_path_feasible(scn, straight_line_solution(scn))

    def test_reset_inside_square(self, chord_scenario):
        sol = make_solution(
            [[0, 0], [1.5, 0], [2.5, 0], [4, 0]],
            [False, True, False],
            sequence=(0,),
            method_tag="refined",
        )
        assert check_path_feasible(chord_scenario, sol)

    def test_endpoint_mismatch_rejected(self, chord_scenario):
        sol = make_solution([[0, 0], [3, 0]], [False], (), "graph_only")
        assert not check_path_feasible(chord_scenario, sol)

    def test_single_hop_violation_rejected(self):
        scn = load_scenario(minimal_json(end=[6, 0], budget=3))
        sol = make_solution([[0, 0], [3.001, 0], [6, 0]], [False, False], (), "graph_only")
        assert not check_path_feasible(scn, sol)

    def test_mid_segment_crossing_counts_as_reset(self, chord_scenario):
        # One long segment straight through the square: 4 > budget, but the
        # crossing resets the accumulator, leaving 1.5 per side.
        sol = make_solution([[0, 0], [4, 0]], [False], (), "graph_only")
        assert check_path_feasible(chord_scenario, sol)

    def test_interior_tag_requires_shared_region(self, chord_scenario):
        sol = make_solution(
            [[0, 0], [1.5, 0], [4, 0]],
            [True, False],  # first segment is not inside any region
            sequence=(),
            method_tag="graph_only",
        )
        assert not check_path_feasible(chord_scenario, sol)
