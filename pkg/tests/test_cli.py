import json
import xml.etree.ElementTree as ET

import pytest

from budgetpath.cli import main
from budgetpath.scenario import load_solution

from conftest import square_scenario_json


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


def trivial_json():
    return json.dumps({"start": [0, 0], "end": [2, 0], "budget": 3})


class TestPlan:
    def test_trivial_straight_line(self, tmp_path, capsys):
        scn = write(tmp_path, "scn.json", trivial_json())
        out = str(tmp_path / "sol.json")
        assert main(["plan", scn, "--output", out]) == 0
        sol = load_solution((tmp_path / "sol.json").read_text())
        assert sol.method_tag == "straight_line"
        assert sol.total_length == pytest.approx(2.0, abs=1e-12)

    def test_chord_scenario(self, tmp_path, capsys):
        scn = write(tmp_path, "scn.json", square_scenario_json())
        out = str(tmp_path / "sol.json")
        svg = str(tmp_path / "fig.svg")
        dump = str(tmp_path / "graph.json")
        code = main(["plan", scn, "--output", out, "--svg", svg, "--dump-graph", dump])
        assert code == 0
        sol = load_solution((tmp_path / "sol.json").read_text())
        assert sol.method_tag == "refined"
        assert sol.total_length == pytest.approx(4.0, abs=1e-6)
        stdout = capsys.readouterr().out
        assert "graph-only length" in stdout and "refined length" in stdout
        graph = json.loads((tmp_path / "graph.json").read_text())
        assert graph["nodes"] and graph["edges"]
        ET.fromstring((tmp_path / "fig.svg").read_text())

    def test_infeasible_exit_code(self, tmp_path, capsys):
        scn = write(
            tmp_path, "scn.json", json.dumps({"start": [0, 0], "end": [9, 0], "budget": 3})
        )
        assert main(["plan", scn]) == 2
        assert "infeasible: no budget-feasible path" in capsys.readouterr().err

    def test_bad_input_exit_code(self, tmp_path, capsys):
        scn = write(tmp_path, "scn.json", "{broken")
        assert main(["plan", scn]) == 1

    def test_missing_file_exit_code(self, tmp_path, capsys):
        assert main(["plan", str(tmp_path / "nope.json")]) == 1


class TestGenerate:
    def test_same_seed_is_byte_identical(self, tmp_path, capsys):
        argv = ["generate", "--regions", "4", "--seed", "9", "--bounds", "0,8,0,6"]
        assert main(argv) == 0
        first = capsys.readouterr().out
        assert main(argv) == 0
        assert capsys.readouterr().out == first

    def test_zero_regions_is_valid(self, tmp_path, capsys):
        out = str(tmp_path / "scn.json")
        assert main(["generate", "--regions", "0", "--output", out]) == 0
        data = json.loads((tmp_path / "scn.json").read_text())
        assert data["polytopes"] == []

    def test_generated_instance_plans_or_reports_cleanly(self, tmp_path, capsys):
        out = str(tmp_path / "scn.json")
        assert main(["generate", "--regions", "15", "--seed", "1", "--output", out]) == 0
        code = main(["plan", out, "--output", str(tmp_path / "sol.json")])
        assert code in (0, 2)


class TestRender:
    def test_polygon_count_and_determinism(self, tmp_path, capsys):
        scn = write(tmp_path, "scn.json", square_scenario_json())
        sol = str(tmp_path / "sol.json")
        assert main(["plan", scn, "--output", sol]) == 0
        fig = tmp_path / "fig.svg"
        assert main(["render", scn, sol, "--output", str(fig)]) == 0
        first = fig.read_bytes()
        root = ET.fromstring(first.decode())
        polygons = [e for e in root.iter() if e.tag.endswith("polygon")]
        assert len(polygons) == 1
        assert main(["render", scn, sol, "--output", str(fig)]) == 0
        assert fig.read_bytes() == first

    def test_empty_scenario_renders(self, tmp_path, capsys):
        scn = write(tmp_path, "scn.json", trivial_json())
        sol = str(tmp_path / "sol.json")
        assert main(["plan", scn, "--output", sol]) == 0
        fig = tmp_path / "fig.svg"
        assert main(["render", scn, sol, "--output", str(fig)]) == 0
        root = ET.fromstring(fig.read_text())
        polylines = [e for e in root.iter() if e.tag.endswith("polyline")]
        assert len(polylines) == 2  # dashed baseline plus the solution path


class TestCompare:
    def test_table_and_level_monotonicity(self, tmp_path, capsys):
        scn = write(tmp_path, "scn.json", square_scenario_json(end=[5, 0]))
        assert main(["compare", scn, "--deltas", "2,4"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0] == "delta,nodes,graph_len,refined_len,ms"
        rows = [line.split(",") for line in lines[1:]]
        assert len(rows) == 2
        graph2, refined2 = float(rows[0][2]), float(rows[0][3])
        graph4, refined4 = float(rows[1][2]), float(rows[1][3])
        assert graph4 <= graph2 + 1e-9
        assert refined2 <= graph2 + 1e-6 and refined4 <= graph4 + 1e-6
        assert refined4 == pytest.approx(refined2, abs=1e-6)

    def test_empty_delta_list_is_usage_error(self, tmp_path, capsys):
        scn = write(tmp_path, "scn.json", trivial_json())
        assert main(["compare", scn, "--deltas", ""]) == 1


class TestVerify:
    def test_chord_verify(self, tmp_path, capsys):
        scn = write(tmp_path, "scn.json", square_scenario_json())
        assert main(["verify", scn, "--oracle-spacing", "0.02"]) == 0
        out = capsys.readouterr().out
        assert "oracle length" in out
        assert "sequence match: yes" in out
