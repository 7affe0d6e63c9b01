import json
import subprocess
import sys

import pytest

from sysgirth.baumslag import PsiMap, preimage_action
from sysgirth.cli import main
from sysgirth.graphs import load_graph
from sysgirth.schreier import graph_to_action


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


def test_graph_build_and_schreier(tmp_path, capsys):
    path = tmp_path / "g.json"
    code, doc = run(capsys, "graph", "build", "--n", "100", "--g", "5", "--out", str(path))
    assert code == 0 and doc["certificate"]["girth"] == 5
    code, doc = run(capsys, "schreier", "min-length", "--graph", str(path), "--cutoff", "8")
    assert code == 0 and doc["length"] == doc["girth"] == 5
    action_path = tmp_path / "a.json"
    code, doc = run(capsys, "schreier", "from-graph", "--graph", str(path), "--out", str(action_path))
    assert code == 0 and doc["n"] == 100
    code, doc = run(capsys, "schreier", "min-length", "--action", str(action_path))
    assert code == 0 and doc["length"] == 5


def test_cutoff_too_small_exits_one(tmp_path, capsys):
    path = tmp_path / "g.json"
    run(capsys, "graph", "build", "--n", "100", "--g", "6", "--out", str(path))
    code, doc = run(capsys, "schreier", "min-length", "--graph", str(path), "--cutoff", "4")
    assert code == 1 and doc["kind"] == "NoStabilizerError"


def test_infeasible_exits_two(capsys):
    assert main(["graph", "build", "--n", "12", "--g", "9"]) == 2
    assert "at least 161 vertices" in capsys.readouterr().err


def test_missing_file_exits_two(capsys):
    assert main(["schreier", "from-graph", "--graph", "/nonexistent.json"]) == 2
    assert "cannot read" in capsys.readouterr().err


def test_usage_errors_exit_two():
    with pytest.raises(SystemExit) as info:
        main(["graph", "build", "--n", "10"])
    assert info.value.code == 2


def test_psi_commands(capsys):
    code, doc = run(capsys, "psi", "verify", "--k", "2")
    assert code == 0 and doc["violations"] == 0 and doc["relator_image_trivial"]
    code, doc = run(capsys, "psi", "apply", "--k", "1", "--word", "b")
    assert code == 0 and doc["length"] == 57


def test_tower_commands(capsys):
    code, doc = run(capsys, "tower", "build", "--k", "3", "--m", "2", "--r", "2")
    assert code == 0 and doc["n_bounds"] == [3, 63, 1023]
    code, doc = run(capsys, "tower", "check", "--k", "3", "--m", "2", "--r", "2")
    assert code == 0 and doc["min_x_power"] == 3
    assert main(["tower", "build", "--k", "4", "--m", "4", "--r", "4"]) == 2


def test_pipeline_commands(capsys):
    code, doc = run(capsys, "pipeline", "a", "--n", "50", "--a", "4")
    assert code == 0 and doc["passed"]
    code, doc = run(capsys, "pipeline", "c", "--k", "2", "--m", "1", "--r", "1")
    assert code == 1 and not doc["passed"]
    code, doc = run(capsys, "pipeline", "c", "--k", "2", "--m", "1", "--r", "1", "--depth", "1")
    assert code == 0


def test_geometry_commands(tmp_path, capsys):
    code, doc = run(capsys, "geom", "bound", "--cutoff", "1")
    assert code == 0 and doc["upper_bound"] == pytest.approx(3.057141838961996)
    code, doc = run(capsys, "geom", "ms-constants", "--radius", "2")
    assert code == 0 and doc["beta"] == 0
    bad = tmp_path / "rep.json"
    bad.write_text(json.dumps({"x": [1, 0, 0, 1]}))
    assert main(["geom", "bound", "--rep", str(bad)]) == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "sysgirth", "psi", "apply", "--k", "1",
                           "--word", "xy"], capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["image"] == "xy"


def test_geometry_bound_of_a_graph_cover(tmp_path, capsys):
    path = tmp_path / "g.json"
    run(capsys, "graph", "build", "--n", "100", "--g", "5", "--out", str(path))
    code, doc = run(capsys, "geom", "bound", "--graph", str(path))
    assert code == 0 and doc["witness"] and doc["upper_bound"] > 3.05
    graph = load_graph(path)
    lam = preimage_action(PsiMap(1), graph_to_action(graph))
    assert lam.contains(doc["witness"])
