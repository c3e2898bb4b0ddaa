import json
import shutil

import pytest

import fsn_selector.param as param
from fsn_selector.app import main
from fsn_selector.graph.io import load_network, parse_network
from fsn_selector.internal_state import State
from tests.tools import G7_CONTINUOUS_VECTOR, G7_DISCRETE_VECTOR, G7_FSN_ARROWS


def _arrows(path):
    net, _ = parse_network(path.read_text(encoding="utf8"))
    return {(j, i) for i, j, _ in net.edges() if i != j}


@pytest.mark.parametrize(
    "mode, vector", [("continuous", G7_CONTINUOUS_VECTOR), ("discrete", G7_DISCRETE_VECTOR)]
)
def test_analyze(tmp_path, mode, vector):
    assert main(["analyze", "--mode", mode, "--out", str(tmp_path)]) == 0
    data = json.loads((tmp_path / "analysis.json").read_text(encoding="utf8"))
    assert data["perron"]["eigenvector"] == pytest.approx(vector, abs=5e-4)
    assert data["mode"] == mode
    assert data["improved"]
    assert data["reachable"]
    assert data["unreachable"] == []
    assert len(data["kept"]) == 6
    assert _arrows(tmp_path / "fsn.edges") == G7_FSN_ARROWS


def test_analyze_custom_network(tmp_path):
    path = tmp_path / "g7.edges"
    shutil.copy(param.G7_NETWORK_PATH, path)
    assert main(["analyze", str(path), "--leaders", str(param.G7_LEADERS_PATH), "--out", str(tmp_path)]) == 0
    assert _arrows(tmp_path / "fsn.edges") == G7_FSN_ARROWS
    assert State.load().last_network == path
    # Leaders are mandatory for a custom network.
    assert main(["analyze", str(path), "--out", str(tmp_path)]) == 2


def test_disconnected_network(tmp_path, capsys):
    path = tmp_path / "chain.edges"
    path.write_text("nodes 3\n1 2\n2 3\n", encoding="utf8")
    assert main(["analyze", str(path), "--leaders", "1:1", "--out", str(tmp_path)]) == 2
    captured = capsys.readouterr()
    assert "not strongly connected: Assumption 1" in captured.out + captured.err
    assert not (tmp_path / "analysis.json").exists()


def test_malformed_network(tmp_path):
    path = tmp_path / "bad.edges"
    path.write_text("nodes 3\n1 2 x\n", encoding="utf8")
    assert main(["analyze", str(path), "--leaders", "1", "--out", str(tmp_path)]) == 2


def test_numerical_failure(tmp_path):
    # Agents can't terminate within such a short horizon.
    assert main(["select", "--t-end", "1", "--out", str(tmp_path)]) == 3
    assert not (tmp_path / "selection.json").exists()


def test_simulate(tmp_path):
    assert main(["simulate", "--t-end", "5", "--out", str(tmp_path)]) == 0
    for name in ("original", "fsn"):
        lines = (tmp_path / f"{name}_trajectory.csv").read_text(encoding="utf8").splitlines()
        assert len(lines) == 502
        tempo = (tmp_path / f"{name}_tempo.csv").read_text(encoding="utf8").splitlines()
        assert tempo[0] == "tick,i,j,g"
    summary = json.loads((tmp_path / "simulation.json").read_text(encoding="utf8"))
    assert summary["seed"] == param.DEFAULT_SEED
    assert summary["original"]["samples"] == 501


def test_simulate_switching(tmp_path):
    assert main(["simulate", "--switching", "--mode", "discrete", "--out", str(tmp_path)]) == 0
    lines = (tmp_path / "original_trajectory.csv").read_text(encoding="utf8").splitlines()
    assert len(lines) == 152
    assert not (tmp_path / "fsn_trajectory.csv").exists()
    assert main(["simulate", "--switching", "--schedule", "x.schedule", "--out", str(tmp_path)]) == 2


def test_select(tmp_path):
    assert main(["select", "--t-end", "300", "--out", str(tmp_path)]) == 0
    data = json.loads((tmp_path / "selection.json").read_text(encoding="utf8"))
    assert {(e["src"], e["dst"]) for e in data["final_g"] if e["g"] > 1} == G7_FSN_ARROWS
    assert data["reduced_neighbors"]["3"] == [2, 5]
    assert data["forced"] == []


def test_spantree(tmp_path):
    assert main(["spantree", "--leaders", "1:1", "--choose", "5:6", "--out", str(tmp_path)]) == 0
    tree = load_network(tmp_path / "tree.edges")
    assert tree.edge_count == 6
    assert tree.has_edge(5, 6)
    data = json.loads((tmp_path / "tree.json").read_text(encoding="utf8"))
    assert data["root"] == 1
    assert data["removed"] == [{"src": 3, "dst": 5}]
    assert data["valid"]
    # Two leaders.
    assert main(["spantree", "--out", str(tmp_path)]) == 2
    assert main(["spantree", "--leaders", "1", "--choose", "5:x", "--out", str(tmp_path)]) == 2


def test_gen_is_deterministic(tmp_path):
    for name in ("a", "b"):
        assert main(["gen", "--n", "9", "--seed", "5", "--out", str(tmp_path / name)]) == 0
    for suffix in ("edges", "leaders"):
        first = (tmp_path / "a" / f"random-n9-seed5.{suffix}").read_bytes()
        assert first == (tmp_path / "b" / f"random-n9-seed5.{suffix}").read_bytes()
    assert load_network(tmp_path / "a" / "random-n9-seed5.edges").n == 9


def test_verify(tmp_path):
    assert main(["verify", "--instances", "3", "--out", str(tmp_path)]) == 0
    reports = json.loads((tmp_path / "verify.json").read_text(encoding="utf8"))
    assert len(reports) == 6
    assert all(not report["failures"] for report in reports)


def test_config(config_path):
    assert main(["config", "h=0.02", "seed=7"]) == 0
    assert config_path.is_file()
    assert State.load().defaults["h"] == 0.02
    assert State.load().defaults["seed"] == 7
    assert main(["config", "unknown=1"]) == 2
    assert main(["config", "seed"]) == 2
    assert State.load().defaults["seed"] == 7


def test_persisted_defaults_are_used(tmp_path):
    assert main(["config", "t_end=2"]) == 0
    assert main(["simulate", "--out", str(tmp_path)]) == 0
    lines = (tmp_path / "original_trajectory.csv").read_text(encoding="utf8").splitlines()
    assert len(lines) == 202
    # Command line options take precedence.
    assert main(["simulate", "--t-end", "1", "--out", str(tmp_path)]) == 0
    lines = (tmp_path / "original_trajectory.csv").read_text(encoding="utf8").splitlines()
    assert len(lines) == 102
