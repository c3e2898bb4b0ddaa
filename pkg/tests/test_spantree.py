import dataclasses

import numpy as np
import pytest

from fsn_selector.errors import TheoremViolationError, ValidationError
from fsn_selector.fsn import build_fsn, centralized_fsn
from fsn_selector.graph import DirectedNetwork, NetworkBuilder, random_leaders, random_strongly_connected
from fsn_selector.graph.io import NetworkFormatError, save_network
from fsn_selector.spantree import (
    EmptyNeighborhoodError,
    MultipleLeadersError,
    TieBreak,
    build_spanning_tree,
    load_tree,
    save_tree,
    verify_spanning_tree,
)
from fsn_selector.spectral import Mode
from tests.tools import G7_CONTINUOUS_VECTOR, unit_leaders


def _three_cycle() -> DirectedNetwork:
    return NetworkBuilder(3).add_arrow(1, 2).add_arrow(2, 3).add_arrow(3, 1).build()


def test_g7_tree_leader_1(g7):
    leaders = unit_leaders(1)
    _, fsn = centralized_fsn(g7, leaders, Mode.CONTINUOUS)
    # Agent 5 listens to 3 and 6 in the FSN network: keep 6.
    result = build_spanning_tree(fsn, leaders, choices={5: 6})
    assert result.root == 1
    assert result.removed == ((5, 3),)
    assert result.chosen == {2: 1, 3: 2, 4: 3, 5: 6, 6: 7, 7: 1}
    assert verify_spanning_tree(result, 7)
    assert result.lambda_tree > 0
    # The default policy keeps the smallest index instead.
    result = build_spanning_tree(fsn, leaders)
    assert result.removed == ((5, 6),)
    assert verify_spanning_tree(result, 7)


def test_g7_tree_leader_6(g7):
    leaders = unit_leaders(6)
    _, fsn = centralized_fsn(g7, leaders, Mode.CONTINUOUS)
    result = build_spanning_tree(fsn, leaders)
    assert result.removed == ((3, 6),)
    assert result.chosen[3] == 5
    assert verify_spanning_tree(result, 7)
    data = result.as_dict()
    assert data["root"] == 6
    assert {"src": 5, "dst": 3} in data["edges"]
    assert data["removed"] == [{"src": 6, "dst": 3}]


def test_fsn_already_a_tree():
    net = _three_cycle()
    leaders = unit_leaders(1, n=3)
    _, fsn = centralized_fsn(net, leaders, Mode.CONTINUOUS)
    result = build_spanning_tree(fsn, leaders)
    assert result.removed == ()
    assert result.tree == fsn.reduced


def test_discrete_fsn_tree(g7):
    net = g7.with_self_loops()
    leaders = unit_leaders(1)
    _, fsn = centralized_fsn(net, leaders, Mode.DISCRETE)
    result = build_spanning_tree(fsn, leaders, TieBreak.SEEDED_RANDOM, seed=3)
    # Self-loops are not part of the tree.
    assert not result.tree.allow_self_loops
    assert result.tree.edge_count == 6
    assert verify_spanning_tree(result, 7)


def test_invalid_tree_is_detected(g7):
    leaders = unit_leaders(1)
    _, fsn = centralized_fsn(g7, leaders, Mode.CONTINUOUS)
    result = build_spanning_tree(fsn, leaders, choices={5: 6})
    weights = {(i, j): w for i, j, w in result.tree.edges() if (i, j) != (5, 6)}
    weights[(5, 5)] = 1.0
    broken = dataclasses.replace(result, tree=DirectedNetwork(7, weights, allow_self_loops=True))
    verdict = verify_spanning_tree(broken, 7)
    assert not verdict
    assert "self-loop/cycle" in verdict.violations
    assert any(violation.startswith("reachability") for violation in verdict.violations)
    assert not verify_spanning_tree(result, 8).valid


def test_spanning_tree_errors(g7):
    _, fsn = centralized_fsn(g7, unit_leaders(1, 5), Mode.CONTINUOUS)
    with pytest.raises(MultipleLeadersError):
        build_spanning_tree(fsn, unit_leaders(1, 5))
    _, fsn = centralized_fsn(g7, unit_leaders(1), Mode.CONTINUOUS)
    with pytest.raises(ValidationError):
        build_spanning_tree(fsn, unit_leaders(1), choices={5: 2})
    with pytest.raises(ValidationError):
        build_spanning_tree(fsn, unit_leaders(1), choices={1: 2})
    # With inverted ratios, agent 1 keeps all its in-neighbors and can't be a root.
    fsn = build_fsn(g7, 1 / np.array(G7_CONTINUOUS_VECTOR))
    with pytest.raises(TheoremViolationError):
        build_spanning_tree(fsn, unit_leaders(1))


def test_empty_neighborhood():
    net = _three_cycle()
    # Agent 3 is faster than its only in-neighbor 2.
    fsn = build_fsn(net, [1.0, 3.0, 2.0])
    with pytest.raises(EmptyNeighborhoodError):
        build_spanning_tree(fsn, unit_leaders(1, n=3))


def test_save_and_load(g7, tmp_path):
    leaders = unit_leaders(6)
    _, fsn = centralized_fsn(g7, leaders, Mode.CONTINUOUS)
    result = build_spanning_tree(fsn, leaders)
    tree, root = load_tree(save_tree(result, tmp_path / "tree.edges"))
    assert tree == result.tree
    assert root == 6
    with pytest.raises(NetworkFormatError):
        load_tree(save_network(g7, tmp_path / "g7.edges"))


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(200))
@pytest.mark.parametrize("policy", list(TieBreak))
def test_random_single_leader_trees(seed, policy):
    n = int(np.random.default_rng(seed).integers(2, 11))
    net = random_strongly_connected(n, 0.3, seed)
    leaders = random_leaders(n, seed, count=1)
    _, fsn = centralized_fsn(net, leaders, Mode.CONTINUOUS)
    result = build_spanning_tree(fsn, leaders, policy, seed)
    verdict = verify_spanning_tree(result, n)
    assert verdict, verdict.violations


@pytest.mark.parametrize("seed", range(20))
def test_any_choice_gives_a_tree(seed):
    net = random_strongly_connected(8, 0.5, seed)
    leaders = random_leaders(8, seed, count=1)
    _, fsn = centralized_fsn(net, leaders, Mode.CONTINUOUS)
    for tie_seed in range(20):
        result = build_spanning_tree(fsn, leaders, TieBreak.SEEDED_RANDOM, tie_seed)
        assert verify_spanning_tree(result, 8)
