import numpy as np
import pytest
from hypothesis import given, strategies as st

from fsn_selector.errors import ValidationError
from fsn_selector.graph import (
    DirectedNetwork,
    LeaderProfile,
    LeaderSchedule,
    LeaderSegment,
    NetworkBuilder,
    NotStronglyConnectedError,
    is_strongly_connected,
    random_leaders,
    random_strongly_connected,
    reachable_set,
    require_strongly_connected,
    strongly_connected_components,
)
from fsn_selector.graph.network import DimensionMismatchError, InvalidEdgeError, NoLeaderError, ScheduleError
from tests.tools import unit_leaders


def test_g7_structure(g7):
    assert g7.n == 7
    assert g7.edge_count == 13
    assert g7.in_neighbors(1) == (2, 4, 6)
    assert g7.in_neighbors(3) == (2, 5, 6)
    assert g7.in_neighbors(5) == (3, 6)
    assert g7.in_neighbors(6) == (4, 7)
    assert g7.in_degree(1) == 3
    assert not g7.allow_self_loops
    assert is_strongly_connected(g7)


def test_builder_orientation():
    net = NetworkBuilder(3).add_arrow(1, 2).add_arrow(2, 3, 2.5).add_edge(1, 3).build()
    # Arrow 1 -> 2 means that agent 2 listens to agent 1.
    assert net.has_edge(2, 1)
    assert not net.has_edge(1, 2)
    assert net.weight(3, 2) == 2.5
    assert net.weight(1, 3) == 1.0
    assert net.weight(3, 1) == 0.0
    assert net.adjacency_matrix()[2, 1] == 2.5
    assert set(net.to_networkx().edges()) == {(1, 2), (2, 3), (3, 1)}


def test_invalid_edges():
    with pytest.raises(InvalidEdgeError):
        NetworkBuilder(3).add_arrow(1, 4)
    with pytest.raises(InvalidEdgeError):
        NetworkBuilder(3).add_arrow(1, 2, 0.0)
    with pytest.raises(InvalidEdgeError):
        NetworkBuilder(3).add_arrow(1, 2).add_arrow(1, 2)
    with pytest.raises(InvalidEdgeError):
        NetworkBuilder(3).add_arrow(2, 2)
    with pytest.raises(ValidationError):
        DirectedNetwork(0)
    # Self-loops are only allowed on networks flagged for discrete-time use.
    assert NetworkBuilder(3, allow_self_loops=True).add_arrow(2, 2).build().has_self_loop(2)


def test_self_loops(g7):
    looped = g7.with_self_loops(1.0)
    assert looped.allow_self_loops
    assert looped.has_all_self_loops()
    assert looped.edge_count == 20
    assert looped.in_degree(1) == 4
    # Self-loops are not neighbors.
    assert looped.in_neighbors(1) == (2, 4, 6)
    assert looped.without_self_loops() == g7
    # Existing self-loops are kept.
    assert looped.with_self_loops(3.0).weight(1, 1) == 1.0


def test_restricted_to(g7):
    sub = g7.restricted_to([(2, 1), (7, 1)])
    assert sub.n == 7
    assert sub.edge_count == 2
    with pytest.raises(InvalidEdgeError):
        g7.restricted_to([(2, 3)])


def test_equality_and_hash(g7):
    copy = DirectedNetwork(7, {(i, j): w for i, j, w in g7.edges()})
    assert copy == g7
    assert hash(copy) == hash(g7)
    assert copy != g7.restricted_to([])


def test_reachability(g7):
    assert reachable_set(g7, [1]) == frozenset(range(1, 8))
    chain = NetworkBuilder(3).add_arrow(1, 2).add_arrow(2, 3).build()
    assert reachable_set(chain, [2]) == {2, 3}
    assert not is_strongly_connected(chain)
    with pytest.raises(NotStronglyConnectedError, match="not strongly connected: Assumption 1"):
        require_strongly_connected(chain)
    assert strongly_connected_components(chain) == [{1}, {2}, {3}]
    with pytest.raises(ValidationError):
        reachable_set(chain, [])
    with pytest.raises(ValidationError):
        reachable_set(chain, [4])


def test_strongly_connected_components():
    net = NetworkBuilder(4).add_arrow(1, 2).add_arrow(2, 1).add_arrow(2, 3).add_arrow(3, 4).add_arrow(4, 3).build()
    assert strongly_connected_components(net) == [{1, 2}, {3, 4}]


def test_leader_profile():
    profile = LeaderProfile.from_mapping(7, {1: 1.0, 5: 2.0}, 0.3)
    assert profile.delta == (1.0, 0.0, 0.0, 0.0, 2.0, 0.0, 0.0)
    assert profile.leaders == {1, 5}
    assert profile.followers == {2, 3, 4, 6, 7}
    assert not profile.all_leaders
    assert profile.input_value == 0.3
    np.testing.assert_array_equal(profile.input_column(), [1, 0, 0, 0, 2, 0, 0])
    assert profile.as_dict() == {"input": 0.3, "delta": {"1": 1.0, "5": 2.0}}
    assert LeaderProfile((1, 1)).all_leaders


def test_leader_profile_errors(g7):
    with pytest.raises(NoLeaderError):
        LeaderProfile((0.0, 0.0))
    with pytest.raises(ValidationError):
        LeaderProfile((1.0, -1.0))
    with pytest.raises(DimensionMismatchError):
        LeaderProfile.from_mapping(3, {4: 1.0})
    with pytest.raises(DimensionMismatchError):
        unit_leaders(1, n=3).check_compatible(g7)


def test_schedule():
    first, second = unit_leaders(1), unit_leaders(6, u0=0.9)
    schedule = LeaderSchedule((LeaderSegment(0, 50, first), LeaderSegment(50, 100, second)))
    assert schedule.t_start == 0
    assert schedule.t_end == 100
    assert schedule.covers(100)
    assert not schedule.covers(101)
    assert schedule.profile_at(0) is first
    # Segments are half-open, except the last one.
    assert schedule.profile_at(50) is second
    assert schedule.profile_at(100) is second
    assert schedule.segment_index_at(49.9) == 0
    with pytest.raises(ScheduleError):
        schedule.profile_at(100.5)


def test_schedule_errors():
    profile = unit_leaders(1)
    with pytest.raises(ScheduleError):
        LeaderSchedule(())
    with pytest.raises(ScheduleError):
        LeaderSchedule((LeaderSegment(0, 50, profile), LeaderSegment(60, 100, profile)))
    with pytest.raises(ScheduleError):
        LeaderSchedule((LeaderSegment(0, 50, profile), LeaderSegment(40, 100, profile)))
    with pytest.raises(ScheduleError):
        LeaderSchedule((LeaderSegment(10, 10, profile),))
    with pytest.raises(DimensionMismatchError):
        LeaderSchedule((LeaderSegment(0, 50, profile), LeaderSegment(50, 100, unit_leaders(1, n=3))))


@given(n=st.integers(2, 12), p=st.floats(0, 1), seed=st.integers(0, 2**32 - 1))
def test_random_networks_are_strongly_connected(n, p, seed):
    net = random_strongly_connected(n, p, seed)
    assert net.n == n
    assert is_strongly_connected(net)
    assert all(i != j for i, j, _ in net.edges())


def test_random_networks_are_deterministic():
    assert random_strongly_connected(7, 0.3, 1) == random_strongly_connected(7, 0.3, 1)
    assert random_leaders(7, 1) == random_leaders(7, 1)
    assert len(random_leaders(7, 1, count=2).leaders) == 2
    # With no extra edge, only the Hamiltonian cycle remains.
    assert random_strongly_connected(5, 0, 3).edge_count == 5
    assert random_strongly_connected(5, 1, 3).edge_count == 20
    with pytest.raises(ValidationError):
        random_strongly_connected(1, 0.5, 0)
    with pytest.raises(ValidationError):
        random_strongly_connected(4, 1.5, 0)


@given(data=st.data(), n=st.integers(1, 9))
def test_reachability_is_monotone(data, n):
    nodes = st.integers(1, n)
    arrows = data.draw(st.sets(st.tuples(nodes, nodes)))
    net = DirectedNetwork(n, {(dst, src): 1.0 for src, dst in arrows if src != dst})
    small = data.draw(st.sets(nodes, min_size=1))
    large = small | data.draw(st.sets(nodes))
    reached = reachable_set(net, small)
    assert small <= reached
    assert reached <= reachable_set(net, large)
    # Reachable sets are closed under reachability.
    assert reachable_set(net, reached) == reached
