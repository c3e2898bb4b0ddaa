import numpy as np
import pytest

from fsn_selector import param
from fsn_selector.dynamics import switching_scenario
from fsn_selector.errors import ValidationError
from fsn_selector.graph import (
    DirectedNetwork,
    LeaderProfile,
    NetworkBuilder,
    load_schedule,
    random_strongly_connected,
)
from fsn_selector.graph.io import (
    NetworkFormatError,
    format_leaders,
    format_network,
    format_schedule,
    load_leaders,
    load_network,
    parse_leader_spec,
    parse_leaders,
    parse_network,
    parse_schedule,
    save_leaders,
    save_network,
    save_schedule,
)
from fsn_selector.graph.network import DimensionMismatchError, NoLeaderError


def test_parse_network():
    text = """
    # A small cycle.
    nodes 3
    1 2
    2 3 2.5  # heavier
    3 1 1.0
    """
    net, headers = parse_network(text)
    assert headers == {}
    assert net.n == 3
    assert net.weight(2, 1) == 1.0
    assert net.weight(3, 2) == 2.5
    assert net.weight(1, 3) == 1.0
    assert not net.allow_self_loops


def test_parse_network_headers():
    net, headers = parse_network("nodes 2\nselfloops 0.5\nroot 1\n1 2\n2 1\n")
    assert headers == {"selfloops": 0.5, "root": 1}
    assert net.has_all_self_loops()
    assert net.weight(1, 1) == 0.5
    # A zero weight only flags the network, explicit self-loops are then allowed.
    net, _ = parse_network("nodes 2\nselfloops 0\n1 2\n2 1\n2 2 3.0\n")
    assert net.allow_self_loops
    assert net.has_self_loop(2)
    assert not net.has_self_loop(1)


@pytest.mark.parametrize(
    "text, line",
    [
        ("1 2\n", 1),
        ("nodes 3\n1 2\n1 x\n", 3),
        ("nodes 3\n1 4\n", 2),
        ("nodes 3\n1 2 -1\n", 2),
        ("nodes 3\n1 2\n1 2\n", 3),
        ("nodes 3\n1 1\n", 2),
        ("nodes 3\nnodes 4\n", 2),
        ("nodes 0\n", 1),
        ("nodes 3\n1 2 3 4\n", 2),
        ("nodes 3\nselfloops -1\n", 2),
    ],
)
def test_parse_network_errors(text, line):
    with pytest.raises(NetworkFormatError) as exc_info:
        parse_network(text)
    assert exc_info.value.line == line
    assert str(exc_info.value).startswith(f"line {line}:")


def test_missing_nodes_header():
    with pytest.raises(NetworkFormatError, match="missing 'nodes' header"):
        parse_network("# nothing\n")


def test_format_network(g7, g7_discrete):
    assert parse_network(format_network(g7))[0] == g7
    assert parse_network(format_network(g7_discrete))[0] == g7_discrete
    assert "selfloops 1.0" in format_network(g7_discrete)
    text = format_network(g7, root=1)
    assert text.startswith("nodes 7\nroot 1\n1 2 1.0\n")
    assert parse_network(text)[1] == {"root": 1}
    # Non uniform self-loops are written one by one.
    net = NetworkBuilder(2, allow_self_loops=True).add_arrow(1, 2).add_arrow(2, 1).add_arrow(1, 1, 2.0).build()
    assert parse_network(format_network(net))[0] == net


def test_save_and_load_network(g7, tmp_path):
    path = save_network(g7, tmp_path / "g7.edges")
    assert load_network(path) == g7
    assert load_network(param.G7_NETWORK_PATH) == g7


def test_leaders(tmp_path):
    profile = parse_leaders("input 0.3\n1 1.0\n5 2\n", 7)
    assert profile == LeaderProfile.from_mapping(7, {1: 1.0, 5: 2.0}, 0.3)
    assert parse_leaders(format_leaders(profile), 7) == profile
    assert load_leaders(save_leaders(profile, tmp_path / "g.leaders"), 7) == profile
    assert load_leaders(param.G7_LEADERS_PATH, 7).leaders == {1, 5}
    with pytest.raises(NetworkFormatError):
        parse_leaders("1 1\n1 2\n", 7)
    with pytest.raises(NoLeaderError):
        parse_leaders("input 0.3\n", 7)
    with pytest.raises(DimensionMismatchError):
        parse_leaders("8 1\n", 7)


def test_leader_spec():
    assert parse_leader_spec("1:1,5:1", 7) == LeaderProfile.from_mapping(7, {1: 1.0, 5: 1.0})
    assert parse_leader_spec("2, 7", 7, 0.9) == LeaderProfile.from_mapping(7, {2: 1.0, 7: 1.0}, 0.9)
    assert parse_leader_spec("3:0.5", 4).delta == (0.0, 0.0, 0.5, 0.0)
    with pytest.raises(ValidationError):
        parse_leader_spec("a:1", 7)
    with pytest.raises(ValidationError):
        parse_leader_spec("", 7)


def test_schedule_file(tmp_path):
    schedule = load_schedule(param.SWITCHING_SCHEDULE_PATH, 7)
    assert schedule == switching_scenario()
    assert parse_schedule(format_schedule(schedule), 7) == schedule
    assert load_schedule(save_schedule(schedule, tmp_path / "s.schedule"), 7) == schedule
    with pytest.raises(NetworkFormatError) as exc_info:
        parse_schedule("0 50 0.1 1:1\n50 100 0.9\n", 7)
    assert exc_info.value.line == 2
    with pytest.raises(NetworkFormatError):
        parse_schedule("0 50 0.1 9:1\n", 7)
    with pytest.raises(ValidationError):
        parse_schedule("0 50 0.1 1:1\n60 100 0.1 1:1\n", 7)


@pytest.mark.parametrize("seed", range(200))
def test_random_networks_round_trip(seed, tmp_path):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 13))
    net = random_strongly_connected(n, float(rng.uniform(0, 1)), seed)
    # Arbitrary positive weights must survive the text format.
    net = DirectedNetwork(n, {(i, j): float(rng.uniform(0.01, 1e3)) for i, j, _ in net.edges()})
    if seed % 2:
        net = net.with_self_loops(float(rng.uniform(0.1, 10)))
    assert load_network(save_network(net, tmp_path / "random.edges")) == net
