from fsn_selector import param
from fsn_selector.graph.connectivity import (
    NotStronglyConnectedError,
    is_strongly_connected,
    reachable_set,
    require_strongly_connected,
    strongly_connected_components,
)
from fsn_selector.graph.generator import random_leaders, random_strongly_connected
from fsn_selector.graph.io import load_leaders, load_network, load_schedule, save_network
from fsn_selector.graph.network import (
    DirectedNetwork,
    Edge,
    LeaderProfile,
    LeaderSchedule,
    LeaderSegment,
    NetworkBuilder,
)


def g7_network() -> DirectedNetwork:
    """The 7-agent strongly connected network shipped with the package."""
    return load_network(param.G7_NETWORK_PATH)


def g7_leaders() -> LeaderProfile:
    """Leaders {1, 5} of the shipped G7 network, input 0.1."""
    return load_leaders(param.G7_LEADERS_PATH, 7)


__all__ = [
    "DirectedNetwork",
    "Edge",
    "LeaderProfile",
    "LeaderSchedule",
    "LeaderSegment",
    "NetworkBuilder",
    "NotStronglyConnectedError",
    "g7_leaders",
    "g7_network",
    "is_strongly_connected",
    "load_leaders",
    "load_network",
    "load_schedule",
    "random_leaders",
    "random_strongly_connected",
    "reachable_set",
    "require_strongly_connected",
    "save_network",
    "strongly_connected_components",
]
