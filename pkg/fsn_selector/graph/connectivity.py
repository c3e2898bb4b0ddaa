from typing import Iterable

import networkx as nx

from fsn_selector.errors import ValidationError
from fsn_selector.graph.network import DirectedNetwork


class NotStronglyConnectedError(ValidationError):
    """Error raised when a network is required to be strongly connected."""


def is_strongly_connected(net: DirectedNetwork) -> bool:
    """Test if every ordered pair of nodes is mutually reachable."""
    return nx.is_strongly_connected(net.to_networkx())


def require_strongly_connected(net: DirectedNetwork) -> None:
    if not is_strongly_connected(net):
        raise NotStronglyConnectedError(
            "not strongly connected: Assumption 1 violated, some agent cannot be reached from another."
        )


def reachable_set(net: DirectedNetwork, sources: Iterable[int]) -> frozenset[int]:
    """All nodes reachable along the information flow from some source, sources included."""
    sources = frozenset(sources)
    if not sources:
        raise ValidationError("At least one source node is required.")
    for node in sources:
        if not 1 <= node <= net.n:
            raise ValidationError(f"Invalid node id {node!r} (valid ids: 1..{net.n}).")
    graph = net.to_networkx()
    reached = set(sources)
    for node in sources:
        reached |= nx.descendants(graph, node)
    return frozenset(reached)


def strongly_connected_components(net: DirectedNetwork) -> list[frozenset[int]]:
    """Strongly connected components, sorted by their smallest node."""
    components = nx.strongly_connected_components(net.to_networkx())
    return sorted((frozenset(c) for c in components), key=min)
