"""
Directed spanning trees extracted from a single-leader FSN network.

Every agent with several FSN in-neighbors keeps exactly one of them, chosen arbitrarily.
Since the leader is then the only agent without in-neighbor, and every agent is reachable
from it, the result is a directed spanning tree rooted at the leader.
"""

from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Any, Mapping

import networkx as nx
import numpy as np

from fsn_selector import param
from fsn_selector.errors import TheoremViolationError, ValidationError
from fsn_selector.fsn import FsnResult
from fsn_selector.graph.connectivity import reachable_set
from fsn_selector.graph.io import NetworkFormatError, format_network, parse_network
from fsn_selector.graph.network import DirectedNetwork, Edge, LeaderProfile
from fsn_selector.spectral import reduced_laplacian_value


class MultipleLeadersError(ValidationError):
    """Error raised when a spanning tree is requested for more than one leader."""


class EmptyNeighborhoodError(ValidationError):
    """Error raised when a follower has no in-neighbor left in the FSN network."""


class TieBreak(Enum):
    SMALLEST_INDEX = "smallest-index"
    SEEDED_RANDOM = "seeded-random"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True, eq=False)
class SpanningTreeResult:
    tree: DirectedNetwork
    root: int
    # The in-neighbor j* kept by every non-root agent.
    chosen: dict[int, int]
    removed: tuple[Edge, ...]
    # λ_1(L_B) of the tree, for information only: it may be smaller than the FSN network's one.
    lambda_tree: float

    def as_dict(self) -> dict[str, Any]:
        return {
            "root": self.root,
            "edges": [{"src": j, "dst": i} for i, j in sorted(self.chosen.items())],
            "removed": [{"src": j, "dst": i} for i, j in self.removed],
            "lambda_tree": self.lambda_tree,
        }


def build_spanning_tree(
    fsn: FsnResult,
    leaders: LeaderProfile,
    policy: TieBreak = TieBreak.SMALLEST_INDEX,
    seed: int = param.DEFAULT_SEED,
    choices: Mapping[int, int] = None,
) -> SpanningTreeResult:
    """Keep a single in-neighbor per agent of the FSN network.

    `choices` overrides the policy for some agents: `{i: j}` keeps edge j -> i.
    """
    reduced = fsn.reduced
    leaders.check_compatible(reduced)
    if len(leaders.leaders) != 1:
        raise MultipleLeadersError(
            f"A spanning tree requires exactly one leader, not {sorted(leaders.leaders)}."
        )
    (root,) = leaders.leaders
    if reduced.in_neighbors(root):
        raise TheoremViolationError(
            f"Leader {root} should have no in-neighbor in the FSN network, "
            f"but it keeps {list(reduced.in_neighbors(root))}."
        )
    choices = dict(choices or {})
    for i, j in choices.items():
        if i == root or not 1 <= i <= reduced.n or j not in reduced.in_neighbors(i):
            raise ValidationError(f"Invalid choice {j}->{i}: not an FSN edge toward a follower.")
    rng = np.random.default_rng(seed)
    chosen: dict[int, int] = {}
    removed: list[Edge] = []
    for i in reduced.nodes:
        if i == root:
            continue
        neighbors = reduced.in_neighbors(i)
        if not neighbors:
            raise EmptyNeighborhoodError(
                f"Agent {i} has no in-neighbor in the FSN network, so it can't be reached from the leader."
            )
        if i in choices:
            j = choices[i]
        elif policy is TieBreak.SEEDED_RANDOM and len(neighbors) > 1:
            j = neighbors[int(rng.integers(len(neighbors)))]
        else:
            j = neighbors[0]
        chosen[i] = j
        removed.extend((i, k) for k in neighbors if k != j)
    tree = DirectedNetwork(reduced.n, {(i, j): reduced.weight(i, j) for i, j in chosen.items()})
    return SpanningTreeResult(tree, root, chosen, tuple(removed), reduced_laplacian_value(tree, leaders))


@dataclass(frozen=True)
class TreeVerdict:
    violations: tuple[str, ...]

    @property
    def valid(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.valid


def verify_spanning_tree(result: SpanningTreeResult, n: int) -> TreeVerdict:
    """Check independently the in-degrees, the edge count, acyclicity and reachability from the root."""
    tree = result.tree
    violations = []
    if tree.n != n:
        return TreeVerdict((f"node count: {tree.n} instead of {n}",))
    in_edges = {i: 0 for i in tree.nodes}
    for i, _, _ in tree.edges():
        in_edges[i] += 1
    for i, count in in_edges.items():
        expected = 0 if i == result.root else 1
        if count != expected:
            violations.append(f"degree: node {i} has {count} in-neighbors instead of {expected}")
    if tree.edge_count != n - 1:
        violations.append(f"edge count: {tree.edge_count} instead of {n - 1}")
    if not nx.is_directed_acyclic_graph(tree.to_networkx()):
        violations.append("self-loop/cycle")
    unreachable = frozenset(tree.nodes) - reachable_set(tree, [result.root])
    if unreachable:
        violations.append(f"reachability: nodes {sorted(unreachable)} not reachable from root {result.root}")
    return TreeVerdict(tuple(violations))


def save_tree(result: SpanningTreeResult, path: Path | str) -> Path:
    path = Path(path)
    path.write_text(format_network(result.tree, root=result.root), encoding="utf8")
    return path


def load_tree(path: Path | str) -> tuple[DirectedNetwork, int]:
    """Load a tree saved with `save_tree`, returning it with its root."""
    tree, headers = parse_network(Path(path).read_text(encoding="utf8"))
    if "root" not in headers:
        raise NetworkFormatError("missing 'root' header.")
    return tree, int(headers["root"])
