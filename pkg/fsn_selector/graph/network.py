"""
Data model of leader-follower networks.

Orientation convention:
- internally, an edge is stored as `(i, j)` meaning "agent i listens to agent j" (j ∈ N_i),
  because every formula sums over in-neighbors;
- information flows from the sender `j` to the receiver `i`, which is how edge files are
  written ("src dst weight").

Node ids are 1-based.
"""

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping
try:
    from typing import Self
except ImportError:  # Python < 3.11
    from typing_extensions import Self

import networkx as nx
import numpy as np

from fsn_selector.errors import ValidationError

# (receiver, sender)
Edge = tuple[int, int]


class DimensionMismatchError(ValidationError):
    """Error raised when a vector or profile does not match the number of nodes."""


class NoLeaderError(ValidationError):
    """Error raised when a leader profile has no leader."""


class InvalidEdgeError(ValidationError):
    """Error raised when an edge is malformed (bad node id, weight or duplicate)."""


class DirectedNetwork:
    """An immutable weighted directed network.

    Use `NetworkBuilder` to construct one edge after the other.
    """

    __slots__ = ("_n", "_weights", "_allow_self_loops", "_in_neighbors")

    def __init__(self, n: int, weights: Mapping[Edge, float] = None, allow_self_loops: bool = False):
        if not isinstance(n, int) or n < 1:
            raise ValidationError(f"Number of nodes must be a positive integer, not {n!r}.")
        weights = dict(weights or {})
        for (i, j), w in weights.items():
            _check_edge(n, i, j, w, allow_self_loops)
        self._n = n
        self._allow_self_loops = allow_self_loops
        self._weights: dict[Edge, float] = {edge: float(weights[edge]) for edge in sorted(weights)}
        in_neighbors: dict[int, list[int]] = {i: [] for i in range(1, n + 1)}
        for i, j in self._weights:
            if i != j:
                in_neighbors[i].append(j)
        self._in_neighbors = {i: tuple(sorted(js)) for i, js in in_neighbors.items()}

    # ---------------------
    #      Accessors
    # =====================

    @property
    def n(self) -> int:
        return self._n

    @property
    def nodes(self) -> range:
        return range(1, self._n + 1)

    @property
    def allow_self_loops(self) -> bool:
        """True if the network is flagged for discrete-time use."""
        return self._allow_self_loops

    @property
    def edge_count(self) -> int:
        return len(self._weights)

    def edges(self) -> Iterator[tuple[int, int, float]]:
        """Iterate over `(receiver, sender, weight)` triples, self-loops included, in sorted order."""
        for (i, j), w in self._weights.items():
            yield i, j, w

    def has_edge(self, i: int, j: int) -> bool:
        return (i, j) in self._weights

    def weight(self, i: int, j: int) -> float:
        """Weight w_ij, or 0 if agent i does not listen to agent j."""
        return self._weights.get((i, j), 0.0)

    def in_neighbors(self, i: int) -> tuple[int, ...]:
        """The in-neighbor set N_i, self excluded."""
        return self._in_neighbors[i]

    def in_degree(self, i: int) -> float:
        """d_i = Σ_{j ∈ N_i} w_ij, including the self-loop weight w_ii if any."""
        return sum(w for (r, _), w in self._weights.items() if r == i)

    def has_self_loop(self, i: int) -> bool:
        return (i, i) in self._weights

    def has_all_self_loops(self) -> bool:
        return all(self.has_self_loop(i) for i in self.nodes)

    # ---------------------
    #      Conversions
    # =====================

    def adjacency_matrix(self) -> np.ndarray:
        """Dense matrix W with W[i-1, j-1] = w_ij."""
        w = np.zeros((self._n, self._n))
        for (i, j), weight in self._weights.items():
            w[i - 1, j - 1] = weight
        return w

    def to_networkx(self) -> nx.DiGraph:
        """Graph oriented along the information flow (sender -> receiver)."""
        graph = nx.DiGraph()
        graph.add_nodes_from(self.nodes)
        graph.add_weighted_edges_from((j, i, w) for (i, j), w in self._weights.items())
        return graph

    # ---------------------
    #   Derived networks
    # =====================

    def with_self_loops(self, weight: float = 1.0) -> Self:
        """Return a copy flagged for discrete-time use, adding a self-loop wherever one is missing."""
        weights = dict(self._weights)
        for i in self.nodes:
            weights.setdefault((i, i), weight)
        return type(self)(self._n, weights, allow_self_loops=True)

    def without_self_loops(self) -> Self:
        weights = {(i, j): w for (i, j), w in self._weights.items() if i != j}
        return type(self)(self._n, weights)

    def restricted_to(self, kept: Iterable[Edge]) -> Self:
        """Return the sub-network keeping only the given edges (same node set, same flag)."""
        kept = set(kept)
        unknown = kept - self._weights.keys()
        if unknown:
            raise InvalidEdgeError(f"Edges not in the network: {sorted(unknown)}.")
        weights = {edge: w for edge, w in self._weights.items() if edge in kept}
        return type(self)(self._n, weights, allow_self_loops=self._allow_self_loops)

    # ---------------------
    #     Special methods
    # =====================

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DirectedNetwork):
            return NotImplemented
        return (
            self._n == other._n
            and self._allow_self_loops == other._allow_self_loops
            and self._weights == other._weights
        )

    def __hash__(self) -> int:
        return hash((self._n, self._allow_self_loops, tuple(self._weights.items())))

    def __repr__(self) -> str:
        arrows = ", ".join(f"{j}->{i}" for (i, j) in self._weights)
        return f"DirectedNetwork(n={self._n}, edges=[{arrows}])"


def _check_edge(n: int, i: int, j: int, w: float, allow_self_loops: bool) -> None:
    for node in (i, j):
        if not isinstance(node, int) or not 1 <= node <= n:
            raise InvalidEdgeError(f"Invalid node id {node!r} (valid ids: 1..{n}).")
    if not w > 0:
        raise InvalidEdgeError(f"Weight of edge {j}->{i} must be strictly positive, not {w!r}.")
    if i == j and not allow_self_loops:
        raise InvalidEdgeError(f"Self-loop on node {i} requires a network flagged for discrete-time use.")


class NetworkBuilder:
    """Mutable companion of `DirectedNetwork`."""

    def __init__(self, n: int, allow_self_loops: bool = False):
        self.n = n
        self.allow_self_loops = allow_self_loops
        self._weights: dict[Edge, float] = {}

    def add_arrow(self, src: int, dst: int, weight: float = 1.0) -> Self:
        """Add the arrow `src -> dst`, i.e. `dst` listens to `src`."""
        return self.add_edge(dst, src, weight)

    def add_edge(self, i: int, j: int, weight: float = 1.0) -> Self:
        """Add edge (i, j): agent `i` listens to agent `j`."""
        if (i, j) in self._weights:
            raise InvalidEdgeError(f"Duplicate edge {j}->{i}.")
        _check_edge(self.n, i, j, weight, self.allow_self_loops)
        self._weights[(i, j)] = float(weight)
        return self

    def build(self) -> DirectedNetwork:
        return DirectedNetwork(self.n, self._weights, allow_self_loops=self.allow_self_loops)


@dataclass(frozen=True)
class LeaderProfile:
    """Influence weights δ_i ≥ 0 of the (homogeneous) external input u_0."""

    delta: tuple[float, ...]
    input_value: float = 0.1

    def __post_init__(self) -> None:
        object.__setattr__(self, "delta", tuple(float(d) for d in self.delta))
        if any(not d >= 0 for d in self.delta):
            raise ValidationError(f"Influence weights must be non-negative: {self.delta}.")
        if not any(d > 0 for d in self.delta):
            raise NoLeaderError("At least one agent must be a leader (δ_i > 0).")

    @classmethod
    def from_mapping(cls, n: int, deltas: Mapping[int, float], input_value: float = 0.1) -> Self:
        """Build a profile from `{leader: δ}`; unlisted agents are followers."""
        for node in deltas:
            if not 1 <= node <= n:
                raise DimensionMismatchError(f"Leader {node} is not a node of a {n}-node network.")
        return cls(tuple(deltas.get(i, 0.0) for i in range(1, n + 1)), input_value)

    @property
    def n(self) -> int:
        return len(self.delta)

    @property
    def leaders(self) -> frozenset[int]:
        return frozenset(i for i, d in enumerate(self.delta, start=1) if d > 0)

    @property
    def followers(self) -> frozenset[int]:
        return frozenset(i for i, d in enumerate(self.delta, start=1) if d == 0)

    @property
    def all_leaders(self) -> bool:
        return not self.followers

    def input_column(self) -> np.ndarray:
        """The input matrix B, reduced to one column since inputs are homogeneous."""
        return np.array(self.delta)

    def check_compatible(self, net: DirectedNetwork) -> None:
        if self.n != net.n:
            raise DimensionMismatchError(
                f"Leader profile has {self.n} entries but the network has {net.n} nodes."
            )

    def as_dict(self) -> dict[str, float | dict[str, float]]:
        return {"input": self.input_value, "delta": {str(i): self.delta[i - 1] for i in sorted(self.leaders)}}


class ScheduleError(ValidationError):
    """Error raised when a leader schedule is unsorted, overlapping or has gaps."""


@dataclass(frozen=True)
class LeaderSegment:
    t_start: float
    t_end: float
    profile: LeaderProfile


@dataclass(frozen=True)
class LeaderSchedule:
    """Piecewise-constant leader profiles covering a contiguous time interval."""

    segments: tuple[LeaderSegment, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "segments", tuple(self.segments))
        if not self.segments:
            raise ScheduleError("A schedule needs at least one segment.")
        n = self.segments[0].profile.n
        previous_end = None
        for segment in self.segments:
            if not segment.t_end > segment.t_start:
                raise ScheduleError(f"Empty segment [{segment.t_start}, {segment.t_end}].")
            if previous_end is not None and segment.t_start != previous_end:
                raise ScheduleError(f"Gap or overlap at t={segment.t_start} (previous end: {previous_end}).")
            if segment.profile.n != n:
                raise DimensionMismatchError("All schedule segments must have the same number of agents.")
            previous_end = segment.t_end

    @classmethod
    def constant(cls, profile: LeaderProfile, t_end: float, t_start: float = 0.0) -> Self:
        return cls((LeaderSegment(t_start, t_end, profile),))

    @property
    def t_start(self) -> float:
        return self.segments[0].t_start

    @property
    def t_end(self) -> float:
        return self.segments[-1].t_end

    def covers(self, t_end: float, t_start: float = 0.0) -> bool:
        return self.t_start <= t_start and t_end <= self.t_end

    def segment_index_at(self, t: float) -> int:
        """Index of the segment in effect at time `t` (segments are half-open, the last one closed)."""
        if not self.t_start <= t <= self.t_end:
            raise ScheduleError(f"Time {t} is outside the schedule [{self.t_start}, {self.t_end}].")
        for index, segment in enumerate(self.segments):
            if t < segment.t_end:
                return index
        return len(self.segments) - 1

    def profile_at(self, t: float) -> LeaderProfile:
        return self.segments[self.segment_index_at(t)].profile
