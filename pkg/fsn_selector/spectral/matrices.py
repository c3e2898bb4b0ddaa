from dataclasses import dataclass

import numpy as np

from fsn_selector.errors import ValidationError
from fsn_selector.graph.connectivity import require_strongly_connected
from fsn_selector.graph.network import DirectedNetwork, LeaderProfile


class MissingSelfLoopError(ValidationError):
    """Error raised when a discrete-time network lacks a self-loop."""


@dataclass(frozen=True, eq=False)
class PerturbedLaplacian:
    """L_B = D - W + diag(δ). Row i sums to δ_i."""

    matrix: np.ndarray

    @property
    def n(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True, eq=False)
class PerturbedStochastic:
    """P = (D + diag(δ))^-1 W, with input column q_i = δ_i / (δ_i + d_i). Row i of P sums to 1 - q_i."""

    matrix: np.ndarray
    input_column: np.ndarray

    @property
    def n(self) -> int:
        return self.matrix.shape[0]


def build_perturbed_laplacian(
    net: DirectedNetwork, leaders: LeaderProfile, check_connectivity: bool = True
) -> PerturbedLaplacian:
    """Build L_B for the continuous-time network.

    Self-loops, if any, cancel out in D - W.
    Connectivity check may be disabled for reduced networks, which are generally not strongly connected.
    """
    leaders.check_compatible(net)
    if check_connectivity:
        require_strongly_connected(net)
    w = net.adjacency_matrix()
    laplacian = np.diag(w.sum(axis=1)) - w
    return PerturbedLaplacian(laplacian + np.diag(leaders.input_column()))


def build_perturbed_stochastic(
    net: DirectedNetwork, leaders: LeaderProfile, check_connectivity: bool = True
) -> PerturbedStochastic:
    """Build P and q for the discrete-time network, which must have a self-loop on every node."""
    leaders.check_compatible(net)
    if check_connectivity:
        require_strongly_connected(net)
    missing = [i for i in net.nodes if not net.has_self_loop(i)]
    if missing:
        raise MissingSelfLoopError(
            f"Discrete-time dynamics require a self-loop on every node (missing: {missing}); "
            "add them with `with_self_loops()` or the 'selfloops' header."
        )
    w = net.adjacency_matrix()
    delta = leaders.input_column()
    scale = delta + w.sum(axis=1)
    return PerturbedStochastic(w / scale[:, None], delta / scale)


def augmented_matrix(stochastic: PerturbedStochastic) -> np.ndarray:
    """The matrix H of y(k) = H y(k-1), where y stacks the states and the (single) homogeneous input."""
    n = stochastic.n
    h = np.zeros((n + 1, n + 1))
    h[:n, :n] = stochastic.matrix
    h[:n, n] = stochastic.input_column
    h[n, n] = 1.0
    return h
