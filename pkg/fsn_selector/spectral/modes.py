from enum import Enum

from fsn_selector import param
from fsn_selector.graph.network import DirectedNetwork, LeaderProfile
from fsn_selector.spectral.matrices import (
    MissingSelfLoopError,
    build_perturbed_laplacian,
    build_perturbed_stochastic,
)
from fsn_selector.spectral.perron import (
    PerronPair,
    perron_max_stochastic,
    perron_min_laplacian,
    reduced_laplacian_value,
    reduced_stochastic_value,
)


class Mode(Enum):
    CONTINUOUS = "continuous"
    DISCRETE = "discrete"

    def __str__(self) -> str:
        return self.value


def prepare_network(net: DirectedNetwork, mode: Mode, self_loop_weight: float = 0.0) -> DirectedNetwork:
    """Apply the self-loop policy of the given mode.

    In discrete mode, missing self-loops are added with `self_loop_weight` if it is positive,
    else they are required.
    """
    if mode is Mode.DISCRETE and not net.has_all_self_loops():
        if self_loop_weight <= 0:
            raise MissingSelfLoopError(
                "Discrete mode requires a self-loop on every node: "
                "use a 'selfloops' header or an automatic self-loop weight."
            )
        return net.with_self_loops(self_loop_weight)
    return net


def perron_pair(
    net: DirectedNetwork, leaders: LeaderProfile, mode: Mode, tol: float = param.DEFAULT_TOL
) -> PerronPair:
    """v_1(L_B) in continuous mode, v_n(P) in discrete mode."""
    match mode:
        case Mode.CONTINUOUS:
            return perron_min_laplacian(build_perturbed_laplacian(net, leaders), tol)
        case Mode.DISCRETE:
            return perron_max_stochastic(build_perturbed_stochastic(net, leaders), tol)
        case _:
            raise NotImplementedError(mode)


def reduced_value(
    net: DirectedNetwork, leaders: LeaderProfile, mode: Mode, tol: float = param.DEFAULT_TOL
) -> float:
    match mode:
        case Mode.CONTINUOUS:
            return reduced_laplacian_value(net, leaders, tol)
        case Mode.DISCRETE:
            return reduced_stochastic_value(net, leaders, tol)
        case _:
            raise NotImplementedError(mode)
