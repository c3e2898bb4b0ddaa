from fsn_selector.spectral.matrices import (
    MissingSelfLoopError,
    PerturbedLaplacian,
    PerturbedStochastic,
    augmented_matrix,
    build_perturbed_laplacian,
    build_perturbed_stochastic,
)
from fsn_selector.spectral.modes import Mode, perron_pair, prepare_network, reduced_value
from fsn_selector.spectral.oracle import dense_perron_pair, direction_gap
from fsn_selector.spectral.perron import (
    ConvergenceError,
    PerronPair,
    PositivityError,
    perron_max_stochastic,
    perron_min_laplacian,
    reduced_laplacian_value,
    reduced_stochastic_value,
)

__all__ = [
    "ConvergenceError",
    "MissingSelfLoopError",
    "Mode",
    "PerronPair",
    "PerturbedLaplacian",
    "PerturbedStochastic",
    "PositivityError",
    "augmented_matrix",
    "build_perturbed_laplacian",
    "build_perturbed_stochastic",
    "dense_perron_pair",
    "direction_gap",
    "perron_max_stochastic",
    "perron_min_laplacian",
    "perron_pair",
    "prepare_network",
    "reduced_laplacian_value",
    "reduced_value",
    "reduced_stochastic_value",
]
