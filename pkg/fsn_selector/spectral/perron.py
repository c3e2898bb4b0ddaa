"""
Perron eigenpairs by power iteration.

For the perturbed Laplacian, we iterate on H = βI - L_B with β = max_i [L_B]_ii + 1:
H is non-negative with a positive diagonal, and irreducible when the network is strongly connected,
so the iterates converge to the positive Perron vector, and λ_1(L_B) = β - ρ(H).

The perturbed stochastic matrix P is already non-negative, irreducible and has a positive diagonal,
so plain power iteration on P converges to (λ_n(P), v_n(P)).
"""

import math
from dataclasses import dataclass

import numpy as np

from fsn_selector import param
from fsn_selector.errors import NumericalError
from fsn_selector.graph.connectivity import strongly_connected_components
from fsn_selector.graph.network import DirectedNetwork, LeaderProfile
from fsn_selector.spectral.matrices import (
    PerturbedLaplacian,
    PerturbedStochastic,
    build_perturbed_laplacian,
    build_perturbed_stochastic,
)


class ConvergenceError(NumericalError):
    """Error raised when power iteration exceeds its iteration budget (near-degenerate spectral gap)."""


class PositivityError(NumericalError):
    """Error raised when a converged Perron vector has a non-positive entry (violated precondition)."""


@dataclass(frozen=True, eq=False)
class PerronPair:
    eigenvalue: float
    # Positive, with unit Euclidean norm.
    eigenvector: np.ndarray
    # ‖M v - λ v‖ for the matrix M the pair was computed from.
    residual: float
    iterations: int

    def as_dict(self) -> dict[str, float | int | list[float]]:
        return {
            "eigenvalue": self.eigenvalue,
            "eigenvector": [float(x) for x in self.eigenvector],
            "residual": self.residual,
            "iterations": self.iterations,
        }


def default_max_iter(n: int, tol: float) -> int:
    return min(int(200 * n * math.log(1 / tol)) + 1, param.MAX_ITER_CAP)


def _power_iteration(h: np.ndarray, tol: float, max_iter: int) -> tuple[np.ndarray, float, float, int]:
    """Iterate on the non-negative matrix `h` until two successive unit iterates differ by less than `tol`.

    The residual ‖h x - ρ x‖ is then certified against `tol · max(1, ‖h‖)`,
    whose rounding floor scales with the entries of `h`.

    Return the unit iterate, its Rayleigh quotient ρ, the residual and the number of iterations.
    """
    n = h.shape[0]
    x = np.full(n, 1 / math.sqrt(n))
    step = math.inf
    for iteration in range(1, max_iter + 1):
        y = h @ x
        y /= np.linalg.norm(y)
        step = float(np.linalg.norm(y - x))
        x = y
        if step < tol:
            hx = h @ x
            rho = float(x @ hx)
            residual = float(np.linalg.norm(hx - rho * x))
            bound = tol * max(1.0, float(np.linalg.norm(h)))
            if residual > bound:
                raise ConvergenceError(
                    f"Power iteration stalled after {iteration} iterations: "
                    f"residual {residual:.3g} exceeds {bound:.3g}."
                )
            if param.DEBUG:
                print(f"Power iteration converged after {iteration} iterations (residual {residual:.3g}).")
            return x, rho, residual, iteration
    raise ConvergenceError(
        f"Power iteration did not reach tolerance {tol:g} after {max_iter} iterations "
        f"(last step {step:.3g}); the spectral gap is probably too small."
    )


def _certify_positive(v: np.ndarray) -> None:
    if not np.all(v > 0):
        raise PositivityError(
            f"Perron vector has non-positive entries ({v.min():.3g}); is the network strongly connected?"
        )


def perron_min_laplacian(
    laplacian: PerturbedLaplacian, tol: float = param.DEFAULT_TOL, max_iter: int = None
) -> PerronPair:
    """Compute (λ_1(L_B), v_1(L_B)), the smallest eigenvalue and its positive unit eigenvector."""
    lb = laplacian.matrix
    n = laplacian.n
    if max_iter is None:
        max_iter = default_max_iter(n, tol)
    beta = float(lb.diagonal().max()) + 1
    v, rho, _, iterations = _power_iteration(beta * np.eye(n) - lb, tol, max_iter)
    _certify_positive(v)
    eigenvalue = beta - rho
    residual = float(np.linalg.norm(lb @ v - eigenvalue * v))
    return PerronPair(eigenvalue, v, residual, iterations)


def perron_max_stochastic(
    stochastic: PerturbedStochastic, tol: float = param.DEFAULT_TOL, max_iter: int = None
) -> PerronPair:
    """Compute (λ_n(P), v_n(P)), the largest eigenvalue and its positive unit eigenvector."""
    p = stochastic.matrix
    if max_iter is None:
        max_iter = default_max_iter(stochastic.n, tol)
    v, eigenvalue, residual, iterations = _power_iteration(p, tol, max_iter)
    _certify_positive(v)
    return PerronPair(eigenvalue, v, residual, iterations)


# ------------------------------------
#    Possibly reducible (reduced) networks
# ====================================


def _blocks(net: DirectedNetwork) -> list[np.ndarray]:
    return [np.array(sorted(component)) - 1 for component in strongly_connected_components(net)]


def reduced_laplacian_value(
    net: DirectedNetwork, leaders: LeaderProfile, tol: float = param.DEFAULT_TOL
) -> float:
    """λ_1(L_B) for a network which may not be strongly connected.

    L_B is block triangular along the strongly connected components,
    so its smallest eigenvalue is the smallest Perron value among the diagonal blocks.
    """
    lb = build_perturbed_laplacian(net, leaders, check_connectivity=False).matrix
    values = []
    for index in _blocks(net):
        block = lb[np.ix_(index, index)]
        if len(index) == 1:
            values.append(float(block[0, 0]))
        else:
            values.append(perron_min_laplacian(PerturbedLaplacian(block), tol).eigenvalue)
    return min(values)


def reduced_stochastic_value(
    net: DirectedNetwork, leaders: LeaderProfile, tol: float = param.DEFAULT_TOL
) -> float:
    """λ_n(P) for a network which may not be strongly connected (largest Perron value among blocks)."""
    stochastic = build_perturbed_stochastic(net, leaders, check_connectivity=False)
    p = stochastic.matrix
    values = []
    for index in _blocks(net):
        block = p[np.ix_(index, index)]
        if len(index) == 1:
            values.append(float(block[0, 0]))
        else:
            sub = PerturbedStochastic(block, stochastic.input_column[index])
            values.append(perron_max_stochastic(sub, tol).eigenvalue)
    return max(values)
