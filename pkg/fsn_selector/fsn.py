"""
"Following the slower neighbor" (FSN) reduced networks.

Agent i keeps in-neighbor j if and only if v_i / v_j > 1, where v is the Perron vector
of the perturbed Laplacian (continuous time) or of the perturbed stochastic matrix (discrete time).
Each agent thus keeps only neighbors which are asymptotically slower than itself.

This is the centralized construction (eigenvector in hand), which also serves as the oracle
for the distributed, data-driven construction of `fsn_selector.tempo`.
"""

from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np

from fsn_selector import param
from fsn_selector.errors import TheoremViolationError, ValidationError
from fsn_selector.graph.connectivity import reachable_set
from fsn_selector.graph.network import DirectedNetwork, LeaderProfile
from fsn_selector.spectral import (
    Mode,
    PerronPair,
    build_perturbed_laplacian,
    build_perturbed_stochastic,
    perron_max_stochastic,
    perron_min_laplacian,
    perron_pair,
    reduced_laplacian_value,
    reduced_stochastic_value,
)


@dataclass(frozen=True)
class EdgeDecision:
    receiver: int
    sender: int
    weight: float
    # v_receiver / v_sender
    ratio: float
    kept: bool

    @property
    def margin(self) -> float:
        return self.ratio - 1

    def as_dict(self) -> dict[str, Any]:
        return {"src": self.sender, "dst": self.receiver, "weight": self.weight, "ratio": self.ratio}


@dataclass(frozen=True, eq=False)
class FsnResult:
    original: DirectedNetwork
    reduced: DirectedNetwork
    # One decision per non-self edge of the original network.
    decisions: tuple[EdgeDecision, ...]
    eigenvector: tuple[float, ...]

    @property
    def kept(self) -> tuple[EdgeDecision, ...]:
        return tuple(d for d in self.decisions if d.kept)

    @property
    def removed(self) -> tuple[EdgeDecision, ...]:
        return tuple(d for d in self.decisions if not d.kept)

    @property
    def reduced_neighbor_sets(self) -> dict[int, frozenset[int]]:
        """N_i^FSN for every agent i."""
        return {i: frozenset(self.reduced.in_neighbors(i)) for i in self.reduced.nodes}

    def kept_arrows(self) -> set[tuple[int, int]]:
        """Kept edges as `(src, dst)` arrows."""
        return {(d.sender, d.receiver) for d in self.kept}

    def as_dict(self) -> dict[str, Any]:
        return {
            "eigenvector": list(self.eigenvector),
            "kept": [d.as_dict() for d in self.kept],
            "removed": [d.as_dict() for d in self.removed],
            "reduced_neighbors": {str(i): sorted(js) for i, js in self.reduced_neighbor_sets.items()},
        }


def build_fsn(
    net: DirectedNetwork, v: Sequence[float] | np.ndarray, ratio_tol: float = param.DEFAULT_RATIO_TOL
) -> FsnResult:
    """Keep edge (i, j) if and only if v_i / v_j > 1 + ratio_tol.

    Ties (up to `ratio_tol`) are resolved as "not kept".
    Self-loops are not subject to selection: they are always retained.
    """
    v = np.asarray(v, dtype=float)
    if v.shape != (net.n,):
        raise ValidationError(f"Eigenvector must have {net.n} entries, not {v.shape}.")
    if not np.all(v > 0):
        raise ValidationError(f"Eigenvector entries must be strictly positive: {v}.")
    decisions = []
    kept_edges = []
    for i, j, w in net.edges():
        if i == j:
            kept_edges.append((i, i))
            continue
        ratio = float(v[i - 1] / v[j - 1])
        kept = ratio > 1 + ratio_tol
        decisions.append(EdgeDecision(i, j, w, ratio, kept))
        if kept:
            kept_edges.append((i, j))
    return FsnResult(net, net.restricted_to(kept_edges), tuple(decisions), tuple(float(x) for x in v))


def centralized_fsn(
    net: DirectedNetwork,
    leaders: LeaderProfile,
    mode: Mode,
    tol: float = param.DEFAULT_TOL,
    ratio_tol: float = param.DEFAULT_RATIO_TOL,
) -> tuple[PerronPair, FsnResult]:
    """Compute the Perron pair of the given mode, then the corresponding FSN network."""
    pair = perron_pair(net, leaders, mode, tol)
    return pair, build_fsn(net, pair.eigenvector, ratio_tol)


@dataclass(frozen=True)
class ReachabilityVerdict:
    reachable: bool
    # Witness: agents not reachable from any leader.
    unreachable: frozenset[int]

    def __bool__(self) -> bool:
        return self.reachable


def verify_lf_reachability(fsn: FsnResult, leaders: LeaderProfile) -> ReachabilityVerdict:
    """Test if every agent is reachable from some leader in the reduced network."""
    leaders.check_compatible(fsn.reduced)
    unreachable = frozenset(fsn.reduced.nodes) - reachable_set(fsn.reduced, leaders.leaders)
    return ReachabilityVerdict(not unreachable, unreachable)


@dataclass(frozen=True)
class RateReport:
    mode: Mode
    lambda_orig: float
    lambda_fsn: float
    improved: bool

    def as_dict(self) -> dict[str, Any]:
        return {
            "mode": str(self.mode),
            "lambda_orig": self.lambda_orig,
            "lambda_fsn": self.lambda_fsn,
            "improved": self.improved,
        }


def rate_report_clfn(
    net: DirectedNetwork, leaders: LeaderProfile, fsn: FsnResult, tol: float = param.DEFAULT_TOL
) -> RateReport:
    """Compare λ_1(L_B) on the original and on the FSN network; it never decreases."""
    lambda_orig = perron_min_laplacian(build_perturbed_laplacian(net, leaders), tol).eigenvalue
    lambda_fsn = reduced_laplacian_value(fsn.reduced, leaders, tol)
    if lambda_fsn < lambda_orig - param.RATE_TOLERANCE:
        raise TheoremViolationError(
            f"Convergence rate decreased on the FSN network: λ_1 {lambda_orig!r} -> {lambda_fsn!r}."
        )
    improved = lambda_fsn > lambda_orig + param.RATE_TOLERANCE
    return RateReport(Mode.CONTINUOUS, lambda_orig, lambda_fsn, improved)


def rate_report_dlfn(
    net: DirectedNetwork, leaders: LeaderProfile, fsn: FsnResult, tol: float = param.DEFAULT_TOL
) -> RateReport:
    """Compare λ_n(P) on the original and on the FSN network; it strictly decreases when n ≥ 2."""
    lambda_orig = perron_max_stochastic(build_perturbed_stochastic(net, leaders), tol).eigenvalue
    lambda_fsn = reduced_stochastic_value(fsn.reduced, leaders, tol)
    improved = lambda_fsn < lambda_orig
    # A single agent has no removable edge, so the FSN network is the original one.
    if net.n >= 2 and not improved:
        raise TheoremViolationError(
            f"Convergence rate did not improve on the FSN network: λ_n {lambda_orig!r} -> {lambda_fsn!r}."
        )
    return RateReport(Mode.DISCRETE, lambda_orig, lambda_fsn, improved)


def rate_report(
    net: DirectedNetwork, leaders: LeaderProfile, fsn: FsnResult, mode: Mode, tol: float = param.DEFAULT_TOL
) -> RateReport:
    match mode:
        case Mode.CONTINUOUS:
            return rate_report_clfn(net, leaders, fsn, tol)
        case Mode.DISCRETE:
            return rate_report_dlfn(net, leaders, fsn, tol)
        case _:
            raise NotImplementedError(mode)


def single_leader_minimum(v: Sequence[float] | np.ndarray, leaders: LeaderProfile) -> bool:
    """With exactly one leader, test that the leader holds the unique minimal Perron vector entry."""
    (leader,) = leaders.leaders
    v = np.asarray(v, dtype=float)
    others = np.delete(v, leader - 1)
    return bool(others.size == 0 or v[leader - 1] < others.min())
