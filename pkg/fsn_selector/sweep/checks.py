"""
Property checks on one random instance.

Each instance is a random strongly connected network with random leaders, fully determined by its seed.
"""

from dataclasses import dataclass
from typing import Any

import numpy as np

from fsn_selector.errors import NumericalError
from fsn_selector.fsn import centralized_fsn, rate_report, single_leader_minimum, verify_lf_reachability
from fsn_selector.graph import DirectedNetwork, LeaderProfile, random_leaders, random_strongly_connected
from fsn_selector.spantree import TieBreak, build_spanning_tree, verify_spanning_tree
from fsn_selector.spectral import (
    Mode,
    PerronPair,
    build_perturbed_laplacian,
    build_perturbed_stochastic,
    dense_perron_pair,
    direction_gap,
)

DEFAULT_MAX_NODES = 10
DEFAULT_EXTRA_EDGE_PROB = 0.3
# The dense oracle is only consulted on small instances.
ORACLE_MAX_NODES = 8
ORACLE_EIGENVALUE_TOL = 1e-8
ORACLE_DIRECTION_TOL = 1e-6


@dataclass(frozen=True)
class InstanceReport:
    seed: int
    mode: Mode
    n: int
    leaders: tuple[int, ...]
    failures: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.failures

    def as_dict(self) -> dict[str, Any]:
        return {
            "seed": self.seed,
            "mode": str(self.mode),
            "n": self.n,
            "leaders": list(self.leaders),
            "failures": list(self.failures),
        }


def _oracle_failures(
    net: DirectedNetwork, leaders: LeaderProfile, mode: Mode, pair: PerronPair
) -> list[str]:
    if mode is Mode.CONTINUOUS:
        dense = dense_perron_pair(build_perturbed_laplacian(net, leaders).matrix, "min")
    else:
        dense = dense_perron_pair(build_perturbed_stochastic(net, leaders).matrix, "max")
    failures = []
    if abs(dense.eigenvalue - pair.eigenvalue) > ORACLE_EIGENVALUE_TOL:
        failures.append(f"oracle: eigenvalue {pair.eigenvalue!r} instead of {dense.eigenvalue!r}")
    if direction_gap(dense.eigenvector, pair.eigenvector) > ORACLE_DIRECTION_TOL:
        failures.append("oracle: eigenvector direction mismatch")
    return failures


def _bound_failures(pair: PerronPair, mode: Mode) -> list[str]:
    """λ_1(L_B) > 0 in continuous time, 0 < λ_n(P) < 1 in discrete time."""
    if mode is Mode.CONTINUOUS and not pair.eigenvalue > 0:
        return [f"bounds: λ_1(L_B) = {pair.eigenvalue!r} is not positive"]
    if mode is Mode.DISCRETE and not 0 < pair.eigenvalue < 1:
        return [f"bounds: λ_n(P) = {pair.eigenvalue!r} is not in (0, 1)"]
    return []


def check_instance(
    seed: int,
    mode: Mode,
    n_max: int = DEFAULT_MAX_NODES,
    extra_edge_prob: float = DEFAULT_EXTRA_EDGE_PROB,
) -> InstanceReport:
    """Check spectral bounds, reachability, rates, leader minimum, spanning trees and the oracle."""
    n = int(np.random.default_rng(seed).integers(2, n_max + 1))
    net = random_strongly_connected(n, extra_edge_prob, seed)
    if mode is Mode.DISCRETE:
        net = net.with_self_loops()
    leaders = random_leaders(n, seed)
    failures: list[str] = []
    try:
        pair, fsn = centralized_fsn(net, leaders, mode)
        failures.extend(_bound_failures(pair, mode))
        verdict = verify_lf_reachability(fsn, leaders)
        if not verdict:
            failures.append(f"reachability: agents {sorted(verdict.unreachable)} unreachable from leaders")
        if leaders.followers and not fsn.removed:
            failures.append("no edge removed although followers exist")
        report = rate_report(net, leaders, fsn, mode)
        if leaders.followers and not report.improved:
            failures.append(f"convergence rate not improved: {report.lambda_orig!r} -> {report.lambda_fsn!r}")
        if n <= ORACLE_MAX_NODES:
            failures.extend(_oracle_failures(net, leaders, mode, pair))
        single = random_leaders(n, seed, count=1)
        single_pair, single_fsn = centralized_fsn(net, single, mode)
        if not single_leader_minimum(single_pair.eigenvector, single):
            failures.append("single leader does not hold the minimal eigenvector entry")
        for policy in TieBreak:
            tree = build_spanning_tree(single_fsn, single, policy, seed)
            tree_verdict = verify_spanning_tree(tree, n)
            if not tree_verdict:
                failures.append(f"spanning tree ({policy}): {'; '.join(tree_verdict.violations)}")
    except NumericalError as e:
        failures.append(f"{type(e).__name__}: {e}")
    return InstanceReport(seed, mode, n, tuple(sorted(leaders.leaders)), tuple(failures))
