"""
Random strongly connected test instances.

A random Hamiltonian cycle guarantees strong connectivity by construction,
then every other ordered pair becomes an arc with probability `extra_edge_prob`.
"""

import numpy as np

from fsn_selector.errors import ValidationError
from fsn_selector.graph.network import DirectedNetwork, LeaderProfile, NetworkBuilder


def random_strongly_connected(n: int, extra_edge_prob: float, seed: int) -> DirectedNetwork:
    """Generate a unit-weight strongly connected network, deterministically for a given seed."""
    if n < 2:
        raise ValidationError(f"At least 2 nodes are required, not {n}.")
    if not 0 <= extra_edge_prob <= 1:
        raise ValidationError(f"Extra edge probability must be in [0, 1], not {extra_edge_prob}.")
    rng = np.random.default_rng(seed)
    order = [int(node) for node in rng.permutation(np.arange(1, n + 1))]
    builder = NetworkBuilder(n)
    arrows = set()
    for position, src in enumerate(order):
        dst = order[(position + 1) % n]
        builder.add_arrow(src, dst)
        arrows.add((src, dst))
    for src in range(1, n + 1):
        for dst in range(1, n + 1):
            # Always draw, so that the random stream does not depend on the cycle.
            draw = rng.random()
            if src != dst and (src, dst) not in arrows and draw < extra_edge_prob:
                builder.add_arrow(src, dst)
    return builder.build()


def random_leaders(n: int, seed: int, count: int = None, input_value: float = 0.1) -> LeaderProfile:
    """Pick `count` distinct unit-weight leaders (1 or 2 at random if `count` is None)."""
    rng = np.random.default_rng(seed)
    if count is None:
        count = int(rng.integers(1, 3))
    count = min(count, n)
    chosen = rng.choice(np.arange(1, n + 1), size=count, replace=False)
    return LeaderProfile.from_mapping(n, {int(i): 1.0 for i in chosen}, input_value)
