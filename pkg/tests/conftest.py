import numpy as np
import pytest

import balpart as bp


def random_hypergraph(rng, n, m, max_net=5, max_weight=9, unit=False,
                      max_net_weight=3):
    """Random instance for property tests: nets of size 2..max_net."""
    if unit:
        weights = [1] * n
    else:
        weights = [int(w) for w in rng.integers(1, max_weight + 1, size=n)]
    nets = []
    for _ in range(m):
        size = int(rng.integers(2, max_net + 1))
        size = min(size, n)
        nets.append(sorted(int(v) for v in
                           rng.choice(n, size=size, replace=False)))
    net_weights = [int(w) for w in rng.integers(1, max_net_weight + 1,
                                                size=m)]
    return bp.build_hypergraph(weights, nets, net_weights)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
