from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from planecut import oracle
from planecut.instances import random_planar
from planecut.planar_core import PlanarEmbedding, build_embedding

settings.register_profile(
    "default", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def small_graph(seed: int, n_max: int = 10, **kw) -> PlanarEmbedding:
    """Random plane graph with 3..n_max vertices and at least two weighted vertices."""
    rng = np.random.default_rng(seed)
    n = int(rng.integers(3, n_max + 1))
    kw.setdefault("max_cost", 20)
    kw.setdefault("max_weight", 5)
    g = random_planar(n, seed, **kw)
    while sum(1 for w in g.vertex_weights if w > 0) < 2:
        seed += 7919
        g = random_planar(n, seed, **kw)
    return g


def brute_value(g: PlanarEmbedding, objective: str) -> Fraction:
    table = oracle.brute_cuts(g)
    best = table.min_quotient() if objective == "quotient" else table.min_sparsity()
    assert best is not None
    return best[0]


def triangle(weights=(1, 1, 1), costs=(1, 1, 1)) -> PlanarEmbedding:
    # vertices 0,1,2 counterclockwise; edges 0:(0,1) 1:(1,2) 2:(2,0)
    edges = [(0, 1, costs[0]), (1, 2, costs[1]), (2, 0, costs[2])]
    rot = [[0, 2], [1, 0], [2, 1]]
    return build_embedding(edges, rot, list(weights))


def modified_costs(g, seed):
    """cost(d) - lam * w(d) with antisymmetric integer weights, as in the search."""
    rng = np.random.default_rng(seed)
    lam = Fraction(int(rng.integers(1, 12)), int(rng.integers(1, 5)))
    w = [int(x) for x in rng.integers(-6, 7, size=g.num_edges)]
    return [g.costs[d >> 1] - lam * (w[d >> 1] if d % 2 == 0 else -w[d >> 1]) for d in range(g.num_darts)]


@pytest.fixture
def tri() -> PlanarEmbedding:
    return triangle()
