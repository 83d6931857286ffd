from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from planecut import oracle
from planecut.errors import ClaimViolated, LengthMismatch, MalformedInput
from planecut.hardness_gen import (
    GADGET_M, gen_diamond, gen_minplus, gen_sets, hamming, sets_vectors, verify_diamond, verify_minplus,
    verify_sets,
)

M = GADGET_M


def _edge_cost(g, u, v):
    return next(c for (a, b), c in zip(g.edges, g.costs) if {a, b} == {u, v})


# (min,+) reduction ---------------------------------------------------------------


def test_minplus_constants():
    inst = gen_minplus([1, 1], [1, 1], [1, 1])
    assert inst.T == 6 and inst.beta == 96 and inst.heavy == 958_320
    assert inst.quotient_threshold == Fraction(3 * 96 + 6, 24)
    assert inst.sparsity_threshold == Fraction(3 * 96 + 6, 24 ** 2)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_minplus_census(n):
    inst = gen_minplus([1] * n, [2] * n, [3] * n)
    assert inst.graph.num_vertices == 3 * n + 2
    assert inst.graph.total_weight == 24 * n
    unit = gen_minplus([1] * n, [2] * n, [3] * n, unit_weight=True)
    assert unit.graph.num_vertices == 3 * n + 2 + (10 * n - 1) + (11 * n - 1)
    assert unit.graph.total_weight == 24 * n


def test_minplus_edge_costs():
    A, B, C = [3, 1, 4], [1, 5, 9], [2, 6, 5]
    inst = gen_minplus(A, B, C)
    g, b, T = inst.graph, inst.beta, inst.T
    assert [g.costs[e] for e in inst.path_a] == [b + x for x in A]
    assert [g.costs[e] for e in inst.path_b] == [b + x for x in B]
    assert [g.costs[e] for e in inst.path_c] == [b + T - x for x in C]
    assert all(g.costs[e] == inst.heavy for e in inst.heavy_edges)


def test_minplus_with_witness():
    inst = gen_minplus([1, 1], [1, 1], [9, 9])
    assert inst.witness() == (1, 1, 2)
    rep = verify_minplus(inst)
    assert rep.quotient < inst.quotient_threshold
    assert rep.sparsity < inst.sparsity_threshold
    assert rep.bisection < inst.bisection_threshold


def test_minplus_without_witness():
    inst = gen_minplus([5, 5], [5, 5], [1, 1])
    assert inst.witness() is None
    rep = verify_minplus(inst)
    assert rep.quotient >= inst.quotient_threshold
    assert rep.sparsity >= inst.sparsity_threshold
    assert rep.bisection >= inst.bisection_threshold
    i, j, k = rep.cut_positions["bisection"]
    assert i + j == k


def test_minplus_bisection_value_with_witness():
    A, B, C = [2, 3, 1], [4, 1, 2], [9, 3, 8]
    inst = gen_minplus(A, B, C)
    rep = verify_minplus(inst)
    best = min(A[i - 1] + B[k - i - 1] - C[k - 1] for k in range(2, 4) for i in range(1, k))
    assert best < 0
    assert rep.bisection == 3 * inst.beta + inst.T + best


def test_minplus_sparsity_counterexample():
    # no witness, yet an unbalanced cut beats the sparsity threshold
    inst = gen_minplus([1, 2, 3, 2], [9, 9, 6, 1], [1, 4, 5, 7])
    assert inst.witness() is None
    rep = verify_minplus(inst, raise_on_violation=False)
    assert rep.sparsity == Fraction(9645, 2303) < inst.sparsity_threshold == Fraction(4825, 1152)
    assert not rep.claims["sparsity"]
    assert rep.claims["quotient"] and rep.claims["bisection"]
    with pytest.raises(ClaimViolated):
        verify_minplus(inst)


def test_minplus_input_errors():
    with pytest.raises(LengthMismatch):
        gen_minplus([1, 2], [1], [1, 2])
    with pytest.raises(MalformedInput):
        gen_minplus([1], [1], [1])
    with pytest.raises(MalformedInput):
        gen_minplus([0, 1], [1, 1], [1, 1])


@given(st.lists(st.integers(1, 9), min_size=6, max_size=6), st.booleans())
def test_minplus_quotient_and_bisection_claims(values, unit):
    A, B, C = values[:2], values[2:4], values[4:]
    rep = verify_minplus(gen_minplus(A, B, C, unit_weight=unit), raise_on_violation=False)
    assert rep.claims["quotient"] and rep.claims["bisection"] and rep.claims["balance"]


# diamond gadget ------------------------------------------------------------------


def test_diamond_small_weights():
    inst = gen_diamond([1], [1])
    g, lab = inst.graph, inst.labels
    assert _edge_cost(g, lab["a1"], lab["l"]) == M + 1 == 5
    assert _edge_cost(g, lab["a1"], lab["r"]) == 5


@pytest.mark.parametrize("n", [1, 3, 8])
def test_diamond_census(n):
    inst = gen_diamond([0] * n, [1] * n)
    assert inst.graph.num_vertices == 2 * n + 4
    assert inst.graph.num_edges == 4 * n + 2
    assert oracle.hop_diameter(inst.graph) == 3


def test_diamond_examples():
    assert verify_diamond(gen_diamond([1, 0], [1, 0])).diameter == 4 * 4 + 2 == 18
    assert verify_diamond(gen_diamond([1, 0], [0, 1])).diameter <= 17


@given(st.integers(1, 24), st.integers(0, 2**32 - 1))
def test_diamond_claims(n, seed):
    rng = np.random.default_rng(seed)
    A = rng.integers(0, 2, size=n).tolist()
    B = rng.integers(0, 2, size=n).tolist()
    rep = verify_diamond(gen_diamond(A, B))
    assert rep.ok
    zero = verify_diamond(gen_diamond([0] * n, B))
    assert zero.diameter <= (n + 2) * M + 1


def test_diamond_errors():
    with pytest.raises(LengthMismatch):
        gen_diamond([1, 0], [1])
    with pytest.raises(MalformedInput):
        gen_diamond([2], [1])


# sets gadgets ----------------------------------------------------------------------


def test_maxdist_weights_and_census():
    inst = gen_sets([[1], [0]], "maxdist")
    g = inst.graph
    assert g.num_vertices == 2 * 2 * 1 + 2
    first1, first2 = inst.sets[0][0], inst.sets[1][0]
    assert _edge_cost(g, first1, inst.left) == M + 1 == 5
    assert _edge_cost(g, first2, inst.left) == M == 4


def test_maxdist_value():
    rep = verify_sets(gen_sets([[1], [1]], "maxdist"))
    assert rep.max_dist[0][1] == 3 * M + 2 == 14


def test_unweighted_subdivision_census():
    vecs = [[1, 0], [0, 1], [1, 1]]
    base = gen_sets(vecs, "maxdist")
    sub = gen_sets(vecs, "maxdist", unweighted=True)
    n, d = 3, 2
    extra = sum(c - 1 for c in base.graph.costs)
    assert sub.graph.num_vertices == 2 * n * d + 2 + extra
    assert all(c == 1 for c in sub.graph.costs)
    assert verify_sets(sub).ok


@given(st.integers(2, 8), st.integers(1, 5), st.integers(0, 2**32 - 1))
def test_maxdist_formula(n, d, seed):
    assert verify_sets(gen_sets(sets_vectors(n, d, seed), "maxdist")).claims["max_dist_formula"]


@given(st.integers(2, 6), st.integers(1, 4), st.integers(0, 2**32 - 1))
def test_sumdist_difference_identity(n, d, seed):
    vecs = sets_vectors(n, d, seed)
    rep = verify_sets(gen_sets(vecs, "sumdist"))
    sd = rep.sum_dist
    for a in range(n):
        for b in range(a + 1, n):
            for x in range(n):
                for y in range(x + 1, n):
                    assert sd[a][b] - sd[x][y] == 2 * (hamming(vecs[a], vecs[b]) - hamming(vecs[x], vecs[y]))


@given(st.integers(2, 6), st.integers(1, 4), st.integers(0, 2**32 - 1))
def test_complete_linkage_finds_closest_pair(n, d, seed):
    rep = verify_sets(gen_sets(sets_vectors(n, d, seed), "complete-linkage"))
    assert rep.claims["absorption"] and rep.claims["closest_pair"]


@pytest.mark.parametrize("seed", range(3))
def test_average_linkage_with_many_copies(seed):
    rep = verify_sets(gen_sets(sets_vectors(3, 2, seed), "average-linkage", copies=60))
    assert rep.ok


@pytest.mark.xfail(strict=True, reason="d*d + 1 copies do not dominate the hub distances; see the ledger")
def test_average_linkage_default_copies():
    for seed in range(6):
        verify_sets(gen_sets(sets_vectors(4, 2, seed), "average-linkage"))


def test_literal_junction_breaks_linkage():
    vecs = sets_vectors(4, 3, 1)
    ok = verify_sets(gen_sets(vecs, "complete-linkage"), raise_on_violation=False)
    literal = verify_sets(gen_sets(vecs, "complete-linkage", literal_junction=True), raise_on_violation=False)
    assert ok.ok and not literal.ok


def test_sets_errors():
    with pytest.raises(MalformedInput):
        gen_sets([[1, 0]], "maxdist")
    with pytest.raises(LengthMismatch):
        gen_sets([[1, 0], [1]], "maxdist")
    with pytest.raises(MalformedInput):
        gen_sets([[1], [0]], "nearest")
