from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from scipy.sparse.csgraph import minimum_spanning_tree

from conftest import seeds, small_graph, triangle
from planecut import oracle
from planecut.errors import BudgetExceeded
from planecut.instances import grid
from planecut.planar_core import build_embedding


def cycle4():
    edges = [(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 0, 1)]
    return build_embedding(edges, [[0, 3], [1, 0], [2, 1], [3, 2]], [1] * 4)


def star():
    edges = [(0, 1, 1), (0, 2, 1), (0, 3, 1)]
    return build_embedding(edges, [[0, 1, 2], [0], [1], [2]], [1] * 4)


def test_brute_cuts_small_cases():
    assert oracle.brute_cuts(cycle4()).min_quotient()[0] == 1
    assert oracle.brute_cuts(star()).min_quotient()[0] == 1
    assert oracle.brute_cuts(triangle()).min_quotient()[0] == 2
    edge = build_embedding([(0, 1, 3)], [[0], [0]], [2, 5])
    t = oracle.brute_cuts(edge)
    assert len(t) == 1 and t.min_quotient()[0] == Fraction(3, 2)
    assert oracle.brute_cuts(cycle4()).min_bisection()[0] == 2


def test_brute_cuts_budget():
    with pytest.raises(BudgetExceeded):
        oracle.brute_cuts(grid(5, 5))


@given(seeds)
def test_brute_cuts_rows_match_direct_sums(seed):
    g = small_graph(seed, n_max=7)
    t = oracle.brute_cuts(g)
    assert len(t) == 2 ** (g.num_vertices - 1) - 1
    for i in range(len(t)):
        s = set(t.side(i))
        assert g.num_vertices - 1 not in s
        assert t.cost[i] == sum(c for (u, v), c in zip(g.edges, g.costs) if (u in s) != (v in s))
        assert t.weight[i] == sum(g.vertex_weights[v] for v in s)


def test_path_distances():
    g = build_embedding([(0, 1, 2), (1, 2, 3)], [[0], [0, 1], [1]], [1, 1, 1])
    assert oracle.apsp(g)[0].tolist() == [0, 2, 5]


@given(seeds)
def test_apsp_is_a_metric_matching_bellman_ford(seed):
    g = small_graph(seed, n_max=12)
    d = oracle.apsp(g)
    assert (d == d.T).all()
    for s in range(g.num_vertices):
        assert d[s].tolist() == [int(x) for x in oracle.bellman_ford(g, s)]
    n = g.num_vertices
    for x, y, z in itertools.product(range(n), repeat=3):
        assert d[x, z] <= d[x, y] + d[y, z]


def test_set_distance():
    d = np.array([[0, 3, 5], [3, 0, 4], [5, 4, 0]])
    assert oracle.set_distance(d, [0], [2], "max") == oracle.set_distance(d, [0], [2], "sum") == 5
    assert oracle.set_distance(d, [0, 1], [2], "max") == 5
    assert oracle.set_distance(d, [0, 1], [2], "sum") == 9
    with pytest.raises(ValueError):
        oracle.set_distance(d, [0], [1], "min")


def test_hop_diameter():
    assert oracle.hop_diameter(grid(3, 4)) == 5


@pytest.mark.parametrize("mode", ["single", "complete", "average"])
def test_linkage_two_nodes(mode):
    merges = oracle.linkage_simulate(np.array([[0, 7], [7, 0]]), mode)
    assert len(merges) == 1 and merges[0].value == 7 and merges[0].members == (0, 1)


def test_linkage_hand_example():
    # points on a line at 0, 1, 5, 11
    x = np.array([0, 1, 5, 11])
    d = np.abs(x[:, None] - x[None, :])
    comp = oracle.linkage_simulate(d, "complete")
    assert [m.value for m in comp] == [1, 5, 11]
    avg = oracle.linkage_simulate(d, "average")
    assert [m.value for m in avg] == [1, Fraction(9, 2), 9]
    assert avg[-1].members == (0, 1, 2, 3)


@given(seeds)
def test_single_linkage_matches_mst(seed):
    g = small_graph(seed)
    d = oracle.apsp(g)
    merges = oracle.linkage_simulate(d, "single")
    mst = minimum_spanning_tree(d.astype(float)).data
    assert sorted(m.value for m in merges) == sorted(int(x) for x in mst)


def test_cycle_enumeration_small():
    assert oracle.enumerate_simple_cycles(triangle()).__len__() == 1
    tree = build_embedding([(0, 1, 1), (1, 2, 1)], [[0], [0, 1], [1]], [1] * 3)
    assert oracle.enumerate_simple_cycles(tree) == []
    k4 = build_embedding(
        [(0, 1, 1), (0, 2, 1), (0, 3, 1), (1, 2, 1), (1, 3, 1), (2, 3, 1)],
        [[0, 1, 2], [0, 4, 3], [1, 3, 5], [2, 5, 4]], [1] * 4,
    )
    assert len(oracle.enumerate_simple_cycles(k4)) == 7


def _cycle_count_by_subsets(g) -> int:
    """Edge subsets whose every vertex has degree 0 or 2 and which are connected."""
    count = 0
    m = g.num_edges
    for mask in range(1, 1 << m):
        es = [e for e in range(m) if mask >> e & 1]
        deg: dict[int, int] = {}
        for e in es:
            u, v = g.edges[e]
            deg[u] = deg.get(u, 0) + 1
            deg[v] = deg.get(v, 0) + 1
        if any(k != 2 for k in deg.values()):
            continue
        adj: dict[int, list[int]] = {}
        for e in es:
            u, v = g.edges[e]
            adj.setdefault(u, []).append(v)
            adj.setdefault(v, []).append(u)
        start = next(iter(adj))
        seen, stack = {start}, [start]
        while stack:
            for y in adj[stack.pop()]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        count += len(seen) == len(adj)
    return count


@given(seeds)
def test_cycle_enumeration_matches_edge_subsets(seed):
    g = small_graph(seed, n_max=8)
    if g.num_edges > 16:
        return
    assert len(oracle.enumerate_simple_cycles(g)) == _cycle_count_by_subsets(g)


def test_negative_cycle_oracle():
    g = triangle()
    assert not oracle.has_negative_cycle(g, [1] * 6)
    costs = [1] * 6
    costs[0] = costs[2] = costs[4] = -1
    assert oracle.has_negative_cycle(g, costs)
    assert not oracle.has_negative_cycle(g, costs, allowed=[d % 2 == 1 for d in range(6)])
