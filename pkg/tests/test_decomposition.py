from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import seeds
from planecut.approx_mqc import default_eps
from planecut.decomposition import (
    AnnuliDecomposition, build_cluster_tree, check_annuli, eps_tau_net, triangulate,
)
from planecut.instances import grid, random_planar
from planecut.planar_core import (
    RegionWeigher, dualize, enclosed_weight, fundamental_cycle, is_simple, shortest_path_tree, subembedding,
)


def dual_of(seed, n=40):
    return dualize(random_planar(n, seed, max_cost=9, max_weight=4, min_weight=1)).graph


@given(seeds)
def test_triangulation(seed):
    h = dual_of(seed, 25)
    spt = shortest_path_tree(h, 0)
    tri = triangulate(h)
    g = tri.graph
    assert all(len(f) <= 3 for f in g.faces)
    assert g.edges[: h.num_edges] == h.edges
    assert g.total_face_weight == h.total_face_weight
    for e in range(h.num_edges, g.num_edges):
        assert not tri.is_real(e) and g.costs[e] > h.total_cost
    # chords never shorten a path, so the tree is still a shortest-path tree
    assert shortest_path_tree(g, 0).dist == spt.dist
    for d in range(h.num_darts):
        assert tri.face_origin[g.face_of_dart[d]] == h.face_of_dart[d]
    for f, walk in enumerate(h.faces):
        assert tri.face_origin.count(f) == max(1, len(walk) - 2)


def test_small_graph_is_single_leaf():
    h = dualize(grid(3, 3)).graph
    ct = build_cluster_tree(h, leaf_faces=12)
    assert h.num_faces <= 12
    assert len(ct.clusters) == 1 and ct.clusters[0].is_leaf


@given(seeds)
def test_cluster_tree_structure(seed):
    h = dual_of(seed)
    ct = build_cluster_tree(h, leaf_faces=6)
    g = ct.tri.graph
    for f, ch in enumerate(ct.face_children):
        assert len(ch) + (ct.face_parent_dart[f] >= 0) <= 3
    leaves = [t for c in ct.leaves() for t in ct.triangles(c)]
    assert sorted(leaves) == list(range(g.num_faces))
    for c in ct.clusters:
        tris = ct.triangles(c)
        assert len(tris) == c.num_triangles
        assert c.scars <= 6
        if c.is_leaf:
            assert c.num_faces <= ct.leaf_faces or c.num_triangles == 1
        else:
            a, b = (ct.clusters[k] for k in c.children)
            assert sorted(ct.triangles(a) + ct.triangles(b)) == sorted(tris)
            assert ct.face_parent_dart[b.top] >> 1 == c.separator_edge or \
                ct.face_parent_dart[a.top] >> 1 == c.separator_edge
        chains = ct.splice_map(c)
        assert sorted(e for ch in chains for e in ch) == ct.real_edges(c)
    assert ct.depth() <= 2 * math.log2(h.num_faces) + 1


@pytest.mark.parametrize("k", [10, 20, 40])
def test_grid_depth_and_scars(k):
    g = grid(k, k)
    ct = build_cluster_tree(g)
    assert ct.depth() <= 2 * math.log2(k * k)
    assert max(c.scars for c in ct.clusters) <= 6
    assert ct.size_constant() <= 8


@given(seeds)
def test_cluster_cycles_keep_their_quotient(seed):
    h = dual_of(seed)
    weigher = RegionWeigher(h)
    ct = build_cluster_tree(h, leaf_faces=6)
    for c in ct.clusters[1:6]:
        sub = subembedding(h, ct.real_edges(c), weigher)
        s = sub.graph
        # the sub face holding the outer face of h plays the infinite face
        f_inf = next(f for f, walk in enumerate(s.faces)
                     if sum(weigher.dart_count[d] for d in sub.to_original(walk)) <= 0)
        tree = shortest_path_tree(s, 0)
        for e in range(s.num_edges):
            if tree.in_tree(e):
                continue
            cyc = fundamental_cycle(s, tree, 2 * e).darts
            if not is_simple(s, cyc):
                continue
            inside = enclosed_weight(s, cyc, f_inf)
            full = enclosed_weight(h, sub.to_original(cyc), h.outer_face)
            assert inside == full


@given(seeds)
def test_partial_cycles_meet_intersection_paths(seed):
    h = dual_of(seed)
    ct = build_cluster_tree(h, leaf_faces=6)
    cycles = [walk for walk in h.faces]
    tree = shortest_path_tree(h, 0)
    cycles += [fundamental_cycle(h, tree, 2 * e).darts for e in range(h.num_edges) if not tree.in_tree(e)]
    for c in ct.clusters[1:]:
        inside = set(ct.real_edges(c))
        on_paths = {x for p in ct.intersection_paths(c) for x in p}
        for cyc in cycles:
            es = {d >> 1 for d in cyc}
            if es & inside and es - inside:
                assert on_paths & {h.tail(d) for d in cyc}


def _annuli_reference(ann, d):
    """Count annuli containing ``d`` by scanning intervals in exact arithmetic."""
    counts = []
    for i in range(ann.num_families):
        hits = 0
        j = -2
        while True:
            a, b = ann.interval(i, j)
            if a > d:
                break
            hits += a <= d < b
            j += 1
        counts.append(hits)
    return counts


def test_annuli_parameters():
    eps = default_eps()
    ann = AnnuliDecomposition(0, Fraction(10), eps)
    assert ann.num_families == int(1 / eps) + 1
    assert ann.delta == 10 * eps and ann.sigma == 10 * (1 + 2 * eps)
    for i in (0, 5, ann.num_families - 1):
        for d in (0, 3, 10, 11, 57):
            a, b = ann.interval(i, ann.index(i, d))
            assert a <= d < b


@given(st.fractions(min_value=Fraction(1, 3), max_value=50, max_denominator=12),
       st.sampled_from([Fraction(1, 2), Fraction(1, 3), Fraction(1, 7)]),
       st.lists(st.integers(0, 200), min_size=1, max_size=20))
def test_annuli_cover_once(tau, eps, dists):
    ann = AnnuliDecomposition(0, tau, eps)
    assert check_annuli(ann, dists)
    for d in dists:
        assert _annuli_reference(ann, d) == [1] * ann.num_families


@given(st.lists(st.integers(0, 30), min_size=1, max_size=40),
       st.fractions(min_value=Fraction(1, 4), max_value=20, max_denominator=8))
def test_eps_tau_net(steps, spacing):
    dists = [sum(steps[: k + 1]) for k in range(len(steps))]
    net = eps_tau_net(dists, spacing)
    assert net[0] == 0 and net[-1] == len(dists) - 1
    assert net == sorted(set(net))
    for k, d in enumerate(dists):
        prev = max(p for p in net if p <= k)
        assert d - dists[prev] < spacing or k in net
