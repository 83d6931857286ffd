"""Seeded generators for random plane graphs, grids and triangulations."""

from __future__ import annotations

import numpy as np
from scipy.spatial import Delaunay

from .planar_core import PlanarEmbedding, from_coordinates


def _delaunay_edges(points: np.ndarray) -> list[tuple[int, int]]:
    tri = Delaunay(points)
    edges = set()
    for a, b, c in tri.simplices:
        for u, v in ((a, b), (b, c), (a, c)):
            edges.add((min(u, v), max(u, v)))
    return sorted((int(u), int(v)) for u, v in edges)


def _spanning_keep(n: int, edges: list[tuple[int, int]], rng: np.random.Generator, keep_prob: float) -> list[int]:
    """Random spanning tree plus each remaining edge with probability ``keep_prob``."""
    order = rng.permutation(len(edges))
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    keep = []
    for i in order:
        u, v = edges[i]
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            keep.append(int(i))
        elif rng.random() < keep_prob:
            keep.append(int(i))
    return sorted(keep)


def random_planar(
    n: int,
    seed: int,
    *,
    max_cost: int = 20,
    max_weight: int = 5,
    min_weight: int = 0,
    keep_prob: float = 0.6,
) -> PlanarEmbedding:
    """Random connected plane graph: a thinned Delaunay triangulation."""
    rng = np.random.default_rng(seed)
    pts = rng.random((n, 2))
    if n == 1:
        edges: list[tuple[int, int]] = []
    elif n == 2:
        edges = [(0, 1)]
    elif n == 3:
        edges = [(0, 1), (1, 2), (0, 2)]
    else:
        edges = _delaunay_edges(pts)
    keep = _spanning_keep(n, edges, rng, keep_prob)
    costed = [(edges[i][0], edges[i][1], int(rng.integers(1, max_cost + 1))) for i in keep]
    weights = [int(x) for x in rng.integers(min_weight, max_weight + 1, size=n)]
    return from_coordinates([tuple(p) for p in pts], costed, weights)


def random_triangulation(n: int, seed: int, *, max_cost: int = 1, max_weight: int = 1, min_weight: int = 1) -> PlanarEmbedding:
    rng = np.random.default_rng(seed)
    pts = rng.random((n, 2))
    edges = _delaunay_edges(pts)
    costed = [(u, v, int(rng.integers(1, max_cost + 1))) for u, v in edges]
    weights = [int(x) for x in rng.integers(min_weight, max_weight + 1, size=n)]
    return from_coordinates([tuple(p) for p in pts], costed, weights)


def grid(rows: int, cols: int, *, cost: int = 1, weight: int = 1, seed: int | None = None,
         max_cost: int | None = None, max_weight: int | None = None) -> PlanarEmbedding:
    """``rows`` x ``cols`` grid; random costs/weights when maxima and a seed are given."""
    rng = np.random.default_rng(seed)
    pts = [(float(c), float(r)) for r in range(rows) for c in range(cols)]
    edges = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                edges.append((v, v + 1))
            if r + 1 < rows:
                edges.append((v, v + cols))

    def draw(hi: int | None, base: int, lo: int) -> int:
        return base if hi is None else int(rng.integers(lo, hi + 1))

    costed = [(u, v, draw(max_cost, cost, 1)) for u, v in edges]
    weights = [draw(max_weight, weight, 0) for _ in pts]
    return from_coordinates(pts, costed, weights)


def grid_dual_instance(k: int) -> PlanarEmbedding:
    """k x k grid with unit costs and weights, so the total weight equals n = k^2.

    The exact solvers search the dual of this graph.
    """
    return grid(k, k)
