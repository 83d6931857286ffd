"""Planted inputs for the weight-reduction loop.

A hub vertex joined to a ring of neighbours gets very expensive edges, so
the dual shortest-path tree avoids them and the face tree is a star at the
hub with light subtrees.  Removing a connected blob around the hub leaves a
connected set whose boundary is a simple dual cycle enclosing more than
alpha*W with only light darts.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from planecut.approx_mqc import ApproxParams, _f_infinity, _order_cycle
from planecut.instances import _delaunay_edges, _spanning_keep
from planecut.planar_core import (
    PlanarEmbedding, ShortestPathTree, dual_tree_labels, dualize, from_coordinates, shortest_path_tree,
)


@dataclass
class PlantedCycle:
    h: PlanarEmbedding  # dual graph, faces weighted
    tree: ShortestPathTree
    weight: list[int]  # transfer weights relative to f_inf
    f_inf: int
    cycle: list[int]
    W: int


def _connected(g: PlanarEmbedding, verts: set[int]) -> bool:
    start = next(iter(verts))
    seen, stack = {start}, [start]
    while stack:
        u = stack.pop()
        for d in g.rotation[u]:
            v = g.head(d)
            if v in verts and v not in seen:
                seen.add(v)
                stack.append(v)
    return seen == verts


def hub_graph(rng: np.random.Generator) -> PlanarEmbedding:
    m = int(rng.integers(10, 25))
    extra = int(rng.integers(10, 50))
    ang = 2 * np.pi * np.arange(m) / m + rng.random() * 0.1
    ring = np.c_[np.cos(ang), np.sin(ang)]
    r = 1.3 + 2 * rng.random(extra)
    t = rng.random(extra) * 2 * np.pi
    pts = np.vstack([[0.0, 0.0], ring, np.c_[r * np.cos(t), r * np.sin(t)]])
    edges = _delaunay_edges(pts)
    hub = {i for i, (u, v) in enumerate(edges) if 0 in (u, v)}
    keep = sorted(set(_spanning_keep(len(pts), edges, rng, 0.7)) | hub)
    big = 90 * len(keep)
    costed = [(edges[i][0], edges[i][1], big if i in hub else int(rng.integers(1, 10))) for i in keep]
    weights = [1] + [int(x) for x in rng.integers(1, 4, size=len(pts) - 1)]
    return from_coordinates([tuple(p) for p in pts], costed, weights)


def planted_cycle(seed: int, params: ApproxParams | None = None, attempts: int = 50) -> PlantedCycle | None:
    params = params or ApproxParams()
    rng = np.random.default_rng(seed)
    for _ in range(attempts):
        g = hub_graph(rng)
        dual = dualize(g)
        h = dual.graph
        W = h.total_face_weight
        tree = shortest_path_tree(h, int(rng.integers(h.num_vertices)))
        in_tree = [False] * h.num_edges
        for d in tree.parent_dart:
            if d >= 0:
                in_tree[d >> 1] = True
        f_inf = _f_infinity(h, in_tree, W)
        w, _ = dual_tree_labels(h, in_tree, f_inf, h.face_weights)
        # grow a blob around the infinite face's vertex, keeping the rest connected
        blob = {dual.vertex_of_face[f_inf]}
        inside = g.vertex_weights[dual.vertex_of_face[f_inf]]
        goal = rng.random() * (1 - params.alpha) * W
        everything = set(range(g.num_vertices))
        while True:
            front = [g.head(d) for u in blob for d in g.rotation[u] if g.head(d) not in blob]
            rng.shuffle(front)
            nxt = next((v for v in front if inside + g.vertex_weights[v] <= goal
                        and _connected(g, everything - blob - {v})), None)
            if nxt is None:
                break
            blob.add(nxt)
            inside += g.vertex_weights[nxt]
        rest = everything - blob
        if W - inside <= params.alpha * W or not _connected(g, rest):
            continue
        faces = {dual.face_of_vertex[v] for v in rest}
        boundary = [d for d in range(h.num_darts)
                    if h.face_of_dart[d] in faces and h.face_of_dart[d ^ 1] not in faces]
        cycle = _order_cycle(h, boundary)
        if any(w[d] >= params.beta_heavy * W for d in cycle):
            continue
        return PlantedCycle(h, tree, w, f_inf, cycle, W)
    return None
