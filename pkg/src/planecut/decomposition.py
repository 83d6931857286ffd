"""Recursive shortest-path separator decomposition and distance annuli.

The graph is first triangulated with chords that never enter the
shortest-path tree, so the spanning tree of (triangular) faces formed by
nontree edges has degree at most three.  A cluster is a connected piece of
that face tree: the subtree of a top face minus the subtrees of its holes.
Cutting a cluster along the tree edge above a face ``g`` is the same as
cutting along the fundamental cycle of that edge, which consists of two
root paths of the shortest-path tree and one edge.  The faces of a cluster's
real subgraph that contain material from outside the cluster are its scars.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

import numpy as np

from .planar_core import PlanarEmbedding, ShortestPathTree, shortest_path_tree


# ---------------------------------------------------------------------------
# triangulation


@dataclass(eq=False)
class Triangulation:
    graph: PlanarEmbedding
    num_real_edges: int
    face_origin: list[int]  # triangle -> face of the untriangulated graph

    def is_real(self, e: int) -> bool:
        return e < self.num_real_edges


def triangulate(h: PlanarEmbedding) -> Triangulation:
    """Fan-triangulate every face of length > 3 from its first corner.

    Edge and dart ids of ``h`` are preserved; chords get ids after them and
    a cost larger than the total so no shortest path would use them.
    """
    m = h.num_edges
    ends = list(h.edges)
    costs = list(h.costs)
    chord_cost = h.total_cost + 1
    after: dict[int, list[int]] = {}
    for walk in h.faces:
        L = len(walk)
        if L <= 3:
            continue
        x0 = h.tail(walk[0])
        fan = []
        for i in range(2, L - 1):
            e = len(ends)
            ends.append((x0, h.tail(walk[i])))
            costs.append(chord_cost)
            fan.append(2 * e)
            after[walk[i]] = [2 * e + 1]
        after[walk[0]] = fan
    rot = []
    for darts in h.rotation:
        out = []
        for d in darts:
            out.append(d)
            out.extend(after.get(d, ()))
        rot.append(tuple(out))
    tri = PlanarEmbedding(h.num_vertices, tuple(ends), tuple(costs), tuple(rot), h.vertex_weights, (), 0)
    assert tri.num_vertices - tri.num_edges + tri.num_faces == 2
    origin = [-1] * tri.num_faces
    for d in range(2 * m):
        origin[tri.face_of_dart[d]] = h.face_of_dart[d]
    assert min(origin) >= 0, "every triangle keeps a real edge"
    fw = [0] * tri.num_faces
    for f, walk in enumerate(h.faces):
        if walk:
            fw[tri.face_of_dart[walk[0]]] = h.face_weights[f] if h.face_weights else 0
    tri = PlanarEmbedding(tri.num_vertices, tri.edges, tri.costs, tri.rotation, h.vertex_weights, tuple(fw), 0)
    return Triangulation(tri, m, origin)


# ---------------------------------------------------------------------------
# cluster tree


@dataclass
class Cluster:
    id: int
    parent: int
    depth: int
    top: int  # triangle whose subtree the cluster lives in
    holes: tuple[int, ...]  # triangles whose subtrees are cut away
    num_triangles: int
    num_vertices: int
    num_edges: int
    num_faces: int  # faces of the real subgraph, scars included
    scars: int
    spliced: int
    children: list[int] = field(default_factory=list)
    separator_edge: int = -1  # edge of the triangulation cut above the child
    path_ends: tuple[int, ...] = ()  # intersection paths run root -> each end

    @property
    def size(self) -> int:
        return max(1, self.num_edges - self.spliced)

    @property
    def is_leaf(self) -> bool:
        return not self.children


@dataclass(eq=False)
class ClusterTree:
    h: PlanarEmbedding
    tri: Triangulation
    spt: ShortestPathTree
    root_face: int
    face_parent_dart: list[int]  # dart whose left is the child triangle; -1 at root
    face_children: list[list[int]]
    clusters: list[Cluster]
    leaf_faces: int
    full_count: list[int]  # triangles per original face

    # queries ---------------------------------------------------------------
    def leaves(self) -> list[Cluster]:
        return [c for c in self.clusters if c.is_leaf]

    def depth(self) -> int:
        return max(c.depth for c in self.clusters)

    def total_size(self) -> int:
        return sum(c.size for c in self.clusters)

    def size_constant(self) -> float:
        n = self.h.num_faces
        return self.total_size() / (n * max(1.0, math.log2(n)))

    def triangles(self, c: Cluster) -> list[int]:
        holes = set(c.holes)
        out = [c.top]
        stack = [c.top]
        while stack:
            f = stack.pop()
            for ch in self.face_children[f]:
                if ch not in holes:
                    out.append(ch)
                    stack.append(ch)
        return out

    def real_edges(self, c: Cluster) -> list[int]:
        m = self.tri.num_real_edges
        g = self.tri.graph
        es = {d >> 1 for t in self.triangles(c) for d in g.faces[t] if (d >> 1) < m}
        return sorted(es)

    def vertices(self, c: Cluster) -> set[int]:
        return {x for e in self.real_edges(c) for x in self.h.edges[e]}

    def intersection_paths(self, c: Cluster) -> list[list[int]]:
        """Root paths bounding the cluster, each listed from the root outward."""
        return [list(reversed(self.spt.path_to_root(self.h, x))) for x in c.path_ends]

    def splice_map(self, c: Cluster) -> list[list[int]]:
        """Maximal chains of real edges joined at spliced vertices."""
        edges = self.real_edges(c)
        inside = set(edges)
        spliced = self._spliced_vertices(c, edges)
        inc: dict[int, list[int]] = {}
        for e in edges:
            for x in set(self.h.edges[e]):
                inc.setdefault(x, []).append(e)
        seen: set[int] = set()
        chains = []
        for e in edges:
            if e in seen:
                continue
            chain = [e]
            seen.add(e)
            for direction in (0, 1):
                cur = e
                x = self.h.edges[e][direction]
                while x in spliced:
                    nxt = [f for f in inc[x] if f != cur and f in inside and f not in seen]
                    if not nxt:
                        break
                    cur = nxt[0]
                    seen.add(cur)
                    if direction:
                        chain.append(cur)
                    else:
                        chain.insert(0, cur)
                    a, b = self.h.edges[cur]
                    x = b if a == x else a
            chains.append(chain)
        return chains

    def _spliced_vertices(self, c: Cluster, edges: list[int]) -> set[int]:
        tri, h = self.tri, self.h
        count: dict[int, int] = {}
        for t in self.triangles(c):
            f = tri.face_origin[t]
            count[f] = count.get(f, 0) + 1
        full = {f for f, k in count.items() if k == self.full_count[f]}
        deg: dict[int, int] = {}
        for e in edges:
            for x in h.edges[e]:
                deg[x] = deg.get(x, 0) + 1
        out = set()
        for x, k in deg.items():
            if k != 2:
                continue
            if h.degree(x) > 2 or any(h.face_of_dart[d] not in full for d in h.rotation[x]):
                out.add(x)
        return out


def build_cluster_tree(
    h: PlanarEmbedding,
    spt: ShortestPathTree | None = None,
    *,
    root: int = 0,
    leaf_faces: int = 12,
    root_face: int | None = None,
) -> ClusterTree:
    """Split until every cluster's real subgraph has at most ``leaf_faces`` faces.

    Rounds alternate by depth: even depths balance triangle counts, odd
    depths balance the number of boundary pieces (scars).
    """
    if spt is None:
        spt = shortest_path_tree(h, root)
    tri = triangulate(h)
    g = tri.graph
    m = tri.num_real_edges
    in_tree = [False] * g.num_edges
    for d in spt.parent_dart:
        if d >= 0:
            in_tree[d >> 1] = True
    nf = g.num_faces
    froot = g.face_of_dart[h.faces[h.outer_face][0]] if root_face is None and h.faces[h.outer_face] else (root_face or 0)
    parent_dart = [-1] * nf
    children: list[list[int]] = [[] for _ in range(nf)]
    seen = [False] * nf
    seen[froot] = True
    order = [froot]
    for f in order:
        for d in g.faces[f]:
            if in_tree[d >> 1]:
                continue
            t = g.face_of_dart[d ^ 1]
            if not seen[t]:
                seen[t] = True
                parent_dart[t] = d ^ 1
                children[f].append(t)
                order.append(t)
    assert len(order) == nf
    face_parent = [-1] * nf
    for t in range(nf):
        if parent_dart[t] >= 0:
            face_parent[t] = g.face_of_dart[parent_dart[t] ^ 1]
    full_count = [0] * h.num_faces
    for t in range(nf):
        full_count[tri.face_origin[t]] += 1

    ct = ClusterTree(h, tri, spt, froot, parent_dart, children, [], leaf_faces, full_count)
    stack: list[tuple[int, tuple[int, ...], int, int]] = [(froot, (), 0, -1)]
    while stack:
        top, holes, depth, par = stack.pop()
        cid = len(ct.clusters)
        hole_set = set(holes)
        faces = [top]
        i = 0
        while i < len(faces):
            for ch in children[faces[i]]:
                if ch not in hole_set:
                    faces.append(ch)
            i += 1
        # real subgraph census
        edges: set[int] = set()
        per_origin: dict[int, int] = {}
        for t in faces:
            for d in g.faces[t]:
                if (d >> 1) < m:
                    edges.add(d >> 1)
            o = tri.face_origin[t]
            per_origin[o] = per_origin.get(o, 0) + 1
        deg: dict[int, int] = {}
        for e in edges:
            a, b = h.edges[e]
            deg[a] = deg.get(a, 0) + 1
            deg[b] = deg.get(b, 0) + 1
        full = {o for o, k in per_origin.items() if k == full_count[o]}
        num_faces = len(edges) - len(deg) + 2
        scars = num_faces - len(full)
        spliced = 0
        for x, k in deg.items():
            if k == 2 and (h.degree(x) > 2 or any(h.face_of_dart[d] not in full for d in h.rotation[x])):
                spliced += 1
        ends: list[int] = []
        for f in holes + ((top,) if top != froot else ()):
            e = parent_dart[f] >> 1
            for x in g.edges[e]:
                if x not in ends:
                    ends.append(x)
        cl = Cluster(cid, par, depth, top, holes, len(faces), len(deg), len(edges), num_faces,
                     scars, spliced, path_ends=tuple(ends))
        ct.clusters.append(cl)
        if par >= 0:
            ct.clusters[par].children.append(cid)
        if num_faces <= leaf_faces or len(faces) == 1:
            continue
        # subtree triangle counts and hole counts inside the cluster
        pos = {f: k for k, f in enumerate(faces)}
        cnt = [1] * len(faces)
        hcnt = [0] * len(faces)
        for hole in holes:
            hcnt[pos[face_parent[hole]]] += 1
        for k in range(len(faces) - 1, 0, -1):
            p = pos[face_parent[faces[k]]]
            cnt[p] += cnt[k]
            hcnt[p] += hcnt[k]
        total = len(faces)
        pieces = len(holes) + (1 if top != froot else 0)
        best = None
        for k in range(1, total):
            a, ha = cnt[k], hcnt[k]
            face_key = max(a, total - a)
            scar_key = max(ha + 1, pieces - ha + 1)
            key = (face_key, scar_key) if depth % 2 == 0 else (scar_key, face_key)
            key = key + (faces[k],)
            if best is None or key < best[0]:
                best = (key, k)
        k = best[1]
        gface = faces[k]
        cl.separator_edge = parent_dart[gface] >> 1
        under = _under(faces, k, pos, face_parent)
        inner = tuple(hh for hh in holes if pos[face_parent[hh]] in under)
        outer = tuple(hh for hh in holes if pos[face_parent[hh]] not in under) + (gface,)
        stack.append((top, outer, depth + 1, cid))
        stack.append((gface, inner, depth + 1, cid))
    return ct


def _under(faces: list[int], k: int, pos: dict[int, int], face_parent: list[int]) -> set[int]:
    """Positions of the BFS-ordered ``faces`` that lie in the subtree of position ``k``."""
    under = {k}
    for j in range(k + 1, len(faces)):
        if pos.get(face_parent[faces[j]], -1) in under:
            under.add(j)
    return under


# ---------------------------------------------------------------------------
# annuli


@dataclass(frozen=True)
class AnnuliDecomposition:
    """Shifted families of annuli around the root.

    Family ``i`` (0 <= i <= 1/eps) consists of the half-open distance
    intervals [i*delta + j*sigma, i*delta + (j+1)*sigma) with
    delta = eps*tau and sigma = (1 + 2 eps) tau.
    """

    root: int
    tau: Fraction
    eps: Fraction

    @property
    def delta(self) -> Fraction:
        return self.eps * self.tau

    @property
    def sigma(self) -> Fraction:
        return (1 + 2 * self.eps) * self.tau

    @property
    def num_families(self) -> int:
        return int(1 / self.eps) + 1

    def index(self, i: int, dist: int | Fraction) -> int:
        return math.floor((Fraction(dist) - i * self.delta) / self.sigma)

    def interval(self, i: int, j: int) -> tuple[Fraction, Fraction]:
        a = i * self.delta + j * self.sigma
        return a, a + self.sigma

    def indices_between(self, i: int, lo: int | Fraction, hi: int | Fraction) -> range:
        """Annuli of family ``i`` meeting the distance range [lo, hi]."""
        return range(self.index(i, lo), self.index(i, hi) + 1)


def eps_tau_net(dists: list[int], spacing: Fraction) -> list[int]:
    """Positions along a path (by distance labels) forming a net of the given spacing.

    Walks from the first vertex and emits a vertex once the cost since the
    last emitted vertex reaches ``spacing``; both endpoints are always kept.
    """
    if not dists:
        return []
    out = [0]
    last = dists[0]
    for k in range(1, len(dists)):
        if abs(dists[k] - last) >= spacing:
            out.append(k)
            last = dists[k]
    if out[-1] != len(dists) - 1:
        out.append(len(dists) - 1)
    return out


def check_annuli(ann: AnnuliDecomposition, dists: Iterable[int]) -> bool:
    """Every distance lies in exactly one annulus of every family.

    Works on integers scaled by the common denominator of delta and sigma,
    one family at a time.
    """
    ds = np.asarray(list(dists), dtype=np.int64)
    if ds.size == 0:
        return True
    den = math.lcm(ann.delta.denominator, ann.sigma.denominator)
    step = int(ann.delta * den)
    width = int(ann.sigma * den)
    x = ds * den
    for i in range(ann.num_families):
        j = np.floor_divide(x - i * step, width)
        hits = np.zeros(x.shape, dtype=np.int64)
        for dj in (-1, 0, 1):
            lo = i * step + (j + dj) * width
            hits += (lo <= x) & (x < lo + width)
        if not (hits == 1).all():
            return False
    return True
