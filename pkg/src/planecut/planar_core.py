"""Combinatorial planar embeddings, duals, shortest-path trees and cycles.

Edge ``e`` joins ``edges[e] = (u, v)`` and yields two darts: ``2e`` runs
u -> v and ``2e + 1`` runs v -> u, so ``rev(d) = d ^ 1``.  Rotation lists are
counterclockwise and every face lies to the left of the darts on its
boundary walk.  For a self-loop the first occurrence of the edge in the
rotation list is dart ``2e`` and the second is ``2e + 1``.
"""

from __future__ import annotations

import heapq
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import (
    DartInTree,
    DisconnectedGraph,
    MalformedInput,
    NonPlanarEmbedding,
    NonpositiveCost,
    SelfCrossingCycle,
)

INF = math.inf


def rev(d: int) -> int:
    return d ^ 1


@dataclass(eq=False)
class PlanarEmbedding:
    """Immutable connected plane multigraph given by a rotation system.

    ``rotation[v]`` lists the darts leaving ``v`` in counterclockwise order.
    Faces are traced from the rotation system at construction time.
    """

    num_vertices: int
    edges: tuple[tuple[int, int], ...]
    costs: tuple[int, ...]
    rotation: tuple[tuple[int, ...], ...]
    vertex_weights: tuple[int, ...]
    face_weights: tuple[int, ...] = ()
    outer_face: int = -1
    faces: tuple[tuple[int, ...], ...] = field(init=False)
    face_of_dart: tuple[int, ...] = field(init=False)
    _pos: tuple[int, ...] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        pos = [0] * (2 * len(self.edges))
        for ds in self.rotation:
            for i, d in enumerate(ds):
                pos[d] = i
        self._pos = tuple(pos)
        faces, face_of = _trace_faces(self)
        self.faces = faces
        self.face_of_dart = face_of
        if not self.face_weights:
            self.face_weights = (0,) * len(faces)
        elif len(self.face_weights) != len(faces):
            raise MalformedInput("face_weights length does not match face count")
        if self.outer_face < 0:
            self.outer_face = max(range(len(faces)), key=lambda f: (len(faces[f]), -f))

    # darts -------------------------------------------------------------
    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def num_darts(self) -> int:
        return 2 * len(self.edges)

    @property
    def num_faces(self) -> int:
        return len(self.faces)

    def tail(self, d: int) -> int:
        u, v = self.edges[d >> 1]
        return v if d & 1 else u

    def head(self, d: int) -> int:
        u, v = self.edges[d >> 1]
        return u if d & 1 else v

    def cost(self, d: int) -> int:
        return self.costs[d >> 1]

    def left(self, d: int) -> int:
        return self.face_of_dart[d]

    def right(self, d: int) -> int:
        return self.face_of_dart[d ^ 1]

    def next_in_face(self, d: int) -> int:
        r = self.rotation[self.head(d)]
        return r[(self._pos[d ^ 1] - 1) % len(r)]

    def degree(self, v: int) -> int:
        return len(self.rotation[v])

    # totals ------------------------------------------------------------
    @property
    def total_weight(self) -> int:
        return sum(self.vertex_weights)

    @property
    def total_face_weight(self) -> int:
        return sum(self.face_weights)

    @property
    def total_cost(self) -> int:
        return sum(self.costs)

    def with_face_weights(self, weights: Sequence[int]) -> "PlanarEmbedding":
        return PlanarEmbedding(
            self.num_vertices, self.edges, self.costs, self.rotation,
            self.vertex_weights, tuple(weights), self.outer_face,
        )


def _trace_faces(g: PlanarEmbedding) -> tuple[tuple[tuple[int, ...], ...], tuple[int, ...]]:
    nd = g.num_darts
    face_of = [-1] * nd
    faces: list[tuple[int, ...]] = []
    for start in range(nd):
        if face_of[start] >= 0:
            continue
        walk = []
        d = start
        while face_of[d] < 0:
            face_of[d] = len(faces)
            walk.append(d)
            d = g.next_in_face(d)
        if d != start:
            raise MalformedInput("face tracing did not close up")
        faces.append(tuple(walk))
    if not faces:
        faces.append(())
    return tuple(faces), tuple(face_of)


def build_embedding(
    edges: Sequence[tuple[int, int, int]],
    rotations: Sequence[Sequence[int]],
    vertex_weights: Sequence[int],
    *,
    outer_face: int | None = None,
) -> PlanarEmbedding:
    """Validate and build an embedding from ``(u, v, cost)`` edges.

    ``rotations[v]`` is the counterclockwise order of edge ids around ``v``;
    a self-loop appears twice.
    """
    n = len(vertex_weights)
    if len(rotations) != n:
        raise MalformedInput("need one rotation list per vertex")
    for w in vertex_weights:
        if int(w) != w or w < 0:
            raise MalformedInput(f"vertex weight {w!r} is not a non-negative integer")
    ends: list[tuple[int, int]] = []
    costs: list[int] = []
    for e, (u, v, c) in enumerate(edges):
        if not (0 <= u < n and 0 <= v < n):
            raise MalformedInput(f"edge {e} has an endpoint outside 0..{n - 1}")
        if int(c) != c:
            raise MalformedInput(f"edge {e} cost {c!r} is not an integer")
        if c < 1:
            raise NonpositiveCost(f"edge {e} has cost {c}")
        ends.append((int(u), int(v)))
        costs.append(int(c))
    seen = [0] * len(ends)
    rot: list[tuple[int, ...]] = []
    for v, lst in enumerate(rotations):
        darts = []
        for e in lst:
            if not 0 <= e < len(ends):
                raise MalformedInput(f"rotation of vertex {v} names unknown edge {e}")
            a, b = ends[e]
            if a == b == v:
                if seen[e] >= 2:
                    raise MalformedInput(f"self-loop {e} listed too often at {v}")
                darts.append(2 * e + seen[e])
                seen[e] += 1
            elif a == v:
                if seen[e] & 1:
                    raise MalformedInput(f"edge {e} listed twice at {v}")
                darts.append(2 * e)
                seen[e] |= 1
            elif b == v:
                if seen[e] & 2:
                    raise MalformedInput(f"edge {e} listed twice at {v}")
                darts.append(2 * e + 1)
                seen[e] |= 2
            else:
                raise MalformedInput(f"edge {e} is not incident to vertex {v}")
        rot.append(tuple(darts))
    for e, (a, b) in enumerate(ends):
        if (a == b and seen[e] != 2) or (a != b and seen[e] != 3):
            raise MalformedInput(f"edge {e} missing from a rotation list")
    return _assemble(n, ends, costs, rot, vertex_weights, outer_face)


def _assemble(n, ends, costs, rot, vertex_weights, outer_face=None, face_weights=()):
    if n == 0:
        raise MalformedInput("empty graph")
    _check_connected(n, ends)
    g = PlanarEmbedding(
        n, tuple(ends), tuple(costs), tuple(rot), tuple(int(w) for w in vertex_weights),
        tuple(face_weights), -1 if outer_face is None else outer_face,
    )
    if n - len(ends) + g.num_faces != 2:
        raise NonPlanarEmbedding(
            f"V - E + F = {n} - {len(ends)} + {g.num_faces} != 2"
        )
    if not 0 <= g.outer_face < g.num_faces:
        raise MalformedInput(f"outer face {g.outer_face} out of range")
    return g


def _check_connected(n: int, ends: Sequence[tuple[int, int]]) -> None:
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in ends:
        adj[u].append(v)
        adj[v].append(u)
    seen = [False] * n
    seen[0] = True
    stack = [0]
    while stack:
        u = stack.pop()
        for v in adj[u]:
            if not seen[v]:
                seen[v] = True
                stack.append(v)
    if not all(seen):
        raise DisconnectedGraph(f"{seen.count(False)} vertices unreachable from vertex 0")


def from_coordinates(
    points: Sequence[tuple[float, float]],
    edges: Sequence[tuple[int, int, int]],
    vertex_weights: Sequence[int],
) -> PlanarEmbedding:
    """Embedding of a straight-line drawing; rotations sorted by angle."""
    inc: list[list[tuple[float, int]]] = [[] for _ in points]
    for e, (u, v, _) in enumerate(edges):
        if u == v:
            raise MalformedInput("straight-line drawings cannot contain self-loops")
        (x1, y1), (x2, y2) = points[u], points[v]
        inc[u].append((math.atan2(y2 - y1, x2 - x1), e))
        inc[v].append((math.atan2(y1 - y2, x1 - x2), e))
    rotations = [[e for _, e in sorted(lst)] for lst in inc]
    return build_embedding(edges, rotations, vertex_weights)


# ---------------------------------------------------------------------------
# duality


@dataclass(eq=False)
class DualEmbedding:
    """Dual of ``primal``: one vertex per primal face, same edge and dart ids.

    Dual dart ``d`` runs from the face right of primal dart ``d`` to the face
    on its left.  Vertex weights of the dual are the primal face weights and
    its face weights are the primal vertex weights.
    """

    primal: PlanarEmbedding
    graph: PlanarEmbedding
    vertex_of_face: tuple[int, ...]
    face_of_vertex: tuple[int, ...]

    @property
    def total_weight(self) -> int:
        return self.graph.total_face_weight


def dualize(g: PlanarEmbedding) -> DualEmbedding:
    ends = [(g.face_of_dart[2 * e + 1], g.face_of_dart[2 * e]) for e in range(g.num_edges)]
    rot = [tuple(d ^ 1 for d in walk) for walk in g.faces]
    # dual face of dual dart d collects the darts leaving tail(d) in the primal
    h = PlanarEmbedding(
        g.num_faces, tuple(ends), g.costs, tuple(rot), g.face_weights, (),
        -1,
    )
    vertex_of_face = []
    for walk in h.faces:
        if not walk:
            vertex_of_face.append(0)
            continue
        tails = {g.tail(d) for d in walk}
        assert len(tails) == 1, "dual face does not match a primal vertex"
        vertex_of_face.append(tails.pop())
    face_of_vertex = [0] * g.num_vertices
    for f, v in enumerate(vertex_of_face):
        face_of_vertex[v] = f
    fw = tuple(g.vertex_weights[v] for v in vertex_of_face)
    h = PlanarEmbedding(
        h.num_vertices, h.edges, h.costs, h.rotation, h.vertex_weights, fw,
        face_of_vertex[0] if g.num_vertices else 0,
    )
    if h.num_vertices - h.num_edges + h.num_faces != 2:
        raise NonPlanarEmbedding("dual violates Euler's formula")
    return DualEmbedding(g, h, tuple(vertex_of_face), tuple(face_of_vertex))


# ---------------------------------------------------------------------------
# shortest paths and trees


@dataclass
class ShortestPathTree:
    root: int
    dist: list[float]
    parent_dart: list[int]  # dart from parent into v, -1 at root or unreachable

    def in_tree(self, e: int) -> bool:
        return self.parent_dart_of_edge(e) >= 0

    def parent_dart_of_edge(self, e: int) -> int:
        for d in (2 * e, 2 * e + 1):
            if self._is_parent_dart(d):
                return d
        return -1

    def _is_parent_dart(self, d: int) -> bool:
        tree_darts = self.__dict__.get("_tree_darts")
        if tree_darts is None:
            tree_darts = {d for d in self.parent_dart if d >= 0}
            self.__dict__["_tree_darts"] = tree_darts
        return d in tree_darts

    def path_to_root(self, g: PlanarEmbedding, v: int) -> list[int]:
        """Vertices from ``v`` up to the root."""
        out = [v]
        while self.parent_dart[v] >= 0:
            v = g.tail(self.parent_dart[v])
            out.append(v)
        return out


def shortest_path_tree(
    g: PlanarEmbedding,
    root: int,
    costs: Sequence[int] | None = None,
    allowed_edges: Iterable[int] | None = None,
) -> ShortestPathTree:
    """Dijkstra from ``root``; ties settle on the smaller dart id."""
    cost = g.costs if costs is None else costs
    allowed = None if allowed_edges is None else set(allowed_edges)
    n = g.num_vertices
    dist: list[float] = [INF] * n
    parent = [-1] * n
    done = [False] * n
    dist[root] = 0
    heap = [(0, -1, root)]
    while heap:
        du, pd, u = heapq.heappop(heap)
        if done[u]:
            continue
        done[u] = True
        parent[u] = pd
        for d in g.rotation[u]:
            e = d >> 1
            if allowed is not None and e not in allowed:
                continue
            v = g.head(d)
            nd = du + cost[e]
            if nd < dist[v] or (nd == dist[v] and not done[v]):
                if nd < dist[v]:
                    dist[v] = nd
                heapq.heappush(heap, (nd, d, v))
    return ShortestPathTree(root, dist, parent)


def tree_path(g: PlanarEmbedding, tree: ShortestPathTree, a: int, b: int) -> list[int]:
    """Darts of the tree path from ``a`` to ``b``."""
    up_a = tree.path_to_root(g, a)
    up_b = tree.path_to_root(g, b)
    on_b = {v: i for i, v in enumerate(up_b)}
    i = 0
    while up_a[i] not in on_b:
        i += 1
    lca = up_a[i]
    first = [tree.parent_dart[v] ^ 1 for v in up_a[:i]]
    second = [tree.parent_dart[v] for v in reversed(up_b[: on_b[lca]])]
    return first + second


# ---------------------------------------------------------------------------
# cycles


@dataclass
class Cycle:
    darts: tuple[int, ...]
    cost: int
    enclosed: int | None = None
    outside: int | None = None
    near_simple: bool = False

    def __len__(self) -> int:
        return len(self.darts)


def make_cycle(g: PlanarEmbedding, darts: Sequence[int], f_infinity: int | None = None) -> Cycle:
    check_closed(g, darts)
    cost = sum(g.costs[d >> 1] for d in darts)
    c = Cycle(tuple(darts), cost, near_simple=is_near_simple(g, darts))
    if f_infinity is not None:
        c.enclosed = enclosed_weight(g, darts, f_infinity)
        c.outside = g.total_face_weight - c.enclosed
    return c


def check_closed(g: PlanarEmbedding, darts: Sequence[int]) -> None:
    if not darts:
        raise MalformedInput("empty cycle")
    for a, b in zip(darts, list(darts[1:]) + [darts[0]]):
        if g.head(a) != g.tail(b):
            raise MalformedInput(f"darts {a} and {b} are not head-to-tail")


def is_simple(g: PlanarEmbedding, darts: Sequence[int]) -> bool:
    tails = [g.tail(d) for d in darts]
    return len(set(tails)) == len(tails)


def is_near_simple(g: PlanarEmbedding, darts: Sequence[int]) -> bool:
    """Simple, or a simple cycle plus one path walked out and back from the start."""
    darts = list(darts)
    if is_simple(g, darts):
        return True
    k = 0
    while k < len(darts) // 2 and darts[-1 - k] == darts[k] ^ 1:
        k += 1
    if k == 0:
        return False
    middle = darts[k : len(darts) - k]
    if not middle or not is_simple(g, middle):
        return False
    path_vertices = [g.tail(d) for d in darts[:k]]
    if len(set(path_vertices)) != k:
        return False
    attach = g.tail(middle[0])
    ring = {g.tail(d) for d in middle}
    return not (set(path_vertices) & ring) and attach not in path_vertices


def fundamental_cycle(g: PlanarEmbedding, tree: ShortestPathTree, dart: int) -> Cycle:
    """``dart`` followed by the tree path from its head back to its tail."""
    if tree._is_parent_dart(dart) or tree._is_parent_dart(dart ^ 1):
        raise DartInTree(f"dart {dart} belongs to the tree")
    darts = [dart] + tree_path(g, tree, g.head(dart), g.tail(dart))
    return Cycle(tuple(darts), sum(g.costs[d >> 1] for d in darts), near_simple=True)


def winding_numbers(g: PlanarEmbedding, darts: Sequence[int], f_infinity: int) -> list[int]:
    """Winding number of the closed walk around every face, zero at ``f_infinity``.

    Crossing dart ``d`` from its right face to its left face changes the
    winding number by (uses of ``d``) minus (uses of ``rev d``).
    """
    uses: dict[int, int] = {}
    for d in darts:
        uses[d] = uses.get(d, 0) + 1
    wind: list[int | None] = [None] * g.num_faces
    wind[f_infinity] = 0
    queue = deque([f_infinity])
    while queue:
        f = queue.popleft()
        for d in g.faces[f]:
            # f is left of d; cross to the right face through rev(d)
            r = d ^ 1
            step = uses.get(r, 0) - uses.get(d, 0)
            target = g.face_of_dart[r]
            val = wind[f] + step
            if wind[target] is None:
                wind[target] = val
                queue.append(target)
            elif wind[target] != val:
                raise MalformedInput("dart sequence is not a closed walk")
    return [0 if w is None else w for w in wind]


def enclosed_weight(g: PlanarEmbedding, darts: Sequence[int], f_infinity: int) -> int:
    """Face weight on the side of a non-self-crossing closed walk away from ``f_infinity``."""
    wind = winding_numbers(g, darts, f_infinity)
    values = set(wind)
    if not (values <= {0, 1} or values <= {0, -1}):
        raise SelfCrossingCycle(f"winding numbers {sorted(values)}")
    return sum(w for w, k in zip(g.face_weights, wind) if k != 0)


def left_faces(g: PlanarEmbedding, darts: Sequence[int]) -> list[int]:
    """Faces on the left side of a simple cycle."""
    wind = winding_numbers(g, darts, g.face_of_dart[darts[0] ^ 1])
    return [f for f, k in enumerate(wind) if k == 1]


# ---------------------------------------------------------------------------
# subgraphs with merged face weights


class RegionWeigher:
    """Weighs the region left of any closed boundary walk in ``g`` in O(length).

    Built from a spanning tree of ``g`` and the complementary spanning tree of
    the faces, rooted at ``root_face``.  Each nontree dart carries the signed
    weight (and face count) of the face subtree it enters, so the label sum
    over a boundary walk gives the enclosed weight relative to ``root_face``.
    """

    def __init__(self, g: PlanarEmbedding, root_face: int | None = None) -> None:
        self.g = g
        self.root_face = g.outer_face if root_face is None else root_face
        self.total = g.total_face_weight
        self.num_faces = g.num_faces
        in_tree = _bfs_tree_edges(g)
        w, c = dual_tree_labels(g, in_tree, self.root_face, g.face_weights)
        self.dart_weight = w
        self.dart_count = c

    def weigh(self, darts: Iterable[int]) -> int:
        w = c = 0
        for d in darts:
            w += self.dart_weight[d]
            c += self.dart_count[d]
        if c >= 1:
            return w
        return self.total + w


def _bfs_tree_edges(g: PlanarEmbedding, root: int = 0) -> list[bool]:
    in_tree = [False] * g.num_edges
    seen = [False] * g.num_vertices
    seen[root] = True
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for d in g.rotation[u]:
            v = g.head(d)
            if not seen[v]:
                seen[v] = True
                in_tree[d >> 1] = True
                queue.append(v)
    return in_tree


def dual_tree_labels(
    g: PlanarEmbedding, in_tree: Sequence[bool], root_face: int, face_weights: Sequence[int]
) -> tuple[list[int], list[int]]:
    """Signed subtree weight and face-count labels of every dart.

    The faces joined across nontree edges form a spanning tree rooted at
    ``root_face``.  A nontree dart whose left face is the tree child gets the
    child's subtree totals, its reverse gets the negation, tree darts get 0.
    """
    nf = g.num_faces
    parent_dart = [-1] * nf
    order = [root_face]
    seen = [False] * nf
    seen[root_face] = True
    i = 0
    while i < len(order):
        f = order[i]
        i += 1
        for d in g.faces[f]:
            if in_tree[d >> 1]:
                continue
            t = g.face_of_dart[d ^ 1]
            if not seen[t]:
                seen[t] = True
                parent_dart[t] = d ^ 1  # left(d ^ 1) is the child t
                order.append(t)
    sub_w = list(face_weights)
    sub_c = [1] * nf
    for f in reversed(order):
        pd = parent_dart[f]
        if pd >= 0:
            p = g.face_of_dart[pd ^ 1]
            sub_w[p] += sub_w[f]
            sub_c[p] += sub_c[f]
    w = [0] * g.num_darts
    c = [0] * g.num_darts
    for f in order:
        pd = parent_dart[f]
        if pd >= 0:
            w[pd], w[pd ^ 1] = sub_w[f], -sub_w[f]
            c[pd], c[pd ^ 1] = sub_c[f], -sub_c[f]
    return w, c


@dataclass(eq=False)
class SubEmbedding:
    graph: PlanarEmbedding
    vertex_map: list[int]  # sub vertex -> original vertex
    edge_map: list[int]  # sub edge -> original edge, same orientation

    def to_original(self, darts: Iterable[int]) -> list[int]:
        return [2 * self.edge_map[d >> 1] + (d & 1) for d in darts]

    def from_original(self, darts: Iterable[int]) -> list[int]:
        inv = self.__dict__.get("_inv")
        if inv is None:
            inv = {e: i for i, e in enumerate(self.edge_map)}
            self.__dict__["_inv"] = inv
        return [2 * inv[d >> 1] + (d & 1) for d in darts]


def subembedding(
    g: PlanarEmbedding,
    edge_ids: Iterable[int],
    weigher: RegionWeigher | None = None,
    vertex_weight_of=None,
) -> SubEmbedding:
    """Induced embedding on a connected edge subset.

    Faces of the subgraph receive the total weight of the original faces they
    contain, computed with ``weigher`` (a union-find pass when absent).
    """
    keep = sorted(set(edge_ids))
    if not keep:
        raise MalformedInput("subembedding needs at least one edge")
    eid = {e: i for i, e in enumerate(keep)}
    vmap: list[int] = []
    vid: dict[int, int] = {}
    for e in keep:
        for x in g.edges[e]:
            if x not in vid:
                vid[x] = len(vmap)
                vmap.append(x)
    rot = []
    for x in vmap:
        rot.append(tuple(2 * eid[d >> 1] + (d & 1) for d in g.rotation[x] if (d >> 1) in eid))
    ends = tuple((vid[g.edges[e][0]], vid[g.edges[e][1]]) for e in keep)
    vw = tuple(0 if vertex_weight_of is None else vertex_weight_of(x) for x in vmap)
    sub = PlanarEmbedding(len(vmap), ends, tuple(g.costs[e] for e in keep), tuple(rot), vw, (), 0)
    if len(vmap) - len(keep) + sub.num_faces != 2:
        raise MalformedInput("edge subset is not connected")
    if weigher is not None:
        fw = [weigher.weigh(2 * keep[d >> 1] + (d & 1) for d in walk) for walk in sub.faces]
    else:
        fw = _merged_face_weights(g, sub, keep)
    sub = PlanarEmbedding(sub.num_vertices, sub.edges, sub.costs, sub.rotation, vw, tuple(fw), -1)
    return SubEmbedding(sub, vmap, keep)


def _merged_face_weights(g: PlanarEmbedding, sub: PlanarEmbedding, keep: list[int]) -> list[int]:
    parent = list(range(g.num_faces))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    kept = set(keep)
    for e in range(g.num_edges):
        if e not in kept:
            a, b = find(g.face_of_dart[2 * e]), find(g.face_of_dart[2 * e + 1])
            parent[a] = b
    total: dict[int, int] = {}
    for f in range(g.num_faces):
        r = find(f)
        total[r] = total.get(r, 0) + g.face_weights[f]
    out = []
    for walk in sub.faces:
        d = walk[0]
        out.append(total[find(g.face_of_dart[2 * keep[d >> 1] + (d & 1)])])
    return out
