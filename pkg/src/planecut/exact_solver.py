"""Exact minimum quotient and sparsest cuts through layered dual searches.

Cuts of the primal graph are simple cycles of its dual.  Every dual dart gets
a transfer weight so that the weights along any closed walk add up to the
weight it encloses.  A shortest path in the layered graph whose states are
(dual vertex, enclosed weight mod W) then finds, for each start vertex and
each residue y, the cheapest closed walk of that residue.  Splitting the
walk into simple cycles never loses optimality because ``min(y, W - y)`` and
``y (W - y)`` are subadditive over residues.
"""

from __future__ import annotations

import heapq
import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .cuts import CutResult, cut_from_dual_cycle, cut_from_side
from .errors import BudgetExceeded, MalformedInput, NoBalancedCut, NoCut, OddTotalWeight
from .planar_core import (
    DualEmbedding,
    PlanarEmbedding,
    RegionWeigher,
    ShortestPathTree,
    _bfs_tree_edges,
    dual_tree_labels,
    dualize,
    subembedding,
    winding_numbers,
)

RECURSION_CUTOFF = 32


# ---------------------------------------------------------------------------
# transfer weights


@dataclass(eq=False)
class WeightTransferGraph:
    """Dual graph whose darts carry signed enclosed-weight labels.

    A spanning tree of the graph is fixed; its complement forms a spanning
    tree of the faces rooted at ``f_infinity``.  A nontree dart whose left
    face is a child in that face tree carries the weight of the child's
    subtree; its reverse carries the negation; tree darts carry 0.
    """

    graph: PlanarEmbedding
    in_tree: list[bool]
    f_infinity: int
    weight: list[int]
    tree: ShortestPathTree | None = None
    heavy: list[bool] = field(default_factory=list)

    def walk_weight(self, darts: Sequence[int]) -> int:
        return sum(self.weight[d] for d in darts)


def pp_dart_weights(
    dual: DualEmbedding | PlanarEmbedding,
    tree: ShortestPathTree | Sequence[bool] | None = None,
    f_infinity: int | None = None,
) -> WeightTransferGraph:
    """Transfer weights for ``dual`` (face weights are the primal vertex weights)."""
    h = dual.graph if isinstance(dual, DualEmbedding) else dual
    spt = None
    if tree is None:
        in_tree = _bfs_tree_edges(h)
    elif isinstance(tree, ShortestPathTree):
        spt = tree
        in_tree = [False] * h.num_edges
        for d in tree.parent_dart:
            if d >= 0:
                in_tree[d >> 1] = True
    else:
        in_tree = list(tree)
    if sum(in_tree) != h.num_vertices - 1:
        raise MalformedInput("tree is not spanning")
    f_inf = h.outer_face if f_infinity is None else f_infinity
    w, _ = dual_tree_labels(h, in_tree, f_inf, h.face_weights)
    return WeightTransferGraph(h, in_tree, f_inf, w, spt)


# ---------------------------------------------------------------------------
# layered search


class LayeredGraph:
    """States (v, y mod W); arc (u, y) -> (v, y + w(d)) of length cost(d)."""

    def __init__(self, graph: PlanarEmbedding, weights: Sequence[int], modulus: int) -> None:
        n = graph.num_vertices
        nd = graph.num_darts
        self.graph = graph
        self.n = n
        self.mod = modulus
        if n * modulus > 60_000_000:
            raise BudgetExceeded(f"layered graph with {n * modulus} states is too large")
        tails = np.array([graph.tail(d) for d in range(nd)], dtype=np.int64)
        self.head = np.array([graph.head(d) for d in range(nd)], dtype=np.int64)
        self.cost = np.array([graph.costs[d >> 1] for d in range(nd)], dtype=np.int64)
        self.wmod = np.array([w % modulus for w in weights], dtype=np.int64)
        order = np.argsort(tails, kind="stable")
        self.out_darts = order.astype(np.int64)
        self.out_ptr = np.searchsorted(tails[order], np.arange(n + 1)).astype(np.int64)
        self.deg = np.diff(self.out_ptr)
        self._w = list(weights)

    def sssp(self, source: int, limit: int | Fraction | None = None) -> np.ndarray:
        """Distances from (source, 0); -1 where unreached or not below ``limit``."""
        W = self.mod
        dist = np.full(self.n * W, -1, dtype=np.int64)
        buckets: dict[int, list[np.ndarray]] = {0: [np.array([source * W], dtype=np.int64)]}
        heap = [0]
        row = slice(source * W + 1, source * W + W)
        while heap:
            t = heapq.heappop(heap)
            if limit is not None and t >= limit:
                break
            idx = np.unique(np.concatenate(buckets.pop(t)))
            idx = idx[dist[idx] < 0]
            if idx.size == 0:
                continue
            dist[idx] = t
            if W > 1 and (dist[row] >= 0).all():
                break
            v = idx // W
            y = idx - v * W
            deg = self.deg[v]
            total = int(deg.sum())
            if total == 0:
                continue
            rep = np.repeat(np.arange(idx.size), deg)
            offs = np.arange(total) - np.repeat(np.cumsum(deg) - deg, deg)
            darts = self.out_darts[self.out_ptr[v][rep] + offs]
            tgt = self.head[darts] * W + (y[rep] + self.wmod[darts]) % W
            nd = t + self.cost[darts]
            keep = dist[tgt] < 0
            if limit is not None:
                keep &= nd < limit
            tgt, nd = tgt[keep], nd[keep]
            if tgt.size == 0:
                continue
            order = np.argsort(nd, kind="stable")
            nd, tgt = nd[order], tgt[order]
            cuts = np.flatnonzero(np.diff(nd)) + 1
            for key, chunk in zip(nd[np.r_[0, cuts]].tolist(), np.split(tgt, cuts)):
                if key in buckets:
                    buckets[key].append(chunk)
                else:
                    buckets[key] = [chunk]
                    heapq.heappush(heap, key)
        return dist

    def backtrack(self, dist: np.ndarray, source: int, target_y: int) -> list[int]:
        """Darts of a shortest (source, 0) -> (source, target_y) path."""
        W = self.mod
        g = self.graph
        v, y = source, target_y
        t = int(dist[v * W + y])
        out: list[int] = []
        while t > 0:
            for dp in sorted(g.rotation[v]):
                d = dp ^ 1  # enters v
                u = g.tail(d)
                py = (y - self._w[d]) % W
                pt = t - g.costs[d >> 1]
                if pt >= 0 and dist[u * W + py] == pt:
                    out.append(d)
                    v, y, t = u, py, pt
                    break
            else:
                raise AssertionError("layered distances are inconsistent")
        assert v == source and y == 0
        out.reverse()
        return out


def split_simple_cycles(g: PlanarEmbedding, darts: Sequence[int]) -> list[list[int]]:
    """Split a closed walk into simple closed walks at repeated vertices."""
    if not darts:
        return []
    stack_d: list[int] = []
    stack_v = [g.tail(darts[0])]
    pos = {stack_v[0]: 0}
    out = []
    for d in darts:
        stack_d.append(d)
        v = g.head(d)
        if v in pos:
            p = pos[v]
            out.append(stack_d[p:])
            del stack_d[p:]
            for x in stack_v[p + 1 :]:
                del pos[x]
            del stack_v[p + 1 :]
        else:
            pos[v] = len(stack_v)
            stack_v.append(v)
    return out


def _score(y: int, total: int, objective: str) -> int:
    y %= total
    if objective == "quotient":
        return min(y, total - y)
    return y * (total - y)


def _max_score(total: int, objective: str) -> int:
    h = total // 2
    return h if objective == "quotient" else h * (total - h)


# ---------------------------------------------------------------------------
# instances and the shared incumbent


@dataclass(eq=False)
class _Instance:
    """A connected edge subset of the full dual, faces carrying merged weight."""

    graph: PlanarEmbedding
    edge_map: list[int]  # local edge -> dual edge, same orientation

    def to_base(self, darts: Sequence[int]) -> list[int]:
        return [2 * self.edge_map[d >> 1] + (d & 1) for d in darts]


@dataclass
class _Incumbent:
    objective: str
    total: int
    value: Fraction | None = None
    cycle: list[int] | None = None  # base dual darts
    side: list[int] | None = None  # primal vertices when not from a cycle
    prune: bool = True

    def limit(self) -> Fraction | None:
        if not self.prune or self.value is None:
            return None
        return self.value * _max_score(self.total, self.objective)

    def offer(self, value: Fraction, cycle=None, side=None) -> bool:
        if self.value is None or value < self.value:
            self.value, self.cycle, self.side = value, cycle, side
            return True
        return False


def _search_sources(inst: _Instance, sources: Sequence[int], inc: _Incumbent) -> None:
    h = inst.graph
    if h.num_edges == 0:
        return
    W = inc.total
    wtg = pp_dart_weights(h)
    lay = LayeredGraph(h, wtg.weight, W)
    scores = np.array([_score(y, W, inc.objective) for y in range(W)], dtype=np.float64)
    # a simple cycle uses each edge at most once, and optima are simple cycles
    cap = sum(h.costs) + 1
    for s in sources:
        limit = inc.limit()
        dist = lay.sssp(s, cap if limit is None else min(cap, math.ceil(limit)))
        row = dist[s * W : (s + 1) * W].astype(np.float64)
        ok = (row > 0) & (scores > 0)
        if not ok.any():
            continue
        ys = np.flatnonzero(ok)
        vals = row[ys] / scores[ys]
        lo = vals.min()
        near = ys[vals <= lo * (1 + 1e-9)]
        y = min(near.tolist(), key=lambda k: (Fraction(int(row[k])) / int(scores[k]), k))
        walk_value = Fraction(int(row[y]), int(scores[y]))
        if inc.value is not None and walk_value >= inc.value:
            continue
        walk = lay.backtrack(dist, s, y)
        best = None
        for cyc in split_simple_cycles(h, walk):
            val = _cycle_value(h, cyc, W, inc.objective)
            if val is not None and (best is None or val < best[0]):
                best = (val, cyc)
        assert best is not None and best[0] <= walk_value, "walk decomposition lost optimality"
        inc.offer(best[0], cycle=inst.to_base(best[1]))


def _cycle_value(h: PlanarEmbedding, cyc: Sequence[int], total: int, objective: str) -> Fraction | None:
    wind = winding_numbers(h, cyc, h.face_of_dart[cyc[0] ^ 1])
    left = sum(w for w, k in zip(h.face_weights, wind) if k == 1)
    sc = _score(left, total, objective)
    if sc <= 0:
        return None
    return Fraction(sum(h.costs[d >> 1] for d in cyc), sc)


def _prepare(g: PlanarEmbedding, objective: str, prune: bool) -> tuple[DualEmbedding, _Incumbent]:
    if objective not in ("quotient", "sparsity"):
        raise ValueError(f"unknown objective {objective!r}")
    if sum(1 for w in g.vertex_weights if w > 0) < 2:
        raise NoCut("fewer than two vertices carry positive weight")
    dual = dualize(g)
    inc = _Incumbent(objective, g.total_weight, prune=prune)
    # single-vertex cuts seed the pruning threshold
    for v in range(g.num_vertices):
        w = g.vertex_weights[v]
        sc = _score(w, inc.total, objective) if 0 < w < inc.total else 0
        if sc > 0:
            cost = sum(g.costs[d >> 1] for d in g.rotation[v] if g.head(d) != v)
            inc.offer(Fraction(cost, sc), side=[v])
    return dual, inc


def _finish(dual: DualEmbedding, inc: _Incumbent) -> CutResult:
    if inc.value is None:
        raise NoCut("no cut has positive weight on both sides")
    if inc.cycle is not None:
        res = cut_from_dual_cycle(dual, inc.cycle)
    else:
        v = inc.side[0]
        res = cut_from_side(dual.primal, inc.side, dual.graph.faces[dual.face_of_vertex[v]])
    assert res.value(inc.objective) == inc.value
    return res


def exact_mqc_layered(g: PlanarEmbedding, objective: str = "quotient", *, prune: bool = True) -> CutResult:
    """Optimal cut by a layered search from every dual vertex."""
    dual, inc = _prepare(g, objective, prune)
    h = dual.graph
    inst = _Instance(h, list(range(h.num_edges)))
    _search_sources(inst, range(h.num_vertices), inc)
    return _finish(dual, inc)


# ---------------------------------------------------------------------------
# separator recursion


@dataclass
class Separator:
    vertices: list[int]
    part1: list[int]
    part2: list[int]
    balanced: bool


def _bfs_levels(adj: list[list[int]], src: int) -> list[int]:
    level = [-1] * len(adj)
    level[src] = 0
    queue = deque([src])
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if level[v] < 0:
                level[v] = level[u] + 1
                queue.append(v)
    return level


def balanced_separator(
    dual: DualEmbedding | PlanarEmbedding, weighting: Sequence[int] | None = None
) -> Separator:
    """BFS-level separator: the smallest level whose removal leaves pieces that
    pack into two nonempty parts of at most 2/3 of the total weight each.
    """
    h = dual.graph if isinstance(dual, DualEmbedding) else dual
    n = h.num_vertices
    wt = [1] * n if weighting is None else list(weighting)
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in h.edges:
        if u != v:
            adj[u].append(v)
            adj[v].append(u)
    first = _bfs_levels(adj, 0)
    far = max(range(n), key=lambda v: (first[v], -v))
    level = _bfs_levels(adj, far)
    depth = max(level)
    by_level: list[list[int]] = [[] for _ in range(depth + 1)]
    for v, lv in enumerate(level):
        by_level[lv].append(v)
    total = sum(wt)
    best = None
    for lv in range(depth + 1):
        sep = by_level[lv]
        blocked = set(sep)
        comps = _components(adj, n, blocked)
        parts = _pack_two([(sum(wt[v] for v in c), c) for c in comps])
        big = max((sum(wt[v] for v in p) for p in parts), default=0)
        ok = len(parts) == 2 and all(parts) and 3 * big <= 2 * total
        key = (not ok, len(sep), big, lv)
        if best is None or key < best[0]:
            best = (key, sep, parts, ok)
    _, sep, parts, ok = best
    p1 = sorted(parts[0]) if parts else []
    p2 = sorted(parts[1]) if len(parts) > 1 else []
    return Separator(sorted(sep), p1, p2, ok)


def _components(adj: list[list[int]], n: int, blocked: set[int]) -> list[list[int]]:
    seen = [False] * n
    comps = []
    for s in range(n):
        if seen[s] or s in blocked:
            continue
        seen[s] = True
        comp = [s]
        stack = [s]
        while stack:
            u = stack.pop()
            for v in adj[u]:
                if not seen[v] and v not in blocked:
                    seen[v] = True
                    comp.append(v)
                    stack.append(v)
        comps.append(comp)
    return comps


def _pack_two(items: list[tuple[int, list[int]]]) -> list[list[int]]:
    """Greedy largest-first packing of components into two bins."""
    bins: list[list[int]] = [[], []]
    loads = [0, 0]
    for w, comp in sorted(items, key=lambda t: (-t[0], min(t[1]))):
        i = 0 if loads[0] <= loads[1] else 1
        bins[i].extend(comp)
        loads[i] += w
    return bins if bins[0] else []


def exact_mqc_separator(
    g: PlanarEmbedding, objective: str = "quotient", *, cutoff: int = RECURSION_CUTOFF, prune: bool = True
) -> CutResult:
    """Same optimum as :func:`exact_mqc_layered`, searching only from separator
    vertices and recursing into the pieces left after deleting them.
    """
    dual, inc = _prepare(g, objective, prune)
    h = dual.graph
    weigher = RegionWeigher(h)
    stack = [_Instance(h, list(range(h.num_edges)))]
    while stack:
        inst = stack.pop()
        sub = inst.graph
        if sub.num_vertices <= cutoff:
            _search_sources(inst, range(sub.num_vertices), inc)
            continue
        sep = balanced_separator(sub)
        _search_sources(inst, sep.vertices, inc)
        blocked = set(sep.vertices)
        adj: list[list[int]] = [[] for _ in range(sub.num_vertices)]
        for u, v in sub.edges:
            adj[u].append(v)
            adj[v].append(u)
        for comp in _components(adj, sub.num_vertices, blocked):
            inside = set(comp)
            local = [e for e, (u, v) in enumerate(sub.edges) if u in inside and v in inside]
            if not local:
                continue
            base_edges = [inst.edge_map[e] for e in local]
            piece = subembedding(h, base_edges, weigher)
            stack.append(_Instance(piece.graph, piece.edge_map))
    return _finish(dual, inc)


# ---------------------------------------------------------------------------
# minimum bisection by enumeration


def min_bisection_small(g: PlanarEmbedding, max_core: int = 24) -> CutResult:
    """Cheapest cut with exactly half the weight on each side.

    Up to ``max_core`` vertices are enumerated directly.  Beyond that,
    degree-one vertices are folded into a subset-sum table over their
    neighbours' sides so that only the remaining core is enumerated.
    """
    W = g.total_weight
    if W % 2:
        raise OddTotalWeight(f"total weight {W} is odd")
    n = g.num_vertices
    if n < 2:
        raise NoBalancedCut("a single vertex cannot be bisected")
    half = W // 2
    nbrs: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for e, (u, v) in enumerate(g.edges):
        if u != v:
            nbrs[u].append((v, e))
            nbrs[v].append((u, e))
    if n <= max_core:
        leaves: list[int] = []
    else:
        leaves = [v for v in range(n) if len(nbrs[v]) == 1 and len(nbrs[nbrs[v][0][0]]) > 1]
    leafset = set(leaves)
    core = [v for v in range(n) if v not in leafset]
    k = len(core)
    if k > max_core:
        raise BudgetExceeded(f"{k} core vertices exceed the enumeration budget {max_core}")
    index = {v: i for i, v in enumerate(core)}
    masks = np.arange(1 << (k - 1), dtype=np.int64)

    def bit(v: int) -> np.ndarray:
        i = index[v]
        return np.ones_like(masks) if i == 0 else (masks >> (i - 1)) & 1

    cost = np.zeros_like(masks)
    for e, (u, v) in enumerate(g.edges):
        if u != v and u in index and v in index:
            cost += g.costs[e] * (bit(u) ^ bit(v))
    base = np.zeros_like(masks)
    groups: dict[tuple[int, int, int], list[int]] = {}
    for v in core:
        base += g.vertex_weights[v] * bit(v)
    for leaf in leaves:
        p, e = nbrs[leaf][0]
        base += g.vertex_weights[leaf] * bit(p)
        groups.setdefault((p, g.vertex_weights[leaf], g.costs[e]), []).append(leaf)
    span = sum(g.vertex_weights[v] for v in leaves)
    width = 2 * span + 1
    if len(masks) * width > 80_000_000:
        raise BudgetExceeded("leaf table too large")
    inf = np.inf
    best = np.full((len(masks), width), inf)
    best[:, span] = 0.0
    for (p, w, c), members in sorted(groups.items()):
        in_a = bit(p).astype(bool)
        cur = best.copy()
        for cnt in range(1, len(members) + 1):
            sh = cnt * w
            if sh == 0:
                cur = np.minimum(cur, best + cnt * c)
                continue
            if sh >= width:
                break
            moved = np.full_like(best, inf)
            # a flipped leaf under an A-side neighbour lowers the A weight
            moved[in_a, : width - sh] = best[in_a, sh:] + cnt * c
            moved[~in_a, sh:] = best[~in_a, : width - sh] + cnt * c
            cur = np.minimum(cur, moved)
        best = cur
    need = half - base + span
    valid = (need >= 0) & (need < width)
    extra = np.full(len(masks), inf)
    extra[valid] = best[np.flatnonzero(valid), need[valid]]
    total = cost + extra
    if not np.isfinite(total).any():
        raise NoBalancedCut("no subset reaches half of the total weight")
    m = int(np.argmin(total))
    side = {v for v in core if index[v] == 0 or (m >> (index[v] - 1)) & 1}
    side_w = sum(g.vertex_weights[v] for v in side)
    for leaf in leaves:
        if nbrs[leaf][0][0] in side:
            side.add(leaf)
            side_w += g.vertex_weights[leaf]
    _flip_leaves(g, side, groups, half - side_w)
    res = cut_from_side(g, side)
    assert res.weight_side == half and res.cost == int(total[m])
    return res


def _flip_leaves(g: PlanarEmbedding, side: set[int], groups, delta: int) -> None:
    """Flip the cheapest set of leaves that shifts the side weight by ``delta``."""
    if delta == 0:
        return
    items = sorted(groups.items())
    table: dict[int, tuple[int, tuple[int, ...]]] = {0: (0, ())}
    for (p, w, c), members in items:
        sign = -1 if p in side else 1
        nxt = {}
        for shift, (cost, picks) in table.items():
            for cnt in range(len(members) + 1):
                s = shift + sign * cnt * w
                cand = (cost + cnt * c, picks + (cnt,))
                if s not in nxt or cand[0] < nxt[s][0]:
                    nxt[s] = cand
        table = nxt
    _, picks = table[delta]
    for ((p, _, _), members), cnt in zip(items, picks):
        for leaf in members[:cnt]:
            if p in side:
                side.discard(leaf)
            else:
                side.add(leaf)
