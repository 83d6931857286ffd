"""Near-linear constant-factor approximation of the minimum quotient cut.

The search runs in the planar dual, where cuts are cycles and vertex weights
sit on faces.  A binary search over the target ratio ``lam`` asks, for a
ladder of cost scales ``tau``, whether some cycle of cost about ``tau`` has
ratio at most ``lam``.  Each such question is answered by an exact search in
every leaf of a shortest-path separator decomposition, plus rooted searches
around net vertices of the separator paths, restricted to distance annuli.
A rooted search considers fundamental cycles of heavy darts and a cheapest
ratio cycle in the transfer-weight graph, shrinking that cycle's enclosed
weight along shortest paths when it is too large.

Everything a rooted search computes is independent of ``lam``; only the final
comparison against ``target * lam`` depends on it.  Rooted searches are
therefore summarised once per distinct (start vertex, trimmed subgraph) and
reused across the whole binary search.
"""

from __future__ import annotations

import heapq
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

import numpy as np

from .cuts import CutResult, cut_from_dual_cycle
from .decomposition import ClusterTree, build_cluster_tree, eps_tau_net
from .errors import MalformedInput, NoCut, NoPositiveDart
from .exact_solver import split_simple_cycles
from .planar_core import (
    PlanarEmbedding,
    RegionWeigher,
    ShortestPathTree,
    SubEmbedding,
    dual_tree_labels,
    dualize,
    is_near_simple,
    is_simple,
    shortest_path_tree,
    subembedding,
    tree_path,
)

ALPHA = Fraction("0.7655644")
FACTOR = Fraction("3.2655644")
TARGET = Fraction("3.29")
PRECISION = Fraction("1.003")


def default_eps(factor: Fraction = FACTOR, target: Fraction = TARGET) -> Fraction:
    """Largest 1/k with (1 + 1/k)^2 * factor <= target."""
    k = 1
    while (1 + Fraction(1, k)) ** 2 * factor > target:
        k += 1
    return Fraction(1, k)


@dataclass(frozen=True)
class ApproxParams:
    eps: Fraction = field(default_factory=default_eps)
    alpha: Fraction = ALPHA
    target: Fraction = TARGET
    precision: Fraction = PRECISION
    # growth of the cost ladder; None means 1 + eps
    tau_ratio: Fraction | None = Fraction(2)
    leaf_faces: int = 12

    def __post_init__(self) -> None:
        object.__setattr__(self, "eps", Fraction(self.eps))
        object.__setattr__(self, "alpha", Fraction(self.alpha))
        if self.eps <= 0:
            raise MalformedInput("eps must be positive")
        if self.tau_ratio is not None and Fraction(self.tau_ratio) <= 1:
            raise MalformedInput("tau_ratio must exceed 1")
        a, b = self.alpha, self.beta_heavy
        for value in (1 / (2 * b), a / (1 - a), 2 / (a - b)):
            if abs(value - FACTOR) > Fraction(1, 10**6):
                raise MalformedInput(f"parameter identity broken: {float(value)}")
        if (1 + self.eps) ** 2 * FACTOR > self.target:
            raise MalformedInput(f"eps={self.eps} too large for factor {self.target}")

    @property
    def beta_heavy(self) -> Fraction:
        return self.alpha / 5

    @property
    def tau_step(self) -> Fraction:
        return Fraction(self.tau_ratio) if self.tau_ratio is not None else 1 + self.eps


# ---------------------------------------------------------------------------
# negative cycles


def _bf_cycle(n: int, tails: np.ndarray, heads: np.ndarray, cost: np.ndarray) -> list[int] | None:
    """Dart indices (into the given arrays) of a negative cycle, or None.

    Label-correcting Bellman-Ford from a virtual source joined to every
    vertex at cost 0; the parent-pointer graph is inspected for a cycle at
    passes 1, 2, 4, ... and after the last pass.
    """
    if len(tails) == 0 or int(cost.min()) >= 0:
        return None
    dist = np.zeros(n, dtype=np.int64)
    parent = np.full(n, -1, dtype=np.int64)
    idx = np.arange(len(tails))
    check = 1
    for it in range(1, n + 2):
        cand = dist[tails] + cost
        best = dist.copy()
        np.minimum.at(best, heads, cand)
        better = cand < dist[heads]
        hit = better & (cand == best[heads])
        if not hit.any():
            return None
        parent[heads[hit]] = idx[hit]
        dist = best
        if it == check or it >= n:
            check *= 2
            cyc = _parent_cycle(parent, tails, heads)
            if cyc is not None and int(cost[cyc].sum()) < 0:
                return cyc
    raise AssertionError("Bellman-Ford did not settle")


def _parent_cycle(parent: np.ndarray, tails: np.ndarray, heads: np.ndarray) -> list[int] | None:
    n = len(parent)
    state = [0] * n  # 0 new, 1 on current walk, 2 done
    par = parent.tolist()
    tl = tails.tolist()
    for start in range(n):
        if state[start]:
            continue
        walk = []
        v = start
        while v >= 0 and state[v] == 0:
            state[v] = 1
            walk.append(v)
            d = par[v]
            v = tl[d] if d >= 0 else -1
        if v >= 0 and state[v] == 1:
            cyc = []
            u = v
            while True:
                d = par[u]
                cyc.append(d)
                u = tl[d]
                if u == v:
                    break
            for x in walk:
                state[x] = 2
            cyc.reverse()
            return cyc
        for x in walk:
            state[x] = 2
    return None


def negative_cycle(
    g: PlanarEmbedding, costs: Sequence[Fraction | int], allowed: Sequence[bool] | None = None
) -> list[int] | None:
    """A cycle of darts whose modified costs sum below zero, or None if none exists."""
    darts = [d for d in range(g.num_darts) if allowed is None or allowed[d]]
    if not darts:
        return None
    fr = [Fraction(costs[d]) for d in darts]
    den = math.lcm(*(c.denominator for c in fr))
    cost = np.array([int(c * den) for c in fr], dtype=np.int64)
    tails = np.array([g.tail(d) for d in darts], dtype=np.int64)
    heads = np.array([g.head(d) for d in darts], dtype=np.int64)
    cyc = _bf_cycle(g.num_vertices, tails, heads, cost)
    if cyc is None:
        return None
    out = [darts[i] for i in cyc]
    assert sum(fr[i] for i in cyc) < 0
    return out


# ---------------------------------------------------------------------------
# cycle surgery


def _cost(g: PlanarEmbedding, darts: Sequence[int]) -> int:
    return sum(g.costs[d >> 1] for d in darts)


def _rotate_to(g: PlanarEmbedding, darts: list[int], v: int) -> list[int]:
    for k, d in enumerate(darts):
        if g.tail(d) == v:
            return darts[k:] + darts[:k]
    raise ValueError("vertex not on cycle")


def attach_root(g: PlanarEmbedding, cycle: Sequence[int], s: int, tree: ShortestPathTree) -> list[int]:
    """Join ``cycle`` to the tree root ``s`` by a shortest path walked out and back."""
    darts = list(cycle)
    on = {g.tail(d) for d in darts}
    if s in on:
        return _rotate_to(g, darts, s)
    x = min(on, key=lambda v: (tree.dist[v], v))
    path = tree_path(g, tree, s, x)
    return path + _rotate_to(g, darts, x) + [d ^ 1 for d in reversed(path)]


def strip_doubled(darts: Sequence[int]) -> list[int]:
    """Drop the out-and-back tail of a near-simple cycle."""
    darts = list(darts)
    k = 0
    while k < len(darts) // 2 and darts[-1 - k] == darts[k] ^ 1:
        k += 1
    return darts[k : len(darts) - k]


def free_reduce(darts: Sequence[int]) -> list[int]:
    """Cancel every dart immediately followed by its reverse (not across the wrap)."""
    out: list[int] = []
    for d in darts:
        if out and out[-1] == d ^ 1:
            out.pop()
        else:
            out.append(d)
    return out


@dataclass
class ReductionStep:
    cost: int
    weight: int
    near_simple: bool
    dart: int  # positive dart removed in this step
    dart_weight: int


def weight_reduction(
    g: PlanarEmbedding,
    cycle: Sequence[int],
    tree: ShortestPathTree,
    dart_weight: Sequence[int],
    limit: Fraction | int,
    *,
    max_steps: int | None = None,
) -> tuple[list[int], list[ReductionStep]]:
    """Shrink the enclosed weight of a near-simple cycle through the tree root.

    While the transfer weight exceeds ``limit``: take the last positive dart
    xy, let u be the closest proper tree ancestor of x occurring after y,
    and replace the x-to-u stretch by the tree path.  The tree path may run
    back along the stretch before x; the resulting spurs (a dart followed by
    its reverse) are cancelled, which lowers the cost and keeps the weight.
    """
    cur = list(cycle)
    s = tree.root
    if cur and g.tail(cur[0]) != s:
        raise MalformedInput("cycle must start at the tree root")
    steps: list[ReductionStep] = []
    weight = sum(dart_weight[d] for d in cur)
    cap = max_steps if max_steps is not None else 4 * (g.num_darts + 1)
    while weight > limit:
        k = max((i for i, d in enumerate(cur) if dart_weight[d] > 0), default=-1)
        if k < 0:
            raise NoPositiveDart("positive enclosed weight but no positive dart")
        xy = cur[k]
        x = g.tail(xy)
        anc = {}
        v, depth = x, 0
        while tree.parent_dart[v] >= 0:
            v = g.tail(tree.parent_dart[v])
            depth += 1
            anc[v] = depth
        best = None
        for j in range(k + 1, len(cur) + 1):
            v = g.head(cur[j - 1])
            if v in anc and (best is None or anc[v] < best[0]):
                best = (anc[v], j)
        assert best is not None, "the root closes the walk"
        u_at = best[1]
        u = g.head(cur[u_at - 1])
        nxt = free_reduce(cur[:k] + tree_path(g, tree, x, u) + cur[u_at:])
        new_weight = sum(dart_weight[d] for d in nxt)
        steps.append(ReductionStep(_cost(g, nxt), new_weight, is_near_simple(g, nxt), xy, dart_weight[xy]))
        cur, weight = nxt, new_weight
        if len(steps) > cap:
            raise NoPositiveDart("weight reduction did not terminate")
    return cur, steps


def _order_cycle(g: PlanarEmbedding, darts: Sequence[int]) -> list[int]:
    by_tail = {g.tail(d): d for d in darts}
    assert len(by_tail) == len(darts), "boundary is not a simple cycle"
    out = [darts[0]]
    while len(out) < len(darts):
        out.append(by_tail[g.head(out[-1])])
    assert g.head(out[-1]) == g.tail(out[0])
    return out


# ---------------------------------------------------------------------------
# rooted search summaries


@dataclass
class Candidate:
    quotient: Fraction
    darts: tuple[int, ...]  # simple cycle in the full dual
    cost: int
    enclosed: int


@dataclass
class RootedSummary:
    """Outcome of a rooted search, valid for every ``lam``."""

    s: int
    size: int
    heavy: Candidate | None = None
    lam_star: Fraction | None = None  # cheapest cost/weight ratio avoiding heavy darts
    ratio_cycle: tuple[int, ...] = ()  # the cycle attaining it, before any reduction
    reduced: Candidate | None = None  # candidate derived from it
    steps: list[ReductionStep] = field(default_factory=list)
    split: bool = False  # reduced walk had to be split into simple cycles
    invariants: dict[str, bool] = field(default_factory=dict)

    def result(self, lam: Fraction, target: Fraction) -> Candidate | None:
        bound = target * lam
        found = []
        if self.heavy is not None and self.heavy.quotient <= bound:
            found.append(self.heavy)
        if self.lam_star is not None and lam >= self.lam_star and self.reduced.quotient <= bound:
            found.append(self.reduced)
        return min(found, key=lambda c: c.quotient) if found else None

    def threshold(self, target: Fraction) -> Fraction | None:
        """Smallest ``lam`` at which the search succeeds."""
        out = []
        if self.heavy is not None:
            out.append(self.heavy.quotient / target)
        if self.lam_star is not None:
            out.append(max(self.lam_star, self.reduced.quotient / target))
        return min(out) if out else None


def _f_infinity(g: PlanarEmbedding, in_tree: list[bool], W: int) -> int:
    fw = g.face_weights
    root = max(range(g.num_faces), key=lambda f: (fw[f], -f))
    children: list[list[int]] = [[] for _ in range(g.num_faces)]
    order = [root]
    seen = {root}
    for f in order:
        for d in g.faces[f]:
            if in_tree[d >> 1]:
                continue
            t = g.face_of_dart[d ^ 1]
            if t not in seen:
                seen.add(t)
                children[f].append(t)
                order.append(t)
    sub = list(fw)
    parent = {c: f for f in order for c in children[f]}
    for f in reversed(order):
        if f in parent:
            sub[parent[f]] += sub[f]
    f = root
    while True:
        heavy = [c for c in children[f] if 2 * sub[c] > W]
        if not heavy:
            return f
        f = min(heavy)


def rooted_summary(
    h: PlanarEmbedding,
    weigher: RegionWeigher,
    edges: Sequence[int],
    s: int,
    params: ApproxParams,
) -> RootedSummary:
    """Rooted search from ``s`` inside the trimmed subgraph spanned by ``edges``."""
    W = weigher.total
    out = RootedSummary(s, len(edges))
    if not edges:
        return out
    sub = subembedding(h, edges, weigher)
    g = sub.graph
    if g.num_faces < 2:
        return out
    s_loc = sub.vertex_map.index(s)
    tree = shortest_path_tree(g, s_loc)
    in_tree = [False] * g.num_edges
    for d in tree.parent_dart:
        if d >= 0:
            in_tree[d >> 1] = True
    f_inf = _f_infinity(g, in_tree, W)
    w, _ = dual_tree_labels(g, in_tree, f_inf, g.face_weights)
    assert 2 * max(w) <= W, "a fundamental cycle encloses more than half"
    heavy_at = params.beta_heavy * W
    heavy = [w[d] >= heavy_at for d in range(g.num_darts)]

    def candidate(darts: list[int]) -> Candidate:
        enc = sum(w[d] for d in darts)
        c = _cost(g, darts)
        orig = tuple(sub.to_original(darts))
        m = min(enc, W - enc)
        assert m > 0
        return Candidate(Fraction(c, m), orig, c, enc)

    for d in range(g.num_darts):
        if heavy[d]:
            cyc = [d] + tree_path(g, tree, g.head(d), g.tail(d))
            cand = candidate(cyc)
            if out.heavy is None or cand.quotient < out.heavy.quotient:
                out.heavy = cand

    # cheapest cost-to-weight cycle avoiding heavy darts, by Dinkelbach steps
    allowed = [not x for x in heavy]
    best_ratio, best = None, None
    for d in range(g.num_darts):
        if allowed[d] and w[d] > 0:
            cyc = [d] + tree_path(g, tree, g.head(d), g.tail(d))
            r = Fraction(_cost(g, cyc), w[d])
            if best_ratio is None or r < best_ratio:
                best_ratio, best = r, cyc
    if best is None:
        return out
    darts = [d for d in range(g.num_darts) if allowed[d]]
    tails = np.array([g.tail(d) for d in darts], dtype=np.int64)
    heads = np.array([g.head(d) for d in darts], dtype=np.int64)
    cst = np.array([g.costs[d >> 1] for d in darts], dtype=np.int64)
    wt = np.array([w[d] for d in darts], dtype=np.int64)
    while True:
        p, q = best_ratio.numerator, best_ratio.denominator
        cyc = _bf_cycle(g.num_vertices, tails, heads, q * cst - p * wt)
        if cyc is None:
            break
        best = [darts[i] for i in cyc]
        nr = Fraction(_cost(g, best), sum(w[d] for d in best))
        assert nr < best_ratio
        best_ratio = nr
    out.lam_star = best_ratio
    out.ratio_cycle = tuple(sub.to_original(best))
    if sum(w[d] for d in best) <= params.alpha * W:
        out.reduced = candidate(best)
        return out
    c0 = attach_root(g, best, s_loc, tree)
    final, steps = weight_reduction(g, c0, tree, w, params.alpha * W)
    out.steps = steps
    out.invariants = reduction_invariants(g, c0, w, steps, params, W)
    simple = strip_doubled(final)
    if is_simple(g, simple):
        out.reduced = candidate(simple)
        return out
    # the tree path of a step can touch the earlier part of the walk, so
    # the result may be a chain of simple cycles; keep the best of them
    for piece in split_simple_cycles(g, free_reduce(simple)):
        enc = sum(w[d] for d in piece)
        if enc < 0:
            piece, enc = [d ^ 1 for d in reversed(piece)], -enc
        if 0 < enc < W and is_simple(g, piece):
            cand = candidate(piece)
            if out.reduced is None or cand.quotient < out.reduced.quotient:
                out.reduced = cand
    out.split = True
    if out.reduced is None:
        out.lam_star = None
    return out


def reduction_invariants(
    g: PlanarEmbedding, c0: Sequence[int], w: Sequence[int], steps: Sequence[ReductionStep],
    params: ApproxParams, W: int,
) -> dict[str, bool]:
    """Which per-step guarantees of weight reduction held on this run."""
    prev_cost, prev_w = _cost(g, c0), sum(w[d] for d in c0)
    ok = {"cost_non_increasing": True, "drop_below_heavy": True, "near_simple": True}
    for st in steps:
        ok["cost_non_increasing"] &= st.cost <= prev_cost
        ok["drop_below_heavy"] &= prev_w - st.weight < params.beta_heavy * W
        ok["near_simple"] &= st.near_simple
        prev_cost, prev_w = st.cost, st.weight
    ok["final_weight"] = prev_w >= (params.alpha - params.beta_heavy) * W
    return ok


# ---------------------------------------------------------------------------
# leaf clusters


def leaf_cluster_solve(sub: SubEmbedding, W: int) -> Candidate | None:
    """Exact minimum-quotient simple cycle of a small embedded subgraph.

    Enumerates bipartitions of the faces; a bipartition whose two sides are
    both connected across edges is exactly a simple cycle.
    """
    g = sub.graph
    F = g.num_faces
    if F < 2:
        return None
    fw = np.array(g.face_weights, dtype=np.int64)
    masks = np.arange(1, 1 << (F - 1), dtype=np.int64)
    bits = ((masks[:, None] >> np.arange(F)) & 1).astype(np.int64)
    enc = bits @ fw
    cost = np.zeros(len(masks), dtype=np.int64)
    adj: list[set[int]] = [set() for _ in range(F)]
    for e in range(g.num_edges):
        a, b = g.face_of_dart[2 * e], g.face_of_dart[2 * e + 1]
        if a != b:
            cost += g.costs[e] * (bits[:, a] ^ bits[:, b])
            adj[a].add(b)
            adj[b].add(a)
    mw = np.minimum(enc, W - enc)
    ok = np.nonzero(mw > 0)[0]
    if ok.size == 0:
        return None
    ratio = cost[ok] / mw[ok]
    order = ok[np.argsort(ratio, kind="stable")]
    lo = float(ratio.min())
    head = [int(i) for i in order if cost[i] / mw[i] <= lo * (1 + 1e-9)]
    head.sort(key=lambda i: (Fraction(int(cost[i]), int(mw[i])), i))
    rest = [int(i) for i in order[len(head):]]
    full = (1 << F) - 1
    for i in head + rest:
        side = int(masks[i])
        if _connected(side, adj) and _connected(full ^ side, adj):
            bd = [d for d in range(g.num_darts)
                  if side >> g.face_of_dart[d] & 1 and not side >> g.face_of_dart[d ^ 1] & 1]
            cyc = _order_cycle(g, bd)
            return Candidate(Fraction(int(cost[i]), int(mw[i])), tuple(sub.to_original(cyc)),
                             int(cost[i]), int(enc[i]))
    return None


def _connected(mask: int, adj: list[set[int]]) -> bool:
    start = (mask & -mask).bit_length() - 1
    seen = 1 << start
    stack = [start]
    while stack:
        f = stack.pop()
        for t in adj[f]:
            if mask >> t & 1 and not seen >> t & 1:
                seen |= 1 << t
                stack.append(t)
    return seen == mask


# ---------------------------------------------------------------------------
# the search


@dataclass
class Call:
    order: tuple[int, int, int, int, int]  # (i, j, cluster, path, net position)
    s: int
    key: tuple[int, frozenset[int]]
    r_size: int


class QuotientApproximator:
    """Holds the decomposition and every cache used by the binary search."""

    def __init__(self, g: PlanarEmbedding, params: ApproxParams | None = None, *, root: int = 0) -> None:
        self.params = params or ApproxParams()
        self.primal = g
        self.dual = dualize(g)
        self.h = self.dual.graph
        self.W = g.total_weight
        if self.W < 2 or sum(1 for x in g.vertex_weights if x > 0) < 2:
            raise NoCut("fewer than two vertices carry weight")
        self.P = self.h.total_cost
        self.c_min = min(self.h.costs)
        self.weigher = RegionWeigher(self.h)
        self.spt = shortest_path_tree(self.h, root)
        self.dist = [int(x) for x in self.spt.dist]
        self.tree: ClusterTree = build_cluster_tree(self.h, self.spt, root=root, leaf_faces=self.params.leaf_faces)
        self._cluster_cache: dict[int, tuple[list[int], dict[int, list[tuple[int, int, int]]]]] = {}
        self._summaries: dict[tuple[int, frozenset[int]], RootedSummary] = {}
        self._calls: dict[Fraction, list[Call]] = {}
        self._leaves: list[tuple[int, Candidate]] | None = None
        self._thresholds: dict[Fraction, tuple[Fraction | None, list[Fraction | None]]] = {}
        self.stats: dict[str, Any] = {"find_calls": 0, "rooted_summaries": 0}

    # ladder ----------------------------------------------------------------
    def taus(self) -> list[Fraction]:
        out = []
        t = Fraction(self.c_min)
        while t <= self.P:
            out.append(t)
            t *= self.params.tau_step
        return out

    # leaves ------------------------------------------------------------------
    def leaf_candidates(self) -> list[tuple[int, Candidate]]:
        if self._leaves is None:
            self._leaves = []
            for c in self.tree.leaves():
                edges = self.tree.real_edges(c)
                if not edges:
                    continue
                sub = subembedding(self.h, edges, self.weigher)
                cand = leaf_cluster_solve(sub, self.W)
                if cand is not None:
                    self._leaves.append((c.id, cand))
        return self._leaves

    # clusters ----------------------------------------------------------------
    def _cluster(self, cid: int) -> tuple[list[int], dict[int, list[tuple[int, int, int]]]]:
        got = self._cluster_cache.get(cid)
        if got is None:
            edges = self.tree.real_edges(self.tree.clusters[cid])
            adj: dict[int, list[tuple[int, int, int]]] = {}
            for e in edges:
                a, b = self.h.edges[e]
                c = self.h.costs[e]
                adj.setdefault(a, []).append((b, c, e))
                adj.setdefault(b, []).append((a, c, e))
            got = (edges, adj)
            self._cluster_cache[cid] = got
        return got

    @staticmethod
    def _ball(adj, s: int, radius: int, allow=None) -> dict[int, int]:
        dist = {s: 0}
        heap = [(0, s)]
        done = set()
        while heap:
            d, v = heapq.heappop(heap)
            if v in done:
                continue
            done.add(v)
            for u, c, _ in adj.get(v, ()):
                nd = d + c
                if nd > radius or (allow is not None and not allow(u)):
                    continue
                if nd < dist.get(u, radius + 1):
                    dist[u] = nd
                    heapq.heappush(heap, (nd, u))
        return dist

    # call list ---------------------------------------------------------------
    def calls(self, tau: Fraction) -> list[Call]:
        """Rooted-search calls of one cost scale in loop order.

        Calls that would search a trimmed subgraph contained in another
        call's (same start, parent cluster inside the other's, vertex window
        inside the other's) are dropped: any cycle the smaller call is
        guaranteed to find lies in the larger one too.
        """
        got = self._calls.get(tau)
        if got is not None:
            return got
        eps = self.params.eps
        p, q = tau.numerator, tau.denominator
        scale = eps.denominator * q
        delta = eps.numerator * p  # eps * tau, scaled
        sigma = (eps.denominator + 2 * eps.numerator) * p  # (1 + 2 eps) tau, scaled
        fam = np.arange(int(1 / eps) + 1, dtype=np.int64)
        radius = math.floor((1 + eps) * tau)
        D = self.dist
        # (parent, s, window run) -> (loop order, window, ball span)
        realized: dict[tuple[int, int, int, int], tuple[tuple, int, int, int, int]] = {}
        balls: dict[tuple[int, int], np.ndarray] = {}
        for Q in self.tree.clusters:
            if Q.parent < 0:
                continue
            _, adj = self._cluster(Q.parent)
            for pi, path in enumerate(self.tree.intersection_paths(Q)):
                pd = np.array([D[v] * scale for v in path], dtype=np.int64)
                nets: dict[tuple[int, int], list[int]] = {}
                for pos, s in enumerate(path):
                    if s not in adj:
                        continue
                    j = (pd[pos] - fam * delta) // sigma
                    lo_a = fam * delta + j * sigma
                    hi_a = lo_a + sigma
                    seg_lo = np.searchsorted(pd, lo_a, "left")
                    seg_hi = np.searchsorted(pd, hi_a, "left")
                    bd = balls.get((Q.parent, s))
                    if bd is None:
                        ball = self._ball(adj, s, radius)
                        bd = np.array(sorted({D[v] * scale for v in ball}), dtype=np.int64)
                        balls[(Q.parent, s)] = bd
                    k_lo = np.searchsorted(bd, lo_a, "left")
                    k_hi = np.searchsorted(bd, hi_a, "left")
                    B = max(len(bd), len(path)) + 1
                    combo = ((k_lo * B + k_hi) * B + seg_lo) * B + seg_hi
                    _, first_i = np.unique(combo, return_index=True)
                    for i in sorted(first_i.tolist()):
                        key = (Q.parent, s, int(k_lo[i]), int(k_hi[i]))
                        if key in realized:
                            continue
                        seg = (int(seg_lo[i]), int(seg_hi[i]))
                        net = nets.get(seg)
                        if net is None:
                            net = [seg[0] + k for k in eps_tau_net(pd[seg[0]:seg[1]].tolist(), delta)]
                            nets[seg] = net
                        if pos not in net:
                            continue
                        realized[key] = ((i, int(j[i]), Q.id, pi, net.index(pos)), int(lo_a[i]), int(hi_a[i]),
                                         int(bd[key[2]]), int(bd[key[3] - 1]))
        by_s: dict[int, list[tuple]] = {}
        for (cid, s, _, _), (order, lo, hi, dmin, dmax) in realized.items():
            by_s.setdefault(s, []).append((order, cid, lo, hi, dmin, dmax))
        kept = []
        for s, entries in by_s.items():
            entries.sort()
            for k, (order, cid, lo, hi, dmin, dmax) in enumerate(entries):
                dominated = False
                for k2, (o2, c2, lo2, hi2, dmin2, dmax2) in enumerate(entries):
                    if k2 == k or not self._within(cid, c2):
                        continue
                    if lo2 <= dmin and dmax < hi2:
                        same = cid == c2 and dmin2 == dmin and dmax2 == dmax
                        if not same or k2 < k:
                            dominated = True
                            break
                if not dominated:
                    kept.append((order, cid, s, lo, hi))
        kept.sort()
        out = []
        seen = set()
        for order, cid, s, lo, hi in kept:
            key = self._trim_key(cid, s, radius, lo, hi, scale)
            if key in seen:
                continue
            seen.add(key)
            out.append(Call(order, s, key, len(key[1])))
        self._calls[tau] = out
        return out

    def _within(self, a: int, b: int) -> bool:
        """Cluster ``a`` equals ``b`` or lies below it."""
        cl = self.tree.clusters
        while a >= 0:
            if a == b:
                return True
            a = cl[a].parent
        return False

    def _trim_key(self, cid: int, s: int, radius: int, lo: int, hi: int, scale: int):
        _, adj = self._cluster(cid)
        D = self.dist
        ball = self._ball(adj, s, radius, lambda u: lo <= D[u] * scale < hi)
        edges = frozenset(e for v in ball for u, _, e in adj[v] if u in ball)
        return (s, edges)

    def summary(self, key: tuple[int, frozenset[int]]) -> RootedSummary:
        got = self._summaries.get(key)
        if got is None:
            s, edges = key
            got = rooted_summary(self.h, self.weigher, sorted(edges), s, self.params)
            self._summaries[key] = got
            self.stats["rooted_summaries"] += 1
        return got

    # decisions ---------------------------------------------------------------
    def thresholds(self, tau: Fraction) -> tuple[Fraction | None, list[Fraction | None]]:
        """Per-call success thresholds of one scale and their minimum (leaves included)."""
        got = self._thresholds.get(tau)
        if got is None:
            target = self.params.target
            per = [self.summary(c.key).threshold(target) for c in self.calls(tau)]
            pool = [t for t in per if t is not None]
            pool += [cand.quotient / target for _, cand in self.leaf_candidates()]
            got = (min(pool) if pool else None, per)
            self._thresholds[tau] = got
        return got

    def find_lambda_tau(self, lam: Fraction, tau: Fraction) -> Candidate | None:
        lam, tau = Fraction(lam), Fraction(tau)
        bound = self.params.target * lam
        for _, cand in self.leaf_candidates():
            if cand.quotient <= bound:
                return cand
        low, per = self.thresholds(tau)
        if low is None or lam < low:
            return None
        for call, t in zip(self.calls(tau), per):
            if t is not None and lam >= t:
                got = self.summary(call.key).result(lam, self.params.target)
                assert got is not None
                return got
        return None

    def find_lambda(self, lam: Fraction) -> Candidate | None:
        self.stats["find_calls"] += 1
        for tau in self.taus():
            got = self.find_lambda_tau(lam, tau)
            if got is not None:
                return got
        return None

    def solve(self) -> CutResult:
        lo = Fraction(1, self.W)
        hi = Fraction(self.P)
        best = self.find_lambda(lo)
        if best is None:
            best = self.find_lambda(hi)
            if best is None:
                raise NoCut("no cycle found at the largest ratio")
            prec = self.params.precision
            while hi > prec * lo:
                mid = Fraction(math.sqrt(lo * hi)).limit_denominator(1 << 20)
                if not lo < mid < hi:
                    mid = (lo + hi) / 2
                got = self.find_lambda(mid)
                if got is None:
                    lo = mid
                else:
                    hi = mid
                    if got.quotient < best.quotient:
                        best = got
            self.stats["lambda_interval"] = (lo, hi)
        self.best = best
        cut = cut_from_dual_cycle(self.dual, list(best.darts))
        assert cut.quotient == best.quotient
        return cut

    # reporting ---------------------------------------------------------------
    def trace(self) -> dict[str, Any]:
        t = self.tree
        clusters = t.clusters
        return {
            "faces": self.h.num_faces,
            "clusters": len(clusters),
            "depth": t.depth(),
            "max_scars": max(c.scars for c in clusters),
            "size_constant": t.size_constant(),
            "sizes": [c.size for c in clusters],
            "scars": [c.scars for c in clusters],
            "leaves": len(t.leaves()),
            "taus": [str(x) for x in self.taus()],
            "calls": {str(k): len(v) for k, v in self._calls.items()},
            "rooted": [
                {"s": s, "size": r.size,
                 "threshold": None if r.threshold(self.params.target) is None else str(r.threshold(self.params.target)),
                 "reduction_steps": len(r.steps)}
                for (s, _), r in self._summaries.items()
            ],
            "find_calls": self.stats["find_calls"],
        }


def approx_min_quotient(g: PlanarEmbedding, params: ApproxParams | None = None) -> CutResult:
    return QuotientApproximator(g, params).solve()


def find_lambda(approx: QuotientApproximator, lam: Fraction) -> Candidate | None:
    return approx.find_lambda(lam)


def find_lambda_tau(approx: QuotientApproximator, lam: Fraction, tau: Fraction) -> Candidate | None:
    return approx.find_lambda_tau(lam, tau)


def rooted_find(
    approx: QuotientApproximator, lam: Fraction, tau: Fraction, s: int, edges: Sequence[int]
) -> Candidate | None:
    """Rooted search from ``s`` in the subgraph ``edges`` of the dual, trimmed at (1 + eps) tau."""
    adj: dict[int, list[tuple[int, int, int]]] = {}
    for e in edges:
        a, b = approx.h.edges[e]
        adj.setdefault(a, []).append((b, approx.h.costs[e], e))
        adj.setdefault(b, []).append((a, approx.h.costs[e], e))
    if s not in adj:
        return None
    ball = approx._ball(adj, s, math.floor((1 + approx.params.eps) * Fraction(tau)))
    kept = frozenset(e for v in ball for u, _, e in adj[v] if u in ball)
    return approx.summary((s, kept)).result(Fraction(lam), approx.params.target)


def dumps_trace(approx: QuotientApproximator) -> str:
    return json.dumps(approx.trace(), indent=1)
