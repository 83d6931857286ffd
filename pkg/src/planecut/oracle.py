"""Brute-force reference computations used to validate solvers and claims.

Nothing here imports the solver modules; the only shared piece is the
embedding container.
"""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import BudgetExceeded
from .planar_core import PlanarEmbedding


@dataclass(frozen=True)
class OracleBudget:
    max_cut_vertices: int = 20
    max_apsp_nodes: int = 4096
    max_linkage_nodes: int = 4096
    max_cycle_vertices: int = 12


DEFAULT_BUDGET = OracleBudget()


# ---------------------------------------------------------------------------
# cut enumeration


@dataclass
class CutTable:
    """Every bipartition (S, V - S) with vertex ``n - 1`` outside S.

    Row ``m`` describes the side ``S = {v : bit v of m is set}`` for
    ``m = 1 .. 2**(n-1) - 1``.
    """

    n: int
    total_weight: int
    masks: np.ndarray
    cost: np.ndarray
    weight: np.ndarray

    def __len__(self) -> int:
        return len(self.masks)

    def side(self, i: int) -> tuple[int, ...]:
        m = int(self.masks[i])
        return tuple(v for v in range(self.n) if m >> v & 1)

    def quotient(self, i: int) -> Fraction | None:
        m = min(int(self.weight[i]), self.total_weight - int(self.weight[i]))
        return Fraction(int(self.cost[i]), m) if m > 0 else None

    def sparsity(self, i: int) -> Fraction | None:
        p = int(self.weight[i]) * (self.total_weight - int(self.weight[i]))
        return Fraction(int(self.cost[i]), p) if p > 0 else None

    def bisection_feasible(self, i: int) -> bool:
        return 2 * int(self.weight[i]) == self.total_weight

    def _best(self, denom: np.ndarray) -> tuple[Fraction, int] | None:
        ok = denom > 0
        if not ok.any():
            return None
        idx = np.flatnonzero(ok)
        ratio = self.cost[idx] / denom[idx]
        lo = ratio.min()
        near = idx[ratio <= lo * (1 + 1e-9)]
        best = min((Fraction(int(self.cost[i]), int(denom[i])), int(self.masks[i]), int(i)) for i in near)
        return best[0], best[2]

    def min_quotient(self) -> tuple[Fraction, int] | None:
        """Exact minimum quotient and the row attaining it (smallest mask on ties)."""
        return self._best(np.minimum(self.weight, self.total_weight - self.weight))

    def min_sparsity(self) -> tuple[Fraction, int] | None:
        return self._best(self.weight * (self.total_weight - self.weight))

    def min_bisection(self) -> tuple[int, int] | None:
        ok = 2 * self.weight == self.total_weight
        if not ok.any():
            return None
        idx = np.flatnonzero(ok)
        i = int(idx[np.argmin(self.cost[idx])])
        return int(self.cost[i]), i


def brute_cuts(g: PlanarEmbedding, budget: OracleBudget = DEFAULT_BUDGET) -> CutTable:
    n = g.num_vertices
    if n > budget.max_cut_vertices:
        raise BudgetExceeded(f"{n} vertices exceed the cut budget {budget.max_cut_vertices}")
    if n < 2:
        empty = np.zeros(0, dtype=np.int64)
        return CutTable(n, g.total_weight, empty, empty, empty)
    masks = np.arange(1, 1 << (n - 1), dtype=np.int64)
    bits = [(masks >> v) & 1 for v in range(n - 1)] + [np.zeros_like(masks)]
    cost = np.zeros_like(masks)
    for (u, v), c in zip(g.edges, g.costs):
        if u != v:
            cost += c * (bits[u] ^ bits[v])
    weight = np.zeros_like(masks)
    for v in range(n - 1):
        weight += g.vertex_weights[v] * bits[v]
    return CutTable(n, g.total_weight, masks, cost, weight)


# ---------------------------------------------------------------------------
# distances


def _adjacency(g: PlanarEmbedding) -> list[list[tuple[int, int]]]:
    adj: list[list[tuple[int, int]]] = [[] for _ in range(g.num_vertices)]
    for (u, v), c in zip(g.edges, g.costs):
        adj[u].append((v, c))
        adj[v].append((u, c))
    return adj


def dijkstra(adj: Sequence[Sequence[tuple[int, int]]], src: int) -> list[float]:
    dist = [float("inf")] * len(adj)
    dist[src] = 0
    heap = [(0, src)]
    while heap:
        d, u = heapq.heappop(heap)
        if d > dist[u]:
            continue
        for v, c in adj[u]:
            nd = d + c
            if nd < dist[v]:
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return dist


def apsp(g: PlanarEmbedding, budget: OracleBudget = DEFAULT_BUDGET) -> np.ndarray:
    """Exact all-pairs distances as an int64 matrix (graphs are connected)."""
    n = g.num_vertices
    if n > budget.max_apsp_nodes:
        raise BudgetExceeded(f"{n} nodes exceed the APSP budget {budget.max_apsp_nodes}")
    adj = _adjacency(g)
    return np.array([dijkstra(adj, s) for s in range(n)], dtype=np.int64)


def bellman_ford(g: PlanarEmbedding, src: int) -> list[float]:
    """Label-correcting distances; slow but independent of Dijkstra."""
    dist = [float("inf")] * g.num_vertices
    dist[src] = 0
    for _ in range(g.num_vertices):
        changed = False
        for (u, v), c in zip(g.edges, g.costs):
            if dist[u] + c < dist[v]:
                dist[v] = dist[u] + c
                changed = True
            if dist[v] + c < dist[u]:
                dist[u] = dist[v] + c
                changed = True
        if not changed:
            break
    return dist


def hop_diameter(g: PlanarEmbedding) -> int:
    adj = _adjacency(g)
    best = 0
    for s in range(g.num_vertices):
        dist = [-1] * g.num_vertices
        dist[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for v, _ in adj[u]:
                if dist[v] < 0:
                    dist[v] = dist[u] + 1
                    queue.append(v)
        best = max(best, max(dist))
    return best


def set_distance(dist: np.ndarray, sa: Sequence[int], sb: Sequence[int], mode: str) -> int:
    block = dist[np.ix_(list(sa), list(sb))]
    if mode == "max":
        return int(block.max())
    if mode == "sum":
        return int(block.sum())
    raise ValueError(f"unknown set-distance mode {mode!r}")


# ---------------------------------------------------------------------------
# agglomerative clustering


@dataclass(frozen=True)
class Merge:
    a: int
    b: int
    new_id: int
    value: Fraction
    members: tuple[int, ...]


def linkage_simulate(
    dist: np.ndarray, mode: str, budget: OracleBudget = DEFAULT_BUDGET
) -> list[Merge]:
    """Naive agglomerative clustering over a distance matrix.

    Clusters start as the nodes ``0..N-1``; the t-th merge creates id ``N+t``.
    The pair with the smallest linkage value merges first, ties going to the
    lexicographically smallest ``(id, id)`` pair.
    """
    n = len(dist)
    if n > budget.max_linkage_nodes:
        raise BudgetExceeded(f"{n} nodes exceed the linkage budget")
    if mode not in ("single", "complete", "average"):
        raise ValueError(f"unknown linkage mode {mode!r}")
    big = np.iinfo(np.int64).max // 4
    # value matrix: exact ints for single/complete, pair sums for average
    val = np.array(dist, dtype=np.int64)
    size = np.ones(n, dtype=np.int64)
    ids = np.arange(n, dtype=np.int64)
    active = np.ones(n, dtype=bool)
    members: list[list[int]] = [[i] for i in range(n)]
    merges: list[Merge] = []
    for t in range(n - 1):
        act = np.flatnonzero(active)
        sub = val[np.ix_(act, act)]
        if mode == "average":
            score = sub / np.outer(size[act], size[act])
        else:
            score = sub.astype(float)
        np.fill_diagonal(score, np.inf)
        lo = score.min()
        cand = np.argwhere(score <= lo * (1 + 1e-12) if lo > 0 else score <= lo)
        best = None
        for i, j in cand:
            if i >= j:
                continue
            si, sj = act[i], act[j]
            if mode == "average":
                v = Fraction(int(val[si, sj]), int(size[si] * size[sj]))
            else:
                v = Fraction(int(val[si, sj]))
            key = (v, min(ids[si], ids[sj]), max(ids[si], ids[sj]))
            if best is None or key < best[0]:
                best = (key, si, sj)
        (v, ia, ib), si, sj = best
        keep, drop = (si, sj) if si < sj else (sj, si)
        if mode == "single":
            row = np.minimum(val[keep], val[drop])
        elif mode == "complete":
            row = np.maximum(val[keep], val[drop])
        else:
            row = val[keep] + val[drop]
        active[drop] = False
        row = np.where(active, row, big)
        row[keep] = 0
        val[keep, :] = row
        val[:, keep] = row
        val[drop, :] = big
        val[:, drop] = big
        size[keep] += size[drop]
        members[keep] = sorted(members[keep] + members[drop])
        members[drop] = []
        new_id = n + t
        ids[keep] = new_id
        merges.append(Merge(int(ia), int(ib), new_id, v, tuple(members[keep])))
    return merges


# ---------------------------------------------------------------------------
# cycles


@dataclass
class OracleCycle:
    darts: tuple[int, ...]  # oriented with the enclosed side on the left
    cost: int
    enclosed: int
    enclosed_faces: frozenset[int] = field(default_factory=frozenset)


def flood_outside(g: PlanarEmbedding, cycle_edges: set[int], f_infinity: int) -> set[int]:
    """Faces reachable from ``f_infinity`` without crossing ``cycle_edges``."""
    seen = {f_infinity}
    queue = deque([f_infinity])
    while queue:
        f = queue.popleft()
        for d in g.faces[f]:
            if d >> 1 in cycle_edges:
                continue
            t = g.face_of_dart[d ^ 1]
            if t not in seen:
                seen.add(t)
                queue.append(t)
    return seen


def enumerate_simple_cycles(
    g: PlanarEmbedding, f_infinity: int | None = None, budget: OracleBudget = DEFAULT_BUDGET
) -> list[OracleCycle]:
    """Every undirected simple cycle once, with cost and enclosed face weight.

    Self-loops and pairs of parallel edges count as cycles.  Faces are
    weighted by ``g.face_weights``; ``f_infinity`` defaults to the outer face.
    """
    n = g.num_vertices
    if n > budget.max_cycle_vertices:
        raise BudgetExceeded(f"{n} vertices exceed the cycle budget")
    f_inf = g.outer_face if f_infinity is None else f_infinity
    found: list[tuple[int, ...]] = []
    for s in range(n):
        # darts out of s to vertices >= s; cycles are rooted at their min vertex
        stack = [(s, [], {s})]
        while stack:
            u, path, used = stack.pop()
            for d in g.rotation[u]:
                v = g.head(d)
                if v == s:
                    cyc = path + [d]
                    if len(cyc) == 1 or (cyc[0] >> 1) < (cyc[-1] >> 1):
                        found.append(tuple(cyc))
                elif v > s and v not in used:
                    stack.append((v, path + [d], used | {v}))
    total = g.total_face_weight
    out = []
    for cyc in found:
        edges = {d >> 1 for d in cyc}
        outside = flood_outside(g, edges, f_inf)
        inside = frozenset(set(range(g.num_faces)) - outside)
        enclosed = sum(g.face_weights[f] for f in inside)
        darts = cyc
        if g.face_of_dart[cyc[0]] not in inside:
            darts = tuple(d ^ 1 for d in reversed(cyc))
        out.append(OracleCycle(darts, sum(g.costs[d >> 1] for d in cyc), enclosed, inside))
        assert enclosed <= total
    return out


def has_negative_cycle(g: PlanarEmbedding, dart_costs: Sequence, allowed: Sequence[bool] | None = None) -> bool:
    """Exhaustive check over directed simple cycles."""
    for c in enumerate_simple_cycles(g):
        for darts in (c.darts, tuple(d ^ 1 for d in reversed(c.darts))):
            if allowed is not None and not all(allowed[d] for d in darts):
                continue
            if sum(dart_costs[d] for d in darts) < 0:
                return True
    return False
