"""Generators and verifiers for the lower-bound gadgets.

Three families are covered: the (min,+)-convolution reduction to cut
problems, the diamond gadget for weighted diameter, and the closest pair of
sets gadgets with their linkage-clustering extensions.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import oracle
from .cuts import CutResult
from .errors import ClaimViolated, LengthMismatch, MalformedInput
from .exact_solver import exact_mqc_layered, min_bisection_small
from .planar_core import PlanarEmbedding, from_coordinates

GADGET_M = 4


def _report_claims(claims: dict[str, bool], detail: object, raise_on_violation: bool) -> None:
    bad = [k for k, ok in claims.items() if not ok]
    if bad and raise_on_violation:
        raise ClaimViolated(f"claims failed: {', '.join(bad)}", detail)


# ---------------------------------------------------------------------------
# (min,+)-convolution upper bound reduction


@dataclass(eq=False)
class MinPlusInstance:
    A: tuple[int, ...]
    B: tuple[int, ...]
    C: tuple[int, ...]
    unit_weight: bool
    graph: PlanarEmbedding
    labels: dict[str, int]
    path_a: tuple[int, ...]  # edge ids; index i-1 is the edge cut "at i"
    path_b: tuple[int, ...]
    path_c: tuple[int, ...]
    heavy_edges: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.A)

    @property
    def T(self) -> int:
        return sum(self.A) + sum(self.B) + sum(self.C)

    @property
    def beta(self) -> int:
        return 4 * self.T * self.n ** 2

    @property
    def heavy(self) -> int:
        return 1210 * self.n ** 2 * (2 * self.beta + self.T)

    @property
    def quotient_threshold(self) -> Fraction:
        return Fraction(3 * self.beta + self.T, 12 * self.n)

    @property
    def sparsity_threshold(self) -> Fraction:
        return Fraction(3 * self.beta + self.T, (12 * self.n) ** 2)

    @property
    def bisection_threshold(self) -> int:
        return 3 * self.beta + self.T

    def witness(self) -> tuple[int, int, int] | None:
        """First (i, j, k) with i + j = k and a_i + b_j < c_k, 1-based."""
        n = self.n
        for k in range(1, n + 1):
            for i in range(1, k):
                j = k - i
                if j <= n and self.A[i - 1] + self.B[j - 1] < self.C[k - 1]:
                    return i, j, k
        return None

    def meta(self) -> dict:
        return {"kind": "minplus", "A": list(self.A), "B": list(self.B), "C": list(self.C),
                "unit_weight": self.unit_weight,
                "thresholds": {"quotient": _frac(self.quotient_threshold),
                               "sparsity": _frac(self.sparsity_threshold),
                               "bisection": str(self.bisection_threshold)}}


def _frac(x: Fraction | int | None) -> str | None:
    if x is None:
        return None
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def gen_minplus(A: Sequence[int], B: Sequence[int], C: Sequence[int], unit_weight: bool = False) -> MinPlusInstance:
    """Three u-v paths encoding A, B and reversed C, plus three heavy edges.

    Path edges cost beta + a_i, beta + b_i and beta + T - c_i.  The last edge
    of the C path (c_n to v) also costs beta + T - c_n so that the cut at
    k = n prices like every other C edge.
    """
    n = len(A)
    if len(B) != n or len(C) != n:
        raise LengthMismatch(f"lengths {len(A)}, {len(B)}, {len(C)}")
    if n < 2:
        raise MalformedInput("sequences need length at least 2")
    if any(int(x) != x or x < 1 for x in (*A, *B, *C)):
        raise MalformedInput("sequences must hold positive integers")
    T = sum(A) + sum(B) + sum(C)
    beta = 4 * T * n * n
    heavy = 1210 * n * n * (2 * beta + T)
    pts: list[tuple[float, float]] = []
    weights: list[int] = []
    labels: dict[str, int] = {}

    def add(name: str, xy: tuple[float, float], w: int) -> int:
        labels[name] = len(pts)
        pts.append(xy)
        weights.append(w)
        return labels[name]

    u = add("u", (0.0, 0.0), 1 if unit_weight else 10 * n)
    v = add("v", (0.0, float(n + 1)), 1 if unit_weight else 11 * n)
    a = [add(f"a{i}", (-1.0, float(n + 1 - i)), 1) for i in range(1, n + 1)]
    b = [add(f"b{i}", (0.0, float(n + 1 - i)), 1) for i in range(1, n + 1)]
    c = [add(f"c{i}", (1.0, float(i)), 1) for i in range(1, n + 1)]
    edges: list[tuple[int, int, int]] = []

    def edge(x: int, y: int, cost: int) -> int:
        edges.append((x, y, cost))
        return len(edges) - 1

    heavy_edges = [edge(v, a[0], heavy), edge(v, b[0], heavy), edge(c[0], u, heavy)]
    path_a = [edge(a[i], a[i + 1], beta + A[i]) for i in range(n - 1)] + [edge(a[-1], u, beta + A[-1])]
    path_b = [edge(b[i], b[i + 1], beta + B[i]) for i in range(n - 1)] + [edge(b[-1], u, beta + B[-1])]
    path_c = [edge(c[i], c[i + 1], beta + T - C[i]) for i in range(n - 1)] + [edge(c[-1], v, beta + T - C[-1])]
    if unit_weight:
        for t in range(10 * n - 1):
            p = add(f"u{t + 1}", (-1.0 + 2.0 * (t + 1) / (10 * n + 1), -1.0), 1)
            heavy_edges.append(edge(u, p, heavy))
        for t in range(11 * n - 1):
            p = add(f"v{t + 1}", (-1.0 + 2.0 * (t + 1) / (11 * n + 1), float(n + 2)), 1)
            heavy_edges.append(edge(v, p, heavy))
    g = from_coordinates(pts, edges, weights)
    return MinPlusInstance(tuple(A), tuple(B), tuple(C), unit_weight, g, labels,
                           tuple(path_a), tuple(path_b), tuple(path_c), tuple(heavy_edges))


@dataclass
class MinPlusReport:
    witness: tuple[int, int, int] | None
    quotient: Fraction
    sparsity: Fraction
    bisection: int
    claims: dict[str, bool]
    cut_positions: dict[str, tuple[int, int, int] | None] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.claims.values())

    def to_json(self) -> dict:
        return {"witness": self.witness, "quotient": _frac(self.quotient),
                "sparsity": _frac(self.sparsity), "bisection": str(self.bisection),
                "claims": self.claims, "cut_positions": self.cut_positions, "ok": self.ok}


def _cut_position(inst: MinPlusInstance, cut: CutResult) -> tuple[int, int, int] | None:
    """(i, j, k) when the cut takes exactly one edge of each path and no heavy edge."""
    es = set(cut.cut_edges)
    if es & set(inst.heavy_edges):
        return None
    pos = []
    for path in (inst.path_a, inst.path_b, inst.path_c):
        hit = [t + 1 for t, e in enumerate(path) if e in es]
        if len(hit) != 1:
            return None
        pos.append(hit[0])
    if len(es) != 3:
        return None
    return pos[0], pos[1], pos[2]


def _sides_match(inst: MinPlusInstance, cut: CutResult, pos: tuple[int, int, int]) -> bool:
    i, j, k = pos
    lab = inst.labels
    names = ["v"] + [f"a{t}" for t in range(1, i + 1)] + [f"b{t}" for t in range(1, j + 1)]
    names += [f"c{t}" for t in range(k + 1, inst.n + 1)]
    names += [x for x in lab if x.startswith("v") and x[1:].isdigit()]
    v_side = {lab[x] for x in names}
    side = set(cut.side)
    return side == v_side or side == set(range(inst.graph.num_vertices)) - v_side


def verify_minplus(inst: MinPlusInstance, *, raise_on_violation: bool = True) -> MinPlusReport:
    """Check the threshold equivalences and the structure of the optimal cuts."""
    g = inst.graph
    wit = inst.witness()
    q = exact_mqc_layered(g, "quotient")
    s = exact_mqc_layered(g, "sparsity")
    b = min_bisection_small(g)
    has = wit is not None
    claims = {
        "quotient": (q.quotient < inst.quotient_threshold) == has,
        "sparsity": (s.sparsity < inst.sparsity_threshold) == has,
        "bisection": (b.cost < inst.bisection_threshold) == has,
    }
    positions = {}
    structure = sides = True
    for name, cut in (("quotient", q), ("sparsity", s), ("bisection", b)):
        pos = _cut_position(inst, cut)
        positions[name] = pos
        if pos is None:
            structure = False
        elif not _sides_match(inst, cut, pos):
            sides = False
    claims["structure"] = structure
    claims["sides"] = sides
    bp = positions["bisection"]
    claims["balance"] = bp is not None and bp[0] + bp[1] == bp[2]
    report = MinPlusReport(wit, q.quotient, s.sparsity, b.cost, claims, positions)
    _report_claims(claims, report.to_json(), raise_on_violation)
    return report


# ---------------------------------------------------------------------------
# diamond gadget


@dataclass(eq=False)
class DiamondInstance:
    A: tuple[int, ...]
    B: tuple[int, ...]
    graph: PlanarEmbedding
    labels: dict[str, int]
    M: int = GADGET_M

    @property
    def n(self) -> int:
        return len(self.A)

    def intersecting(self) -> bool:
        return any(x and y for x, y in zip(self.A, self.B))

    def meta(self) -> dict:
        return {"kind": "diamond", "A": list(self.A), "B": list(self.B), "M": self.M,
                "claimed_diameter": (self.n + 2) * self.M + 2 if self.intersecting() else None,
                "diameter_bound": (self.n + 2) * self.M + 1}


def gen_diamond(A: Sequence[int], B: Sequence[int]) -> DiamondInstance:
    n = len(A)
    if len(B) != n:
        raise LengthMismatch(f"lengths {len(A)} and {len(B)}")
    if n < 1 or any(x not in (0, 1) for x in (*A, *B)):
        raise MalformedInput("bit strings of length at least 1 expected")
    M = GADGET_M
    pts: list[tuple[float, float]] = []
    labels: dict[str, int] = {}

    def add(name: str, xy: tuple[float, float]) -> int:
        labels[name] = len(pts)
        pts.append(xy)
        return labels[name]

    a = [add(f"a{i}", (0.0, -float(i))) for i in range(1, n + 1)]
    l, r = add("l", (-1.0, -n - 1.0)), add("r", (1.0, -n - 1.0))
    l2, r2 = add("l'", (-1.0, -n - 2.0)), add("r'", (1.0, -n - 2.0))
    b = [add(f"b{j}", (0.0, -n - 2.0 - j)) for j in range(1, n + 1)]
    edges = [(l, l2, M), (r, r2, M)]
    for i in range(1, n + 1):
        edges.append((a[i - 1], l, i * M + A[i - 1]))
        edges.append((a[i - 1], r, (n + 1 - i) * M + A[i - 1]))
    for j in range(1, n + 1):
        edges.append((b[j - 1], l2, (n + 1 - j) * M + B[j - 1]))
        edges.append((b[j - 1], r2, j * M + B[j - 1]))
    g = from_coordinates(pts, edges, [1] * len(pts))
    return DiamondInstance(tuple(A), tuple(B), g, labels)


@dataclass
class DiamondReport:
    diameter: int
    hop_diameter: int
    special: list[int]
    crossing_edges: int
    claims: dict[str, bool]

    @property
    def ok(self) -> bool:
        return all(self.claims.values())

    def to_json(self) -> dict:
        return {**asdict(self), "ok": self.ok}


def verify_diamond(inst: DiamondInstance, *, raise_on_violation: bool = True) -> DiamondReport:
    g, n, M = inst.graph, inst.n, inst.M
    dist = oracle.apsp(g)
    diam = int(dist.max())
    hop = oracle.hop_diameter(g)
    lab = inst.labels
    special = [int(dist[lab[f"a{i}"], lab[f"b{i}"]]) for i in range(1, n + 1)]
    alice = {lab[x] for x in lab if x[0] == "a"} | {lab["l"], lab["r"]}
    crossing = sum(1 for x, y in g.edges if (x in alice) != (y in alice))
    if inst.intersecting():
        diam_ok = diam == (n + 2) * M + 2
    else:
        diam_ok = diam <= (n + 2) * M + 1
    claims = {
        "diameter": diam_ok,
        "special_pairs": all(special[i] == (n + 2) * M + inst.A[i] + inst.B[i] for i in range(n)),
        "hop_diameter": hop == 3,
        "two_crossing_edges": crossing == 2,
    }
    report = DiamondReport(diam, hop, special, crossing, claims)
    _report_claims(claims, report.to_json(), raise_on_violation)
    return report


# ---------------------------------------------------------------------------
# closest pair of sets gadgets

SET_VARIANTS = ("maxdist", "sumdist", "complete-linkage", "average-linkage")


@dataclass(eq=False)
class SetsInstance:
    vectors: tuple[tuple[int, ...], ...]
    variant: str
    graph: PlanarEmbedding
    sets: tuple[tuple[int, ...], ...]
    left: int
    right: int
    copies: int = 1
    scale: int = 1
    shift: int = 0
    unweighted: bool = False
    M: int = GADGET_M

    @property
    def n(self) -> int:
        return len(self.vectors)

    @property
    def d(self) -> int:
        return len(self.vectors[0])

    def meta(self) -> dict:
        return {"kind": "sets", "variant": self.variant, "vectors": [list(v) for v in self.vectors],
                "copies": self.copies, "unweighted": self.unweighted,
                "sets": [list(s) for s in self.sets], "left": self.left, "right": self.right}


def gen_sets(
    vectors: Sequence[Sequence[int]],
    variant: str,
    *,
    unweighted: bool = False,
    copies: int | None = None,
    literal_junction: bool = False,
) -> SetsInstance:
    """Diamond-like fan of set nodes between two hubs on a vertical line.

    Every vector contributes nodes u_1..u_d then u'_d..u'_1, stacked top to
    bottom, each joined to the left hub and to the right hub.  Linkage
    variants chain each set along the line with weight-5 edges; the chain
    crosses from u_d to u'_d, where hub weights differ by only M.  With
    ``literal_junction`` the chain instead runs u_d to u'_1 and then
    u'_1..u'_d, which opens shortcuts of cost 5 between hub weights d*M apart.
    """
    if variant not in SET_VARIANTS:
        raise MalformedInput(f"unknown variant {variant!r}")
    vecs = tuple(tuple(int(x) for x in v) for v in vectors)
    n = len(vecs)
    if n < 2:
        raise MalformedInput("need at least two vectors")
    d = len(vecs[0])
    if d < 1 or any(len(v) != d for v in vecs):
        raise LengthMismatch("vectors must share a positive dimension")
    if any(x not in (0, 1) for v in vecs for x in v):
        raise MalformedInput("vectors must be binary")
    M = GADGET_M
    linkage = variant.endswith("linkage")
    complement = variant in ("sumdist", "average-linkage")
    k = 1
    scale = 1
    if variant == "average-linkage":
        k = d * d + 1 if copies is None else copies
        scale = 100 * d * k
    shift = 11 * d if linkage else 0
    # (vector, coordinate, primed) for every slot on the line, top to bottom
    primed = range(1, d + 1) if literal_junction else range(d, 0, -1)
    slots: list[tuple[int, int, int]] = []
    for a in range(n):
        slots += [(a, j, 0) for j in range(1, d + 1)] + [(a, j, 1) for j in primed]
    line_len = len(slots) * k
    pts: list[tuple[float, float]] = []
    sets: list[list[int]] = [[] for _ in range(n)]
    for a, _, _ in slots:
        for _ in range(k):
            sets[a].append(len(pts))
            pts.append((0.0, -float(len(pts))))
    mid = -(line_len - 1) / 2.0
    left = len(pts)
    pts.append((-1.0, mid))
    right = len(pts)
    pts.append((1.0, mid))
    edges: list[tuple[int, int, int]] = []
    node = 0
    for a, j, p in slots:
        bit = vecs[a][j - 1]
        rbit = 1 - bit if complement else bit
        wl = (j if not p else 2 * d + 1 - j) * M + bit
        wr = (2 * d + 1 - j if not p else j) * M + rbit
        for _ in range(k):
            edges.append((node, left, (wl + shift) * scale))
            edges.append((node, right, (wr + shift) * scale))
            node += 1
    if linkage:
        for a in range(n):
            members = sets[a]
            for t in range(len(members) - 1):
                same_slot = (t + 1) % k != 0
                w = 1 if same_slot and k > 1 else (M + 1) * scale
                edges.append((members[t], members[t + 1], w))
    weights = [1] * len(pts)
    if unweighted:
        pts, edges, weights = _subdivide(pts, edges)
    g = from_coordinates(pts, edges, weights)
    return SetsInstance(vecs, variant, g, tuple(tuple(s) for s in sets), left, right, k, scale, shift, unweighted)


def _subdivide(pts, edges):
    pts = list(pts)
    out = []
    for u, v, w in edges:
        prev = u
        (x1, y1), (x2, y2) = pts[u], pts[v]
        for t in range(1, w):
            pts.append((x1 + (x2 - x1) * t / w, y1 + (y2 - y1) * t / w))
            out.append((prev, len(pts) - 1, 1))
            prev = len(pts) - 1
        out.append((prev, v, 1))
    return pts, out, [1] * len(pts)


@dataclass
class SetsReport:
    variant: str
    claims: dict[str, bool]
    max_dist: list[list[int]] | None = None
    sum_dist: list[list[int]] | None = None
    sum_offset: int | None = None
    merged_pair: tuple[int, int] | None = None
    closest_pairs: list[tuple[int, int]] | None = None

    @property
    def ok(self) -> bool:
        return all(self.claims.values())

    def to_json(self) -> dict:
        return {**asdict(self), "ok": self.ok}


def hamming(x: Sequence[int], y: Sequence[int]) -> int:
    return sum(1 for p, q in zip(x, y) if p != q)


def verify_sets(inst: SetsInstance, *, raise_on_violation: bool = True) -> SetsReport:
    dist = oracle.apsp(inst.graph)
    n, d, M = inst.n, inst.d, inst.M
    vecs = inst.vectors
    pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
    claims: dict[str, bool] = {}
    report = SetsReport(inst.variant, claims)
    if inst.variant in ("maxdist", "complete-linkage"):
        md = [[0] * n for _ in range(n)]
        for a, b in pairs:
            md[a][b] = md[b][a] = oracle.set_distance(dist, inst.sets[a], inst.sets[b], "max")
        report.max_dist = md
        base = (2 * d + 1) * M + 2 * inst.shift
        claims["max_dist_formula"] = all(
            md[a][b] == base + max(x + y for x, y in zip(vecs[a], vecs[b])) for a, b in pairs
        )
        orth = any(all(not (x and y) for x, y in zip(vecs[a], vecs[b])) for a, b in pairs)
        closest = min(md[a][b] for a, b in pairs)
        claims["threshold"] = (closest <= base + 1) == orth
        score = md
    else:
        sd = [[0] * n for _ in range(n)]
        for a, b in pairs:
            sd[a][b] = sd[b][a] = oracle.set_distance(dist, inst.sets[a], inst.sets[b], "sum")
        report.sum_dist = sd
        unit = 2 * inst.copies ** 2 * inst.scale
        offsets = {sd[a][b] - unit * hamming(vecs[a], vecs[b]) for a, b in pairs}
        claims["sum_dist_difference"] = len(offsets) == 1
        report.sum_offset = offsets.pop() if len(offsets) == 1 else None
        score = sd
    best = min(score[a][b] for a, b in pairs)
    report.closest_pairs = [(a, b) for a, b in pairs if score[a][b] == best]
    if inst.variant.endswith("linkage"):
        mode = "complete" if inst.variant == "complete-linkage" else "average"
        merges = oracle.linkage_simulate(dist, mode)
        absorbed, pair = _absorption(inst, merges)
        claims["absorption"] = absorbed
        report.merged_pair = pair
        claims["closest_pair"] = pair is not None and pair in report.closest_pairs
        values = [m.value for m in merges]
        claims["monotone_merges"] = all(x <= y for x, y in zip(values, values[1:]))
    _report_claims(claims, report.to_json(), raise_on_violation)
    return report


def _absorption(inst: SetsInstance, merges: Sequence[oracle.Merge]) -> tuple[bool, tuple[int, int] | None]:
    """Replay merges until two different sets meet.

    Returns whether, just before that merge, every cluster holding set nodes
    was exactly one full set (hubs absorbed), and which pair of sets merged.
    """
    owner = {}
    for a, s in enumerate(inst.sets):
        for x in s:
            owner[x] = a
    N = inst.graph.num_vertices
    members: dict[int, tuple[int, ...]] = {i: (i,) for i in range(N)}
    for m in merges:
        ca, cb = members.pop(m.a), members.pop(m.b)
        sa = {owner[x] for x in ca if x in owner}
        sb = {owner[x] for x in cb if x in owner}
        if sa and sb and sa != sb:
            ok = True
            hubs = {inst.left, inst.right}
            for cl in list(members.values()) + [ca, cb]:
                own = {owner[x] for x in cl if x in owner}
                if not own:
                    if hubs & set(cl):
                        ok = False
                    continue
                if len(own) != 1:
                    ok = False
                    continue
                (a,) = own
                if set(inst.sets[a]) - set(cl):
                    ok = False
            if len(sa) != 1 or len(sb) != 1:
                return False, None
            pair = tuple(sorted((sa.pop(), sb.pop())))
            return ok, pair  # type: ignore[return-value]
        members[m.new_id] = m.members
    return False, None


def sets_vectors(n: int, d: int, seed: int) -> list[list[int]]:
    rng = np.random.default_rng(seed)
    return rng.integers(0, 2, size=(n, d)).tolist()
