"""Cut values and the result record shared by all solvers."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .planar_core import DualEmbedding, PlanarEmbedding, left_faces

OBJECTIVES = ("quotient", "sparsity")


@dataclass(frozen=True)
class CutResult:
    side: tuple[int, ...]  # sorted vertex ids of one side
    cut_edges: tuple[int, ...]
    cost: int
    weight_side: int
    weight_other: int
    cycle: tuple[int, ...] | None = None  # dual darts, when produced by a cycle search

    @property
    def quotient(self) -> Fraction | None:
        m = min(self.weight_side, self.weight_other)
        return Fraction(self.cost, m) if m > 0 else None

    @property
    def sparsity(self) -> Fraction | None:
        p = self.weight_side * self.weight_other
        return Fraction(self.cost, p) if p > 0 else None

    def value(self, objective: str) -> Fraction | None:
        if objective == "quotient":
            return self.quotient
        if objective == "sparsity":
            return self.sparsity
        if objective == "bisection":
            return Fraction(self.cost)
        raise ValueError(f"unknown objective {objective!r}")


def cut_from_side(g: PlanarEmbedding, side: Iterable[int], cycle: Sequence[int] | None = None) -> CutResult:
    s = set(side)
    edges = tuple(e for e, (u, v) in enumerate(g.edges) if (u in s) != (v in s))
    ws = sum(g.vertex_weights[v] for v in s)
    return CutResult(
        tuple(sorted(s)), edges, sum(g.costs[e] for e in edges), ws, g.total_weight - ws,
        None if cycle is None else tuple(cycle),
    )


def cut_from_dual_cycle(dual: DualEmbedding, darts: Sequence[int]) -> CutResult:
    """Primal cut whose side is the set of vertices left of a simple dual cycle."""
    h = dual.graph
    faces = left_faces(h, darts)
    side = [dual.vertex_of_face[f] for f in faces]
    if dual.face_of_vertex[0] in faces:
        side = sorted(set(range(dual.primal.num_vertices)) - set(side))
    return cut_from_side(dual.primal, side, darts)


def cut_from_face_set(dual: DualEmbedding, faces: Iterable[int], cycle=None) -> CutResult:
    side = {dual.vertex_of_face[f] for f in faces}
    if 0 in side:
        side = set(range(dual.primal.num_vertices)) - side
    return cut_from_side(dual.primal, side, cycle)


def objective_of(cost: int, w: int, total: int, objective: str) -> Fraction | None:
    other = total - w
    if objective == "quotient":
        m = min(w, other)
        return Fraction(cost, m) if m > 0 else None
    p = w * other
    return Fraction(cost, p) if p > 0 else None
