"""Reader and writer for the line-oriented PLG graph format."""

from __future__ import annotations

from pathlib import Path

from .errors import MalformedInput
from .planar_core import PlanarEmbedding, build_embedding


def dumps(g: PlanarEmbedding) -> str:
    lines = ["plg 1"]
    lines += [f"v {v} {w}" for v, w in enumerate(g.vertex_weights)]
    lines += [f"e {e} {u} {v} {c}" for e, ((u, v), c) in enumerate(zip(g.edges, g.costs))]
    for v, darts in enumerate(g.rotation):
        lines.append(" ".join(["rot", str(v)] + [str(d >> 1) for d in darts]))
    lines.append(f"outer {g.outer_face}")
    return "\n".join(lines) + "\n"


def loads(text: str) -> PlanarEmbedding:
    weights: dict[int, int] = {}
    edges: dict[int, tuple[int, int, int]] = {}
    rots: dict[int, list[int]] = {}
    outer = None
    header = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            nums = [int(x) for x in parts[1:]]
        except ValueError:
            raise MalformedInput(f"line {lineno}: non-integer field") from None
        kind = parts[0]
        if kind == "plg":
            if nums != [1]:
                raise MalformedInput(f"line {lineno}: unsupported version")
            header = True
        elif not header:
            raise MalformedInput("missing 'plg 1' header")
        elif kind == "v" and len(nums) == 2:
            weights[nums[0]] = nums[1]
        elif kind == "e" and len(nums) == 4:
            edges[nums[0]] = (nums[1], nums[2], nums[3])
        elif kind == "rot" and len(nums) >= 1:
            rots[nums[0]] = nums[1:]
        elif kind == "outer" and len(nums) == 1:
            outer = nums[0]
        else:
            raise MalformedInput(f"line {lineno}: cannot parse {raw!r}")
    if not header:
        raise MalformedInput("missing 'plg 1' header")
    n = len(weights)
    if sorted(weights) != list(range(n)) or sorted(edges) != list(range(len(edges))):
        raise MalformedInput("vertex and edge ids must be dense and 0-based")
    if set(rots) - set(range(n)):
        raise MalformedInput("rotation given for unknown vertex")
    return build_embedding(
        [edges[e] for e in range(len(edges))],
        [rots.get(v, []) for v in range(n)],
        [weights[v] for v in range(n)],
        outer_face=outer,
    )


def read(path: str | Path) -> PlanarEmbedding:
    return loads(Path(path).read_text())


def write(g: PlanarEmbedding, path: str | Path) -> None:
    Path(path).write_text(dumps(g))
