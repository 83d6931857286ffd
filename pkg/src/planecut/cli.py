"""Command-line entry point: solvers, generators, verifiers, oracles and benchmarks.

Exit codes: 0 success, 1 a verified claim failed, 2 usage or input error.
Exact values are written as ``num/den`` strings.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import hardness_gen, instances, oracle, plg
from .approx_mqc import ApproxParams, QuotientApproximator
from .cuts import CutResult
from .errors import ClaimViolated, MalformedInput, PlanecutError
from .exact_solver import exact_mqc_layered, exact_mqc_separator
from .planar_core import PlanarEmbedding, dualize

EXIT_OK, EXIT_CLAIM, EXIT_USAGE = 0, 1, 2
GEN_KINDS = ("minplus", "diamond", "maxdist", "sumdist", "linkage")


class UsageError(Exception):
    pass


def frac(x: Fraction | int | None) -> str | None:
    if x is None:
        return None
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_frac(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"not a rational number: {text!r}") from exc


def cut_json(cut: CutResult, objective: str) -> dict[str, Any]:
    value = Fraction(cut.value(objective))
    return {
        "objective": objective,
        "value_num": value.numerator,
        "value_den": value.denominator,
        "side": sorted(cut.side),
        "cut_edges": sorted(cut.cut_edges),
    }


def _value_text(out: dict) -> str:
    if out["value_den"] == 1:
        return str(out["value_num"])
    return f"{out['value_num']}/{out['value_den']}"


def _read_graph(path: str) -> PlanarEmbedding:
    if not Path(path).is_file():
        raise UsageError(f"input file not found: {path}")
    return plg.read(path)


def _read_json(path: str) -> Any:
    if not Path(path).is_file():
        raise UsageError(f"file not found: {path}")
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from exc


def _write_json(path: str | None, data: Any) -> None:
    text = json.dumps(data, indent=1, sort_keys=True)
    if path:
        Path(path).write_text(text + "\n")
    else:
        print(text)


# ---------------------------------------------------------------------------
# exact / approx


def cmd_exact(args: argparse.Namespace) -> int:
    g = _read_graph(args.input)
    solve = exact_mqc_layered if args.method == "layered" else exact_mqc_separator
    cut = solve(g, args.objective)
    out = cut_json(cut, args.objective)
    print(f"{args.objective} {_value_text(out)}")
    if args.emit_cut:
        _write_json(args.emit_cut, out)
    return EXIT_OK


def cmd_approx(args: argparse.Namespace) -> int:
    g = _read_graph(args.input)
    params = ApproxParams() if args.eps is None else ApproxParams(eps=parse_frac(args.eps))
    approx = QuotientApproximator(g, params)
    cut = approx.solve()
    out = cut_json(cut, "quotient")
    out["eps"] = frac(params.eps)
    print(f"quotient {_value_text(out)}")
    if args.emit_cut:
        _write_json(args.emit_cut, out)
    if args.trace:
        _write_json(args.trace, approx.trace())
    return EXIT_OK


# ---------------------------------------------------------------------------
# gen / verify


def _rng_seed(params: dict) -> int:
    seed = params.get("seed", 0)
    if not isinstance(seed, int) or not 0 <= seed < 2**64:
        raise UsageError("seed must be an integer in [0, 2^64)")
    return seed


def build_instance(kind: str, params: dict):
    """Instance object for a generator kind from explicit data or (n, seed)."""
    if kind == "minplus":
        if "A" in params:
            A, B, C = params["A"], params["B"], params["C"]
        else:
            rng = np.random.default_rng(_rng_seed(params))
            n, top = int(params.get("n", 3)), int(params.get("max_value", 10))
            A, B, C = (rng.integers(1, top + 1, size=n).tolist() for _ in range(3))
        return hardness_gen.gen_minplus(A, B, C, unit_weight=bool(params.get("unit_weight", False)))
    if kind == "diamond":
        if "A" in params:
            A, B = params["A"], params["B"]
        else:
            rng = np.random.default_rng(_rng_seed(params))
            n = int(params.get("n", 4))
            A, B = rng.integers(0, 2, size=n).tolist(), rng.integers(0, 2, size=n).tolist()
        return hardness_gen.gen_diamond(A, B)
    if kind in ("maxdist", "sumdist", "linkage"):
        variant = params.get("variant", "complete-linkage") if kind == "linkage" else kind
        if "vectors" in params:
            vectors = params["vectors"]
        else:
            vectors = hardness_gen.sets_vectors(int(params.get("n", 4)), int(params.get("d", 3)), _rng_seed(params))
        return hardness_gen.gen_sets(vectors, variant, unweighted=bool(params.get("unweighted", False)),
                                     copies=params.get("copies"))
    raise UsageError(f"unknown generator kind {kind!r}")


def _params_from_meta(meta: dict) -> tuple[str, dict]:
    kind = meta.get("kind")
    if kind == "minplus":
        return kind, {"A": meta["A"], "B": meta["B"], "C": meta["C"], "unit_weight": meta["unit_weight"]}
    if kind == "diamond":
        return kind, {"A": meta["A"], "B": meta["B"]}
    if kind == "sets":
        variant = meta["variant"]
        gk = "linkage" if variant.endswith("linkage") else variant
        return gk, {"vectors": meta["vectors"], "variant": variant, "unweighted": meta["unweighted"],
                    "copies": meta["copies"]}
    raise UsageError(f"meta has unknown kind {kind!r}")


def cmd_gen(args: argparse.Namespace) -> int:
    try:
        params = json.loads(args.params) if args.params else {}
    except json.JSONDecodeError as exc:
        raise UsageError(f"--params is not valid JSON: {exc}") from exc
    inst = build_instance(args.kind, params)
    plg.write(inst.graph, args.out)
    meta = inst.meta()
    if "seed" in params:
        meta["seed"] = params["seed"]
    if args.meta:
        _write_json(args.meta, meta)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    g = _read_graph(args.input)
    meta = _read_json(args.meta)
    kind, params = _params_from_meta(meta)
    if args.kind != kind:
        raise UsageError(f"meta describes a {kind} instance, not {args.kind}")
    inst = build_instance(kind, params)
    if plg.dumps(inst.graph) != plg.dumps(g):
        raise UsageError("input graph does not match the instance described by the meta file")
    if kind == "minplus":
        report = hardness_gen.verify_minplus(inst, raise_on_violation=False)
    elif kind == "diamond":
        report = hardness_gen.verify_diamond(inst, raise_on_violation=False)
    else:
        report = hardness_gen.verify_sets(inst, raise_on_violation=False)
    data = report.to_json()
    data["ok"] = report.ok
    if "seed" in meta:
        data["seed"] = meta["seed"]
    _write_json(args.report, data)
    for name, ok in report.claims.items():
        print(f"{'PASS' if ok else 'FAIL'} {name}")
    return EXIT_OK if report.ok else EXIT_CLAIM


# ---------------------------------------------------------------------------
# oracle


def cmd_oracle(args: argparse.Namespace) -> int:
    g = _read_graph(args.input)
    if args.what == "cuts":
        table = oracle.brute_cuts(g)
        data: dict[str, Any] = {"num_cuts": len(table)}
        for name, got in (("quotient", table.min_quotient()), ("sparsity", table.min_sparsity())):
            data[name] = None if got is None else {"value": frac(got[0]), "side": list(table.side(got[1]))}
        bis = table.min_bisection()
        data["bisection"] = None if bis is None else {"value": str(bis[0]), "side": list(table.side(bis[1]))}
    elif args.what == "apsp":
        dist = oracle.apsp(g)
        data = {"distances": dist.tolist(), "diameter": int(dist.max()), "hop_diameter": oracle.hop_diameter(g)}
    elif args.what == "cycles":
        h = dualize(g).graph
        cycles = oracle.enumerate_simple_cycles(h)
        data = {"graph": "dual", "total_weight": h.total_face_weight,
                "cycles": [{"darts": list(c.darts), "cost": c.cost, "enclosed": c.enclosed} for c in cycles]}
    else:
        if not args.sets:
            raise UsageError("oracle linkage needs --sets meta.json")
        meta = _read_json(args.sets)
        mode = "average" if meta.get("variant") == "average-linkage" else "complete"
        merges = oracle.linkage_simulate(oracle.apsp(g), mode)
        data = {"mode": mode, "merges": [
            {"a": m.a, "b": m.b, "new_id": m.new_id, "value": frac(m.value)} for m in merges]}
    _write_json(args.report, data)
    return EXIT_OK


# ---------------------------------------------------------------------------
# bench


@dataclass
class BenchRecord:
    instance_id: str
    generator: str
    size: int
    seed: int
    n: int
    E: int
    W: int
    P: int
    method: str
    wall_time: float
    value: str | None
    ratio: str | None
    status: str
    clusters: int | None = None
    depth: int | None = None
    max_scars: int | None = None


BENCH_FIELDS = [f.name for f in fields(BenchRecord)]
METHODS = ("layered", "separator", "approx")


def bench_instance(generator: str, size: int, seed: int, params: dict) -> PlanarEmbedding:
    if generator == "random_planar":
        return instances.random_planar(size, seed, **params)
    if generator == "random_triangulation":
        return instances.random_triangulation(size, seed, **params)
    if generator == "grid":
        return instances.grid(size, size, seed=seed, **params)
    if generator in GEN_KINDS:
        p = dict(params)
        p.setdefault("n", size)
        p["seed"] = seed
        return build_instance(generator, p).graph
    raise UsageError(f"unknown bench generator {generator!r}")


def _bench_job(job: tuple) -> list[dict]:
    generator, size, seed, params, methods, objective = job
    iid = f"{generator}-{size}-{seed}"
    try:
        g = bench_instance(generator, size, seed, params)
    except (PlanecutError, ValueError) as exc:
        return [asdict(BenchRecord(iid, generator, size, seed, 0, 0, 0, 0, m, 0.0, None, None,
                                   f"error: {exc}")) for m in methods]
    base = dict(instance_id=iid, generator=generator, size=size, seed=seed, n=g.num_vertices,
                E=g.num_edges, W=g.total_weight, P=g.total_cost)
    rows = []
    values: dict[str, Fraction] = {}
    for m in methods:
        t0 = time.perf_counter()
        extra: dict[str, Any] = {}
        try:
            if m == "approx":
                approx = QuotientApproximator(g)
                cut = approx.solve()
                extra = dict(clusters=len(approx.tree.clusters), depth=approx.tree.depth(),
                             max_scars=max(c.scars for c in approx.tree.clusters))
                val = cut.quotient
            else:
                solve = exact_mqc_layered if m == "layered" else exact_mqc_separator
                val = solve(g, objective).value(objective)
            values[m] = val
            status, text = "ok", frac(val)
        except PlanecutError as exc:
            status, text = f"error: {type(exc).__name__}: {exc}", None
        rows.append(dict(base, method=m, wall_time=round(time.perf_counter() - t0, 6),
                         value=text, ratio=None, status=status, **extra))
    ref = next((values[m] for m in ("layered", "separator") if m in values), None)
    for r in rows:
        if ref and r["method"] in values:
            r["ratio"] = frac(values[r["method"]] / ref)
    return [asdict(BenchRecord(**r)) for r in rows]


def run_bench(suite: dict, workers: int = 1) -> list[dict]:
    objective = suite.get("objective", "quotient")
    methods = list(suite.get("methods", METHODS))
    bad = [m for m in methods if m not in METHODS]
    if bad:
        raise UsageError(f"unknown methods {bad}")
    if "approx" in methods and objective != "quotient":
        raise UsageError("approx only handles the quotient objective")
    jobs = []
    for entry in suite.get("instances", []):
        for size in entry.get("sizes", []):
            for seed in entry.get("seeds", [0]):
                jobs.append((entry["generator"], int(size), int(seed), entry.get("params", {}), methods, objective))
    cap = os.environ.get("PLANECUT_THREADS")
    if cap:
        workers = min(workers, max(1, int(cap)))
    if workers <= 1 or len(jobs) <= 1:
        results = [_bench_job(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_bench_job, jobs))
    return [row for rows in results for row in rows]


def cmd_bench(args: argparse.Namespace) -> int:
    suite = _read_json(args.suite)
    rows = run_bench(suite, args.workers)
    with open(args.out, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=BENCH_FIELDS)
        w.writeheader()
        w.writerows(rows)
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="planecut", description="Quotient and sparsest cuts in planar graphs.")
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("exact", help="exact minimum quotient or sparsest cut")
    e.add_argument("--input", required=True)
    e.add_argument("--objective", choices=("quotient", "sparsity"), default="quotient")
    e.add_argument("--method", choices=("layered", "separator"), default="layered")
    e.add_argument("--emit-cut")
    e.set_defaults(func=cmd_exact)

    a = sub.add_parser("approx", help="constant-factor approximate minimum quotient cut")
    a.add_argument("--input", required=True)
    a.add_argument("--eps", help="rational such as 1/100 (default: largest admissible 1/k)")
    a.add_argument("--emit-cut")
    a.add_argument("--trace")
    a.set_defaults(func=cmd_approx)

    gsub = sub.add_parser("gen", help="reduction instance generators")
    gsub.add_argument("kind", choices=GEN_KINDS)
    gsub.add_argument("--params", help="JSON object with explicit data or n/seed")
    gsub.add_argument("--out", required=True)
    gsub.add_argument("--meta")
    gsub.set_defaults(func=cmd_gen)

    v = sub.add_parser("verify", help="check the claims of a generated instance")
    v.add_argument("kind", choices=GEN_KINDS)
    v.add_argument("--input", required=True)
    v.add_argument("--meta", required=True)
    v.add_argument("--report")
    v.set_defaults(func=cmd_verify)

    o = sub.add_parser("oracle", help="brute-force reference computations")
    o.add_argument("what", choices=("cuts", "apsp", "cycles", "linkage"))
    o.add_argument("--input", required=True)
    o.add_argument("--sets")
    o.add_argument("--report")
    o.set_defaults(func=cmd_oracle)

    b = sub.add_parser("bench", help="run a benchmark suite into CSV")
    b.add_argument("--suite", required=True)
    b.add_argument("--out", required=True)
    b.add_argument("--workers", type=int, default=1)
    b.set_defaults(func=cmd_bench)
    return p


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"planecut: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ClaimViolated as exc:
        print(f"planecut: claim violated: {exc}", file=sys.stderr)
        return EXIT_CLAIM
    except (PlanecutError, MalformedInput) as exc:
        print(f"planecut: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())
