from __future__ import annotations

import csv
import json
import subprocess
import sys
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from planecut import plg
from planecut.cli import EXIT_CLAIM, EXIT_OK, EXIT_USAGE, parse_frac, run

from conftest import brute_value, small_graph, triangle


@pytest.fixture
def tri_file(tmp_path):
    path = tmp_path / "tri.plg"
    plg.write(triangle(), path)
    return path


@pytest.mark.parametrize("method", ["layered", "separator"])
def test_exact_triangle(tri_file, tmp_path, capsys, method):
    cut = tmp_path / "cut.json"
    assert run(["exact", "--input", str(tri_file), "--method", method, "--emit-cut", str(cut)]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "quotient 2"
    data = json.loads(cut.read_text())
    assert Fraction(data["value_num"], data["value_den"]) == 2
    assert len(data["side"]) == 1 and len(data["cut_edges"]) == 2


def test_exact_sparsity(tri_file, capsys):
    assert run(["exact", "--input", str(tri_file), "--objective", "sparsity"]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "sparsity 1"


def test_approx_triangle_with_trace(tri_file, tmp_path, capsys):
    trace = tmp_path / "trace.json"
    assert run(["approx", "--input", str(tri_file), "--trace", str(trace)]) == EXIT_OK
    value = parse_frac(capsys.readouterr().out.split()[1])
    assert 2 <= value <= Fraction(33, 10) * 2
    assert json.loads(trace.read_text())


def test_missing_input_is_usage_error(tmp_path, capsys):
    assert run(["exact", "--input", str(tmp_path / "nope.plg")]) == EXIT_USAGE
    assert "not found" in capsys.readouterr().err


def test_malformed_input_is_usage_error(tmp_path):
    bad = tmp_path / "bad.plg"
    bad.write_text("plg 1\nv 0 1\ne 0 0 7 1\n")
    assert run(["exact", "--input", str(bad)]) == EXIT_USAGE


def test_bad_arguments_exit_two():
    assert run(["exact"]) == EXIT_USAGE
    assert run(["gen", "nonsense", "--out", "x"]) == EXIT_USAGE


@pytest.mark.parametrize("kind,params", [
    ("minplus", {"A": [1, 1], "B": [1, 1], "C": [9, 9]}),
    ("minplus", {"n": 3, "seed": 5, "unit_weight": True}),
    ("diamond", {"n": 6, "seed": 2}),
    ("maxdist", {"n": 4, "d": 3, "seed": 1}),
    ("sumdist", {"n": 4, "d": 2, "seed": 1, "unweighted": True}),
    ("linkage", {"n": 4, "d": 2, "seed": 3}),
])
def test_gen_then_verify(kind, params, tmp_path, capsys):
    out, meta, rep = tmp_path / "g.plg", tmp_path / "m.json", tmp_path / "r.json"
    assert run(["gen", kind, "--params", json.dumps(params), "--out", str(out), "--meta", str(meta)]) == EXIT_OK
    assert run(["verify", kind, "--input", str(out), "--meta", str(meta), "--report", str(rep)]) == EXIT_OK
    lines = capsys.readouterr().out.split("\n")
    assert any(line.startswith("PASS") for line in lines)
    assert not any(line.startswith("FAIL") for line in lines)
    assert json.loads(rep.read_text())["ok"] is True


def test_verify_reports_failed_claim(tmp_path, capsys):
    out, meta = tmp_path / "g.plg", tmp_path / "m.json"
    params = {"A": [1, 2, 3, 2], "B": [9, 9, 6, 1], "C": [1, 4, 5, 7]}
    run(["gen", "minplus", "--params", json.dumps(params), "--out", str(out), "--meta", str(meta)])
    assert run(["verify", "minplus", "--input", str(out), "--meta", str(meta)]) == EXIT_CLAIM
    assert "FAIL sparsity" in capsys.readouterr().out


def test_verify_rejects_tampered_graph(tmp_path):
    out, meta = tmp_path / "g.plg", tmp_path / "m.json"
    run(["gen", "diamond", "--params", '{"A": [1, 0], "B": [0, 1]}', "--out", str(out), "--meta", str(meta)])
    out.write_text(out.read_text().replace("v 0 1", "v 0 2"))
    assert run(["verify", "diamond", "--input", str(out), "--meta", str(meta)]) == EXIT_USAGE


def test_gen_bad_params(tmp_path):
    out = str(tmp_path / "g.plg")
    assert run(["gen", "minplus", "--params", "{", "--out", out]) == EXIT_USAGE
    assert run(["gen", "diamond", "--params", '{"A": [2], "B": [1]}', "--out", out]) == EXIT_USAGE


def test_oracle_subcommands(tri_file, tmp_path):
    rep = tmp_path / "r.json"
    assert run(["oracle", "cuts", "--input", str(tri_file), "--report", str(rep)]) == EXIT_OK
    data = json.loads(rep.read_text())
    assert data["num_cuts"] == 3 and parse_frac(data["quotient"]["value"]) == 2
    assert run(["oracle", "apsp", "--input", str(tri_file), "--report", str(rep)]) == EXIT_OK
    assert json.loads(rep.read_text())["distances"] == [[0, 1, 1], [1, 0, 1], [1, 1, 0]]
    assert run(["oracle", "cycles", "--input", str(tri_file), "--report", str(rep)]) == EXIT_OK
    assert len(json.loads(rep.read_text())["cycles"]) == 3
    assert run(["oracle", "linkage", "--input", str(tri_file)]) == EXIT_USAGE


def test_oracle_linkage(tmp_path):
    out, meta, rep = tmp_path / "g.plg", tmp_path / "m.json", tmp_path / "r.json"
    run(["gen", "linkage", "--params", '{"n": 3, "d": 2, "seed": 0}', "--out", str(out), "--meta", str(meta)])
    assert run(["oracle", "linkage", "--input", str(out), "--sets", str(meta), "--report", str(rep)]) == EXIT_OK
    data = json.loads(rep.read_text())
    nodes = len(plg.read(out).vertex_weights)
    assert data["mode"] == "complete" and len(data["merges"]) == nodes - 1


def _bench(tmp_path, suite):
    path, out = tmp_path / "suite.json", tmp_path / "out.csv"
    path.write_text(json.dumps(suite))
    assert run(["bench", "--suite", str(path), "--out", str(out)]) == EXIT_OK
    with open(out, newline="") as fh:
        return list(csv.DictReader(fh)), out.read_text()


def test_bench_empty_suite(tmp_path):
    rows, text = _bench(tmp_path, {"instances": []})
    assert rows == [] and text.count("\n") == 1 and text.startswith("instance_id,")


def test_bench_ratios(tmp_path):
    suite = {"instances": [{"generator": "random_planar", "sizes": [8, 12], "seeds": [0, 1, 2],
                            "params": {"max_cost": 20, "max_weight": 5}}]}
    rows, _ = _bench(tmp_path, suite)
    assert len(rows) == 2 * 3 * 3
    assert all(r["status"] == "ok" for r in rows)
    for r in rows:
        ratio = parse_frac(r["ratio"])
        assert ratio == 1 if r["method"] != "approx" else 1 <= ratio <= Fraction(33, 10)


def test_bench_grid_solvers_agree(tmp_path):
    suite = {"methods": ["layered", "separator"],
             "instances": [{"generator": "grid", "sizes": list(range(3, 9)), "seeds": [0]}]}
    rows, _ = _bench(tmp_path, suite)
    by_size: dict[str, set[str]] = {}
    for r in rows:
        by_size.setdefault(r["size"], set()).add(r["value"])
    assert all(len(v) == 1 for v in by_size.values())


def test_bench_rejects_unknown_method(tmp_path):
    path = tmp_path / "suite.json"
    path.write_text(json.dumps({"methods": ["magic"], "instances": []}))
    assert run(["bench", "--suite", str(path), "--out", str(tmp_path / "o.csv")]) == EXIT_USAGE


@settings(max_examples=15)
@given(seed=st.integers(0, 2**32 - 1), objective=st.sampled_from(["quotient", "sparsity"]))
def test_exact_matches_brute(seed, objective, tmp_path_factory):
    g = small_graph(seed, n_max=8)
    path = tmp_path_factory.mktemp("h") / "g.plg"
    plg.write(g, path)
    cut = path.with_suffix(".json")
    assert run(["exact", "--input", str(path), "--objective", objective, "--emit-cut", str(cut)]) == EXIT_OK
    data = json.loads(cut.read_text())
    assert Fraction(data["value_num"], data["value_den"]) == brute_value(g, objective)


def test_module_entry_point(tri_file):
    proc = subprocess.run([sys.executable, "-m", "planecut", "exact", "--input", str(tri_file)],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout.strip() == "quotient 2"
