import csv
import io
import json
import subprocess
import sys

import pytest

from noisestab import BroadcastTree, dictator, dump_tree_json
from noisestab.cli import main, parse_grid


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), stdout=out)
    return code, out.getvalue()


def run_json(*argv):
    code, text = run(*argv)
    assert code == 0, text
    return json.loads(text)


def test_stability_trivial_example():
    rec = run_json("stability", "--table", "3", "--n", "2", "--alpha", "2", "--eps", "0")
    assert rec["results"]["values"] == [{"eps": 0.0, "value": 0.5}]
    assert set(rec) == {"command", "parameters", "results", "versions", "wall_time"}
    assert rec["command"] == "stability"
    assert rec["parameters"]["table"] == "3"


def test_compare_majorities():
    rec = run_json("compare", "--n", "5", "--objective", "stability", "--alpha", "10", "--eps", "0.26", "maj:1", "maj:3", "maj:5")
    rows = rec["results"]["ranking"]
    assert [r["candidate"] for r in rows] == ["maj:3", "maj:1", "maj:5"]
    assert rows[0]["value"] >= 0.0248


def test_search_balanced_n3():
    rec = run_json("search", "--n", "3", "--balanced", "--objective", "stability", "--alpha", "2", "--eps", "0.26")
    res = rec["results"]
    assert res["evaluated_count"] == 70
    assert sorted(res["argmax_hex"]) == ["0f", "33", "55", "aa", "cc", "f0"]
    mono = run_json("search", "--n", "3", "--balanced", "--monotone-only", "--alpha", "2", "--eps", "0.26")
    assert sorted(mono["results"]["argmax_hex"]) == ["aa", "cc", "f0"]


def test_search_independent_of_jobs():
    a = run_json("search", "--n", "4", "--size", "6", "--alpha", "3", "--eps", "0.2")["results"]
    b = run_json("search", "--n", "4", "--size", "6", "--alpha", "3", "--eps", "0.2", "--jobs", "2")["results"]
    assert a["argmax_hex"] == b["argmax_hex"] and a["best_value"] == b["best_value"]


def test_fifteen_significant_digits():
    rec = run_json("stability", "--f", "maj:3", "--n", "5", "--alpha", "10", "--eps", "0.26")
    text = repr(rec["results"]["values"][0]["value"])
    assert len(text.replace("0.", "", 1).lstrip("0")) <= 15


def test_eps_grid():
    assert parse_grid("0:0.5:0.1") == [0.0, 0.1, 0.2, 0.30000000000000004, 0.4, 0.5]
    assert parse_grid("0.1,0.2") == [0.1, 0.2]
    rec = run_json("agreement", "--f", "dict", "--n", "3", "--k", "3", "--eps-grid", "0:0.5:0.05")
    vals = [r["value"] for r in rec["results"]["values"]]
    assert len(vals) == 11
    assert vals[0] == 1.0 and vals[-1] == 0.25
    assert all(b <= a for a, b in zip(vals, vals[1:]))


def test_csv_output():
    code, text = run("--format", "csv", "mi", "--f", "dict", "--n", "2", "--eps-grid", "0:0.5:0.25")
    assert code == 0
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["eps", "value"]
    assert len(rows) == 4
    code, text = run("--format", "csv", "influence", "--f", "maj:3", "--n", "3")
    assert code == 0 and text.startswith("key,value")


def test_influence_and_monotonize():
    rec = run_json("influence", "--f", "maj:3", "--n", "3")
    res = rec["results"]
    assert res["flip"]["per_coordinate"] == res["fourier"]["per_coordinate"] == res["boundary"]["per_coordinate"] == [0.5] * 3
    rec = run_json("monotonize", "--table", "3", "--n", "2")
    assert rec["results"]["output"] == "c" and rec["results"]["monotone"]


def test_phi_command():
    rec = run_json("phi", "--f", "dict", "--n", "2", "--phi", "hellinger", "--eps", "0.5")
    assert rec["results"]["values"][0]["value"] == 0.0


def test_torus_commands():
    base = ["--p", "3", "--n", "2", "--support", "00,10,21"]
    rec = run_json("torus", "stability", *base, "--eps", "0.2", "--model", "nearest")
    assert rec["results"]["table"] == "110001000"
    rec = run_json("torus", "influence", *base)
    res = rec["results"]
    assert res["random_flip/direct"]["per_coordinate"] == res["random_flip/fourier"]["per_coordinate"]
    rec = run_json("torus", "monotonize", "--p", "3", "--n", "2", "--table", "110001000")
    assert rec["results"]["output"] == "000001011"
    rec = run_json("torus", "mi", "--p", "2", "--n", "2", "--table", "0101", "--eps", "0")
    assert rec["results"]["values"][0]["value"] == pytest.approx(1.0)
    rec = run_json("torus", "agreement", "--p", "2", "--n", "1", "--table", "01", "--eps", "0.1", "--k", "2")
    assert rec["results"]["values"][0]["value"] == pytest.approx(0.82)


def test_tree_command(tmp_path):
    path = tmp_path / "tree.json"
    tree = BroadcastTree.path(2, 0.1, 3)
    path.write_text(dump_tree_json(tree, {0: dictator(3), 2: dictator(3)}))
    rec = run_json("tree", str(path))
    assert rec["results"]["correlation"] == pytest.approx(0.41)
    a = run_json("tree", str(path), "--samples", "5000", "--seed", "3")["results"]["monte_carlo"]
    b = run_json("tree", str(path), "--samples", "5000", "--seed", "3")["results"]["monte_carlo"]
    assert a == b
    code, _ = run("tree", str(path), "--samples", "100")
    assert code == 2


def test_verify_exit_status():
    code, text = run("verify", "maj-compare")
    assert code == 0 and json.loads(text)["results"]["passed"]
    code, text = run("verify", "extremal-c")
    assert code == 1 and not json.loads(text)["results"]["passed"]
    code, _ = run("verify", "no-such-scenario")
    assert code == 2


@pytest.mark.parametrize(
    "argv,expected",
    [
        (["stability", "--n", "2", "--table", "zz", "--eps", "0"], 2),
        (["stability", "--n", "2", "--table", "3", "--bogus"], 2),
        (["stability", "--n", "2", "--table", "3"], 2),
        (["stability", "--n", "2", "--eps", "0.1"], 2),
        (["stability", "--n", "2", "--table", "3", "--f", "dict", "--eps", "0.1"], 2),
        (["stability", "--n", "2", "--table", "3", "--eps-grid", "a:b:c"], 2),
        (["stability", "--n", "2", "--table", "3", "--eps", "0.9"], 1),
        (["compare", "--n", "3", "--eps", "0.1", "--alpha", "2", "maj:4"], 2),
        (["torus", "stability", "--p", "3", "--n", "2", "--table", "0101", "--eps", "0.1"], 2),
        (["torus", "stability", "--p", "3", "--n", "2", "--support", "33", "--eps", "0.1"], 2),
        (["search", "--n", "5", "--balanced", "--alpha", "2", "--eps", "0.1", "--budget", "1000"], 3),
        (["search", "--n", "3", "--alpha", "2", "--eps", "0.1"], 2),
        (["tree", "/nonexistent/tree.json"], 2),
        ([], 2),
    ],
)
def test_error_exit_codes(argv, expected):
    assert run(*argv)[0] == expected


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "noisestab", "stability", "--table", "3", "--n", "2", "--eps", "0"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["results"]["values"][0]["value"] == 0.5
