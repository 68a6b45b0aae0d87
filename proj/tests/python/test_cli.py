import json
import os
import subprocess

import pytest

CLI = os.environ.get("MATORDER_CLI")

pytestmark = pytest.mark.skipif(CLI is None, reason="MATORDER_CLI not set")


def run(*args, cwd=None):
    return subprocess.run([CLI, *args], capture_output=True, text=True, cwd=cwd)


def write_matrix(path, diag):
    entries = [[[float(diag[i]) if i == j else 0.0, 0.0] for j in range(len(diag))]
               for i in range(len(diag))]
    path.write_text(json.dumps({"dim": len(diag), "entries": entries}))


def test_mean_commuting(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    write_matrix(a, [1.0, 4.0])
    write_matrix(b, [9.0, 1.0])
    out = run("mean", "--kind", "geometric", "--alpha", "0.5", "--p", "1", str(a), str(b))
    assert out.returncode == 0
    value = json.loads(out.stdout)["value"]
    assert value["entries"][0][0][0] == pytest.approx(3.0)
    assert value["entries"][1][1][0] == pytest.approx(2.0)


def test_support_violation_exit_code(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    write_matrix(a, [1.0, 0.0])
    write_matrix(b, [1.0, 1.0])
    out = run("mean", "--kind", "sg", "--alpha", "0.5", "--p", "1", str(a), str(b))
    assert out.returncode == 2
    assert "SupportViolation" in out.stderr


def test_order_exit_codes(tmp_path):
    x, y = tmp_path / "x.json", tmp_path / "y.json"
    write_matrix(x, [1.0, 1.0])
    write_matrix(y, [2.0, 2.0])
    assert run("order", "--kind", "loewner", str(x), str(y)).returncode == 0
    assert run("order", "--kind", "loewner", str(y), str(x)).returncode == 1
    chain = run("order", "--kind", "all", str(x), str(y))
    assert chain.returncode == 0
    rep = json.loads(chain.stdout)
    assert rep["chain_consistent"]
    assert len(rep["verdicts"]) == 7


def test_search_and_store(tmp_path):
    store = tmp_path / "w.jsonl"
    out = run("search", "--claim", "le:loewner:0.5:1:1", "--store", str(store))
    assert out.returncode == 1  # witness found
    w = json.loads(store.read_text().splitlines()[0])
    assert w["schema"] == 1
    assert w["margin"] < -1e-8

    assert run("search", "--claim", "arith:loewner:0.5:1:1").returncode == 0
    assert run("search", "--claim", "garbage").returncode == 2


def test_expand_degenerate_exit():
    assert run("expand", "--lemma", "3.5", "--x", "1").returncode == 2
    ok = run("expand", "--lemma", "3.3", "--alpha", "0.5", "--p", "1", "--x", "4", "--y", "0.25")
    assert ok.returncode == 0
    assert ok.stdout.startswith("lemma_tag,parameters,closed_form,oracle,abs_err,rel_err")
