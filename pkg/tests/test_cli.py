"""End-to-end runs of the command line interface."""

import json
import subprocess
import sys

import pytest

from anmsort.cli import main


def run(*args, cwd=None):
    proc = subprocess.run(
        [sys.executable, "-m", "anmsort", *map(str, args)], capture_output=True, text=True, cwd=cwd
    )
    return proc


@pytest.fixture(scope="module")
def sim(tmp_path_factory):
    root = tmp_path_factory.mktemp("cli")
    (root / "cfg.json").write_text(json.dumps({"d": 6, "gamma": 1.5, "n": 200, "replicates": 4}))
    proc = run("simulate", "--config", root / "cfg.json", "--seed", 7, "--out", root / "sim")
    assert proc.returncode == 0, proc.stderr
    return root


def test_simulate_outputs(sim):
    assert {p.name for p in (sim / "sim").iterdir()} == {"data.csv", "graph.json", "sigma.json"}
    header = (sim / "sim" / "data.csv").read_text().splitlines()[0]
    assert header == "X0,X1,X2,X3,X4,X5"
    assert len(json.loads((sim / "sim" / "graph.json").read_text())["edges"]) == 9


def test_sortability_discover_evaluate(sim, capsys):
    data, graph = sim / "sim" / "data.csv", sim / "sim" / "graph.json"
    assert main(["sortability", "--data", str(data), "--graph", str(graph), "--weighting", "path_count"]) == 0
    reports = json.loads(capsys.readouterr().out)
    assert [r["criterion"] for r in reports] == ["var", "r2", "cev"]
    est = sim / "est.json"
    assert main(["discover", "--data", str(data), "--out", str(est)]) == 0
    doc = json.loads(est.read_text())
    assert sorted(doc["order"]) == list(range(6))
    assert main(["evaluate", "--true", str(graph), "--est", str(est)]) == 0
    scores = json.loads(capsys.readouterr().out)
    assert 0 <= scores["sid"] <= 30 and 0 <= scores["shd"]


def test_bench_deterministic_across_threads(sim):
    a, b = sim / "bench1", sim / "bench4"
    assert run("bench", "--config", sim / "cfg.json", "--out", a).returncode == 0
    assert run("bench", "--config", sim / "cfg.json", "--out", b, "--threads", 4).returncode == 0
    for name in ("records.csv", "curves.csv", "metadata.json"):
        assert (a / name).read_bytes() == (b / name).read_bytes()
    assert (a / "curves.svg").read_text().startswith("<svg")
    assert len((a / "records.csv").read_text().splitlines()) == 5


def test_chain_and_counterexample(tmp_path, capsys):
    assert main(["chain", "--p-max", "3", "--replicates", "2", "--n", "100", "--out", str(tmp_path / "c.csv")]) == 0
    assert len((tmp_path / "c.csv").read_text().splitlines()) == 1 + 2 * 4
    assert main(["counterexample"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["sortability"]["path_count"]["fraction"] == "1/22"


def test_sweep(sim):
    out = sim / "sweep"
    proc = run("sweep", "--config", sim / "cfg.json", "--gammas", 1, "--targets", 0, 1, "--criteria", "r2", "var",
               "--out", out)
    assert proc.returncode == 0, proc.stderr
    assert len((out / "sweep.csv").read_text().splitlines()) == 3
    assert (out / "sweep_var.svg").exists()


def test_audit(sim, capsys):
    data, graph = sim / "sim" / "data.csv", sim / "sim" / "graph.json"
    assert main(["audit", "--data", str(data), "--graph", str(graph), "--bootstrap", "2"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["bootstrap"]["B"] == 2 and "v_r2" in rep["full"]


@pytest.mark.parametrize(
    "args, kind",
    [
        (["evaluate", "--true", "missing.json", "--est", "missing.json"], "FileNotFoundError"),
        (["bench"], "CliError"),
        (["frobnicate"], "UsageError"),
        (["chain", "--p-max", "0"], "ValueError"),
    ],
)
def test_errors_are_json_on_stderr(tmp_path, args, kind):
    proc = run(*args, cwd=tmp_path)
    assert proc.returncode != 0
    err = json.loads(proc.stderr.strip().splitlines()[-1])
    assert err["error"] == kind and err["message"]


def test_parse_error_reports_line(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("a,b\n1,2\n3,x\n")
    proc = run("audit", "--data", bad)
    assert proc.returncode == 1
    err = json.loads(proc.stderr)
    assert err["error"] == "FormatError" and "bad.csv:3:" in err["message"]
