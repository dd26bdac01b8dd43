import json

import numpy as np
import pytest

from sparsedag.cli import main
from sparsedag.solpath import read_path


def run(*argv):
    return main(list(argv))


def test_continuous_pipeline_round_trip(tmp_path):
    data = tmp_path / "data.csv"
    ivn = tmp_path / "ivn.txt"
    truth = tmp_path / "truth.txt"
    code = run("simulate", "--family", "erdos", "--p", "6", "--edges", "7",
               "--n", "200", "--seed", "4", "--ivn-per-node", "10",
               "--out", str(data), "--out-ivn", str(ivn), "--out-truth", str(truth))
    assert code == 0
    assert data.exists() and ivn.exists() and truth.exists()
    header = data.read_text().splitlines()[0]
    assert header.split(",") == [f"x{i}" for i in range(1, 7)]

    path_file = tmp_path / "path.json"
    code = run("learn", "--data", str(data), "--ivn", str(ivn),
               "--lambdas", "8", "--out", str(path_file))
    assert code == 0
    path = read_path(str(path_file))
    assert len(path) == 8
    assert path.kind == "continuous"
    assert path[0].nedge <= path[-1].nedge

    pick = tmp_path / "pick.json"
    want = path[-1].nedge
    code = run("select", "--path", str(path_file), "--edges", str(want),
               "--out", str(pick))
    assert code == 0
    doc = json.loads(pick.read_text())
    assert doc["nedge"] == want
    assert doc["criterion"] == f"edges={want}"
    assert all(len(e) == 2 for e in doc["edges"])

    pars = tmp_path / "params.json"
    code = run("params", "--path", str(path_file), "--data", str(data),
               "--ivn", str(ivn), "--out", str(pars))
    assert code == 0
    doc = json.loads(pars.read_text())
    assert len(doc["estimates"]) == 8
    rec = doc["estimates"][-1]
    assert len(rec["intercepts"]) == 6
    assert len(rec["coefficients"]) == path[-1].nedge

    dot = tmp_path / "graph.dot"
    code = run("export", "--path", str(path_file), "--index", "8", "--dot", str(dot))
    assert code == 0
    text = dot.read_text()
    assert text.startswith("digraph")
    for a, b in path[-1].dag.named_edges():
        assert f'"{a}" -> "{b}";' in text

    adj = tmp_path / "adj.csv"
    assert run("export", "--path", str(path_file), "--index", "8",
               "--adj", str(adj)) == 0
    lines = adj.read_text().splitlines()
    assert len(lines) == 7
    total = sum(int(v) for ln in lines[1:] for v in ln.split(",")[1:])
    assert total == path[-1].nedge


def test_discrete_pipeline_with_auto_select(tmp_path):
    data = tmp_path / "d.csv"
    ivn = tmp_path / "d_ivn.txt"
    assert run("simulate", "--family", "polytree", "--p", "5", "--edges", "4",
               "--n", "300", "--seed", "2", "--type", "discrete", "--levels", "2",
               "--effect", "3.0", "--ivn-per-node", "20",
               "--out", str(data), "--out-ivn", str(ivn)) == 0

    path_file = tmp_path / "d_path.json"
    assert run("learn", "--data", str(data), "--ivn", str(ivn), "--type", "discrete",
               "--lambdas", "6", "--out", str(path_file)) == 0
    path = read_path(str(path_file))
    assert path.kind == "discrete"

    pick = tmp_path / "d_pick.json"
    assert run("select", "--path", str(path_file), "--auto",
               "--data", str(data), "--ivn", str(ivn), "--out", str(pick)) == 0
    doc = json.loads(pick.read_text())
    assert doc["criterion"] == "auto"
    assert 1 <= doc["index"] <= 6

    pars = tmp_path / "d_params.json"
    assert run("params", "--path", str(path_file), "--data", str(data),
               "--ivn", str(ivn), "--out", str(pars)) == 0
    doc = json.loads(pars.read_text())
    assert doc["levels"] == {f"x{i}": ["0", "1"] for i in range(1, 6)}


def test_cov_and_prec_are_inverses(tmp_path):
    data = tmp_path / "c.csv"
    assert run("simulate", "--family", "erdos", "--p", "4", "--edges", "4",
               "--n", "150", "--seed", "8", "--out", str(data)) == 0
    cov_dir = tmp_path / "cov"
    prec_dir = tmp_path / "prec"
    assert run("cov", "--data", str(data), "--lambdas", "5",
               "--out-dir", str(cov_dir)) == 0
    assert run("prec", "--data", str(data), "--lambdas", "5",
               "--out-dir", str(prec_dir)) == 0
    covs = sorted(cov_dir.glob("cov_*.csv"))
    precs = sorted(prec_dir.glob("prec_*.csv"))
    assert len(covs) == len(precs) == 5
    for cf, pf in zip(covs, precs):
        S = np.loadtxt(cf, delimiter=",", skiprows=1)
        K = np.loadtxt(pf, delimiter=",", skiprows=1)
        assert np.max(np.abs(K @ S - np.eye(4))) < 1e-8


def test_usage_errors_exit_1(tmp_path):
    data = tmp_path / "u.csv"
    assert run("simulate", "--family", "erdos", "--p", "3", "--edges", "2",
               "--n", "60", "--out", str(data)) == 0
    path_file = tmp_path / "u_path.json"
    assert run("learn", "--data", str(data), "--lambdas", "4",
               "--out", str(path_file)) == 0
    # two selection criteria at once
    assert run("select", "--path", str(path_file), "--edges", "1", "--index", "2",
               "--out", str(tmp_path / "x.json")) == 1
    # auto without data
    assert run("select", "--path", str(path_file), "--auto",
               "--out", str(tmp_path / "x.json")) == 1
    # mcp is a continuous-only penalty
    disc = tmp_path / "u_disc.csv"
    assert run("simulate", "--family", "erdos", "--p", "3", "--edges", "2",
               "--n", "60", "--type", "discrete", "--out", str(disc)) == 0
    assert run("learn", "--data", str(disc), "--type", "discrete",
               "--penalty", "mcp", "--out", str(tmp_path / "y.json")) == 1
    # unknown flag and bad choice are parser errors
    assert run("learn", "--data", str(data), "--nope", "1",
               "--out", str(tmp_path / "z.json")) == 1
    assert run("simulate", "--family", "ring", "--p", "3", "--edges", "2",
               "--n", "60", "--out", str(tmp_path / "w.csv")) == 1
    # export wants exactly one format
    assert run("export", "--path", str(path_file), "--index", "1",
               "--dot", str(tmp_path / "a.dot"), "--adj", str(tmp_path / "a.csv")) == 1


def test_data_errors_exit_2(tmp_path):
    missing = tmp_path / "nope.csv"
    assert run("learn", "--data", str(missing), "--out", str(tmp_path / "p.json")) == 2

    data = tmp_path / "e.csv"
    assert run("simulate", "--family", "erdos", "--p", "3", "--edges", "2",
               "--n", "80", "--seed", "1", "--out", str(data)) == 0
    path_file = tmp_path / "e_path.json"
    assert run("learn", "--data", str(data), "--lambdas", "4",
               "--out", str(path_file)) == 0
    # params against a dataset with different columns
    other = tmp_path / "other.csv"
    assert run("simulate", "--family", "erdos", "--p", "4", "--edges", "3",
               "--n", "80", "--out", str(other)) == 0
    assert run("params", "--path", str(path_file), "--data", str(other),
               "--out", str(tmp_path / "pp.json")) == 2
    # select index out of range
    assert run("select", "--path", str(path_file), "--index", "99",
               "--out", str(tmp_path / "s.json")) == 2


def test_learn_output_is_deterministic(tmp_path):
    data = tmp_path / "det.csv"
    assert run("simulate", "--family", "scale-free", "--p", "6", "--edges", "5",
               "--n", "120", "--seed", "5", "--out", str(data)) == 0
    out1 = tmp_path / "p1.json"
    out2 = tmp_path / "p2.json"
    assert run("learn", "--data", str(data), "--lambdas", "6", "--out", str(out1)) == 0
    assert run("learn", "--data", str(data), "--lambdas", "6", "--out", str(out2)) == 0
    a = json.loads(out1.read_text())
    b = json.loads(out2.read_text())
    for rec in (*a["estimates"], *b["estimates"]):
        rec.pop("seconds")
    assert a == b
