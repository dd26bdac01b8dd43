"""End-to-end checks of the package's numbered requirements.

Each test covers one requirement; run with -v to get a one-line verdict per
requirement. The randomized learner suite is shared between the acyclicity
and monotone-descent checks, so it runs once per session.
"""

import json
import math
import time
import warnings

import numpy as np
import pytest
from scipy import optimize

from sparsedag import (
    CONTINUOUS,
    DISCRETE,
    GROUP,
    L1,
    MCP,
    Dag,
    GaussianParams,
    LearnOptions,
    Penalty,
    PriorKnowledge,
    PathEstimate,
    SolutionPath,
    default_lambdas,
    estimate_dag_discrete,
    estimate_dag_gaussian,
    estimate_parameters_discrete,
    estimate_parameters_gaussian,
    from_adjacency,
    from_edges,
    format_edge_list,
    gaussian_negloglik,
    gaussian_negloglik_grad,
    generate_lambdas,
    group_threshold,
    implied_covariance,
    implied_precision,
    multilogit_negloglik,
    multilogit_negloglik_grad,
    multilogit_prob,
    new_dataset,
    parse_edge_list,
    path_to_dict,
    per_node_intervention_plan,
    random_dag,
    random_discrete_params,
    random_gaussian_params,
    read_data_csv,
    read_interventions,
    read_levels,
    read_path,
    scalar_threshold,
    select_parameter,
    simulate_discrete,
    simulate_gaussian,
    specify_prior,
    standardize,
    tile_network,
    tpr,
    write_data_csv,
    write_interventions,
    write_levels,
    write_path,
)
from sparsedag.cli import main as cli_main
from sparsedag.data import dataset_to_csv_text, row_partition


def _erdos(p, e, seed):
    return random_dag("erdos", p, min(e, p * (p - 1) // 2), seed=seed)


def test_criterion_01_lambda_grid_fidelity():
    lin = generate_lambdas(10.0, 0.001, 10, scale="linear")
    assert np.allclose(
        lin, [10.00, 8.89, 7.78, 6.67, 5.56, 4.45, 3.34, 2.23, 1.12, 0.01],
        atol=5e-5)
    log = generate_lambdas(10.0, 0.001, 10, scale="log")
    assert np.allclose(
        log, [10.0000, 4.6416, 2.1544, 1.0000, 0.4642, 0.2154,
              0.1000, 0.0464, 0.0215, 0.0100],
        atol=5e-5)
    ds = new_dataset(np.random.default_rng(0).normal(size=(7466, 2)), CONTINUOUS)
    grid = default_lambdas(ds, length=20)
    assert len(grid) == 20
    assert grid[0] == pytest.approx(86.406, abs=5e-4)
    assert grid[-1] == pytest.approx(0.8641, abs=5e-5)


def test_criterion_02_empty_graph_at_anchor():
    t0 = time.time()
    rng = np.random.default_rng(0)
    empty = 0
    for trial in range(100):
        p = 200 if trial == 0 else int(rng.integers(2, 201))
        dag = _erdos(p, 2 * p, trial)
        params = random_gaussian_params(dag, seed=trial)
        ds = simulate_gaussian(params, int(rng.integers(50, 200)), seed=trial)
        std, _, _ = standardize(ds)
        anchor = float(np.sqrt(std.n))
        path = estimate_dag_gaussian(std, LearnOptions(lambdas=np.array([anchor])))
        empty += path[0].nedge == 0
    elapsed = time.time() - t0
    assert empty == 100
    assert elapsed < 30.0


_SUITE = {}


def _property_suite():
    """>= 1000 randomized instrumented learner runs, both data types.

    Every path estimate must topological-sort; the learners run with
    check_descent on, which raises if any accepted update increases the
    penalized objective.
    """
    if _SUITE:
        return _SUITE
    rng = np.random.default_rng(1234)
    runs = 0
    acyclic_failures = 0
    descent_violations = 0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UserWarning)
        for trial in range(700):
            p = int(rng.integers(2, 16))
            dag = _erdos(p, int(rng.integers(1, 2 * p + 1)), trial)
            params = random_gaussian_params(dag, seed=trial)
            n = int(rng.integers(40, 120))
            ivn = per_node_intervention_plan(p, n, 2) if trial % 3 == 0 else None
            ds = simulate_gaussian(params, n, interventions=ivn, seed=trial)
            opts = LearnOptions(lambdas=default_lambdas(ds, length=4),
                                penalty="mcp" if trial % 5 == 0 else "l1",
                                check_descent=True)
            try:
                path = estimate_dag_gaussian(ds, opts)
            except AssertionError:
                descent_violations += 1
                continue
            finally:
                runs += 1
            for est in path:
                try:
                    est.dag.topological_sort()
                except Exception:
                    acyclic_failures += 1
        for trial in range(300):
            p = int(rng.integers(2, 9))
            dag = _erdos(p, int(rng.integers(1, 2 * p + 1)), trial + 900)
            levels = [int(rng.integers(2, 4)) for _ in range(p)]
            params = random_discrete_params(dag, levels, seed=trial, effect=2.0)
            n = int(rng.integers(40, 100))
            ivn = per_node_intervention_plan(p, n, 2) if trial % 3 == 0 else None
            ds = simulate_discrete(params, n, interventions=ivn, seed=trial)
            opts = LearnOptions(lambdas=default_lambdas(ds, length=4),
                                check_descent=True)
            try:
                path = estimate_dag_discrete(ds, opts)
            except AssertionError:
                descent_violations += 1
                continue
            finally:
                runs += 1
            for est in path:
                try:
                    est.dag.topological_sort()
                except Exception:
                    acyclic_failures += 1
    _SUITE.update(runs=runs, acyclic_failures=acyclic_failures,
                  descent_violations=descent_violations)
    return _SUITE


def test_criterion_03_universal_acyclicity():
    suite = _property_suite()
    assert suite["runs"] >= 1000
    assert suite["acyclic_failures"] == 0


def test_criterion_04_covariance_precision_algebra():
    t0 = time.time()
    rng = np.random.default_rng(40)
    for trial in range(500):
        p = int(rng.integers(2, 21))
        dag = _erdos(p, int(rng.integers(1, 3 * p + 1)), trial)
        params = random_gaussian_params(dag, seed=trial)
        prod = implied_precision(params) @ implied_covariance(params)
        assert np.max(np.abs(prod - np.eye(p))) < 1e-10
    for seed in range(10):
        p = 3 + seed % 6
        dag = _erdos(p, 2 * p, seed)
        params = random_gaussian_params(dag, seed=seed + 50)
        sigma = implied_covariance(params)
        ds = simulate_gaussian(params, 10**6, seed=seed)
        hat = np.cov(ds.values.T, ddof=1)
        assert np.linalg.norm(hat - sigma) / np.linalg.norm(sigma) < 0.02
    assert time.time() - t0 < 120.0


def _grad_close(analytic, fd):
    return abs(analytic - fd) <= 1e-5 * max(1.0, abs(analytic), abs(fd))


def test_criterion_05_gradient_correctness():
    rng = np.random.default_rng(5)
    for trial in range(100):
        p = int(rng.integers(2, 7))
        dag = _erdos(p, int(rng.integers(1, 2 * p + 1)), trial)
        params = random_gaussian_params(dag, seed=trial)
        if trial % 2:
            params = GaussianParams(B=params.B, omega2=params.omega2,
                                    mu=rng.normal(size=p))
        n = int(rng.integers(10, 40))
        ivn = None
        if trial % 3 == 0:
            ivn = [frozenset({int(rng.integers(p))}) if rng.random() < 0.4
                   else frozenset() for _ in range(n)]
        ds = simulate_gaussian(params, n, interventions=ivn, seed=trial)
        part = row_partition(ds)
        grad = gaussian_negloglik_grad(params, ds, part)
        h = 1e-5
        for k in range(p):
            for j in range(p):
                if k == j:
                    continue
                up = params.B.copy()
                dn = params.B.copy()
                up[k, j] += h
                dn[k, j] -= h
                fd = (
                    gaussian_negloglik(GaussianParams(up, params.omega2, params.mu), ds, part)
                    - gaussian_negloglik(GaussianParams(dn, params.omega2, params.mu), ds, part)
                ) / (2 * h)
                assert _grad_close(grad[k, j], fd)

    for trial in range(100):
        p = int(rng.integers(2, 4))
        dag = _erdos(p, p, trial)
        levels = [int(rng.integers(2, 4)) for _ in range(p)]
        params = random_discrete_params(dag, levels, seed=trial, effect=1.5)
        n = int(rng.integers(20, 60))
        ivn = [frozenset({int(rng.integers(p))}) if rng.random() < 0.3
               else frozenset() for _ in range(n)]
        ds = simulate_discrete(params, n, interventions=ivn, seed=trial)
        part = row_partition(ds)
        j = int(rng.integers(p))
        g0, gblocks = multilogit_negloglik_grad(params, ds, part, j)
        h = 1e-6

        def shifted(coord_of, coord, eps):
            intercepts = [v.copy() for v in params.intercepts]
            blocks = {k: v.copy() for k, v in params.blocks.items()}
            if coord_of is None:
                intercepts[j][coord] += eps
            else:
                blocks[(coord_of, j)][coord] += eps
            return type(params)(levels=params.levels, intercepts=intercepts,
                                blocks=blocks)

        def fd_at(coord_of, coord):
            hi = multilogit_negloglik(shifted(coord_of, coord, h), ds, part, j=j)
            lo = multilogit_negloglik(shifted(coord_of, coord, -h), ds, part, j=j)
            return (hi - lo) / (2 * h)

        for k in range(levels[j] - 1):
            assert _grad_close(g0[k], fd_at(None, k))
        for i, gb in gblocks.items():
            for a in range(gb.shape[0]):
                for b in range(gb.shape[1] - 1):
                    assert _grad_close(gb[a, b], fd_at(i, (a, b)))


def _numeric_scalar_min(fun, radius):
    grid = np.linspace(-radius, radius, 200001)
    vals = fun(grid)
    pitch = grid[1] - grid[0]
    center = grid[int(np.argmin(vals))]
    res = optimize.minimize_scalar(
        lambda t: float(fun(np.array([t]))[0]),
        bounds=(center - 2 * pitch, center + 2 * pitch),
        method="bounded", options={"xatol": 1e-12})
    return float(res.x), float(res.fun)


def test_criterion_06_prox_operator_oracles():
    rng = np.random.default_rng(6)
    for _ in range(400):
        z = float(rng.uniform(-4, 4))
        c = float(rng.uniform(0.3, 3))
        lam = float(rng.uniform(0.01, 1.5))
        pen = Penalty(L1, lam)

        def obj(t):
            return 0.5 * c * (t - z) ** 2 + lam * np.abs(t)

        got = scalar_threshold(pen, z, c)
        t_num, f_num = _numeric_scalar_min(obj, abs(z) + lam / c + 1.0)
        assert abs(got - t_num) <= 1e-6
        assert abs(float(obj(np.array([got]))[0]) - f_num) <= 1e-6

    for gamma in (1.5, 2.0, 5.0):
        for _ in range(150):
            z = float(rng.uniform(-4, 4))
            c = float(rng.uniform(0.3, 3))
            lam = float(rng.uniform(0.01, 1.5))
            pen = Penalty(MCP, lam, gamma=gamma)

            def obj(t):
                a = np.abs(t)
                inner = lam * a - t * t / (2 * gamma)
                outer = gamma * lam * lam / 2
                return 0.5 * c * (t - z) ** 2 + np.where(a <= gamma * lam, inner, outer)

            got = scalar_threshold(pen, z, c)
            t_num, f_num = _numeric_scalar_min(obj, abs(z) + gamma * lam + 1.0)
            f_got = float(obj(np.array([got]))[0])
            # nonconvex: near-ties can put the two minimizers far apart, so
            # agreement is judged on the objective value
            assert f_got <= f_num + 1e-9
            assert abs(f_got - f_num) <= 1e-6

    for _ in range(150):
        dim = int(rng.integers(2, 7))
        z = rng.normal(scale=2.0, size=dim)
        step = float(rng.uniform(0.2, 2.0))
        lam = float(rng.uniform(0.01, 1.5))
        pen = Penalty(GROUP, lam)
        got = group_threshold(pen, z, step)
        w = lam * math.sqrt(dim)
        norm = float(np.linalg.norm(z))
        if norm == 0.0:
            assert np.all(got == 0)
            continue
        res = optimize.minimize_scalar(
            lambda r: (r - norm) ** 2 / (2 * step) + w * r,
            bounds=(0.0, norm + 1.0), method="bounded",
            options={"xatol": 1e-12})
        want = float(res.x) * z / norm
        assert np.max(np.abs(got - want)) <= 1e-6


def test_criterion_07_intervention_orientation():
    t0 = time.time()
    # two-node chain, half the rows intervene the effect variable; with
    # variance-matched parameters the two orientations are observationally
    # equivalent, so the observational rate is left unasserted by design
    B = np.array([[0.0, 0.8], [0.0, 0.0]])
    params = GaussianParams(B=B, omega2=np.array([1.0, 0.36]))
    ivn = [frozenset({1})] * 250 + [frozenset()] * 250
    oriented = 0
    for seed in range(100):
        ds = simulate_gaussian(params, 500, interventions=ivn, seed=seed)
        path = estimate_dag_gaussian(
            ds, LearnOptions(lambdas=default_lambdas(ds, length=10)))
        est = path[select_parameter(path, ds) - 1]
        oriented += est.dag.edges() == [(0, 1)]
    assert oriented >= 95

    p, n, m = 50, 500, 10
    plan = per_node_intervention_plan(p, n, m)
    truth = from_edges(p, [(i, i + 1) for i in range(p - 1)])
    wins = 0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UserWarning)
        for seed in range(20):
            dparams = random_discrete_params(truth, levels=[2] * p,
                                             seed=seed + 1, effect=3.5)
            ds_i = simulate_discrete(dparams, n, interventions=plan, seed=seed + 2)
            path_i = estimate_dag_discrete(
                ds_i, LearnOptions(lambdas=default_lambdas(ds_i, length=15)))
            tpr_i = tpr(path_i[select_parameter(path_i, ds_i) - 1].dag, truth)
            ds_o = simulate_discrete(dparams, n, seed=seed + 2)
            path_o = estimate_dag_discrete(
                ds_o, LearnOptions(lambdas=default_lambdas(ds_o, length=15)))
            tpr_o = tpr(path_o[select_parameter(path_o, ds_o) - 1].dag, truth)
            wins += tpr_i > tpr_o
    elapsed = time.time() - t0
    assert wins >= 18
    assert elapsed < 600.0


def test_criterion_08_refit_correctness():
    rng = np.random.default_rng(8)
    for trial in range(20):
        p = int(rng.integers(3, 9))
        dag = _erdos(p, int(rng.integers(2, 2 * p)), trial)
        params = random_gaussian_params(dag, seed=trial)
        n = int(rng.integers(60, 200))
        ds = simulate_gaussian(params, n, seed=trial)
        path = estimate_dag_gaussian(
            ds, LearnOptions(lambdas=default_lambdas(ds, length=5)))
        fits = estimate_parameters_gaussian(path, ds)
        part = row_partition(ds)
        for est, f in zip(path, fits):
            for j in range(p):
                rows = part.observed[j]
                parents = sorted(est.dag.parents[j])
                design = np.column_stack(
                    [np.ones(rows.size), ds.values[np.ix_(rows, parents)]])
                coef = np.concatenate([[f.mu[j]], f.B[parents, j]])
                resid = ds.values[rows, j] - design @ coef
                assert np.max(np.abs(design.T @ resid)) < 1e-8 * rows.size

    # exhaustive small tables: one parent keeps the multi-logit saturated
    for r_i in (2, 3, 4):
        for r_j in (2, 3):
            rng2 = np.random.default_rng(r_i * 10 + r_j)
            n = 60 * r_i
            parent = np.repeat(np.arange(r_i), n // r_i)
            table = rng2.dirichlet(np.ones(r_j), size=r_i)
            child = np.concatenate([
                rng2.choice(r_j, size=n // r_i, p=table[k]) for k in range(r_i)
            ])
            # make sure every child level is observed so levels infer fully
            child[:r_j] = np.arange(r_j)
            ds = new_dataset(np.column_stack([parent, child]), DISCRETE)
            dag = from_edges(2, [(0, 1)])
            est = PathEstimate(dag=dag, lam=1.0, nedge=1, pp=2, nn=n, seconds=0.0)
            fit = estimate_parameters_discrete(
                SolutionPath([est], ds.nodes, n, DISCRETE), ds)[0]
            for k in range(r_i):
                hat = multilogit_prob(fit, 1, [k, 0])
                rows = parent == k
                emp = np.array([(child[rows] == c).mean() for c in range(r_j)])
                assert np.max(np.abs(hat - emp)) < 1e-6
            hat0 = multilogit_prob(fit, 0, [0, 0])
            emp0 = np.array([(parent == k).mean() for k in range(r_i)])
            assert np.max(np.abs(hat0 - emp0)) < 1e-6


def test_criterion_09_scalability_envelope():
    base = _erdos(109, 195, 7)
    assert base.p == 109 and base.nedge == 195
    bp = random_gaussian_params(base, seed=7)
    times = {}
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UserWarning)
        for k in (1, 2, 4):
            net = tile_network(base, k)
            p = net.p
            B = np.zeros((p, p))
            omega2 = np.zeros(p)
            for c in range(k):
                s = c * base.p
                B[s:s + base.p, s:s + base.p] = bp.B
                omega2[s:s + base.p] = bp.omega2
            params = GaussianParams(B=B, omega2=omega2)
            ds = simulate_gaussian(params, 50, seed=k, nodes=net.nodes)
            t0 = time.time()
            estimate_dag_gaussian(
                ds, LearnOptions(lambdas=default_lambdas(ds),
                                 edge_threshold=10 * p))
            times[k] = time.time() - t0
    assert all(t < 60.0 for t in times.values())
    # strictly beats quadratic growth across the three points
    assert times[2] < 4.0 * times[1]
    assert times[4] < 16.0 * times[1]


def test_criterion_10_prior_knowledge_contract():
    rng = np.random.default_rng(10)
    for trial in range(200):
        p = int(rng.integers(4, 11))
        truth = _erdos(p, 2 * p, trial)
        skeleton = _erdos(p, p, trial + 5000)
        wl_pairs = skeleton.edges()[: int(rng.integers(1, 4))]
        taken = set(wl_pairs) | {(b, a) for a, b in wl_pairs}
        bl_pairs = []
        while len(bl_pairs) < 3:
            a, b = int(rng.integers(p)), int(rng.integers(p))
            if a != b and (a, b) not in taken:
                bl_pairs.append((a, b))
                taken.add((a, b))
        discrete = trial % 7 == 0
        if discrete:
            params = random_discrete_params(truth, [2] * p, seed=trial, effect=2.0)
            ds = simulate_discrete(params, 80, seed=trial)
            nodes = ds.nodes
        else:
            params = random_gaussian_params(truth, seed=trial)
            ds = simulate_gaussian(params, 80, seed=trial)
            nodes = ds.nodes
        prior = PriorKnowledge(
            whitelist={(nodes[a], nodes[b]) for a, b in wl_pairs},
            blacklist={(nodes[a], nodes[b]) for a, b in bl_pairs},
        )
        opts = LearnOptions(lambdas=default_lambdas(ds, length=3))
        learner = estimate_dag_discrete if discrete else estimate_dag_gaussian
        path = learner(ds, opts, prior)
        for est in path:
            named = set(est.dag.named_edges())
            assert prior.whitelist <= named
            assert not (prior.blacklist & named)

    nodes = [f"v{i}" for i in range(11)]
    prior = specify_prior([nodes[0]], nodes[8:], nodes)
    assert len(prior.blacklist) == 37


def test_criterion_11_monotone_descent():
    suite = _property_suite()
    assert suite["runs"] >= 1000
    assert suite["descent_violations"] == 0


def test_criterion_12_determinism_and_round_trips(tmp_path):
    dag = _erdos(5, 6, 3)
    gparams = random_gaussian_params(dag, seed=3)
    ivn = per_node_intervention_plan(5, 100, 4)
    a = simulate_gaussian(gparams, 100, interventions=ivn, seed=11)
    b = simulate_gaussian(gparams, 100, interventions=ivn, seed=11)
    assert dataset_to_csv_text(a) == dataset_to_csv_text(b)
    assert a.interventions == b.interventions

    dparams = random_discrete_params(dag, [2, 3, 2, 2, 3], seed=4)
    da = simulate_discrete(dparams, 100, interventions=ivn, seed=12)
    db = simulate_discrete(dparams, 100, interventions=ivn, seed=12)
    assert dataset_to_csv_text(da) == dataset_to_csv_text(db)

    opts = LearnOptions(lambdas=default_lambdas(a, length=5))
    p1 = path_to_dict(estimate_dag_gaussian(a, opts))
    p2 = path_to_dict(estimate_dag_gaussian(a, opts))
    for rec in (*p1["estimates"], *p2["estimates"]):
        rec.pop("seconds")
    assert p1 == p2

    # path JSON: read back and re-serialize byte-identically
    path = estimate_dag_gaussian(a, opts)
    f1, f2 = tmp_path / "p1.json", tmp_path / "p2.json"
    write_path(str(f1), path)
    loaded = read_path(str(f1))
    write_path(str(f2), loaded)
    assert f1.read_bytes() == f2.read_bytes()
    assert loaded.nodes == path.nodes and loaded.n == path.n
    assert [e.lam for e in loaded] == [e.lam for e in path]
    assert [e.dag.edges() for e in loaded] == [e.dag.edges() for e in path]

    # dataset files
    csv1 = tmp_path / "d.csv"
    write_data_csv(str(csv1), a)
    back = read_data_csv(str(csv1), CONTINUOUS)
    assert back.nodes == a.nodes
    assert np.array_equal(back.values, a.values)
    csv2 = tmp_path / "d2.csv"
    write_data_csv(str(csv2), back)
    assert csv1.read_bytes() == csv2.read_bytes()

    ivn_file = tmp_path / "ivn.txt"
    write_interventions(str(ivn_file), a)
    assert read_interventions(str(ivn_file), a.nodes, a.n) == a.interventions

    lv_file = tmp_path / "levels.csv"
    write_levels(str(lv_file), da)
    assert read_levels(str(lv_file), da.nodes) == da.levels

    # graph formats
    text = format_edge_list(dag)
    again = parse_edge_list(text, nodes=dag.nodes)
    assert format_edge_list(again) == text
    assert from_adjacency(dag.nodes, dag.adjacency_matrix()).edges() == dag.edges()

    # the CLI learner is deterministic end to end
    data_csv = tmp_path / "cli.csv"
    assert cli_main(["simulate", "--family", "erdos", "--p", "4", "--edges", "4",
                     "--n", "80", "--seed", "9", "--out", str(data_csv)]) == 0
    o1, o2 = tmp_path / "c1.json", tmp_path / "c2.json"
    assert cli_main(["learn", "--data", str(data_csv), "--lambdas", "5",
                     "--out", str(o1)]) == 0
    assert cli_main(["learn", "--data", str(data_csv), "--lambdas", "5",
                     "--out", str(o2)]) == 0
    j1, j2 = json.loads(o1.read_text()), json.loads(o2.read_text())
    for rec in (*j1["estimates"], *j2["estimates"]):
        rec.pop("seconds")
    assert j1 == j2
