import numpy as np
import pytest

from sparsedag import (
    CONTINUOUS,
    GaussianParams,
    PathEstimate,
    SolutionPath,
    default_lambdas,
    from_edges,
    generate_lambdas,
    new_dataset,
    select,
    select_parameter,
    simulate_gaussian,
)


def test_linear_grid_printed_values():
    got = generate_lambdas(10.0, 0.001, 10, scale="linear")
    want = [10.00, 8.89, 7.78, 6.67, 5.56, 4.45, 3.34, 2.23, 1.12, 0.01]
    assert np.allclose(got, want, atol=5e-5)


def test_log_grid_printed_values():
    got = generate_lambdas(10.0, 0.001, 10, scale="log")
    want = [10.0000, 4.6416, 2.1544, 1.0000, 0.4642, 0.2154,
            0.1000, 0.0464, 0.0215, 0.0100]
    assert np.allclose(got, want, atol=5e-5)


def test_grid_endpoints_exact():
    for scale in ("linear", "log"):
        grid = generate_lambdas(7.3, 0.02, 9, scale=scale)
        assert grid[0] == pytest.approx(7.3, rel=1e-12)
        assert grid[-1] == pytest.approx(7.3 * 0.02, rel=1e-12)
        assert np.all(np.diff(grid) < 0)


def test_constant_grid_with_ratio_one():
    grid = generate_lambdas(5.0, 1.0, 3, scale="linear")
    assert grid.tolist() == [5.0, 5.0, 5.0]


def test_grid_validation():
    with pytest.raises(ValueError):
        generate_lambdas(-1.0, 0.5, 5)
    with pytest.raises(ValueError):
        generate_lambdas(1.0, 1.5, 5)
    with pytest.raises(ValueError):
        generate_lambdas(1.0, 0.5, 0)


def test_default_grid_span():
    ds = new_dataset(np.random.default_rng(0).normal(size=(7466, 2)), CONTINUOUS)
    grid = default_lambdas(ds)
    assert len(grid) == 20
    assert grid[0] == pytest.approx(86.406, abs=5e-4)
    assert grid[-1] == pytest.approx(0.8641, abs=5e-5)
    # geometric: every successive ratio identical
    ratios = grid[1:] / grid[:-1]
    assert np.allclose(ratios, 0.01 ** (1 / 19), atol=1e-12)


def _toy_path(edge_counts, lambdas, dags, n=100):
    nodes = dags[0].nodes
    ests = [
        PathEstimate(dag=d, lam=l, nedge=e, pp=len(nodes), nn=n, seconds=0.0)
        for d, l, e in zip(dags, lambdas, edge_counts)
    ]
    return SolutionPath(ests, nodes, n, CONTINUOUS)


def test_select_by_each_criterion():
    nodes = ["a", "b", "c"]
    d0 = from_edges(nodes, [])
    d1 = from_edges(nodes, [("a", "b")])
    d2 = from_edges(nodes, [("a", "b"), ("b", "c")])
    path = _toy_path([0, 1, 2], [3.0, 1.0, 0.3], [d0, d1, d2])
    assert select(path, index=2) is path[1]
    assert select(path, edges=1) is path[1]
    # fuzzy matching: no 4-edge estimate, the 2-edge one is closest
    assert select(path, edges=4) is path[2]
    # ties break toward the sparser end
    assert select(path, edges=3) is path[2]
    assert select(path, lam=1.0) is path[1]
    assert select(path, lam=0.7) is path[1]
    # exact tie (0.65 is equidistant from 1.0 and 0.3): sparser estimate wins
    assert select(path, lam=0.65) is path[1]


def test_select_requires_one_criterion():
    d = from_edges(["a"], [])
    path = _toy_path([0], [1.0], [d])
    with pytest.raises(ValueError):
        select(path)
    with pytest.raises(ValueError):
        select(path, edges=1, index=1)
    with pytest.raises(ValueError):
        select(path, index=5)


def _chain_dataset(n=400, seed=0):
    B = np.zeros((3, 3))
    B[0, 1] = 1.0
    B[1, 2] = 1.0
    params = GaussianParams(B=B, omega2=np.ones(3))
    return simulate_gaussian(params, n, seed=seed)


def test_select_parameter_two_point_path():
    ds = _chain_dataset()
    nodes = ds.nodes
    empty = from_edges(nodes, [])
    truth = from_edges(nodes, [("x1", "x2"), ("x2", "x3")])
    path = _toy_path([0, 2], [2.0, 0.5], [empty, truth], n=ds.n)
    assert select_parameter(path, ds) == 2


def test_select_parameter_ignores_noise_tail():
    # the signal enters in one step; the later step adds a spurious edge
    # whose refit gain is tiny, so the elbow stays at the signal step
    ds = _chain_dataset(seed=3)
    nodes = ds.nodes
    empty = from_edges(nodes, [])
    truth = from_edges(nodes, [("x1", "x2"), ("x2", "x3")])
    extra = from_edges(nodes, [("x1", "x2"), ("x2", "x3"), ("x1", "x3")])
    path = _toy_path([0, 2, 3], [2.0, 0.5, 0.1], [empty, truth, extra], n=ds.n)
    assert select_parameter(path, ds) == 2


def test_select_parameter_all_empty_path():
    ds = _chain_dataset(seed=5)
    nodes = ds.nodes
    empty = from_edges(nodes, [])
    path = _toy_path([0, 0], [2.0, 0.5], [empty, empty.copy()], n=ds.n)
    assert select_parameter(path, ds) == 1


def test_select_parameter_rejects_short_path():
    ds = _chain_dataset(seed=6)
    path = _toy_path([0], [2.0], [from_edges(ds.nodes, [])], n=ds.n)
    with pytest.raises(ValueError):
        select_parameter(path, ds)
