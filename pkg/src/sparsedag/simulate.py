"""Random networks, synthetic data, and structure recovery metrics.

All randomness flows through numpy's PCG64 generator seeded explicitly, so
every dataset and network is reproducible bit for bit from its seed.
"""

from __future__ import annotations

import numpy as np

from .data import CONTINUOUS, DISCRETE, Dataset, new_dataset
from .discrete import DiscreteParams, _softmax, node_scores
from .gaussian import GaussianParams
from .graph import Dag, from_edges

FAMILIES = ("erdos", "scale-free", "small-world", "polytree", "bipartite")


def _rng(seed) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def _orient(p: int, undirected_edges, rng: np.random.Generator) -> list[tuple[int, int]]:
    """Direct each undirected edge from the earlier node of a random order."""
    perm = rng.permutation(p)
    pos = np.empty(p, dtype=np.int64)
    pos[perm] = np.arange(p)
    out = []
    for u, v in undirected_edges:
        out.append((u, v) if pos[u] < pos[v] else (v, u))
    return out


def _adjust_edge_count(p, edges, target, rng):
    """Randomly drop or add pair slots until exactly target skeleton edges remain."""
    edges = {frozenset(e) for e in edges}
    if len(edges) > target:
        pool = sorted(tuple(sorted(e)) for e in edges)
        keep = rng.choice(len(pool), size=target, replace=False)
        edges = {frozenset(pool[i]) for i in keep}
    while len(edges) < target:
        u, v = rng.integers(0, p, size=2)
        if u != v:
            edges.add(frozenset((int(u), int(v))))
    return [tuple(sorted(e)) for e in sorted(edges, key=lambda e: tuple(sorted(e)))]


def random_dag(kind: str, p: int, target_edges: int, seed=0) -> Dag:
    """Sample one acyclic network from a named family.

    Families: 'erdos' (uniform pairs), 'scale-free' (preferential-attachment
    tree, exactly p-1 edges), 'small-world' (rewired ring lattice, edge
    count adjusted to the target), 'polytree' (random spanning tree, exactly
    p-1 edges), and 'bipartite' (all edges cross a random half/half split).
    Orientation follows a random permutation, so every family is acyclic by
    construction.
    """
    if kind not in FAMILIES:
        raise ValueError(f"unknown family {kind!r}; choose from {', '.join(FAMILIES)}")
    if p < 2:
        raise ValueError(f"need at least 2 nodes, got {p}")
    rng = _rng(seed)
    nodes = [f"x{i + 1}" for i in range(p)]

    if kind in ("scale-free", "polytree"):
        if target_edges != p - 1:
            raise ValueError(f"{kind} networks on {p} nodes have exactly {p - 1} edges")
        und = []
        degree = np.zeros(p)
        for v in range(1, p):
            if kind == "scale-free":
                weights = degree[:v] + 1.0
                u = int(rng.choice(v, p=weights / weights.sum()))
            else:
                u = int(rng.integers(0, v))
            und.append((u, v))
            degree[u] += 1
            degree[v] += 1
        return from_edges(nodes, _orient(p, und, rng))

    if kind == "small-world":
        # ring lattice, each node tied to its 2 nearest neighbors per side
        k = 4 if p > 4 else 2
        und = set()
        for v in range(p):
            for off in range(1, k // 2 + 1):
                und.add(frozenset((v, (v + off) % p)))
        und = {e for e in und if len(e) == 2}
        rewired = set()
        for e in sorted(tuple(sorted(x)) for x in und):
            if rng.random() < 0.1:
                u = e[0]
                for _ in range(20):
                    w = int(rng.integers(0, p))
                    cand = frozenset((u, w))
                    if w != u and cand not in und and cand not in rewired:
                        e = (u, w)
                        break
            rewired.add(frozenset(e))
        edges = _adjust_edge_count(p, [tuple(sorted(e)) for e in rewired], target_edges, rng)
        return from_edges(nodes, _orient(p, edges, rng))

    if kind == "bipartite":
        half = p // 2
        perm = rng.permutation(p)
        left, right = perm[:half], perm[half:]
        cap = len(left) * len(right)
        if not 0 <= target_edges <= cap:
            raise ValueError(f"bipartite on {p} nodes supports at most {cap} edges")
        slots = rng.choice(cap, size=target_edges, replace=False)
        pairs = [(int(left[s // len(right)]), int(right[s % len(right)])) for s in sorted(slots)]
        return from_edges(nodes, pairs)

    # erdos: uniform distinct pairs oriented by a random permutation
    cap = p * (p - 1) // 2
    if not 0 <= target_edges <= cap:
        raise ValueError(f"{p} nodes support at most {cap} edges")
    slots = rng.choice(cap, size=target_edges, replace=False)
    iu, ju = np.triu_indices(p, k=1)
    und = [(int(iu[s]), int(ju[s])) for s in sorted(slots)]
    return from_edges(nodes, _orient(p, und, rng))


def tile_network(dag: Dag, k: int) -> Dag:
    """Disjoint union of k copies; copy c of node v is renamed to ``v_c``."""
    if k < 1:
        raise ValueError(f"need at least 1 copy, got {k}")
    nodes = [f"{v}_{c + 1}" for c in range(k) for v in dag.nodes]
    pairs = []
    for c in range(k):
        off = c * dag.p
        pairs.extend((a + off, b + off) for a, b in dag.edges())
    return from_edges(nodes, pairs)


def constant_gaussian_params(dag: Dag, weight: float = 1.0, noise: float = 1.0) -> GaussianParams:
    """Every edge gets the same weight, every node the same noise variance."""
    p = dag.p
    B = np.zeros((p, p))
    for a, b in dag.edges():
        B[a, b] = weight
    return GaussianParams(B=B, omega2=np.full(p, float(noise)))


def random_gaussian_params(dag: Dag, seed=0, weight_range=(0.5, 1.5),
                           noise_range=(0.5, 1.5)) -> GaussianParams:
    """Edge weights drawn uniformly from the range with random signs."""
    rng = _rng(seed)
    p = dag.p
    B = np.zeros((p, p))
    for a, b in dag.edges():
        mag = rng.uniform(*weight_range)
        B[a, b] = mag if rng.random() < 0.5 else -mag
    omega2 = rng.uniform(*noise_range, size=p)
    return GaussianParams(B=B, omega2=omega2)


def random_discrete_params(dag: Dag, levels, seed=0, effect: float = 2.5) -> DiscreteParams:
    """Blocks with entries of magnitude in [effect/2, effect] and random signs."""
    rng = _rng(seed)
    levels = [int(r) for r in levels]
    intercepts = [np.zeros(r) for r in levels]
    blocks = {}
    for a, b in dag.edges():
        blk = rng.uniform(effect / 2.0, effect, size=(levels[a] - 1, levels[b]))
        blk *= np.where(rng.random(blk.shape) < 0.5, -1.0, 1.0)
        blk[:, -1] = 0.0
        blocks[(a, b)] = blk
    return DiscreteParams(levels=levels, intercepts=intercepts, blocks=blocks)


def per_node_intervention_plan(p: int, n: int, m: int) -> list[frozenset[int]]:
    """m dedicated single-node intervention rows per node, then observational rows."""
    if m < 0:
        raise ValueError(f"m must be nonnegative, got {m}")
    if p * m > n:
        raise ValueError(f"{m} interventions per node need {p * m} rows, have {n}")
    plan = []
    for j in range(p):
        plan.extend([frozenset((j,))] * m)
    plan.extend([frozenset()] * (n - p * m))
    return plan


def simulate_gaussian(params: GaussianParams, n: int, interventions=None,
                      seed=0, nodes=None) -> Dataset:
    """Ancestral sampling from a linear model.

    Intervened entries are drawn from a standard normal instead of their
    structural equation, so they carry no signal about their own parents.
    """
    rng = _rng(seed)
    p = params.p
    if nodes is None:
        nodes = [f"x{i + 1}" for i in range(p)]
    dag = from_edges(nodes, [(int(a), int(b)) for a, b in zip(*np.nonzero(params.B))])
    order = dag.topological_sort()
    noise = rng.standard_normal((n, p))
    X = np.zeros((n, p))
    ivn = interventions if interventions is not None else [frozenset()] * n
    if len(ivn) != n:
        raise ValueError(f"{len(ivn)} intervention records for {n} rows")
    mask = np.ones((n, p), dtype=bool)
    for h, members in enumerate(ivn):
        for j in members:
            mask[h, j] = False
    mu = params.mu if params.mu is not None else np.zeros(p)
    for j in order:
        structural = mu[j] + X @ params.B[:, j] + np.sqrt(params.omega2[j]) * noise[:, j]
        X[:, j] = np.where(mask[:, j], structural, noise[:, j])
    return new_dataset(X, CONTINUOUS, nodes=nodes, interventions=ivn)


def simulate_discrete(params: DiscreteParams, n: int, interventions=None,
                      seed=0, nodes=None, level_labels=None) -> Dataset:
    """Ancestral sampling from a multi-logit model.

    Intervened entries are drawn uniformly over their levels.
    """
    rng = _rng(seed)
    p = params.p
    if nodes is None:
        nodes = [f"x{i + 1}" for i in range(p)]
    dag = params.structure(nodes)
    order = dag.topological_sort()
    ivn = interventions if interventions is not None else [frozenset()] * n
    if len(ivn) != n:
        raise ValueError(f"{len(ivn)} intervention records for {n} rows")
    mask = np.ones((n, p), dtype=bool)
    for h, members in enumerate(ivn):
        for j in members:
            mask[h, j] = False
    X = np.zeros((n, p), dtype=np.int64)
    uniform = rng.random((n, p))
    for j in order:
        r = params.levels[j]
        eta = node_scores(params, X, j)
        probs = _softmax(eta)
        cum = np.cumsum(probs, axis=1)
        draw = (uniform[:, j][:, None] > cum).sum(axis=1)
        draw = np.minimum(draw, r - 1)
        forced = (uniform[:, j] * r).astype(np.int64)
        forced = np.minimum(forced, r - 1)
        X[:, j] = np.where(mask[:, j], draw, forced)
    labels = level_labels
    if labels is None:
        labels = [[str(u) for u in range(r)] for r in params.levels]
    return new_dataset(X, DISCRETE, nodes=nodes, levels=labels, interventions=ivn)


def _aligned_edges(est: Dag, truth: Dag) -> tuple[set, set]:
    if set(est.nodes) != set(truth.nodes):
        raise ValueError("graphs are over different node sets")
    remap = {i: est.index(v) for i, v in enumerate(truth.nodes)}
    est_edges = set(est.edges())
    truth_edges = {(remap[a], remap[b]) for a, b in truth.edges()}
    return est_edges, truth_edges


def shd(est: Dag, truth: Dag) -> int:
    """Structural Hamming distance: skeleton mismatches plus reversals."""
    est_edges, truth_edges = _aligned_edges(est, truth)
    est_sk = {frozenset(e) for e in est_edges}
    truth_sk = {frozenset(e) for e in truth_edges}
    missing = len(truth_sk - est_sk)
    extra = len(est_sk - truth_sk)
    reversed_count = 0
    for a, b in truth_edges:
        if frozenset((a, b)) in est_sk and (a, b) not in est_edges:
            reversed_count += 1
    return missing + extra + reversed_count


def tpr(est: Dag, truth: Dag) -> float:
    """Fraction of true edges recovered with the correct direction."""
    est_edges, truth_edges = _aligned_edges(est, truth)
    if not truth_edges:
        raise ValueError("true graph has no edges")
    return len(est_edges & truth_edges) / len(truth_edges)
