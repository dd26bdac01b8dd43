"""Structure learning for categorical data.

Every node gets a multi-logit conditional distribution: the score of level
u of node j is an intercept plus one coefficient block per parent, with the
parent entering through dummy indicators for all but its last level. The
last level of the child is the reference and its score column is pinned at
zero. An edge is present exactly when its whole block is nonzero, which the
group penalty (one group per directed pair, weight proportional to the
square root of the block size) switches on and off.

The sweep structure mirrors the continuous learner: unordered pairs are
visited in order, both directions of a pair are optimized (proximal
gradient with a halving line search in general; an exact damped Newton
solve when parent and child are both binary), the direction that would
close a cycle is forced to the zero block, and the assignment with the
lowest penalized objective wins. Coefficient magnitudes are capped at
``upperbound`` to keep separated fits finite.
"""

from __future__ import annotations

import sys
import time
import warnings
from dataclasses import dataclass

import numpy as np

from . import selection
from .data import DISCRETE, Dataset, observed_mask, row_partition
from .graph import Dag
from .penalties import GROUP, Penalty, group_threshold
from .priors import PriorKnowledge, effective_blacklist, validate_prior
from .solpath import (
    LearnOptions,
    PathEstimate,
    SolutionPath,
    resolve_edge_threshold,
    resolve_max_iters,
)

INTERCEPT_CLAMP = 100.0


@dataclass
class DiscreteParams:
    """Multi-logit coefficients: one intercept vector per node, one block per edge.

    ``blocks[(i, j)]`` has shape (r_i - 1, r_j): row k is the effect of
    level k of parent i on the level scores of child j. The last column
    (the child's reference level) is zero, as is the last entry of every
    intercept vector.
    """

    levels: list[int]
    intercepts: list[np.ndarray]
    blocks: dict[tuple[int, int], np.ndarray]

    def __post_init__(self):
        self.levels = [int(r) for r in self.levels]
        p = len(self.levels)
        if any(r < 2 for r in self.levels):
            raise ValueError("every node needs at least 2 levels")
        if len(self.intercepts) != p:
            raise ValueError(f"{len(self.intercepts)} intercepts for {p} nodes")
        self.intercepts = [np.asarray(v, dtype=np.float64) for v in self.intercepts]
        for j, v in enumerate(self.intercepts):
            if v.shape != (self.levels[j],):
                raise ValueError(f"intercept {j} must have length {self.levels[j]}")
            if v[-1] != 0.0:
                raise ValueError(f"intercept {j}: reference entry must be zero")
        clean = {}
        for (i, j), blk in self.blocks.items():
            blk = np.asarray(blk, dtype=np.float64)
            want = (self.levels[i] - 1, self.levels[j])
            if blk.shape != want:
                raise ValueError(f"block ({i}, {j}) must have shape {want}, got {blk.shape}")
            if np.any(blk[:, -1] != 0.0):
                raise ValueError(f"block ({i}, {j}): reference column must be zero")
            if i == j:
                raise ValueError("self loop in blocks")
            clean[(int(i), int(j))] = blk
        self.blocks = clean

    @property
    def p(self) -> int:
        return len(self.levels)

    def parents_of(self, j: int) -> list[int]:
        return sorted(i for (i, jj) in self.blocks if jj == j)

    def structure(self, nodes) -> Dag:
        dag = Dag(nodes)
        for i, j in sorted(self.blocks):
            dag.add_edge_checked(i, j)
        return dag


def _dummies(col: np.ndarray, r: int) -> np.ndarray:
    """n x (r - 1) indicator matrix; the last level codes as all zeros."""
    n = col.shape[0]
    out = np.zeros((n, r - 1), dtype=np.float64)
    for k in range(r - 1):
        out[col == k, k] = 1.0
    return out


def _onehot(col: np.ndarray, r: int) -> np.ndarray:
    n = col.shape[0]
    out = np.zeros((n, r), dtype=np.float64)
    out[np.arange(n), col] = 1.0
    return out


def _softmax(eta: np.ndarray) -> np.ndarray:
    return np.exp(eta - _logsumexp(eta)[:, None])


def _logsumexp(eta: np.ndarray) -> np.ndarray:
    if eta.shape[1] == 2:
        return np.logaddexp(eta[:, 0], eta[:, 1])
    mx = eta.max(axis=1)
    return mx + np.log(np.exp(eta - mx[:, None]).sum(axis=1))


def node_scores(params: DiscreteParams, values: np.ndarray, j: int) -> np.ndarray:
    """Score matrix (n x r_j) of node j under the given level assignments."""
    n = values.shape[0]
    eta = np.tile(params.intercepts[j], (n, 1))
    for i in params.parents_of(j):
        eta += _dummies(values[:, i], params.levels[i]) @ params.blocks[(i, j)]
    return eta


def multilogit_prob(params: DiscreteParams, j: int, parent_values) -> np.ndarray:
    """Probability over the levels of node j for one joint assignment.

    ``parent_values`` is a full-length vector of level codes; only the
    entries of j's parents are consulted.
    """
    row = np.asarray(parent_values, dtype=np.int64).reshape(1, -1)
    if row.shape[1] != params.p:
        raise ValueError(f"expected {params.p} values, got {row.shape[1]}")
    eta = node_scores(params, row, j)
    return _softmax(eta)[0]


def multilogit_negloglik(params: DiscreteParams, ds: Dataset, part=None, j=None) -> float:
    """Masked negative log-likelihood of node j (or of all nodes when j is None)."""
    if ds.kind != DISCRETE:
        raise ValueError(f"expected discrete data, got {ds.kind!r}")
    if part is None:
        part = row_partition(ds)
    targets = range(ds.p) if j is None else [j]
    total = 0.0
    for v in targets:
        rows = part.observed[v]
        if rows.size == 0:
            continue
        eta = node_scores(params, ds.values[rows], v)
        picked = eta[np.arange(rows.size), ds.values[rows, v]]
        total -= float((picked - _logsumexp(eta)).sum())
    return total


def multilogit_negloglik_grad(params: DiscreteParams, ds: Dataset, part, j: int):
    """Gradient of node j's masked term: (intercept gradient, per-parent blocks).

    Pinned coordinates (the reference column and the reference intercept
    entry) are reported as zero.
    """
    if part is None:
        part = row_partition(ds)
    rows = part.observed[j]
    r_j = params.levels[j]
    g0 = np.zeros(r_j)
    gblocks = {i: np.zeros_like(params.blocks[(i, j)]) for i in params.parents_of(j)}
    if rows.size == 0:
        return g0, gblocks
    vals = ds.values[rows]
    eta = node_scores(params, vals, j)
    diff = _softmax(eta) - _onehot(vals[:, j], r_j)
    g0 = diff.sum(axis=0)
    g0[-1] = 0.0
    for i in gblocks:
        g = _dummies(vals[:, i], params.levels[i]).T @ diff
        g[:, -1] = 0.0
        gblocks[i] = g
    return g0, gblocks


def _null_intercepts(values, levels, mask):
    """Per-node intercepts maximizing the masked likelihood of the empty model."""
    out = []
    for j, r in enumerate(levels):
        w = mask[:, j]
        tot = w.sum()
        if tot == 0:
            out.append(np.zeros(r))
            continue
        counts = np.array([float(w[values[:, j] == u].sum()) for u in range(r)])
        probs = np.maximum(counts / tot, 1e-12)
        eta = np.log(probs) - np.log(probs[-1])
        eta = np.clip(eta, -INTERCEPT_CLAMP, INTERCEPT_CLAMP)
        eta[-1] = 0.0
        out.append(eta)
    return out


def discrete_lambda_max(ds: Dataset) -> float:
    """Smallest penalty level at which every block stays zero.

    At the null model (zero blocks, optimal intercepts) the group proximal
    step leaves a block at zero exactly when its gradient norm is at most
    lambda times the group weight, so the maximum normalized gradient norm
    over ordered pairs is the tight grid anchor.
    """
    if ds.kind != DISCRETE:
        raise ValueError(f"expected discrete data, got {ds.kind!r}")
    levels = ds.nlevels()
    mask = observed_mask(ds)
    intercepts = _null_intercepts(ds.values, levels, mask)
    dummies = [_dummies(ds.values[:, i], levels[i]) for i in range(ds.p)]
    best = 0.0
    for j in range(ds.p):
        r_j = levels[j]
        probs = _softmax(np.tile(intercepts[j], (ds.n, 1)))
        diff = mask[:, j][:, None] * (probs - _onehot(ds.values[:, j], r_j))
        for i in range(ds.p):
            if i == j:
                continue
            g = dummies[i].T @ diff
            g[:, -1] = 0.0
            w = np.sqrt((levels[i] - 1) * r_j)
            best = max(best, float(np.sqrt((g * g).sum())) / w)
    return max(best, 1e-8)


class _GroupState:
    """Mutable solver state for the discrete learner."""

    def __init__(self, ds, var_unused, whitelist, blacklist, weight_scale, upperbound):
        self.values = ds.values
        self.n, self.p = ds.values.shape
        self.r = ds.nlevels()
        self.d = [r - 1 for r in self.r]
        self.M = observed_mask(ds)
        self.nobs = self.M.sum(axis=0)
        self.Zs = [_dummies(ds.values[:, i], self.r[i]) for i in range(self.p)]
        self.Y = [_onehot(ds.values[:, j], self.r[j]) for j in range(self.p)]
        self.Zcat = np.concatenate(self.Zs, axis=1) if self.p else np.zeros((self.n, 0))
        self.offsets = np.cumsum([0] + self.d)
        self.upperbound = float(upperbound)
        self.w = np.array(
            [[weight_scale * np.sqrt(self.d[i] * self.r[j]) for j in range(self.p)]
             for i in range(self.p)]
        )
        self.intercepts = _null_intercepts(ds.values, self.r, self.M)
        self.eta = [np.tile(self.intercepts[j], (self.n, 1)) for j in range(self.p)]
        self.blocks: dict[tuple[int, int], np.ndarray] = {}
        self.dag = Dag(ds.nodes)
        self.whitelist = set(whitelist)
        self.blocked = set(blacklist)
        for a, b in sorted(self.whitelist):
            status = self.dag.add_edge_checked(a, b)
            if status == "would-cycle":
                raise ValueError("whitelist is cyclic")
            self.blocks[(a, b)] = np.zeros((self.d[a], self.r[b]))
        self.last_obj: float | None = None
        self.rows = np.arange(self.n)
        # last accepted line-search step per block, reused across warm starts
        self.step_hint: dict[tuple[int, int], float] = {}

    def node_negloglik(self, j: int, eta=None) -> float:
        eta = self.eta[j] if eta is None else eta
        picked = eta[self.rows, self.values[:, j]]
        return -float((self.M[:, j] * (picked - _logsumexp(eta))).sum())

    def node_grad(self, j: int, i: int, eta=None) -> np.ndarray:
        eta = self.eta[j] if eta is None else eta
        diff = self.M[:, j][:, None] * (_softmax(eta) - self.Y[j])
        g = self.Zs[i].T @ diff
        g[:, -1] = 0.0
        return g

    def objective(self, lam: float) -> float:
        total = sum(self.node_negloglik(j) for j in range(self.p))
        for (i, j), blk in self.blocks.items():
            if (i, j) in self.whitelist:
                continue
            total += lam * self.w[i, j] * float(np.sqrt((blk * blk).sum()))
        return total

    def check_descent(self, lam: float, where: str) -> None:
        obj = self.objective(lam)
        if self.last_obj is not None:
            slack = 1e-9 * max(1.0, abs(self.last_obj))
            if obj > self.last_obj + slack:
                raise AssertionError(
                    f"objective increased at {where}: {self.last_obj!r} -> {obj!r}"
                )
        self.last_obj = obj

    def optimize_block(self, i, j, lam, start, eta0, tol, max_steps=25):
        """Proximal descent on block (i, j) with node j's other terms fixed.

        ``eta0`` are node j's scores with this block zeroed. Returns the new
        block, its penalized node objective, and the zero-block objective.
        """
        w = 0.0 if (i, j) in self.whitelist else lam * self.w[i, j]
        if self.d[i] == 1 and self.r[j] == 2:
            return self._optimize_block_binary(i, j, w, start, eta0, tol)
        pen = Penalty(GROUP, w, group_weight=1.0)  # weight folded into lam
        f0 = self.node_negloglik(j, eta0)
        B = start.copy()
        if np.any(B):
            etaB = eta0 + self.Zs[i] @ B
            fB = self.node_negloglik(j, etaB) + w * float(np.sqrt((B * B).sum()))
        else:
            etaB = eta0.copy()
            fB = f0
        hint = self.step_hint.get((i, j), 1.0)
        for _ in range(max_steps):
            G = self.node_grad(j, i, etaB)
            t = min(1.0, 2.0 * hint)
            accepted = False
            for _ in range(40):
                cand = group_threshold(pen, B - t * G, t) if w > 0 else (B - t * G)
                np.clip(cand, -self.upperbound, self.upperbound, out=cand)
                etaC = eta0 + self.Zs[i] @ cand
                fC = self.node_negloglik(j, etaC) + w * float(np.sqrt((cand * cand).sum()))
                if fC <= fB:
                    accepted = True
                    break
                t *= 0.5
            if not accepted:
                break
            hint = t
            moved = float(np.max(np.abs(cand - B)))
            B, etaB, fB = cand, etaC, fC
            if moved < tol:
                break
        self.step_hint[(i, j)] = hint
        return B, fB, f0

    def _optimize_block_binary(self, i, j, w, start, eta0, tol, max_steps=12):
        """Exact solve for a binary parent / binary child block.

        The block has one free entry, so the penalized node term is a scalar
        L1 logistic problem; damped Newton with a soft-threshold step lands
        on the optimum in a few iterations. Matches the general path's
        objective exactly, only faster.
        """
        z = self.Zs[i][:, 0]
        mask = self.M[:, j]
        y0 = self.Y[j][:, 0]
        q0 = eta0[:, 0] - eta0[:, 1]
        mz = mask * z

        def fval(th):
            q = q0 + z * th
            return float((mask * (np.logaddexp(0.0, q) - y0 * q)).sum())

        f0 = fval(0.0)
        theta = float(start[0, 0])
        fB = fval(theta) + w * abs(theta) if theta != 0.0 else f0
        for _ in range(max_steps):
            q = q0 + z * theta
            p0 = np.exp(q - np.logaddexp(0.0, q))
            g = float(mz @ (p0 - y0))
            h = max(float(mz @ (p0 * (1.0 - p0))), 1e-12)
            u = theta - g / h
            prox = np.sign(u) * max(abs(u) - w / h, 0.0) if w > 0 else u
            prox = float(np.clip(prox, -self.upperbound, self.upperbound))
            step = 1.0
            accepted = False
            for _ in range(20):
                cand = theta + step * (prox - theta)
                fC = fval(cand) + w * abs(cand)
                if fC <= fB:
                    accepted = True
                    break
                step *= 0.5
            if not accepted:
                break
            moved = abs(cand - theta)
            theta, fB = cand, fC
            if moved < tol:
                break
        blk = np.zeros((1, 2))
        blk[0, 0] = theta
        return blk, fB, f0

    def refresh_intercept(self, j, tol, max_steps=10) -> float:
        if self.nobs[j] == 0:
            return 0.0
        cur = self.intercepts[j]
        fcur = self.node_negloglik(j)
        total_moved = 0.0
        hint = self.step_hint.get((j, j), 1.0)
        for _ in range(max_steps):
            diff = self.M[:, j][:, None] * (_softmax(self.eta[j]) - self.Y[j])
            g = diff.sum(axis=0)
            g[-1] = 0.0
            t = min(1.0, 2.0 * hint)
            accepted = False
            for _ in range(40):
                cand = np.clip(cur - t * g, -INTERCEPT_CLAMP, INTERCEPT_CLAMP)
                cand[-1] = 0.0
                etaC = self.eta[j] + (cand - cur)[None, :]
                fC = self.node_negloglik(j, etaC)
                if fC <= fcur:
                    accepted = True
                    break
                t *= 0.5
            if not accepted:
                break
            hint = t
            moved = float(np.max(np.abs(cand - cur)))
            self.eta[j] = etaC
            cur, fcur = cand, fC
            total_moved = max(total_moved, moved)
            if moved < tol:
                break
        self.step_hint[(j, j)] = hint
        self.intercepts[j] = cur
        return total_moved

    def pair_update(self, a, b, lam, tol):
        inc_ab = self.blocks.get((a, b))
        inc_ba = self.blocks.get((b, a))
        wl_ab = (a, b) in self.whitelist
        wl_ba = (b, a) in self.whitelist
        if inc_ab is not None:
            self.dag.remove_edge(a, b)
        if inc_ba is not None:
            self.dag.remove_edge(b, a)

        allow_ab = wl_ab or ((a, b) not in self.blocked and not self.dag.has_path(b, a))
        allow_ba = wl_ba or ((b, a) not in self.blocked and not self.dag.has_path(a, b))

        eta0_b = self.eta[b] - self.Zs[a] @ inc_ab if inc_ab is not None else self.eta[b]
        eta0_a = self.eta[a] - self.Zs[b] @ inc_ba if inc_ba is not None else self.eta[a]

        cand_ab = delta_ab = None
        if allow_ab and self.nobs[b] > 0:
            start = inc_ab if inc_ab is not None else np.zeros((self.d[a], self.r[b]))
            blk, fB, f0 = self.optimize_block(a, b, lam, start, eta0_b, tol)
            cand_ab, delta_ab = blk, fB - f0
        cand_ba = delta_ba = None
        if allow_ba and self.nobs[a] > 0:
            start = inc_ba if inc_ba is not None else np.zeros((self.d[b], self.r[a]))
            blk, fB, f0 = self.optimize_block(b, a, lam, start, eta0_a, tol)
            cand_ba, delta_ba = blk, fB - f0

        if wl_ab:
            winner = "ab"
        elif wl_ba:
            winner = "ba"
        else:
            states = {"zero": 0.0}
            if cand_ab is not None and np.any(cand_ab):
                states["ab"] = delta_ab
            if cand_ba is not None and np.any(cand_ba):
                states["ba"] = delta_ba
            best = min(states.values())
            # fp-noise ties flip-flop between equivalent orientations otherwise
            tie = 1e-9 * max(1.0, abs(best))
            eligible = {t for t, d_ in states.items() if d_ <= best + tie}
            order = []
            if inc_ab is not None:
                order.append("ab")
            if inc_ba is not None:
                order.append("ba")
            order += ["zero", "ab", "ba"]
            winner = next(t for t in order if t in eligible)

        maxdelta = 0.0
        self.blocks.pop((a, b), None)
        self.blocks.pop((b, a), None)
        touched = []
        if winner == "ab":
            new = cand_ab if cand_ab is not None else np.zeros((self.d[a], self.r[b]))
            old = inc_ab if inc_ab is not None else np.zeros_like(new)
            maxdelta = max(maxdelta, float(np.max(np.abs(new - old), initial=0.0)))
            self.eta[b] = eta0_b + self.Zs[a] @ new
            self.dag.add_edge_checked(a, b)
            self.blocks[(a, b)] = new
            touched.append(b)
        else:
            if inc_ab is not None:
                maxdelta = max(maxdelta, float(np.max(np.abs(inc_ab), initial=0.0)))
                self.eta[b] = eta0_b
                touched.append(b)
        if winner == "ba":
            new = cand_ba if cand_ba is not None else np.zeros((self.d[b], self.r[a]))
            old = inc_ba if inc_ba is not None else np.zeros_like(new)
            maxdelta = max(maxdelta, float(np.max(np.abs(new - old), initial=0.0)))
            self.eta[a] = eta0_a + self.Zs[b] @ new
            self.dag.add_edge_checked(b, a)
            self.blocks[(b, a)] = new
            touched.append(a)
        else:
            if inc_ba is not None:
                maxdelta = max(maxdelta, float(np.max(np.abs(inc_ba), initial=0.0)))
                self.eta[a] = eta0_a
                touched.append(a)

        for v in touched:
            maxdelta = max(maxdelta, self.refresh_intercept(v, tol))

        before = {d_ for d_, inc in (("ab", inc_ab), ("ba", inc_ba)) if inc is not None}
        after = set() if winner == "zero" else {winner}
        return before != after, maxdelta

    def screened_pairs(self, lam: float) -> list[tuple[int, int]]:
        """Pairs with an incumbent block or a zero-block first-order violation."""
        pairs = {(min(u, v), max(u, v)) for u, v in self.blocks}
        for j in range(self.p):
            if self.nobs[j] == 0:
                continue
            diff = self.M[:, j][:, None] * (_softmax(self.eta[j]) - self.Y[j])
            G = self.Zcat.T @ diff
            G[:, -1] = 0.0
            sq = (G * G).sum(axis=1)
            for i in range(self.p):
                if i == j:
                    continue
                lo, hi = self.offsets[i], self.offsets[i + 1]
                norm = float(np.sqrt(sq[lo:hi].sum()))
                if norm > lam * self.w[i, j]:
                    pairs.add((min(i, j), max(i, j)))
        return sorted(pairs)

    def inner_loop(self, lam, tol, cap, check) -> bool:
        edges = sorted(self.blocks.keys())
        converged = False
        for _ in range(cap):
            maxdelta = 0.0
            for i, j in edges:
                cur = self.blocks[(i, j)]
                eta0 = self.eta[j] - self.Zs[i] @ cur
                new, _, _ = self.optimize_block(i, j, lam, cur, eta0, tol)
                moved = float(np.max(np.abs(new - cur), initial=0.0))
                if moved > 0:
                    self.eta[j] = eta0 + self.Zs[i] @ new
                    self.blocks[(i, j)] = new
                    maxdelta = max(maxdelta, moved)
                    maxdelta = max(maxdelta, self.refresh_intercept(j, tol))
            if check:
                self.check_descent(lam, "inner pass")
            if maxdelta < tol:
                converged = True
                break
        if not converged and edges:
            warnings.warn("active-set pass hit its sweep cap before converging")
        pruned = False
        for i, j in edges:
            blk = self.blocks.get((i, j))
            if blk is not None and not np.any(blk) and (i, j) not in self.whitelist:
                del self.blocks[(i, j)]
                self.dag.remove_edge(i, j)
                pruned = True
        return pruned


def estimate_dag_discrete(
    ds: Dataset,
    opts: LearnOptions | None = None,
    prior: PriorKnowledge | None = None,
) -> SolutionPath:
    """Trace a solution path of DAG estimates for categorical data."""
    if ds.kind != DISCRETE:
        raise ValueError(f"discrete learner got {ds.kind!r} data")
    opts = opts if opts is not None else LearnOptions()
    opts.validate()
    if prior is not None:
        validate_prior(prior, ds.nodes)

    n, p = ds.values.shape
    grid = opts.resolved_lambdas()
    if grid is None:
        grid = selection.default_lambdas(ds)
    max_iters = resolve_max_iters(opts, p)
    edge_threshold = resolve_edge_threshold(opts, p, DISCRETE)
    tol = opts.error_tol

    index = {v: i for i, v in enumerate(ds.nodes)}
    wl = set()
    bl = set()
    if prior is not None:
        wl = {(index[a], index[b]) for a, b in prior.whitelist}
        bl = {(index[a], index[b]) for a, b in effective_blacklist(prior)}

    state = _GroupState(ds, None, wl, bl, opts.weight_scale, opts.upperbound)
    inner_cap = max(500, max_iters)
    estimates = []
    for lam in grid:
        t0 = time.perf_counter()
        lam = float(lam)
        state.last_obj = None
        if opts.check_descent:
            state.check_descent(lam, "lambda start")
        over = False
        converged = False
        for _ in range(max_iters):
            membership = False
            maxdelta = 0.0
            for a, b in state.screened_pairs(lam):
                changed, delta = state.pair_update(a, b, lam, tol)
                if opts.check_descent:
                    state.check_descent(lam, f"pair ({a},{b})")
                membership = membership or changed
                maxdelta = max(maxdelta, delta)
                if state.dag.nedge > edge_threshold:
                    over = True
                    break
            if over:
                break
            if state.inner_loop(lam, tol, inner_cap, opts.check_descent):
                membership = True
            if state.dag.nedge > edge_threshold:
                over = True
                break
            if not membership and maxdelta < tol:
                converged = True
                break
        if over:
            if opts.verbose:
                print(
                    f"stopping: estimate at lambda={lam:.6g} exceeds "
                    f"{edge_threshold} edges",
                    file=sys.stderr,
                )
            break
        if not converged:
            warnings.warn(
                f"lambda={lam:.6g}: outer sweep cap {max_iters} reached "
                "before convergence; keeping the current estimate"
            )
        seconds = time.perf_counter() - t0
        estimates.append(
            PathEstimate(
                dag=state.dag.copy(),
                lam=lam,
                nedge=state.dag.nedge,
                pp=p,
                nn=n,
                seconds=seconds,
            )
        )
        if opts.verbose:
            print(
                f"lambda={lam:.6g}: {state.dag.nedge} edges in {seconds:.3f}s",
                file=sys.stderr,
            )
    return SolutionPath(estimates, ds.nodes, n, DISCRETE)
