"""Structure learning for continuous data by penalized block coordinate descent.

The model is a linear structural equation system: every variable is a
weighted sum of its parents plus independent Gaussian noise. Learning
minimizes the intervention-masked negative log-likelihood plus a sparsity
penalty, sweeping over unordered node pairs and updating both directed
coefficients of a pair as a block so that at most one direction is ever
active. Acyclicity is enforced edge by edge: a direction whose insertion
would close a cycle is forced to zero before the block is scored. Estimates
are computed along a decreasing lambda grid with warm starts, and each
sweep over all pairs alternates with cheap passes over the active edges
only.

All learning happens on standardized data, which makes the default grid
anchor of sqrt(n) large enough that the first estimate is always the empty
graph. Columns are centered and scaled on each node's own observational
rows, so under interventions every node's null model starts at unit
variance and no orientation is favored merely because its child kept more
rows. Reported lambda values are the caller's, untouched.
"""

from __future__ import annotations

import sys
import time
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import selection
from .data import CONTINUOUS, Dataset, observed_mask, row_partition
from .graph import Dag
from .penalties import MCP, Penalty, penalty_value, scalar_threshold
from .priors import PriorKnowledge, effective_blacklist, validate_prior
from .solpath import (
    LearnOptions,
    PathEstimate,
    SolutionPath,
    resolve_edge_threshold,
    resolve_max_iters,
)


@dataclass
class GaussianParams:
    """Edge weights and noise variances of a linear structural equation model.

    ``B[i, j]`` is the coefficient of node i in node j's equation, so column
    j collects the incoming weights of node j and the diagonal is zero.
    ``mu`` holds per-node intercepts; when absent the model is mean-zero.
    """

    B: np.ndarray
    omega2: np.ndarray
    mu: np.ndarray | None = None

    def __post_init__(self):
        self.B = np.asarray(self.B, dtype=np.float64)
        self.omega2 = np.asarray(self.omega2, dtype=np.float64)
        p = self.B.shape[0]
        if self.B.shape != (p, p):
            raise ValueError(f"B must be square, got shape {self.B.shape}")
        if self.omega2.shape != (p,):
            raise ValueError(f"omega2 must have length {p}, got {self.omega2.shape}")
        if np.any(np.diag(self.B) != 0.0):
            raise ValueError("B must have a zero diagonal")
        if np.any(self.omega2 <= 0.0):
            raise ValueError("omega2 entries must be positive")
        if self.mu is not None:
            self.mu = np.asarray(self.mu, dtype=np.float64)
            if self.mu.shape != (p,):
                raise ValueError(f"mu must have length {p}, got {self.mu.shape}")

    @property
    def p(self) -> int:
        return self.B.shape[0]


def _residuals(params: GaussianParams, values: np.ndarray) -> np.ndarray:
    resid = values - values @ params.B
    if params.mu is not None:
        resid = resid - params.mu
    return resid


def gaussian_negloglik(params: GaussianParams, ds: Dataset, part=None) -> float:
    """Negative log-likelihood over the observational rows of each node.

    For node j with observational rows O_j this is
    ``(|O_j|/2) log omega_j^2 + sum_{h in O_j} r_hj^2 / (2 omega_j^2)``
    summed over j, where r is the residual matrix; the 2*pi constant is
    dropped. Rows where node j was intervened on contribute nothing to
    node j's term but still act as predictors elsewhere.
    """
    if ds.p != params.p:
        raise ValueError(f"params have {params.p} nodes, data has {ds.p}")
    if part is None:
        part = row_partition(ds)
    resid = _residuals(params, ds.values.astype(np.float64))
    total = 0.0
    for j in range(ds.p):
        rows = part.observed[j]
        if rows.size == 0:
            continue
        rj = resid[rows, j]
        total += 0.5 * rows.size * np.log(params.omega2[j])
        total += float(rj @ rj) / (2.0 * params.omega2[j])
    return float(total)


def gaussian_negloglik_grad(params: GaussianParams, ds: Dataset, part=None) -> np.ndarray:
    """Gradient of :func:`gaussian_negloglik` with respect to the entries of B.

    Entry (k, j) is ``-(1/omega_j^2) sum_{h in O_j} x_hk r_hj``; the diagonal
    is reported as zero since B is constrained there.
    """
    if part is None:
        part = row_partition(ds)
    values = ds.values.astype(np.float64)
    resid = _residuals(params, values)
    grad = np.zeros_like(params.B)
    for j in range(ds.p):
        rows = part.observed[j]
        if rows.size == 0:
            continue
        grad[:, j] = -(values[rows].T @ resid[rows, j]) / params.omega2[j]
    np.fill_diagonal(grad, 0.0)
    return grad


def _masked_standardize(ds: Dataset, mask: np.ndarray) -> np.ndarray:
    """Center and scale each column on its own observational rows.

    The likelihood only measures node j's residuals on the rows where j was
    not intervened, so those rows define the unit of scale for column j. A
    fully intervened column never contributes a residual term and is scaled
    on all rows, since it only ever acts as a predictor.
    """
    X = np.array(ds.values, dtype=np.float64)
    for j in range(X.shape[1]):
        rows = mask[:, j] > 0.0
        ref = X[rows, j] if int(rows.sum()) >= 2 else X[:, j]
        sd = float(ref.std(ddof=1))
        if sd == 0.0:
            raise ValueError(
                f"column {ds.nodes[j]!r} is constant on its observational rows "
                "and cannot be scaled"
            )
        X[:, j] = (X[:, j] - float(ref.mean())) / sd
    return X


class _CdState:
    """Mutable solver state shared across the lambda grid (warm starts)."""

    def __init__(self, X, mask, nodes, var_floor, whitelist, blacklist):
        n, p = X.shape
        self.X = X
        self.M = mask
        self.n = n
        self.p = p
        self.sqrt_n = float(np.sqrt(n))
        self.var_floor = float(var_floor)
        self.nobs = mask.sum(axis=0)
        self.S = mask.T @ (X * X)  # S[v, u]: squared norm of column u over O_v
        self.dag = Dag(nodes)
        self.coef: dict[tuple[int, int], float] = {}
        self.R = mask * X  # masked residuals, kept current at all times
        self.whitelist = set(whitelist)
        self.blocked = set(blacklist)
        self.omega2 = np.ones(p, dtype=np.float64)
        live = self.nobs > 0
        rss = (self.R * self.R).sum(axis=0)
        self.omega2[live] = np.maximum(self.var_floor, rss[live] / self.nobs[live])
        for a, b in sorted(self.whitelist):
            status = self.dag.add_edge_checked(a, b)
            if status == "would-cycle":
                raise ValueError("whitelist is cyclic")
            self.coef[(a, b)] = 0.0
        self.last_obj: float | None = None

    # -- objective bookkeeping (debug instrumentation only) ----------------

    def objective(self, pen: Penalty) -> float:
        live = self.nobs > 0
        rss = (self.R * self.R).sum(axis=0)
        ell = float(
            np.sum(0.5 * self.nobs[live] * np.log(self.omega2[live]))
            + np.sum(rss[live] / (2.0 * self.omega2[live]))
        )
        penalized = sum(
            penalty_value(pen, w)
            for e, w in self.coef.items()
            if e not in self.whitelist
        )
        return ell / self.sqrt_n + penalized

    def check_descent(self, pen: Penalty, where: str) -> None:
        obj = self.objective(pen)
        if self.last_obj is not None:
            slack = 1e-9 * max(1.0, abs(self.last_obj))
            if obj > self.last_obj + slack:
                raise AssertionError(
                    f"objective increased at {where}: {self.last_obj!r} -> {obj!r}"
                )
        self.last_obj = obj

    # -- coordinate updates -------------------------------------------------

    def _candidate(self, u: int, v: int, pen: Penalty, unpenalized: bool):
        """Best weight for edge u -> v with the child's variance profiled.

        Returns (weight, objective delta versus weight 0). The delta is the
        change in node v's likelihood term, evaluated at the profile-optimal
        variance for each weight, plus the penalty; likelihood terms are in
        over-sqrt(n) units so both directions of a pair are on one scale.
        Profiling matters for orientation: a direction that explains more of
        its child's variance gets credit for the shrunken noise term, which
        a comparison at frozen variances systematically understates.
        """
        s = self.S[v, u]
        m = self.nobs[v]
        if s <= 0.0 or m == 0:
            return 0.0, 0.0
        inc = self.coef.get((u, v), 0.0)
        dot = float(self.X[:, u] @ self.R[:, v])
        z = (dot + inc * s) / s
        # residual sum of node v with this edge removed; R already carries inc
        rss0 = float(self.R[:, v] @ self.R[:, v]) + inc * (2.0 * dot + inc * s)

        def rss_at(b):
            return max(rss0 - s * b * (2.0 * z - b), 0.0)

        def node_term(b):
            rss = rss_at(b)
            w2 = max(self.var_floor, rss / m)
            return (0.5 * m * np.log(w2) + rss / (2.0 * w2)) / self.sqrt_n

        # alternate the exact scalar solve with the profile variance update;
        # each round only lowers node v's term, so any stopping point is safe
        w2 = self.omega2[v]
        beta = 0.0
        for _ in range(8):
            c = s / (self.sqrt_n * w2)
            new = z if unpenalized else scalar_threshold(pen, z, c)
            moved = abs(new - beta) > 1e-12 * max(1.0, abs(beta))
            beta = new
            w2 = max(self.var_floor, rss_at(beta) / m)
            if not moved:
                break
        if beta == 0.0:
            return 0.0, 0.0
        pen_term = 0.0 if unpenalized else penalty_value(pen, beta)
        delta = node_term(beta) + pen_term - node_term(0.0)
        return beta, delta

    def _set_weight(self, u: int, v: int, new: float) -> float:
        old = self.coef.get((u, v), 0.0)
        if new != old:
            self.R[:, v] -= (new - old) * (self.M[:, v] * self.X[:, u])
        return abs(new - old)

    def pair_update(self, a: int, b: int, pen: Penalty):
        """Joint update of the two directions between a and b.

        At most one direction may carry weight. Each allowed direction is
        re-solved against the current residuals and the assignment with the
        lowest penalized objective wins; exact ties keep the incumbent
        orientation and otherwise fall back to low index -> high index.
        """
        inc_ab = self.coef.get((a, b))
        inc_ba = self.coef.get((b, a))
        wl_ab = (a, b) in self.whitelist
        wl_ba = (b, a) in self.whitelist
        if inc_ab is not None:
            self.dag.remove_edge(a, b)
        if inc_ba is not None:
            self.dag.remove_edge(b, a)

        allow_ab = wl_ab or ((a, b) not in self.blocked and not self.dag.has_path(b, a))
        allow_ba = wl_ba or ((b, a) not in self.blocked and not self.dag.has_path(a, b))

        cand_ab, delta_ab = self._candidate(a, b, pen, wl_ab) if allow_ab else (0.0, 0.0)
        cand_ba, delta_ba = self._candidate(b, a, pen, wl_ba) if allow_ba else (0.0, 0.0)

        if wl_ab:
            winner = "ab"
        elif wl_ba:
            winner = "ba"
        else:
            states = {"zero": 0.0}
            if cand_ab != 0.0:
                states["ab"] = delta_ab
            if cand_ba != 0.0:
                states["ba"] = delta_ba
            best = min(states.values())
            # observationally equivalent orientations differ only by fp noise;
            # a strict comparison would flip the winner every sweep
            tie = 1e-9 * max(1.0, abs(best))
            eligible = {t for t, d in states.items() if d <= best + tie}
            order = []
            if inc_ab is not None:
                order.append("ab")
            if inc_ba is not None:
                order.append("ba")
            order += ["zero", "ab", "ba"]
            winner = next(t for t in order if t in eligible)

        new_ab = cand_ab if winner == "ab" else 0.0
        new_ba = cand_ba if winner == "ba" else 0.0
        maxdelta = max(self._set_weight(a, b, new_ab), self._set_weight(b, a, new_ba))
        self.coef.pop((a, b), None)
        self.coef.pop((b, a), None)
        if winner == "ab":
            self.dag.add_edge_checked(a, b)
            self.coef[(a, b)] = new_ab
        elif winner == "ba":
            self.dag.add_edge_checked(b, a)
            self.coef[(b, a)] = new_ba

        # store the variances the comparison was made at
        for node in (a, b):
            m = self.nobs[node]
            if m > 0:
                rss = float(self.R[:, node] @ self.R[:, node])
                self.omega2[node] = max(self.var_floor, rss / m)

        before = {d for d, inc in (("ab", inc_ab), ("ba", inc_ba)) if inc is not None}
        after = set() if winner == "zero" else {winner}
        return before != after, maxdelta

    def screened_pairs(self, pen: Penalty) -> list[tuple[int, int]]:
        """Unordered pairs that could change in this sweep.

        A pair is visited when it carries an incumbent edge or when either
        direction's single-coordinate solution against the current residuals
        is nonzero. Pairs outside this set are exact no-ops for the state
        the sweep starts from, which is all the stopping rule requires.
        """
        C = self.X.T @ self.R
        base = pen.lam * self.sqrt_n * self.omega2[None, :]
        if pen.kind == MCP:
            with np.errstate(invalid="ignore"):
                degenerate = pen.lam * np.sqrt(
                    pen.gamma * self.sqrt_n * self.omega2[None, :] * self.S.T
                )
            cgamma = pen.gamma * self.S.T / (self.sqrt_n * self.omega2[None, :])
            cut = np.where(cgamma > 1.0, base, degenerate)
        else:
            cut = np.broadcast_to(base, C.shape)
        hot = np.abs(C) > cut
        np.fill_diagonal(hot, False)
        pairs = {(min(u, v), max(u, v)) for u, v in self.coef}
        pairs.update((min(u, v), max(u, v)) for u, v in zip(*np.nonzero(hot)))
        return sorted(pairs)

    def update_omega(self) -> float:
        live = self.nobs > 0
        rss = (self.R * self.R).sum(axis=0)
        new = np.maximum(self.var_floor, rss[live] / self.nobs[live])
        delta = float(np.max(np.abs(new - self.omega2[live]), initial=0.0))
        self.omega2[live] = new
        return delta

    def inner_loop(self, pen: Penalty, tol: float, cap: int, check: bool) -> bool:
        """Cycle over the active edges with the support held fixed.

        Returns True when the support shrank (a weight landed on exactly
        zero and its edge was pruned).
        """
        edges = sorted(self.coef.keys())
        converged = False
        for _ in range(cap):
            maxdelta = 0.0
            for u, v in edges:
                s = self.S[v, u]
                if s <= 0.0 or self.nobs[v] == 0:
                    continue
                old = self.coef[(u, v)]
                dot = float(self.X[:, u] @ self.R[:, v])
                z = (dot + old * s) / s
                if (u, v) in self.whitelist:
                    new = z
                else:
                    c = s / (self.sqrt_n * self.omega2[v])
                    new = scalar_threshold(pen, z, c)
                maxdelta = max(maxdelta, self._set_weight(u, v, new))
                self.coef[(u, v)] = new
            maxdelta = max(maxdelta, self.update_omega())
            if check:
                self.check_descent(pen, "inner pass")
            if maxdelta < tol:
                converged = True
                break
        if not converged and edges:
            warnings.warn("active-set pass hit its sweep cap before converging")
        pruned = False
        for u, v in edges:
            if self.coef.get((u, v)) == 0.0 and (u, v) not in self.whitelist:
                del self.coef[(u, v)]
                self.dag.remove_edge(u, v)
                pruned = True
        return pruned


def estimate_dag_gaussian(
    ds: Dataset,
    opts: LearnOptions | None = None,
    prior: PriorKnowledge | None = None,
) -> SolutionPath:
    """Trace a solution path of DAG estimates over a decreasing lambda grid."""
    if ds.kind != CONTINUOUS:
        raise ValueError(f"continuous learner got {ds.kind!r} data")
    opts = opts if opts is not None else LearnOptions()
    opts.validate()
    if prior is not None:
        validate_prior(prior, ds.nodes)

    n, p = ds.values.shape
    mask = observed_mask(ds)
    X = _masked_standardize(ds, mask)
    grid = opts.resolved_lambdas()
    if grid is None:
        grid = selection.default_lambdas(ds)
    max_iters = resolve_max_iters(opts, p)
    edge_threshold = resolve_edge_threshold(opts, p, CONTINUOUS)
    tol = opts.error_tol

    index = {v: i for i, v in enumerate(ds.nodes)}
    wl = set()
    bl = set()
    if prior is not None:
        wl = {(index[a], index[b]) for a, b in prior.whitelist}
        bl = {(index[a], index[b]) for a, b in effective_blacklist(prior)}

    state = _CdState(X, mask, ds.nodes, opts.var_floor, wl, bl)
    inner_cap = max(500, max_iters)
    estimates = []
    for lam in grid:
        t0 = time.perf_counter()
        pen = Penalty(opts.penalty, float(lam), gamma=opts.concavity)
        state.last_obj = None
        if opts.check_descent:
            state.check_descent(pen, "lambda start")
        over = False
        converged = False
        for _ in range(max_iters):
            membership = False
            maxdelta = 0.0
            for a, b in state.screened_pairs(pen):
                changed, delta = state.pair_update(a, b, pen)
                if opts.check_descent:
                    state.check_descent(pen, f"pair ({a},{b})")
                membership = membership or changed
                maxdelta = max(maxdelta, delta)
                if state.dag.nedge > edge_threshold:
                    over = True
                    break
            if over:
                break
            if state.inner_loop(pen, tol, inner_cap, opts.check_descent):
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
                lam=float(lam),
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
    return SolutionPath(estimates, ds.nodes, n, CONTINUOUS)
