"""Unpenalized parameter refits and the second moments a fitted model implies.

Structure learning only decides which edges exist; the coefficients it
shrinks are biased by design. This module refits every estimate of a path
without penalty on the raw data (each node regressed on its chosen parents
over its observational rows) and converts fitted models into covariance and
precision matrices.
"""

from __future__ import annotations

import warnings

import numpy as np

from .data import CONTINUOUS, DISCRETE, Dataset, row_partition
from .discrete import (
    DiscreteParams,
    _dummies,
    _logsumexp,
    _onehot,
    _softmax,
    multilogit_negloglik,
)
from .gaussian import GaussianParams, gaussian_negloglik
from .solpath import SolutionPath

SEPARATION_LIMIT = 1e3


def estimate_parameters_gaussian(path: SolutionPath, ds: Dataset) -> list[GaussianParams]:
    """Ordinary least squares per node and per path estimate.

    Each node is regressed with an intercept on its parents over its
    observational rows; the noise variance is the sample variance of the
    residuals (n-1 divisor). A node whose parent count exceeds its number
    of observational rows cannot be refit and is reported by name.
    """
    if ds.kind != CONTINUOUS:
        raise ValueError(f"expected continuous data, got {ds.kind!r}")
    part = row_partition(ds)
    X = ds.values
    out = []
    for est in path:
        p = ds.p
        B = np.zeros((p, p))
        mu = np.zeros(p)
        omega2 = np.ones(p)
        for j in range(p):
            rows = part.observed[j]
            if rows.size == 0:
                continue
            parents = sorted(est.dag.parents[j])
            if len(parents) > rows.size:
                raise ValueError(
                    f"node {ds.nodes[j]!r} has {len(parents)} parents but only "
                    f"{rows.size} observational rows"
                )
            y = X[rows, j]
            design = np.column_stack([np.ones(rows.size), X[np.ix_(rows, parents)]])
            coef, *_ = np.linalg.lstsq(design, y, rcond=None)
            mu[j] = coef[0]
            for t, i in enumerate(parents):
                B[i, j] = coef[1 + t]
            resid = y - design @ coef
            if rows.size > 1:
                omega2[j] = float(resid @ resid) / (rows.size - 1)
            omega2[j] = max(omega2[j], np.finfo(float).tiny)
        out.append(GaussianParams(B=B, omega2=omega2, mu=mu))
    return out


def _newton_multilogit(design, ycol, r, ridge=1e-10, tol=1e-8, max_iters=100):
    """Unpenalized multi-logit fit: Newton steps with halving until the
    gradient norm drops below tol. Coefficients are (q x r) with the last
    column pinned at zero; returns (coefs, separated?)."""
    nrows, q = design.shape
    free = r - 1
    C = np.zeros((q, r))
    Y = _onehot(ycol, r)

    def nll(Cm):
        eta = design @ Cm
        picked = eta[np.arange(nrows), ycol]
        return -float((picked - _logsumexp(eta)).sum())

    fcur = nll(C)
    for _ in range(max_iters):
        eta = design @ C
        P = _softmax(eta)
        grad = design.T @ (P - Y)  # q x r
        gfree = grad[:, :free]
        gnorm = float(np.sqrt((gfree * gfree).sum()))
        if gnorm < tol:
            break
        # block Hessian over the free levels: H[(u,a),(v,b)]
        H = np.zeros((q * free, q * free))
        for u in range(free):
            for v in range(free):
                wvec = P[:, u] * ((u == v) - P[:, v])
                H[u * q:(u + 1) * q, v * q:(v + 1) * q] = design.T @ (design * wvec[:, None])
        H[np.diag_indices_from(H)] += ridge * (1.0 + np.trace(H) / max(1, H.shape[0]))
        try:
            step = np.linalg.solve(H, gfree.T.reshape(-1))
        except np.linalg.LinAlgError:
            step = np.linalg.lstsq(H, gfree.T.reshape(-1), rcond=None)[0]
        step = step.reshape(free, q).T
        t = 1.0
        for _ in range(40):
            cand = C.copy()
            cand[:, :free] -= t * step
            fcand = nll(cand)
            if fcand <= fcur:
                break
            t *= 0.5
        else:
            break
        C, fcur = cand, fcand
    separated = bool(np.any(np.abs(C) > SEPARATION_LIMIT))
    if separated:
        C = np.clip(C, -SEPARATION_LIMIT, SEPARATION_LIMIT)
    return C, separated


def estimate_parameters_discrete(path: SolutionPath, ds: Dataset) -> list[DiscreteParams]:
    """Unpenalized multi-logit refit of every node given its chosen parents.

    Fits run over each node's observational rows by Newton iteration
    (gradient norm below 1e-8 or 100 iterations). Perfectly separated fits
    are clamped at magnitude 1000 and reported through a warning; affected
    node names are listed in the ``separated`` attribute of the result.
    """
    if ds.kind != DISCRETE:
        raise ValueError(f"expected discrete data, got {ds.kind!r}")
    part = row_partition(ds)
    levels = ds.nlevels()
    out = []
    for est in path:
        intercepts = []
        blocks: dict[tuple[int, int], np.ndarray] = {}
        flagged: list[str] = []
        for j in range(ds.p):
            r_j = levels[j]
            rows = part.observed[j]
            parents = sorted(est.dag.parents[j])
            if rows.size == 0:
                intercepts.append(np.zeros(r_j))
                for i in parents:
                    blocks[(i, j)] = np.zeros((levels[i] - 1, r_j))
                continue
            cols = [np.ones(rows.size)]
            spans = []
            pos = 1
            for i in parents:
                Z = _dummies(ds.values[rows, i], levels[i])
                cols.append(Z)
                spans.append((i, pos, pos + Z.shape[1]))
                pos += Z.shape[1]
            design = np.column_stack(cols)
            C, separated = _newton_multilogit(design, ds.values[rows, j], r_j)
            if separated:
                flagged.append(ds.nodes[j])
            intercepts.append(C[0])
            for i, lo, hi in spans:
                blocks[(i, j)] = C[lo:hi]
        if flagged:
            warnings.warn(
                "perfect separation while refitting node(s) "
                + ", ".join(flagged)
                + "; coefficients clamped at magnitude 1e3"
            )
        params = DiscreteParams(levels=levels, intercepts=intercepts, blocks=blocks)
        params.separated = flagged
        out.append(params)
    return out


def implied_covariance(params: GaussianParams) -> np.ndarray:
    """Covariance implied by a fitted linear model.

    With A = (I - B)^{-1} this is A^T diag(omega2) A; A is built by a
    reverse-topological recurrence over the support, never a dense solve.
    """
    from .graph import from_adjacency

    B = params.B
    p = params.p
    dag = from_adjacency([f"v{i}" for i in range(p)], B != 0.0)
    order = dag.topological_sort()
    A = np.zeros((p, p))
    for u in reversed(order):
        row = np.zeros(p)
        row[u] = 1.0
        for wchild in dag.children[u]:
            row += B[u, wchild] * A[wchild]
        A[u] = row
    return (A.T * params.omega2) @ A


def implied_precision(params: GaussianParams) -> np.ndarray:
    """Precision implied by a fitted linear model: (I-B) diag(1/omega2) (I-B)^T."""
    p = params.p
    eye_minus = np.eye(p) - params.B
    return (eye_minus / params.omega2) @ eye_minus.T


def estimate_covariance(ds: Dataset, opts=None, prior=None) -> list[np.ndarray]:
    """Learn a path, refit it, and return one implied covariance per estimate."""
    from .gaussian import estimate_dag_gaussian

    path = estimate_dag_gaussian(ds, opts, prior)
    fits = estimate_parameters_gaussian(path, ds)
    return [implied_covariance(f) for f in fits]


def estimate_precision(ds: Dataset, opts=None, prior=None) -> list[np.ndarray]:
    """Learn a path, refit it, and return one implied precision per estimate."""
    from .gaussian import estimate_dag_gaussian

    path = estimate_dag_gaussian(ds, opts, prior)
    fits = estimate_parameters_gaussian(path, ds)
    return [implied_precision(f) for f in fits]


def refit_loglik(path: SolutionPath, ds: Dataset) -> list[float]:
    """Masked log-likelihood of each path estimate after an unpenalized refit."""
    part = row_partition(ds)
    if ds.kind == CONTINUOUS:
        fits = estimate_parameters_gaussian(path, ds)
        return [-gaussian_negloglik(f, ds, part) for f in fits]
    fits = estimate_parameters_discrete(path, ds)
    return [-multilogit_negloglik(f, ds, part) for f in fits]
