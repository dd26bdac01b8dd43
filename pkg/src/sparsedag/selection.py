"""Lambda grids and choosing a single estimate from a solution path."""

from __future__ import annotations

import numpy as np

from .solpath import PathEstimate, SolutionPath

DEFAULT_LENGTH = 20
DEFAULT_RATIO = 0.01
DEFAULT_SELECT_THRESHOLD = 0.5


def generate_lambdas(lambda_max: float, ratio: float, length: int, scale: str = "log") -> np.ndarray:
    """Grid from ``lambda_max`` down to ``lambda_max * ratio``, inclusive.

    ``scale='linear'`` spaces the points evenly, ``'log'`` geometrically.
    A ratio of 1.0 produces a constant grid, which is permitted here but
    rejected by the learners (their grids must strictly decrease).
    """
    if lambda_max <= 0:
        raise ValueError(f"lambda_max must be positive, got {lambda_max}")
    if not 0 < ratio <= 1:
        raise ValueError(f"ratio must be in (0, 1], got {ratio}")
    if length < 1:
        raise ValueError(f"length must be at least 1, got {length}")
    if length == 1:
        return np.array([float(lambda_max)])
    lo = lambda_max * ratio
    if scale == "linear":
        return np.linspace(lambda_max, lo, length)
    if scale == "log":
        return np.geomspace(lambda_max, lo, length)
    raise ValueError(f"scale must be 'linear' or 'log', got {scale!r}")


def default_lambdas(ds, length: int = DEFAULT_LENGTH) -> np.ndarray:
    """Data-driven geometric grid whose first point yields the empty graph.

    Continuous data anchors at sqrt(n), which on standardized columns
    dominates every pairwise correlation. Discrete data anchors at the
    largest group-gradient norm of the null model, the exact level at which
    every block proximal step stays at zero.
    """
    if ds.kind == "continuous":
        lam_max = float(np.sqrt(ds.n))
    else:
        from .discrete import discrete_lambda_max

        lam_max = discrete_lambda_max(ds)
    return generate_lambdas(lam_max, DEFAULT_RATIO, length, scale="log")


def select(path: SolutionPath, edges: int | None = None, lam: float | None = None,
           index: int | None = None) -> PathEstimate:
    """Pick one estimate by edge count, lambda, or 1-based index.

    Edge-count and lambda matching are fuzzy: the closest estimate wins and
    ties break toward the sparser (earlier) end of the path.
    """
    given = sum(x is not None for x in (edges, lam, index))
    if given != 1:
        raise ValueError("provide exactly one of edges, lam, index")
    if len(path) == 0:
        raise ValueError("path is empty")
    if index is not None:
        if not 1 <= index <= len(path):
            raise ValueError(f"index {index} out of range 1..{len(path)}")
        return path[index - 1]
    if edges is not None:
        target = int(edges)
        gaps = [abs(e.nedge - target) for e in path]
    else:
        target = float(lam)
        gaps = [abs(e.lam - target) for e in path]
    best = 0
    for i in range(1, len(path)):
        if gaps[i] < gaps[best]:
            best = i
    return path[best]


def select_parameter(path: SolutionPath, ds, threshold: float = DEFAULT_SELECT_THRESHOLD) -> int:
    """Pick a regularization level by the gain-per-edge elbow rule.

    Each estimate is refit without penalty and scored by its masked
    log-likelihood L_m; the gain of step m is
    ``(L_m - L_{m-1}) / max(1, E_m - E_{m-1})`` where E_m counts edges.
    The reference gain is the best over steps that actually add edges, and
    the chosen index (1-based) is the largest whose gain reaches
    ``threshold`` times that reference. Steps that keep the edge count can
    still be chosen: a reorientation that lifts the likelihood without
    growing the graph is a better stopping point than the step before it.
    An all-empty path degenerates to index 1.
    """
    if len(path) < 2:
        raise ValueError("need a path with at least 2 estimates")
    if not 0 < threshold <= 1:
        raise ValueError(f"threshold must be in (0, 1], got {threshold}")
    from .fit import refit_loglik

    ll = refit_loglik(path, ds)
    nedges = path.edge_counts()
    gains = [(ll[m] - ll[m - 1]) / max(1, nedges[m] - nedges[m - 1])
             for m in range(1, len(path))]
    growth = [g for m, g in enumerate(gains) if nedges[m + 1] > nedges[m]]
    if not growth or max(growth) <= 0:
        return 1
    cut = threshold * max(growth)
    chosen = max(m for m, g in enumerate(gains) if g >= cut)
    return chosen + 2
