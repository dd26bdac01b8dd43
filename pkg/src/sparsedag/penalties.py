"""Sparsity penalties and their exact threshold operators.

Three regularizers are supported: the absolute-value penalty, the minimax
concave penalty (MCP), and the group lasso used for blocks of categorical
coefficients. Each comes with a closed-form solution of its canonical
one-dimensional (or one-block) subproblem, which is the workhorse of the
coordinate descent learners.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

L1 = "l1"
MCP = "mcp"
GROUP = "group"


@dataclass(frozen=True)
class Penalty:
    """A penalty family fixed at one regularization level.

    gamma is the concavity parameter of the MCP (larger is closer to the
    absolute value); group_weight multiplies the sqrt-dimension weight of
    every group penalty.
    """

    kind: str
    lam: float
    gamma: float = 2.0
    group_weight: float = 1.0

    def __post_init__(self):
        if self.kind not in (L1, MCP, GROUP):
            raise ValueError(f"unknown penalty kind {self.kind!r}")
        if self.lam < 0:
            raise ValueError(f"lambda must be nonnegative, got {self.lam}")
        if self.kind == MCP and self.gamma <= 0:
            raise ValueError(f"gamma must be positive, got {self.gamma}")
        if self.group_weight < 0:
            raise ValueError(f"group_weight must be nonnegative, got {self.group_weight}")


def group_weight(pen: Penalty, dim: int) -> float:
    """Weight of a group of the given dimension: group_weight * sqrt(dim)."""
    return pen.group_weight * float(np.sqrt(dim))


def penalty_value(pen: Penalty, coeff) -> float:
    """Evaluate the penalty at a scalar (l1, mcp) or a vector/block (group)."""
    if pen.kind == GROUP:
        z = np.asarray(coeff, dtype=np.float64)
        return pen.lam * group_weight(pen, z.size) * float(np.sqrt((z * z).sum()))
    b = float(coeff)
    if pen.kind == L1:
        return pen.lam * abs(b)
    # mcp: quadratic blend up to gamma*lam, constant beyond
    glam = pen.gamma * pen.lam
    if abs(b) <= glam:
        return pen.lam * abs(b) - b * b / (2.0 * pen.gamma)
    return pen.gamma * pen.lam * pen.lam / 2.0


def _mcp_objective(pen: Penalty, beta: float, z: float, c: float) -> float:
    return 0.5 * c * (beta - z) ** 2 + penalty_value(pen, beta)


def scalar_threshold(pen: Penalty, z: float, curvature: float) -> float:
    """Exact minimizer of ``(c/2) (beta - z)^2 + penalty(beta)`` over beta.

    curvature must be positive. For the MCP with curvature * gamma <= 1 the
    quadratic region of the objective is not convex, so the two boundary
    candidates are compared by value instead of using the stationary point.
    """
    c = float(curvature)
    if c <= 0:
        raise ValueError(f"curvature must be positive, got {curvature}")
    z = float(z)
    if pen.kind == L1:
        cut = pen.lam / c
        return float(np.sign(z) * max(abs(z) - cut, 0.0))
    if pen.kind != MCP:
        raise ValueError(f"scalar_threshold expects l1 or mcp, got {pen.kind!r}")
    glam = pen.gamma * pen.lam
    if c * pen.gamma > 1.0:
        if abs(z) <= glam:
            soft = np.sign(z) * max(abs(z) - pen.lam / c, 0.0)
            return float(soft / (1.0 - 1.0 / (c * pen.gamma)))
        return z
    # degenerate concavity: global minimum sits at 0 or past the bend
    far = np.sign(z) * max(glam, abs(z)) if z != 0.0 else glam
    if _mcp_objective(pen, float(far), z, c) < _mcp_objective(pen, 0.0, z, c):
        return float(far)
    return 0.0


def group_threshold(pen: Penalty, z, step: float) -> np.ndarray:
    """Proximal step for the group penalty: block soft threshold of ``z``.

    Solves ``min_b ||b - z||^2 / (2 step) + lam * w * ||b||_2`` where w is
    the sqrt-dimension group weight; shrinks radially, possibly to zero.
    """
    if pen.kind != GROUP:
        raise ValueError(f"group_threshold expects a group penalty, got {pen.kind!r}")
    if step <= 0:
        raise ValueError(f"step must be positive, got {step}")
    z = np.asarray(z, dtype=np.float64)
    norm = float(np.sqrt((z * z).sum()))
    cut = step * pen.lam * group_weight(pen, z.size)
    if norm <= cut:
        return np.zeros_like(z)
    return (1.0 - cut / norm) * z
