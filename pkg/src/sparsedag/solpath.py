"""Solution paths: the sequence of structures traced over a lambda grid."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .graph import Dag, from_edges


@dataclass
class PathEstimate:
    """One point of a solution path: a structure at one regularization level."""

    dag: Dag
    lam: float
    nedge: int
    pp: int
    nn: int
    seconds: float


class SolutionPath:
    """Ordered list of estimates from the strongest penalty downward."""

    def __init__(self, estimates, nodes, n, kind):
        self.estimates: list[PathEstimate] = list(estimates)
        self.nodes: list[str] = list(nodes)
        self.n: int = int(n)
        self.p: int = len(self.nodes)
        self.kind: str = kind

    def __len__(self) -> int:
        return len(self.estimates)

    def __getitem__(self, i) -> PathEstimate:
        return self.estimates[i]

    def __iter__(self):
        return iter(self.estimates)

    def lambdas(self) -> np.ndarray:
        return np.array([e.lam for e in self.estimates], dtype=np.float64)

    def edge_counts(self) -> list[int]:
        return [e.nedge for e in self.estimates]


@dataclass
class LearnOptions:
    """Knobs shared by both learners.

    ``lambdas`` defaults to a 20-point geometric grid anchored at the
    data-driven maximum; ``max_iters`` defaults to 2p outer sweeps (at least
    10) and ``edge_threshold`` to 10p edges for continuous data or 3p for
    discrete. ``check_descent`` turns on per-update objective assertions and
    is meant for debugging and property tests only.
    """

    lambdas: object = None
    penalty: str = "l1"
    concavity: float = 2.0
    weight_scale: float = 1.0
    upperbound: float = 100.0
    error_tol: float = 1e-4
    max_iters: int | None = None
    edge_threshold: int | None = None
    var_floor: float = 0.01
    verbose: bool = False
    check_descent: bool = False

    def resolved_lambdas(self) -> np.ndarray | None:
        if self.lambdas is None:
            return None
        grid = np.asarray(self.lambdas, dtype=np.float64)
        if grid.ndim != 1 or grid.size == 0:
            raise ValueError("lambdas must be a non-empty 1-d sequence")
        if np.any(grid <= 0):
            raise ValueError("lambdas must be positive")
        if np.any(np.diff(grid) >= 0):
            raise ValueError("lambdas must be strictly decreasing")
        return grid

    def validate(self) -> None:
        self.resolved_lambdas()
        if self.penalty not in ("l1", "mcp"):
            raise ValueError(f"penalty must be 'l1' or 'mcp', got {self.penalty!r}")
        if self.concavity <= 0:
            raise ValueError(f"concavity must be positive, got {self.concavity}")
        if self.weight_scale < 0:
            raise ValueError(f"weight_scale must be nonnegative, got {self.weight_scale}")
        if self.upperbound <= 0:
            raise ValueError(f"upperbound must be positive, got {self.upperbound}")
        if self.error_tol <= 0:
            raise ValueError(f"error_tol must be positive, got {self.error_tol}")
        if self.max_iters is not None and self.max_iters < 1:
            raise ValueError(f"max_iters must be at least 1, got {self.max_iters}")
        if self.edge_threshold is not None and self.edge_threshold < 0:
            raise ValueError(f"edge_threshold must be nonnegative, got {self.edge_threshold}")
        if self.var_floor <= 0:
            raise ValueError(f"var_floor must be positive, got {self.var_floor}")


def resolve_max_iters(opts: LearnOptions, p: int) -> int:
    if opts.max_iters is not None:
        return int(opts.max_iters)
    return max(10, 2 * p)


def resolve_edge_threshold(opts: LearnOptions, p: int, kind: str) -> int:
    if opts.edge_threshold is not None:
        return int(opts.edge_threshold)
    return 10 * p if kind == "continuous" else 3 * p


def path_to_dict(path: SolutionPath) -> dict:
    return {
        "nodes": list(path.nodes),
        "n": path.n,
        "p": path.p,
        "kind": path.kind,
        "estimates": [
            {
                "lambda": float(e.lam),
                "nedge": int(e.nedge),
                "pp": int(e.pp),
                "nn": int(e.nn),
                "seconds": round(float(e.seconds), 3),
                "edges": [[a, b] for a, b in e.dag.named_edges()],
            }
            for e in path.estimates
        ],
    }


def path_from_dict(doc: dict) -> SolutionPath:
    for key in ("nodes", "n", "kind", "estimates"):
        if key not in doc:
            raise ValueError(f"path document is missing {key!r}")
    nodes = [str(v) for v in doc["nodes"]]
    estimates = []
    for i, rec in enumerate(doc["estimates"]):
        for key in ("lambda", "edges"):
            if key not in rec:
                raise ValueError(f"estimate {i}: missing {key!r}")
        dag = from_edges(nodes, [(str(a), str(b)) for a, b in rec["edges"]])
        nedge = int(rec.get("nedge", dag.nedge))
        if nedge != dag.nedge:
            raise ValueError(
                f"estimate {i}: nedge field says {nedge} but {dag.nedge} edges listed"
            )
        estimates.append(
            PathEstimate(
                dag=dag,
                lam=float(rec["lambda"]),
                nedge=dag.nedge,
                pp=len(nodes),
                nn=int(doc["n"]),
                seconds=float(rec.get("seconds", 0.0)),
            )
        )
    return SolutionPath(estimates, nodes, int(doc["n"]), str(doc["kind"]))


def write_path(path_file: str, path: SolutionPath) -> None:
    with open(path_file, "w") as fh:
        json.dump(path_to_dict(path), fh, indent=2)
        fh.write("\n")


def read_path(path_file: str) -> SolutionPath:
    with open(path_file, "r") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path_file}: invalid JSON: {exc}") from None
    return path_from_dict(doc)
