"""Observation matrices with per-row intervention annotations.

A dataset couples an n x p value matrix with a record of which variables
were experimentally fixed in each row. Rows where a variable was intervened
on carry no information about that variable's own conditional distribution,
so every likelihood in this package is evaluated over the observational
rows of each column only.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np

CONTINUOUS = "continuous"
DISCRETE = "discrete"


@dataclass
class Dataset:
    values: np.ndarray
    kind: str
    nodes: list[str]
    levels: list[list[str]] | None = None
    interventions: list[frozenset[int]] = field(default_factory=list)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def p(self) -> int:
        return self.values.shape[1]

    def nlevels(self) -> list[int]:
        if self.levels is None:
            raise ValueError("continuous dataset has no levels")
        return [len(ls) for ls in self.levels]


@dataclass
class RowPartition:
    """Per-node split of row indices into observational and intervened rows."""

    observed: list[np.ndarray]
    intervened: list[np.ndarray]

    def n_observed(self) -> np.ndarray:
        return np.array([len(ix) for ix in self.observed], dtype=np.int64)


def new_dataset(values, kind, nodes=None, levels=None, interventions=None) -> Dataset:
    """Validate raw inputs and assemble a :class:`Dataset`.

    Continuous values become float64; discrete values are 0-based level
    codes (int64). When ``levels`` is omitted for discrete data the sorted
    distinct values of each column become its levels and the codes are
    remapped accordingly. Declared levels always win over observed values.
    """
    arr = np.asarray(values)
    if arr.ndim != 2:
        raise ValueError(f"values must be a 2-d matrix, got shape {arr.shape}")
    n, p = arr.shape
    if n < 2:
        raise ValueError(f"need at least 2 observations, got {n}")
    if p < 1:
        raise ValueError("need at least 1 variable")
    if kind not in (CONTINUOUS, DISCRETE):
        raise ValueError(f"kind must be {CONTINUOUS!r} or {DISCRETE!r}, got {kind!r}")

    if nodes is None:
        nodes = [f"x{i + 1}" for i in range(p)]
    nodes = [str(v) for v in nodes]
    if len(nodes) != p:
        raise ValueError(f"{len(nodes)} node names for {p} columns")
    if len(set(nodes)) != p:
        raise ValueError("node names must be unique")

    if kind == CONTINUOUS:
        arr = arr.astype(np.float64)
        if not np.all(np.isfinite(arr)):
            bad = np.argwhere(~np.isfinite(arr))[0]
            raise ValueError(
                f"missing or non-finite value at row {bad[0]}, column {nodes[bad[1]]!r}; "
                "impute missing entries before loading"
            )
        if levels is not None:
            raise ValueError("levels are only meaningful for discrete data")
        out_levels = None
    else:
        flt = arr.astype(np.float64)
        if not np.all(np.isfinite(flt)):
            bad = np.argwhere(~np.isfinite(flt))[0]
            raise ValueError(
                f"missing value at row {bad[0]}, column {nodes[bad[1]]!r}; "
                "impute missing entries before loading"
            )
        if not np.all(flt == np.round(flt)):
            raise ValueError("discrete values must be integers")
        arr = flt.astype(np.int64)
        if levels is None:
            out_levels = []
            cols = []
            for j in range(p):
                uniq = np.unique(arr[:, j])
                codes = np.searchsorted(uniq, arr[:, j])
                cols.append(codes)
                out_levels.append([str(int(u)) for u in uniq])
            arr = np.column_stack(cols).astype(np.int64)
        else:
            out_levels = [[str(l) for l in ls] for ls in levels]
            if len(out_levels) != p:
                raise ValueError(f"{len(out_levels)} level lists for {p} columns")
            for j, ls in enumerate(out_levels):
                if len(ls) < 2:
                    raise ValueError(f"column {nodes[j]!r} needs at least 2 levels")
                lo, hi = arr[:, j].min(), arr[:, j].max()
                if lo < 0 or hi >= len(ls):
                    raise ValueError(
                        f"column {nodes[j]!r}: level code out of range "
                        f"[0, {len(ls) - 1}], saw {lo if lo < 0 else hi}"
                    )

    ivn = _normalize_interventions(interventions, n, p, nodes)
    return Dataset(values=arr, kind=kind, nodes=nodes, levels=out_levels, interventions=ivn)


def _normalize_interventions(interventions, n, p, nodes) -> list[frozenset[int]]:
    if interventions is None:
        return [frozenset()] * n
    ivn = list(interventions)
    if len(ivn) != n:
        raise ValueError(f"{len(ivn)} intervention records for {n} rows")
    index = {v: i for i, v in enumerate(nodes)}
    out = []
    for h, entry in enumerate(ivn):
        if entry is None:
            out.append(frozenset())
            continue
        members = set()
        for item in entry:
            if isinstance(item, (int, np.integer)):
                j = int(item)
                if not 0 <= j < p:
                    raise ValueError(f"row {h}: intervention index {j} out of range")
            else:
                if item not in index:
                    raise ValueError(f"row {h}: unknown node {item!r} in interventions")
                j = index[item]
            members.add(j)
        out.append(frozenset(members))
    return out


def row_partition(ds: Dataset) -> RowPartition:
    """Split row indices per node; the two groups always cover all n rows."""
    n, p = ds.n, ds.p
    mask = np.ones((n, p), dtype=bool)
    for h, members in enumerate(ds.interventions):
        for j in members:
            mask[h, j] = False
    observed = [np.flatnonzero(mask[:, j]) for j in range(p)]
    intervened = [np.flatnonzero(~mask[:, j]) for j in range(p)]
    return RowPartition(observed=observed, intervened=intervened)


def observed_mask(ds: Dataset) -> np.ndarray:
    """Float n x p matrix: 1.0 where the row is observational for the column."""
    mask = np.ones((ds.n, ds.p), dtype=np.float64)
    for h, members in enumerate(ds.interventions):
        for j in members:
            mask[h, j] = 0.0
    return mask


def standardize(ds: Dataset):
    """Center and scale each column to unit sample standard deviation.

    Returns ``(dataset, centers, scales)``; the scale uses the n-1 divisor.
    Constant columns cannot be scaled and are reported by name.
    """
    if ds.kind != CONTINUOUS:
        raise ValueError("standardize applies to continuous data only")
    centers = ds.values.mean(axis=0)
    scales = ds.values.std(axis=0, ddof=1)
    flat = np.flatnonzero(scales == 0.0)
    if flat.size:
        raise ValueError(f"column {ds.nodes[flat[0]]!r} is constant and cannot be scaled")
    vals = (ds.values - centers) / scales
    out = Dataset(
        values=vals,
        kind=CONTINUOUS,
        nodes=list(ds.nodes),
        levels=None,
        interventions=list(ds.interventions),
    )
    return out, centers, scales


# ---------------------------------------------------------------------------
# file formats

def write_data_csv(path: str, ds: Dataset) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(ds.nodes)
        if ds.kind == CONTINUOUS:
            for row in ds.values:
                writer.writerow([repr(float(v)) for v in row])
        else:
            for row in ds.values:
                writer.writerow([str(int(v)) for v in row])


def read_csv_values(path: str) -> tuple[list[str], np.ndarray]:
    """Parse a data CSV into (node names, float matrix) without validation."""
    with open(path, "r", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty file") from None
        nodes = [h.strip() for h in header]
        rows = []
        for ln, rec in enumerate(reader, start=2):
            if not rec or (len(rec) == 1 and rec[0].strip() == ""):
                continue
            if len(rec) != len(nodes):
                raise ValueError(
                    f"{path}: line {ln}: expected {len(nodes)} fields, got {len(rec)}"
                )
            vals = []
            for j, cell in enumerate(rec):
                cell = cell.strip()
                if cell == "":
                    raise ValueError(
                        f"{path}: line {ln}: missing value in column {nodes[j]!r}; "
                        "impute missing entries before loading"
                    )
                try:
                    vals.append(float(cell))
                except ValueError:
                    raise ValueError(
                        f"{path}: line {ln}: cannot parse {cell!r} as a number"
                    ) from None
            rows.append(vals)
        if not rows:
            raise ValueError(f"{path}: no data rows")
    return nodes, np.array(rows, dtype=np.float64)


def read_data_csv(path: str, kind: str, levels=None, interventions=None) -> Dataset:
    nodes, values = read_csv_values(path)
    return new_dataset(values, kind, nodes=nodes, levels=levels,
                       interventions=interventions)


def write_interventions(path: str, ds: Dataset) -> None:
    """One line per row listing the intervened node names; blank = observational."""
    with open(path, "w") as fh:
        for members in ds.interventions:
            names = sorted(ds.nodes[j] for j in members)
            fh.write(",".join(names) + "\n")


def read_interventions(path: str, nodes, n: int) -> list[frozenset[int]]:
    index = {v: i for i, v in enumerate(nodes)}
    out = []
    with open(path, "r") as fh:
        for ln, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n").rstrip("\r")
            if line.strip() == "":
                out.append(frozenset())
                continue
            members = set()
            for name in line.split(","):
                name = name.strip()
                if name not in index:
                    raise ValueError(f"{path}: line {ln}: unknown node {name!r}")
                members.add(index[name])
            out.append(frozenset(members))
    if len(out) != n:
        raise ValueError(
            f"{path}: {len(out)} intervention lines for {n} data rows"
        )
    return out


def write_levels(path: str, ds: Dataset) -> None:
    if ds.levels is None:
        raise ValueError("dataset has no levels to write")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        for name, ls in zip(ds.nodes, ds.levels):
            writer.writerow([name, *ls])


def read_levels(path: str, nodes) -> list[list[str]]:
    """Level file: one ``node,level0,level1,...`` record per node."""
    by_name: dict[str, list[str]] = {}
    with open(path, "r", newline="") as fh:
        reader = csv.reader(fh)
        for ln, rec in enumerate(reader, start=1):
            if not rec or (len(rec) == 1 and rec[0].strip() == ""):
                continue
            if len(rec) < 3:
                raise ValueError(
                    f"{path}: line {ln}: need a node name and at least 2 levels"
                )
            name = rec[0].strip()
            if name in by_name:
                raise ValueError(f"{path}: line {ln}: duplicate node {name!r}")
            by_name[name] = [c.strip() for c in rec[1:]]
    missing = [v for v in nodes if v not in by_name]
    if missing:
        raise ValueError(f"{path}: no levels declared for node {missing[0]!r}")
    extra = [v for v in by_name if v not in set(nodes)]
    if extra:
        raise ValueError(f"{path}: levels declared for unknown node {extra[0]!r}")
    return [by_name[v] for v in nodes]


def dataset_to_csv_text(ds: Dataset) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(ds.nodes)
    if ds.kind == CONTINUOUS:
        for row in ds.values:
            writer.writerow([repr(float(v)) for v in row])
    else:
        for row in ds.values:
            writer.writerow([str(int(v)) for v in row])
    return buf.getvalue()
