"""Structural prior knowledge: edges forced in or ruled out before learning."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

from .graph import Dag, from_edges


@dataclass
class PriorKnowledge:
    """Whitelisted edges must appear in every estimate; blacklisted edges never do.

    Edges are stored as (parent, child) name pairs. The reverse of every
    whitelisted edge is implicitly forbidden, since keeping both directions
    open would contradict acyclicity.
    """

    whitelist: set[tuple[str, str]] = field(default_factory=set)
    blacklist: set[tuple[str, str]] = field(default_factory=set)


def validate_prior(prior: PriorKnowledge, nodes) -> None:
    """Check a prior against a node set; raises ValueError on any violation."""
    names = set(nodes)
    for kind, edges in (("whitelist", prior.whitelist), ("blacklist", prior.blacklist)):
        for a, b in edges:
            if a not in names:
                raise ValueError(f"{kind} references unknown node {a!r}")
            if b not in names:
                raise ValueError(f"{kind} references unknown node {b!r}")
            if a == b:
                raise ValueError(f"{kind} contains self loop {a!r} -> {b!r}")
    overlap = prior.whitelist & prior.blacklist
    if overlap:
        a, b = sorted(overlap)[0]
        raise ValueError(f"edge {a!r} -> {b!r} is both whitelisted and blacklisted")
    # the whitelist must itself be embeddable in a DAG
    ordered = list(nodes)
    probe = Dag(ordered)
    for a, b in sorted(prior.whitelist):
        status = probe.add_edge_checked(probe.index(a), probe.index(b))
        if status == "would-cycle":
            raise ValueError(f"whitelist is cyclic: adding {a!r} -> {b!r} closes a cycle")


def effective_blacklist(prior: PriorKnowledge) -> set[tuple[str, str]]:
    """Blacklist plus the reverses of all whitelisted edges."""
    out = set(prior.blacklist)
    out.update((b, a) for a, b in prior.whitelist)
    return out


def specify_prior(roots, leaves, nodes) -> PriorKnowledge:
    """Blacklist everything into the given roots and out of the given leaves."""
    names = list(nodes)
    known = set(names)
    roots = [str(v) for v in roots]
    leaves = [str(v) for v in leaves]
    for v in roots + leaves:
        if v not in known:
            raise ValueError(f"unknown node {v!r}")
    overlap = set(roots) & set(leaves)
    if overlap:
        raise ValueError(f"node {sorted(overlap)[0]!r} cannot be both root and leaf")
    black: set[tuple[str, str]] = set()
    for r in roots:
        black.update((v, r) for v in names if v != r)
    for l in leaves:
        black.update((l, v) for v in names if v != l)
    return PriorKnowledge(whitelist=set(), blacklist=black)


def read_edge_csv(path: str) -> set[tuple[str, str]]:
    """Edge CSV: ``parent,child`` records, optional header line."""
    out: set[tuple[str, str]] = set()
    with open(path, "r", newline="") as fh:
        reader = csv.reader(fh)
        for ln, rec in enumerate(reader, start=1):
            if not rec or (len(rec) == 1 and rec[0].strip() == ""):
                continue
            if len(rec) != 2:
                raise ValueError(f"{path}: line {ln}: expected 'parent,child'")
            a, b = rec[0].strip(), rec[1].strip()
            if ln == 1 and (a.lower(), b.lower()) == ("parent", "child"):
                continue
            if not a or not b:
                raise ValueError(f"{path}: line {ln}: empty node name")
            out.add((a, b))
    return out


def write_edge_csv(path: str, edges) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["parent", "child"])
        for a, b in sorted(edges):
            writer.writerow([a, b])
