"""Directed acyclic graphs with incremental cycle checking.

The learners in this package maintain a candidate structure that must stay
acyclic after every single edge update, so the graph type is built around a
cheap reachability query rather than a full validation pass.
"""

from __future__ import annotations

import heapq

import numpy as np


class Dag:
    """A directed acyclic graph over a fixed, ordered set of named nodes.

    Edges are stored child-side: ``parents[j]`` holds the indices of the
    parents of node ``j``. A mirrored ``children`` list is kept so that
    reachability queries run forward without scanning every node. All
    mutating operations preserve acyclicity; ``add_edge_checked`` refuses
    edges that would close a cycle instead of raising.
    """

    __slots__ = ("nodes", "parents", "children", "nedge", "_index")

    def __init__(self, nodes):
        if isinstance(nodes, int):
            nodes = [f"x{i + 1}" for i in range(nodes)]
        names = [str(v) for v in nodes]
        if len(set(names)) != len(names):
            raise ValueError("node names must be unique")
        self.nodes: list[str] = names
        self.parents: list[set[int]] = [set() for _ in names]
        self.children: list[set[int]] = [set() for _ in names]
        self.nedge: int = 0
        self._index: dict[str, int] = {v: i for i, v in enumerate(names)}

    @property
    def p(self) -> int:
        return len(self.nodes)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise ValueError(f"unknown node {name!r}") from None

    def copy(self) -> "Dag":
        other = Dag(self.nodes)
        other.parents = [set(s) for s in self.parents]
        other.children = [set(s) for s in self.children]
        other.nedge = self.nedge
        return other

    def has_edge(self, parent: int, child: int) -> bool:
        return parent in self.parents[child]

    def has_path(self, u: int, v: int) -> bool:
        """True when a directed path from ``u`` to ``v`` exists (``u == v`` counts)."""
        if u == v:
            return True
        seen = {u}
        stack = [u]
        while stack:
            w = stack.pop()
            for c in self.children[w]:
                if c == v:
                    return True
                if c not in seen:
                    seen.add(c)
                    stack.append(c)
        return False

    def add_edge_checked(self, parent: int, child: int) -> str:
        """Try to insert ``parent -> child``; returns 'added', 'exists' or 'would-cycle'."""
        if parent == child:
            raise ValueError(f"self loop on node {self.nodes[parent]!r}")
        if parent in self.parents[child]:
            return "exists"
        if self.has_path(child, parent):
            return "would-cycle"
        self.parents[child].add(parent)
        self.children[parent].add(child)
        self.nedge += 1
        return "added"

    def remove_edge(self, parent: int, child: int) -> None:
        if parent not in self.parents[child]:
            raise ValueError(
                f"edge {self.nodes[parent]!r} -> {self.nodes[child]!r} not present"
            )
        self.parents[child].discard(parent)
        self.children[parent].discard(child)
        self.nedge -= 1

    def edges(self) -> list[tuple[int, int]]:
        """All edges as (parent, child) index pairs, sorted."""
        out = []
        for child, ps in enumerate(self.parents):
            for parent in ps:
                out.append((parent, child))
        out.sort()
        return out

    def named_edges(self) -> list[tuple[str, str]]:
        return [(self.nodes[a], self.nodes[b]) for a, b in self.edges()]

    def topological_sort(self) -> list[int]:
        """Kahn's algorithm; ties among ready nodes break toward the lowest index."""
        indeg = [len(ps) for ps in self.parents]
        ready = [i for i, d in enumerate(indeg) if d == 0]
        heapq.heapify(ready)
        order = []
        while ready:
            u = heapq.heappop(ready)
            order.append(u)
            for c in sorted(self.children[u]):
                indeg[c] -= 1
                if indeg[c] == 0:
                    heapq.heappush(ready, c)
        if len(order) != self.p:
            raise ValueError("graph contains a cycle")
        return order

    def adjacency_matrix(self) -> np.ndarray:
        """Binary matrix with a 1 in row i, column j for each edge i -> j."""
        mat = np.zeros((self.p, self.p), dtype=np.uint8)
        for parent, child in self.edges():
            mat[parent, child] = 1
        return mat


def from_edges(nodes, pairs) -> Dag:
    """Build a Dag from (parent, child) pairs given as names or indices."""
    dag = Dag(nodes)
    for parent, child in pairs:
        a = parent if isinstance(parent, (int, np.integer)) else dag.index(parent)
        b = child if isinstance(child, (int, np.integer)) else dag.index(child)
        status = dag.add_edge_checked(int(a), int(b))
        if status == "would-cycle":
            raise ValueError(
                f"edge {dag.nodes[a]!r} -> {dag.nodes[b]!r} would create a cycle"
            )
    return dag


def from_adjacency(nodes, mat) -> Dag:
    mat = np.asarray(mat)
    n = len(list(nodes))
    if mat.shape != (n, n):
        raise ValueError(f"adjacency matrix shape {mat.shape} does not match {n} nodes")
    pairs = [(int(i), int(j)) for i, j in zip(*np.nonzero(mat))]
    return from_edges(nodes, pairs)


def format_edge_list(dag: Dag) -> str:
    """One tab-separated ``parent<TAB>child`` line per edge, sorted."""
    lines = [f"{a}\t{b}" for a, b in dag.named_edges()]
    return "\n".join(lines) + ("\n" if lines else "")


def parse_edge_list(text: str, nodes=None) -> Dag:
    """Inverse of :func:`format_edge_list`.

    Without an explicit node list the nodes are taken in order of first
    appearance, so isolated nodes cannot be represented by this format.
    """
    pairs = []
    seen: list[str] = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise ValueError(f"line {ln}: expected 'parent<TAB>child', got {raw!r}")
        a, b = parts[0].strip(), parts[1].strip()
        if not a or not b:
            raise ValueError(f"line {ln}: empty node name")
        for v in (a, b):
            if v not in seen:
                seen.append(v)
        pairs.append((a, b))
    names = list(nodes) if nodes is not None else seen
    return from_edges(names, pairs)


def format_dot(dag: Dag) -> str:
    """Render as a DOT digraph; every node is declared so empty graphs survive."""
    lines = ["digraph {"]
    for v in dag.nodes:
        lines.append(f'  "{v}";')
    for a, b in dag.named_edges():
        lines.append(f'  "{a}" -> "{b}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
