"""Constraint-matrix graphs.

Three simple undirected graphs are derived from a sparse matrix A:

* incidence graph — one vertex per row and per column, an edge wherever the
  entry is nonzero.  Rows are numbered 0..m-1, columns m..m+n-1.
* primal graph — vertices are columns; two columns are adjacent when some row
  has nonzeros in both.
* dual graph — vertices are rows; two rows are adjacent when some column has
  nonzeros in both.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

from .sip import ParseError, SparseMatrix


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph with optional vertex labels."""

    n: int
    adj: tuple[frozenset[int], ...]
    labels: tuple[str, ...] | None = None

    @staticmethod
    def from_edges(
        n: int, edges: Iterable[tuple[int, int]], labels: Iterable[str] | None = None
    ) -> "Graph":
        sets: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) outside vertex range 0..{n - 1}")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            sets[u].add(v)
            sets[v].add(u)
        lab = tuple(labels) if labels is not None else None
        if lab is not None and len(lab) != n:
            raise ValueError(f"{len(lab)} labels for {n} vertices")
        return Graph(n, tuple(frozenset(s) for s in sets), lab)

    def edges(self) -> list[tuple[int, int]]:
        """All edges as (u, v) with u < v, lexicographically sorted."""
        out = []
        for u in range(self.n):
            for v in self.adj[u]:
                if u < v:
                    out.append((u, v))
        out.sort()
        return out

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def num_edges(self) -> int:
        return sum(len(s) for s in self.adj) // 2


def incidence_graph(a: SparseMatrix) -> Graph:
    """Bipartite row/column graph; edge {r_i, c_j} iff A(i, j) != 0."""
    m = a.rows
    edges = [(r, m + c) for (r, c, _v) in a.entries]
    labels = tuple(f"r{i}" for i in range(m)) + tuple(f"c{j}" for j in range(a.cols))
    return Graph.from_edges(m + a.cols, edges, labels)


def primal_graph(a: SparseMatrix) -> Graph:
    """Column graph; columns sharing a row become adjacent."""
    edges = set()
    for support in a.by_row():
        cols = [c for (c, _v) in support]
        for x, y in combinations(cols, 2):
            edges.add((x, y))
    return Graph.from_edges(a.cols, edges, tuple(f"c{j}" for j in range(a.cols)))


def dual_graph(a: SparseMatrix) -> Graph:
    """Row graph; rows sharing a column become adjacent."""
    edges = set()
    for support in a.by_col():
        rows = [r for (r, _v) in support]
        for x, y in combinations(rows, 2):
            edges.add((x, y))
    return Graph.from_edges(a.rows, edges, tuple(f"r{i}" for i in range(a.rows)))


def degree_stats(a: SparseMatrix) -> tuple[int, int]:
    """(max nonzeros in a row, max nonzeros in a column); (0, 0) when empty."""
    row_counts = [0] * a.rows
    col_counts = [0] * a.cols
    for r, c, _v in a.entries:
        row_counts[r] += 1
        col_counts[c] += 1
    return max(row_counts, default=0), max(col_counts, default=0)


def connected_components(g: Graph) -> list[list[int]]:
    """Vertex lists of the components, each sorted, ordered by smallest member."""
    seen = [False] * g.n
    comps = []
    for start in range(g.n):
        if seen[start]:
            continue
        seen[start] = True
        comp = [start]
        stack = [start]
        while stack:
            v = stack.pop()
            for w in g.adj[v]:
                if not seen[w]:
                    seen[w] = True
                    comp.append(w)
                    stack.append(w)
        comp.sort()
        comps.append(comp)
    return comps


def graph_to_json(g: Graph) -> str:
    obj: dict = {"n": g.n}
    if g.labels is not None:
        obj["labels"] = list(g.labels)
    obj["edges"] = [list(e) for e in g.edges()]
    return json.dumps(obj)


def graph_from_json(text: str) -> Graph:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(obj, dict) or "n" not in obj or "edges" not in obj:
        raise ParseError('graph must be {"n": ..., "edges": [...]} with optional "labels"')
    labels = obj.get("labels")
    try:
        return Graph.from_edges(obj["n"], [tuple(e) for e in obj["edges"]], labels)
    except (TypeError, ValueError) as exc:
        raise ParseError(str(exc)) from exc
