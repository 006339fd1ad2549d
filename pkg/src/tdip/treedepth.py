"""Elimination forests and treedepth.

An elimination forest for a graph is a rooted forest on the graph's vertices
such that every edge joins an ancestor-descendant pair and no edge crosses
between two trees.  Its depth (vertices on the longest root-to-leaf path)
witnesses an upper bound on the graph's treedepth.

This module checks such certificates, computes exact treedepth for small
graphs, and converts a forest for the incidence graph of a matrix into
forests for its dual and primal graphs with controlled depth growth.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .gaifman import Graph, incidence_graph
from .sip import ParseError, SparseMatrix

EXACT_VERTEX_CAP = 20


class ForestError(Exception):
    """Base class for certificate violations."""


class NotAForest(ForestError):
    pass


class UncoveredEdge(ForestError):
    def __init__(self, u: int, v: int):
        super().__init__(f"edge ({u}, {v}) joins vertices that are not ancestor-related")
        self.u = u
        self.v = v


class CrossTreeEdge(ForestError):
    def __init__(self, u: int, v: int):
        super().__init__(f"edge ({u}, {v}) crosses between two trees")
        self.u = u
        self.v = v


class InvalidInputForest(ForestError):
    pass


class TooLarge(Exception):
    def __init__(self, n: int, cap: int):
        super().__init__(f"graph has {n} vertices, exact solver is capped at {cap}")
        self.n = n
        self.cap = cap


@dataclass(frozen=True)
class EliminationForest:
    """Parent pointers over a graph's vertices; None marks a root."""

    parent: tuple[int | None, ...]

    def __post_init__(self):
        object.__setattr__(self, "parent", tuple(self.parent))

    def __len__(self) -> int:
        return len(self.parent)

    def roots(self) -> list[int]:
        return [v for v, p in enumerate(self.parent) if p is None]

    def children(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in self.parent]
        for v, p in enumerate(self.parent):
            if p is not None:
                out[p].append(v)
        return out

    def depths(self) -> list[int]:
        """Depth of each vertex (roots have depth 1); raises NotAForest on cycles."""
        n = len(self.parent)
        for v, p in enumerate(self.parent):
            if p is not None and not (0 <= p < n):
                raise NotAForest(f"parent of {v} is {p}, outside 0..{n - 1}")
        state = [0] * n  # 0 fresh, 1 on current walk, 2 resolved
        depth = [0] * n
        for v in range(n):
            if state[v]:
                continue
            path = []
            cur: int | None = v
            while cur is not None and state[cur] == 0:
                state[cur] = 1
                path.append(cur)
                cur = self.parent[cur]
            if cur is not None and state[cur] == 1:
                raise NotAForest(f"cycle through vertex {cur}")
            base = 0 if cur is None else depth[cur]
            for node in reversed(path):
                base += 1
                depth[node] = base
                state[node] = 2
        return depth

    def depth(self) -> int:
        return max(self.depths(), default=0)


def check_forest(g: Graph, f: EliminationForest) -> int:
    """Validate f as an elimination forest for g and return its depth.

    Raises NotAForest, CrossTreeEdge, or UncoveredEdge on the first violation
    (edges scanned in sorted order).
    """
    if len(f.parent) != g.n:
        raise NotAForest(f"forest covers {len(f.parent)} vertices, graph has {g.n}")
    depths = f.depths()

    def root_of(v: int) -> int:
        while f.parent[v] is not None:
            v = f.parent[v]
        return v

    def is_ancestor(anc: int, v: int) -> bool:
        cur: int | None = v
        while cur is not None:
            if cur == anc:
                return True
            cur = f.parent[cur]
        return False

    for u, v in g.edges():
        if is_ancestor(u, v) or is_ancestor(v, u):
            continue
        if root_of(u) != root_of(v):
            raise CrossTreeEdge(u, v)
        raise UncoveredEdge(u, v)
    return max(depths, default=0)


def _mask_components(mask: int, nbr: list[int]) -> list[int]:
    comps = []
    rem = mask
    while rem:
        v = (rem & -rem).bit_length() - 1
        comp = 1 << v
        frontier = comp
        while frontier:
            grow = 0
            f = frontier
            while f:
                w = (f & -f).bit_length() - 1
                f &= f - 1
                grow |= nbr[w] & rem & ~comp
            comp |= grow
            frontier = grow
        comps.append(comp)
        rem &= ~comp
    return comps


def exact_treedepth(g: Graph) -> tuple[int, EliminationForest]:
    """Exact treedepth with a certifying forest, for graphs up to 20 vertices.

    Recursion over vertex subsets (bitmask-memoized, components split first);
    ties are broken toward the smallest-index root for determinism.
    """
    n = g.n
    if n > EXACT_VERTEX_CAP:
        raise TooLarge(n, EXACT_VERTEX_CAP)
    if n == 0:
        return 0, EliminationForest(())
    nbr = [0] * n
    for v in range(n):
        for w in g.adj[v]:
            nbr[v] |= 1 << w

    depth_memo: dict[int, int] = {}
    best_root: dict[int, int] = {}

    def td(mask: int) -> int:
        cached = depth_memo.get(mask)
        if cached is not None:
            return cached
        comps = _mask_components(mask, nbr)
        if len(comps) > 1:
            d = max(td(c) for c in comps)
        elif mask & (mask - 1) == 0:
            d = 1
            best_root[mask] = mask.bit_length() - 1
        else:
            d = None
            bits = mask
            while bits:
                v = (bits & -bits).bit_length() - 1
                bits &= bits - 1
                cand = 1 + td(mask & ~(1 << v))
                if d is None or cand < d:
                    d = cand
                    best_root[mask] = v
                    if d == 2:  # a connected graph on >1 vertices can't do better
                        break
        depth_memo[mask] = d
        return d

    parent: list[int | None] = [None] * n

    def build(mask: int, above: int | None) -> None:
        for comp in _mask_components(mask, nbr):
            if comp & (comp - 1) == 0:
                parent[comp.bit_length() - 1] = above
                continue
            v = best_root[comp]
            parent[v] = above
            build(comp & ~(1 << v), v)

    full = (1 << n) - 1
    d = td(full)
    build(full, None)
    return d, EliminationForest(tuple(parent))


def incidence_to_dual_forest(a: SparseMatrix, f_i: EliminationForest) -> EliminationForest:
    """Turn an incidence-graph forest into a dual-graph (row) forest.

    Walking the input forest top-down: a row vertex is emitted where it is
    visited; a column vertex is replaced by a chain of the not-yet-emitted
    rows supported on that column (ascending row index).  The result is a
    valid forest for the dual graph with depth at most
    max(1, max column support) * depth(f_i).
    """
    g = incidence_graph(a)
    try:
        check_forest(g, f_i)
    except ForestError as exc:
        raise InvalidInputForest(f"input forest invalid for the incidence graph: {exc}") from exc

    m = a.rows
    col_rows = a.by_col()
    kids = f_i.children()
    parent_out: list[int | None] = [None] * m
    placed = [False] * m

    stack: list[tuple[int, int | None]] = [(r, None) for r in reversed(f_i.roots())]
    while stack:
        v, attach = stack.pop()
        if v < m:
            if not placed[v]:
                parent_out[v] = attach
                placed[v] = True
                attach = v
        else:
            for r, _val in col_rows[v - m]:
                if not placed[r]:
                    parent_out[r] = attach
                    placed[r] = True
                    attach = r
        for ch in reversed(kids[v]):
            stack.append((ch, attach))
    return EliminationForest(tuple(parent_out))


def incidence_to_primal_forest(a: SparseMatrix, f_i: EliminationForest) -> EliminationForest:
    """Symmetric column-forest construction, realized on the transpose.

    Depth grows by at most max(1, max row support).
    """
    m, n = a.rows, a.cols
    if len(f_i.parent) != m + n:
        raise InvalidInputForest(f"forest covers {len(f_i.parent)} vertices, expected {m + n}")

    def swap(v: int) -> int:
        # rows of a become columns of the transpose and vice versa
        return v + n if v < m else v - m

    remapped: list[int | None] = [None] * (m + n)
    for v, p in enumerate(f_i.parent):
        remapped[swap(v)] = swap(p) if p is not None else None
    return incidence_to_dual_forest(a.transpose(), EliminationForest(tuple(remapped)))


def forest_to_json(f: EliminationForest) -> str:
    return json.dumps({"parent": [-1 if p is None else p for p in f.parent]})


def forest_from_json(text: str) -> EliminationForest:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(obj, dict) or set(obj) != {"parent"} or not isinstance(obj["parent"], list):
        raise ParseError('forest must be {"parent": [...]}')
    parent = []
    for k, p in enumerate(obj["parent"]):
        if type(p) is not int:
            raise ParseError(f"parent[{k}]: expected integer, got {p!r}")
        parent.append(None if p == -1 else p)
    return EliminationForest(tuple(parent))
