"""Exact feasibility deciders.

* brute_force -- plain box enumeration, the reference oracle.
* solve_few_rows -- dynamic program over reachable partial sums, exact for
  any row count but intended for instances with few rows.
* solve_vertex_cover -- drops dependent rows, bounds the remaining row count
  by twice a minimum vertex cover of the incidence graph, then delegates to
  the few-rows solver.

Every feasible result is re-checked against the instance before it is
returned.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .gaifman import Graph, incidence_graph
from .sip import (
    InfiniteLowerBound,
    POS_INF,
    SipInstance,
    SolveResult,
    SparseMatrix,
    evaluate,
    is_finite,
    shift_to_zero_lower_bounds,
    validate,
)

BRUTE_FORCE_POINT_CAP = 10_000_000
VERTEX_COVER_SIZE_CAP = 25
VERTEX_COVER_GRAPH_CAP = 10_000


class SolverError(Exception):
    """Base class for solver precondition failures."""


class UnboundedVariable(SolverError):
    def __init__(self, col: int):
        super().__init__(f"column {col} has an infinite bound")
        self.col = col


class SearchSpaceTooLarge(SolverError):
    def __init__(self, size: int):
        super().__init__(f"search space exceeds {BRUTE_FORCE_POINT_CAP} points")
        self.size = size


class UnprunableUnboundedVariable(SolverError):
    def __init__(self, col: int):
        super().__init__(f"no finite surrogate bound derivable for column {col}")
        self.col = col


class BudgetExceeded(SolverError):
    pass


def brute_force(sip: SipInstance) -> SolveResult:
    """Enumerate the whole bound box; first hit in lexicographic order wins."""
    validate(sip)
    n = sip.A.cols
    for i in range(n):
        if not (is_finite(sip.l[i]) and is_finite(sip.u[i])):
            raise UnboundedVariable(i)
    size = 1
    for lo, hi in zip(sip.l, sip.u):
        size *= hi - lo + 1
        if size > BRUTE_FORCE_POINT_CAP:
            raise SearchSpaceTooLarge(size)

    cols = sip.A.by_col()
    sums = [0] * sip.A.rows
    chosen = list(sip.l)  # fixed columns keep their only value
    free = [i for i in range(n) if sip.l[i] < sip.u[i]]
    for i in range(n):
        if sip.l[i] == sip.u[i]:
            for r, v in cols[i]:
                sums[r] += v * sip.l[i]

    target = list(sip.b)

    def descend(k: int) -> bool:
        if k == len(free):
            return sums == target
        i = free[k]
        for r, v in cols[i]:
            sums[r] += v * sip.l[i]
        value = sip.l[i]
        while True:
            chosen[i] = value
            if descend(k + 1):
                return True
            if value == sip.u[i]:
                break
            for r, v in cols[i]:
                sums[r] += v
            value += 1
        for r, v in cols[i]:
            sums[r] -= v * value
        return False

    if descend(0):
        result = SolveResult.witness(chosen)
        assert evaluate(sip, result.x)
        return result
    return SolveResult.infeasible()


def _ceil_div(p: int, q: int) -> int:
    # q > 0
    return -((-p) // q)


def _derive_finite_bounds(shifted: SipInstance) -> list[int] | SolveResult:
    """Replace +inf upper bounds with sound finite surrogates (lower bounds are
    all zero here).

    A column is pinned through any row where every *other* column's
    contribution is bounded on the relevant side; pinning iterates to a
    fixpoint.  A derived bound below zero proves infeasibility; a column that
    can never be pinned raises UnprunableUnboundedVariable.
    """
    n = shifted.A.cols
    rows = shifted.A.by_row()
    upper: list = list(shifted.u)
    cols = shifted.A.by_col()
    for i in range(n):
        if not cols[i] and upper[i] is POS_INF:
            upper[i] = 0  # unconstrained column; any value works, pick the lower bound
    unbounded = {i for i in range(n) if upper[i] is POS_INF}

    changed = True
    while unbounded and changed:
        changed = False
        for i in sorted(unbounded):
            best = None
            for r, a in cols[i]:
                side_ok = True
                acc = 0  # extreme total contribution of the other columns
                for c2, a2 in rows[r]:
                    if c2 == i:
                        continue
                    if a > 0:
                        # need a finite minimum of a2 * x2 over [0, u2]
                        if a2 < 0:
                            if upper[c2] is POS_INF:
                                side_ok = False
                                break
                            acc += a2 * upper[c2]
                    else:
                        # need a finite maximum
                        if a2 > 0:
                            if upper[c2] is POS_INF:
                                side_ok = False
                                break
                            acc += a2 * upper[c2]
                if not side_ok:
                    continue
                bound = (shifted.b[r] - acc) // a  # floors toward -inf for a < 0 too
                if best is None or bound < best:
                    best = bound
            if best is not None:
                if best < 0:
                    return SolveResult.infeasible()
                upper[i] = best
                unbounded.discard(i)
                changed = True
    if unbounded:
        raise UnprunableUnboundedVariable(min(unbounded))
    return upper


def solve_few_rows(sip: SipInstance) -> SolveResult:
    """Column-by-column dynamic program over reachable partial sums.

    Lower bounds are shifted to zero first.  After placing column t, each
    coordinate of a partial sum must stay within [b_r - maxfuture, b_r -
    minfuture], where the futures are the extreme contributions of the
    remaining columns; surviving states at the end must equal b exactly.
    Exact for all inputs; cost is governed by the window volume.
    """
    validate(sip)
    shifted, offset = shift_to_zero_lower_bounds(sip)
    derived = _derive_finite_bounds(shifted)
    if isinstance(derived, SolveResult):
        return derived
    upper = derived

    m, n = shifted.A.rows, shifted.A.cols
    cols = shifted.A.by_col()
    b = shifted.b

    # suffix extreme contributions per row, indexed by "columns >= t"
    min_fut = [[0] * m for _ in range(n + 1)]
    max_fut = [[0] * m for _ in range(n + 1)]
    for t in range(n - 1, -1, -1):
        min_fut[t] = list(min_fut[t + 1])
        max_fut[t] = list(max_fut[t + 1])
        for r, a in cols[t]:
            contrib = a * upper[t]
            min_fut[t][r] += min(0, contrib)
            max_fut[t][r] += max(0, contrib)

    start = (0,) * m
    if not all(min_fut[0][r] <= b[r] <= max_fut[0][r] for r in range(m)):
        return SolveResult.infeasible()

    frontier: dict[tuple[int, ...], None] = {start: None}
    parents: list[dict[tuple[int, ...], tuple[tuple[int, ...], int]]] = []
    for t in range(n):
        win_lo = [b[r] - max_fut[t + 1][r] for r in range(m)]
        win_hi = [b[r] - min_fut[t + 1][r] for r in range(m)]
        nxt: dict[tuple[int, ...], tuple[tuple[int, ...], int]] = {}
        col = cols[t]
        for state in sorted(frontier):
            x_lo, x_hi = 0, upper[t]
            for r, a in col:
                lo_num = win_lo[r] - state[r]
                hi_num = win_hi[r] - state[r]
                if a < 0:
                    lo_num, hi_num, a_pos = -hi_num, -lo_num, -a
                else:
                    a_pos = a
                x_lo = max(x_lo, _ceil_div(lo_num, a_pos))
                x_hi = min(x_hi, hi_num // a_pos)
            for value in range(x_lo, x_hi + 1):
                ns = list(state)
                for r, a in col:
                    ns[r] += a * value
                new = tuple(ns)
                if not all(win_lo[r] <= new[r] <= win_hi[r] for r in range(m)):
                    continue
                if new not in nxt:
                    nxt[new] = (state, value)
        parents.append(nxt)
        frontier = nxt
        if not frontier:
            return SolveResult.infeasible()

    target = tuple(b)
    if target not in frontier:
        return SolveResult.infeasible()
    values = [0] * n
    state = target
    for t in range(n - 1, -1, -1):
        state, values[t] = parents[t][state]
    witness = tuple(v + o for v, o in zip(values, offset))
    assert evaluate(sip, witness)
    return SolveResult.witness(witness)


def _vc_remove(adj: dict[int, set[int]], v: int) -> None:
    for w in adj.pop(v, ()):
        adj[w].discard(v)
        if not adj[w]:
            del adj[w]


def _vc_search(adj: dict[int, set[int]], k: int) -> set[int] | None:
    # owns (and consumes) adj; callers pass copies
    cover: set[int] = set()
    while True:
        leaf = min((v for v, s in adj.items() if len(s) == 1), default=None)
        if leaf is None:
            break
        if k == 0:
            return None
        neighbor = min(adj[leaf])
        cover.add(neighbor)
        _vc_remove(adj, neighbor)
        k -= 1
    if not adj:
        return cover
    if k == 0:
        return None
    u = min(adj)
    v = min(adj[u])
    for pick in (u, v):
        child = {w: s.copy() for w, s in adj.items()}
        _vc_remove(child, pick)
        sub = _vc_search(child, k - 1)
        if sub is not None:
            return cover | {pick} | sub
    return None


def min_vertex_cover(g: Graph) -> set[int]:
    """Minimum vertex cover by bounded search, capped at size 25.

    Degree-0 vertices are ignored; the neighbor of a degree-1 vertex is always
    taken; otherwise the search branches on the lexicographically smallest
    uncovered edge, smaller endpoint first.
    """
    if g.n > VERTEX_COVER_GRAPH_CAP:
        raise BudgetExceeded(f"graph has {g.n} vertices, cap is {VERTEX_COVER_GRAPH_CAP}")
    base_adj = {v: set(g.adj[v]) for v in range(g.n) if g.adj[v]}
    for k in range(VERTEX_COVER_SIZE_CAP + 1):
        result = _vc_search({v: s.copy() for v, s in base_adj.items()}, k)
        if result is not None:
            return result
    raise BudgetExceeded(f"no vertex cover of size <= {VERTEX_COVER_SIZE_CAP}")


@dataclass(frozen=True)
class RowBasisResult:
    """Outcome of dropping linearly dependent rows.

    Either a reduced instance with the surviving (independent) row indices, or
    the index of a row whose dependency conflicts with b.
    """

    sip: SipInstance | None
    kept_rows: tuple[int, ...]
    witness_row: int | None = None

    @property
    def inconsistent(self) -> bool:
        return self.witness_row is not None


def remove_dependent_rows(sip: SipInstance) -> RowBasisResult:
    """Exact rational elimination on [A | b].

    A row reducing to zero with a nonzero residual right-hand side proves
    inconsistency; other zero rows are implied by the kept ones, so the
    reduced instance has the identical solution set.
    """
    validate(sip)
    rows = sip.A.by_row()
    pivots: list[tuple[int, dict[int, Fraction], Fraction]] = []
    kept: list[int] = []
    for i in range(sip.A.rows):
        vec = {c: Fraction(v) for c, v in rows[i]}
        rhs = Fraction(sip.b[i])
        for pivot_col, pivot_vec, pivot_rhs in pivots:
            factor = vec.get(pivot_col)
            if not factor:
                continue
            for c2, v2 in pivot_vec.items():
                updated = vec.get(c2, Fraction(0)) - factor * v2
                if updated:
                    vec[c2] = updated
                else:
                    vec.pop(c2, None)
            rhs -= factor * pivot_rhs
        if vec:
            pivot_col = min(vec)
            scale = vec[pivot_col]
            vec = {c: v / scale for c, v in vec.items()}
            rhs /= scale
            pivots.append((pivot_col, vec, rhs))
            kept.append(i)
        elif rhs != 0:
            return RowBasisResult(None, (), i)

    index_of = {old: new for new, old in enumerate(kept)}
    entries = tuple(
        (index_of[r], c, v) for (r, c, v) in sip.A.entries if r in index_of
    )
    reduced = SipInstance(
        SparseMatrix(len(kept), sip.A.cols, entries),
        tuple(sip.b[i] for i in kept),
        sip.l,
        sip.u,
    )
    return RowBasisResult(reduced, tuple(kept))


def solve_vertex_cover(sip: SipInstance) -> SolveResult:
    """Feasibility via the vertex-cover pipeline.

    Dependent rows are dropped (or expose inconsistency); the surviving row
    count can never exceed twice the minimum vertex cover of the incidence
    graph, after which the few-rows solver finishes the job.
    """
    validate(sip)
    for i, lo in enumerate(sip.l):
        if not is_finite(lo):
            raise InfiniteLowerBound(i)
    basis = remove_dependent_rows(sip)
    if basis.inconsistent:
        return SolveResult.infeasible()
    reduced = basis.sip
    cover = min_vertex_cover(incidence_graph(reduced.A))
    if reduced.A.rows > 2 * len(cover):
        raise RuntimeError(
            f"{reduced.A.rows} independent rows exceed twice the cover size {len(cover)}"
        )
    result = solve_few_rows(reduced)
    if result.feasible:
        assert evaluate(sip, result.x)
    return result
