"""Standard-form integer program data model.

An instance is the set {x integer : A x = b, l <= x <= u} where A is a sparse
integer matrix, b is a finite integer vector, and the bounds l, u may be
infinite.  All arithmetic is exact arbitrary-precision integer arithmetic;
there is no floating point anywhere in this package.  Values are immutable
after construction and safe to share.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Union


class SipError(Exception):
    """Base class for instance-model violations."""


class DimensionMismatch(SipError):
    pass


class CrossedBounds(SipError):
    def __init__(self, col: int):
        super().__init__(f"lower bound exceeds upper bound in column {col}")
        self.col = col


class DuplicateEntry(SipError):
    def __init__(self, row: int, col: int):
        super().__init__(f"duplicate matrix entry at ({row}, {col})")
        self.row = row
        self.col = col


class ZeroEntry(SipError):
    def __init__(self, row: int, col: int):
        super().__init__(f"explicit zero stored at ({row}, {col})")
        self.row = row
        self.col = col


class InfiniteLowerBound(SipError):
    def __init__(self, col: int):
        super().__init__(f"column {col} has an infinite lower bound")
        self.col = col


class ParseError(SipError):
    """Malformed instance or solution text."""


class _Infinity:
    """Signed infinity sentinel; totally ordered against ints and itself.

    Only two instances exist (NEG_INF, POS_INF); equality is identity.
    """

    __slots__ = ("_positive",)

    def __init__(self, positive: bool):
        self._positive = positive

    def __repr__(self) -> str:
        return "+inf" if self._positive else "-inf"

    def __lt__(self, other):
        if isinstance(other, int):
            return not self._positive
        if isinstance(other, _Infinity):
            return not self._positive and other._positive
        return NotImplemented

    def __le__(self, other):
        if other is self:
            return True
        return self.__lt__(other)

    def __gt__(self, other):
        if isinstance(other, int):
            return self._positive
        if isinstance(other, _Infinity):
            return self._positive and not other._positive
        return NotImplemented

    def __ge__(self, other):
        if other is self:
            return True
        return self.__gt__(other)

    def __sub__(self, other):
        # inf - finite keeps the sign; inf - inf is undefined
        if isinstance(other, int):
            return self
        raise TypeError("cannot subtract infinities")

    def __add__(self, other):
        if isinstance(other, int):
            return self
        raise TypeError("cannot add infinities")

    __radd__ = __add__


NEG_INF = _Infinity(False)
POS_INF = _Infinity(True)

ExtInt = Union[int, _Infinity]


def is_finite(value: ExtInt) -> bool:
    return isinstance(value, int)


@dataclass(frozen=True)
class SparseMatrix:
    """Integer matrix stored as (row, col, value) triples.

    Entries are kept in canonical row-major order so that equal matrices
    compare and serialize identically.
    """

    rows: int
    cols: int
    entries: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        canonical = tuple(sorted((r, c, v) for (r, c, v) in self.entries))
        object.__setattr__(self, "entries", canonical)

    def by_row(self) -> list[list[tuple[int, int]]]:
        """Per-row list of (col, value), ascending by column."""
        out: list[list[tuple[int, int]]] = [[] for _ in range(self.rows)]
        for r, c, v in self.entries:
            out[r].append((c, v))
        return out

    def by_col(self) -> list[list[tuple[int, int]]]:
        """Per-column list of (row, value), ascending by row."""
        out: list[list[tuple[int, int]]] = [[] for _ in range(self.cols)]
        for r, c, v in self.entries:
            out[c].append((r, v))
        return out

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix(self.cols, self.rows, tuple((c, r, v) for (r, c, v) in self.entries))

    def max_abs(self) -> int:
        return max((abs(v) for (_, _, v) in self.entries), default=0)

    def apply(self, x: Iterable[int]) -> tuple[int, ...]:
        """Matrix-vector product A x."""
        vec = tuple(x)
        if len(vec) != self.cols:
            raise DimensionMismatch(f"vector has length {len(vec)}, matrix has {self.cols} columns")
        sums = [0] * self.rows
        for r, c, v in self.entries:
            sums[r] += v * vec[c]
        return tuple(sums)


@dataclass(frozen=True)
class SipInstance:
    """Constraint matrix plus right-hand side and box bounds."""

    A: SparseMatrix
    b: tuple[int, ...]
    l: tuple[ExtInt, ...]
    u: tuple[ExtInt, ...]

    def __post_init__(self):
        object.__setattr__(self, "b", tuple(self.b))
        object.__setattr__(self, "l", tuple(self.l))
        object.__setattr__(self, "u", tuple(self.u))


@dataclass(frozen=True)
class SolveResult:
    """Feasibility verdict; carries a witness vector iff feasible."""

    x: tuple[int, ...] | None

    @property
    def feasible(self) -> bool:
        return self.x is not None

    @classmethod
    def witness(cls, x: Iterable[int]) -> "SolveResult":
        return cls(tuple(x))

    @classmethod
    def infeasible(cls) -> "SolveResult":
        return cls(None)


def validate(sip: SipInstance) -> None:
    """Check every structural invariant; raise the specific violation."""
    m, n = sip.A.rows, sip.A.cols
    if m < 0 or n < 0:
        raise DimensionMismatch("negative dimensions")
    if len(sip.b) != m:
        raise DimensionMismatch(f"b has length {len(sip.b)}, expected {m}")
    if len(sip.l) != n or len(sip.u) != n:
        raise DimensionMismatch(f"bounds have lengths {len(sip.l)}/{len(sip.u)}, expected {n}")
    prev = None
    for r, c, v in sip.A.entries:
        if not (0 <= r < m and 0 <= c < n):
            raise DimensionMismatch(f"entry ({r}, {c}) outside a {m}x{n} matrix")
        if v == 0:
            raise ZeroEntry(r, c)
        if prev == (r, c):
            raise DuplicateEntry(r, c)
        prev = (r, c)
    for i in range(n):
        if sip.l[i] > sip.u[i]:
            raise CrossedBounds(i)


def evaluate(sip: SipInstance, x: Iterable[int]) -> bool:
    """True iff A x = b componentwise and l <= x <= u componentwise."""
    vec = tuple(x)
    if len(vec) != sip.A.cols:
        raise DimensionMismatch(f"solution has length {len(vec)}, expected {sip.A.cols}")
    if sip.A.apply(vec) != sip.b:
        return False
    for i, xi in enumerate(vec):
        if xi < sip.l[i] or xi > sip.u[i]:
            return False
    return True


def shift_to_zero_lower_bounds(sip: SipInstance) -> tuple[SipInstance, tuple[int, ...]]:
    """Substitute x = x' + l so every lower bound becomes zero.

    Returns the shifted instance and the offset vector (the old l); x' is
    feasible for the result iff x' + offset is feasible for the input.
    Requires every lower bound to be finite.
    """
    validate(sip)
    for i, lo in enumerate(sip.l):
        if not is_finite(lo):
            raise InfiniteLowerBound(i)
    offset = tuple(sip.l)
    shift = sip.A.apply(offset)
    new_b = tuple(bi - si for bi, si in zip(sip.b, shift))
    new_u = tuple(ui - li for ui, li in zip(sip.u, offset))
    new_l = (0,) * sip.A.cols
    return SipInstance(sip.A, new_b, new_l, new_u), offset


def _bound_to_json(value: ExtInt):
    if value is NEG_INF:
        return "-inf"
    if value is POS_INF:
        return "+inf"
    return value


def _bound_from_json(raw, where: str) -> ExtInt:
    if raw == "-inf":
        return NEG_INF
    if raw == "+inf":
        return POS_INF
    if type(raw) is int:
        return raw
    raise ParseError(f"{where}: expected integer or '-inf'/'+inf', got {raw!r}")


def _int_from_json(raw, where: str) -> int:
    if type(raw) is int:
        return raw
    raise ParseError(f"{where}: expected integer, got {raw!r}")


def serialize_sip(sip: SipInstance) -> str:
    """Canonical single-line JSON; identical instances serialize identically."""
    obj = {
        "rows": sip.A.rows,
        "cols": sip.A.cols,
        "entries": [list(e) for e in sip.A.entries],
        "b": list(sip.b),
        "l": [_bound_to_json(v) for v in sip.l],
        "u": [_bound_to_json(v) for v in sip.u],
    }
    return json.dumps(obj)


def parse_sip(text: str) -> SipInstance:
    """Parse and fully validate the instance JSON schema."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise ParseError("top-level value must be an object")
    expected = {"rows", "cols", "entries", "b", "l", "u"}
    if set(obj) != expected:
        raise ParseError(f"keys must be exactly {sorted(expected)}, got {sorted(obj)}")
    rows = _int_from_json(obj["rows"], "rows")
    cols = _int_from_json(obj["cols"], "cols")
    if not isinstance(obj["entries"], list):
        raise ParseError("entries must be an array")
    triples = []
    for k, e in enumerate(obj["entries"]):
        if not isinstance(e, list) or len(e) != 3:
            raise ParseError(f"entries[{k}]: expected [row, col, value] triple")
        triples.append(tuple(_int_from_json(x, f"entries[{k}]") for x in e))
    if not isinstance(obj["b"], list):
        raise ParseError("b must be an array")
    b = tuple(_int_from_json(x, f"b[{k}]") for k, x in enumerate(obj["b"]))
    for name in ("l", "u"):
        if not isinstance(obj[name], list):
            raise ParseError(f"{name} must be an array")
    l = tuple(_bound_from_json(x, f"l[{k}]") for k, x in enumerate(obj["l"]))
    u = tuple(_bound_from_json(x, f"u[{k}]") for k, x in enumerate(obj["u"]))
    sip = SipInstance(SparseMatrix(rows, cols, tuple(triples)), b, l, u)
    validate(sip)
    return sip


def serialize_solution(x: Iterable[int]) -> str:
    return json.dumps({"x": list(x)})


def parse_solution(text: str) -> tuple[int, ...]:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(obj, dict) or set(obj) != {"x"} or not isinstance(obj["x"], list):
        raise ParseError('solution must be {"x": [...]}')
    return tuple(_int_from_json(v, f"x[{k}]") for k, v in enumerate(obj["x"]))
