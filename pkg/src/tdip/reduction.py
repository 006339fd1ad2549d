"""3-CNF to integer-program feasibility encoder.

A formula maps to a homogeneous system A x = 0 with entries in {-1, 0, 1}
whose incidence graph carries an elimination forest of depth at most 5.
One global column y encodes a truth assignment through its residues: variable
i gets the i-th prime p_i, a block of p_i + 1 columns pins y mod p_i to the
0/1 value of the variable, and each clause gets a block that forbids the
single residue of y modulo the product of its primes that would falsify it.

Satisfying assignments lift to integer solutions and integer solutions
project back to satisfying assignments, so feasibility of the output decides
satisfiability of the input.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import product
from typing import Iterable, NamedTuple

from .numtheory import CrtSystem, crt, nth_primes
from .sip import (
    NEG_INF,
    POS_INF,
    ParseError,
    SipInstance,
    SolveResult,
    SparseMatrix,
    evaluate,
)
from .treedepth import EliminationForest

import json


class Literal(NamedTuple):
    var: int
    positive: bool


@dataclass(frozen=True)
class CnfFormula:
    """Clauses of literals over variables 0..num_vars-1."""

    num_vars: int
    clauses: tuple[tuple[Literal, ...], ...]

    def __post_init__(self):
        clauses = tuple(tuple(Literal(*lit) for lit in cl) for cl in self.clauses)
        object.__setattr__(self, "clauses", clauses)
        for cl in clauses:
            for lit in cl:
                if not 0 <= lit.var < self.num_vars:
                    raise ValueError(f"literal on variable {lit.var}, formula has {self.num_vars}")


Assignment = tuple[bool, ...]


class EmptyClause(Exception):
    def __init__(self, clause_index: int):
        super().__init__(f"clause {clause_index} is empty (formula trivially unsatisfiable)")
        self.clause_index = clause_index


class Falsifies(Exception):
    def __init__(self, clause_index: int):
        super().__init__(f"assignment falsifies clause {clause_index}")
        self.clause_index = clause_index


class NotASolution(Exception):
    pass


class TooManyVariables(Exception):
    def __init__(self, num_vars: int, cap: int):
        super().__init__(f"{num_vars} variables exceeds enumeration cap {cap}")
        self.num_vars = num_vars
        self.cap = cap


class DimacsParseError(Exception):
    pass


DECIDE_VARIABLE_CAP = 20


def normalize(cnf: CnfFormula) -> CnfFormula:
    """Drop tautological clauses and duplicate literals; keep empty clauses."""
    out = []
    for clause in cnf.clauses:
        seen: dict[int, bool] = {}
        kept = []
        tautology = False
        for lit in clause:
            if lit.var in seen:
                if seen[lit.var] != lit.positive:
                    tautology = True
                    break
                continue
            seen[lit.var] = lit.positive
            kept.append(lit)
        if not tautology:
            out.append(tuple(kept))
    return CnfFormula(cnf.num_vars, tuple(out))


def is_normalized(cnf: CnfFormula) -> bool:
    return all(len({lit.var for lit in cl}) == len(cl) for cl in cnf.clauses)


def satisfies(cnf: CnfFormula, assignment: Assignment) -> bool:
    if len(assignment) != cnf.num_vars:
        raise ValueError(f"assignment length {len(assignment)} != {cnf.num_vars}")
    return all(any(assignment[lit.var] == lit.positive for lit in cl) for cl in cnf.clauses)


def sat_brute_force(cnf: CnfFormula) -> bool:
    """Plain truth-table satisfiability check."""
    return any(satisfies(cnf, a) for a in product((False, True), repeat=cnf.num_vars))


def falsifying_value(clause: tuple[Literal, ...], primes: tuple[int, ...]) -> int:
    """The one residue class of y (mod the clause's prime product), given in
    [1 : product], whose decoded assignment falsifies the clause.

    A positive literal is falsified by residue 0, a negated one by residue 1;
    the combined residue exists and is unique by the Chinese Remainder
    Theorem, and residue 0 is reported as the product itself.
    """
    if len(clause) != len(primes):
        raise ValueError(f"{len(clause)} literals but {len(primes)} primes")
    if not clause:
        raise ValueError("empty clause has no falsifying value")
    residues = tuple(0 if lit.positive else 1 for lit in clause)
    r = crt(CrtSystem(primes, residues))
    norm = 1
    for p in primes:
        norm *= p
    return r if r >= 1 else norm


@dataclass(frozen=True)
class ReductionOutput:
    """Generated instance plus the provenance needed to read it back.

    Column 0 is y.  Variable block i spans columns x_start[i] .. x_start[i] +
    primes[i] (slot 0 is the 0/1 indicator); clause block j spans z_start[j]
    .. z_start[j] + norms[j] (slot 0 is the residue-window variable).
    """

    sip: SipInstance
    primes: tuple[int, ...]
    norms: tuple[int, ...]
    forbidden: tuple[int, ...]
    x_start: tuple[int, ...]
    z_start: tuple[int, ...]
    col_info: tuple[tuple, ...]
    row_info: tuple[tuple, ...]
    certificate: EliminationForest

    @property
    def y_col(self) -> int:
        return 0

    @property
    def num_vars(self) -> int:
        return len(self.primes)

    @property
    def num_clauses(self) -> int:
        return len(self.norms)

    def x_col(self, i: int, slot: int) -> int:
        return self.x_start[i] + slot

    def z_col(self, j: int, slot: int) -> int:
        return self.z_start[j] + slot


def _row_layout(primes: tuple[int, ...], norms: tuple[int, ...]):
    """Row indices for the four equation families, in the fixed emission order:
    all pairing rows of variable blocks, then their sum rows, then the same
    for clause blocks."""
    x_eq_start = []
    acc = 0
    for p in primes:
        x_eq_start.append(acc)
        acc += p - 1
    x_mod_start = acc
    acc += len(primes)
    z_eq_start = []
    for w in norms:
        z_eq_start.append(acc)
        acc += w - 1
    z_mod_start = acc
    acc += len(norms)
    return x_eq_start, x_mod_start, z_eq_start, z_mod_start, acc


def _build_certificate(
    primes: tuple[int, ...],
    norms: tuple[int, ...],
    x_start: tuple[int, ...],
    z_start: tuple[int, ...],
) -> EliminationForest:
    x_eq_start, x_mod_start, z_eq_start, z_mod_start, m = _row_layout(primes, norms)
    n_cols = 1 + sum(p + 1 for p in primes) + sum(w + 1 for w in norms)
    parent: list[int | None] = [None] * (m + n_cols)

    y_v = m  # column vertices sit after the m row vertices
    parent[y_v] = None
    for i, p in enumerate(primes):
        mod_row = x_mod_start + i
        first = m + x_start[i] + 1
        parent[mod_row] = y_v
        parent[first] = mod_row
        parent[m + x_start[i]] = first
        for slot in range(2, p + 1):
            eq_row = x_eq_start[i] + slot - 2
            parent[eq_row] = first
            parent[m + x_start[i] + slot] = eq_row
    for j, w in enumerate(norms):
        mod_row = z_mod_start + j
        first = m + z_start[j] + 1
        parent[mod_row] = y_v
        parent[first] = mod_row
        parent[m + z_start[j]] = first
        for slot in range(2, w + 1):
            eq_row = z_eq_start[j] + slot - 2
            parent[eq_row] = first
            parent[m + z_start[j] + slot] = eq_row
    return EliminationForest(tuple(parent))


def reduce(cnf: CnfFormula) -> ReductionOutput:
    """Encode a normalized formula as a homogeneous standard-form instance.

    Per variable block (prime p): p - 1 rows pairing slot 1 with slots
    2..p, and one row slot0 - y - sum(slots 1..p) = 0 with slot 0 boxed to
    [0, 1].  Per clause block (width w = product of its primes): the same
    shape, with slot 0 boxed to the w - 1 values adjacent to the forbidden
    residue.  All coefficients are in {-1, 0, 1} and b = 0.
    """
    if cnf.num_vars < 1:
        raise ValueError("formula must have at least one variable")
    if not is_normalized(cnf):
        raise ValueError("formula is not normalized; call normalize() first")
    for j, cl in enumerate(cnf.clauses):
        if not cl:
            raise EmptyClause(j)

    primes = nth_primes(cnf.num_vars)
    clause_primes = tuple(tuple(primes[lit.var] for lit in cl) for cl in cnf.clauses)
    norms = tuple(_product(ps) for ps in clause_primes)
    forbidden = tuple(
        falsifying_value(cl, ps) for cl, ps in zip(cnf.clauses, clause_primes)
    )

    col_info: list[tuple] = [("y",)]
    x_start = []
    for i, p in enumerate(primes):
        x_start.append(len(col_info))
        col_info.extend(("x", i, slot) for slot in range(p + 1))
    z_start = []
    for j, w in enumerate(norms):
        z_start.append(len(col_info))
        col_info.extend(("z", j, slot) for slot in range(w + 1))
    n_cols = len(col_info)

    x_eq_start, x_mod_start, z_eq_start, z_mod_start, m = _row_layout(primes, norms)
    row_info: list[tuple] = [()] * m
    entries: list[tuple[int, int, int]] = []

    lower: list = [NEG_INF] * n_cols
    upper: list = [POS_INF] * n_cols

    for i, p in enumerate(primes):
        base = x_start[i]
        first = base + 1
        for slot in range(2, p + 1):
            row = x_eq_start[i] + slot - 2
            row_info[row] = ("xeq", i, slot)
            entries.append((row, first, 1))
            entries.append((row, base + slot, -1))
        row = x_mod_start + i
        row_info[row] = ("xmod", i)
        entries.append((row, base, 1))
        entries.append((row, 0, -1))
        for slot in range(1, p + 1):
            entries.append((row, base + slot, -1))
        lower[base] = 0
        upper[base] = 1

    for j, w in enumerate(norms):
        base = z_start[j]
        first = base + 1
        for slot in range(2, w + 1):
            row = z_eq_start[j] + slot - 2
            row_info[row] = ("zeq", j, slot)
            entries.append((row, first, 1))
            entries.append((row, base + slot, -1))
        row = z_mod_start + j
        row_info[row] = ("zmod", j)
        entries.append((row, base, 1))
        entries.append((row, 0, -1))
        for slot in range(1, w + 1):
            entries.append((row, base + slot, -1))
        lower[base] = forbidden[j] + 1
        upper[base] = w + forbidden[j] - 1

    instance = SipInstance(
        SparseMatrix(m, n_cols, tuple(entries)),
        (0,) * m,
        tuple(lower),
        tuple(upper),
    )
    certificate = _build_certificate(primes, norms, tuple(x_start), tuple(z_start))
    return ReductionOutput(
        sip=instance,
        primes=primes,
        norms=norms,
        forbidden=forbidden,
        x_start=tuple(x_start),
        z_start=tuple(z_start),
        col_info=tuple(col_info),
        row_info=tuple(row_info),
        certificate=certificate,
    )


def _product(values: Iterable[int]) -> int:
    out = 1
    for v in values:
        out *= v
    return out


def certificate_forest(out: ReductionOutput) -> EliminationForest:
    """Rebuild the depth-<=5 incidence forest: y roots every block; each block
    hangs its pairing rows below its slot-1 column."""
    return _build_certificate(out.primes, out.norms, out.x_start, out.z_start)


def lift_assignment(out: ReductionOutput, assignment: Assignment) -> tuple[int, ...]:
    """Integer solution realizing a satisfying assignment.

    y is the Chinese Remainder combination of the 0/1 residues; block slots
    follow from it.  Raises Falsifies(j) when the assignment falsifies clause
    j, in which case no block value fits the residue window.
    """
    if len(assignment) != out.num_vars:
        raise ValueError(f"assignment length {len(assignment)} != {out.num_vars}")
    residues = tuple(1 if v else 0 for v in assignment)
    y = crt(CrtSystem(out.primes, residues))

    x = [0] * out.sip.A.cols
    x[out.y_col] = y
    for i, p in enumerate(out.primes):
        indicator = 1 if assignment[i] else 0
        step = (indicator - y) // p
        assert (indicator - y) % p == 0
        x[out.x_col(i, 0)] = indicator
        for slot in range(1, p + 1):
            x[out.x_col(i, slot)] = step
    for j, w in enumerate(out.norms):
        d = out.forbidden[j]
        r = y % w
        if r == d % w:
            raise Falsifies(j)
        window_value = d + 1 + ((r - d - 1) % w)
        step = (window_value - y) // w
        assert (window_value - y) % w == 0
        x[out.z_col(j, 0)] = window_value
        for slot in range(1, w + 1):
            x[out.z_col(j, slot)] = step
    return tuple(x)


def extract_assignment(out: ReductionOutput, x: Iterable[int]) -> Assignment:
    """Read the assignment off a solution's y residues; demands a real solution."""
    vec = tuple(x)
    if not evaluate(out.sip, vec):
        raise NotASolution("vector does not solve the instance")
    y = vec[out.y_col]
    values = []
    for p in out.primes:
        r = y % p
        assert r in (0, 1)  # forced by the indicator boxes and block rows
        values.append(r == 1)
    return tuple(values)


def decide_reduction(out: ReductionOutput) -> SolveResult:
    """Decide feasibility by enumerating assignments and lifting.

    Sound and complete for generated instances: any solution's y reduces to
    0/1 residues, so only decoded assignments matter.  Returns the witness of
    the lexicographically first feasible assignment (False before True).
    """
    if out.num_vars > DECIDE_VARIABLE_CAP:
        raise TooManyVariables(out.num_vars, DECIDE_VARIABLE_CAP)
    for assignment in product((False, True), repeat=out.num_vars):
        try:
            x = lift_assignment(out, assignment)
        except Falsifies:
            continue
        if not evaluate(out.sip, x):
            raise RuntimeError("lifted vector failed evaluation; generator bug")
        return SolveResult.witness(x)
    return SolveResult.infeasible()


def parse_dimacs(text: str) -> CnfFormula:
    """Parse standard DIMACS CNF (`c` comments, `p cnf <vars> <clauses>`,
    zero-terminated clauses, possibly spanning lines)."""
    num_vars = num_clauses = None
    tokens: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            if num_vars is not None:
                raise DimacsParseError(f"line {lineno}: duplicate header")
            parts = line.split()
            if len(parts) != 4 or parts[0] != "p" or parts[1] != "cnf":
                raise DimacsParseError(f"line {lineno}: expected 'p cnf <vars> <clauses>'")
            try:
                num_vars, num_clauses = int(parts[2]), int(parts[3])
            except ValueError as exc:
                raise DimacsParseError(f"line {lineno}: non-numeric header") from exc
            if num_vars < 0 or num_clauses < 0:
                raise DimacsParseError(f"line {lineno}: negative header counts")
            continue
        if num_vars is None:
            raise DimacsParseError(f"line {lineno}: clause data before header")
        for tok in line.split():
            try:
                tokens.append(int(tok))
            except ValueError as exc:
                raise DimacsParseError(f"line {lineno}: bad literal {tok!r}") from exc
    if num_vars is None:
        raise DimacsParseError("missing 'p cnf' header")
    clauses: list[tuple[Literal, ...]] = []
    current: list[Literal] = []
    for tok in tokens:
        if tok == 0:
            clauses.append(tuple(current))
            current = []
            continue
        var = abs(tok) - 1
        if var >= num_vars:
            raise DimacsParseError(f"literal {tok} exceeds declared {num_vars} variables")
        current.append(Literal(var, tok > 0))
    if current:
        raise DimacsParseError("last clause is not zero-terminated")
    if len(clauses) != num_clauses:
        raise DimacsParseError(f"header declares {num_clauses} clauses, found {len(clauses)}")
    return CnfFormula(num_vars, tuple(clauses))


def random_formula(num_vars: int, num_clauses: int, rng: random.Random) -> CnfFormula:
    """Uniform clauses of three distinct variables with uniform polarity."""
    if num_vars < 3:
        raise ValueError("need at least 3 variables for 3-literal clauses")
    clauses = []
    for _ in range(num_clauses):
        vars_ = rng.sample(range(num_vars), 3)
        clauses.append(tuple(Literal(v, rng.random() < 0.5) for v in vars_))
    return CnfFormula(num_vars, tuple(clauses))


def serialize_provenance(out: ReductionOutput) -> str:
    obj = {
        "y": out.y_col,
        "x": {str(i): [out.x_col(i, s) for s in range(out.primes[i] + 1)] for i in range(out.num_vars)},
        "z": {str(j): [out.z_col(j, s) for s in range(out.norms[j] + 1)] for j in range(out.num_clauses)},
        "primes": list(out.primes),
        "forbidden": list(out.forbidden),
    }
    return json.dumps(obj)


def parse_provenance(sip: SipInstance, text: str) -> ReductionOutput:
    """Rebuild a ReductionOutput from an instance plus its provenance file.

    The fixed generator layout (y first, contiguous ascending blocks) is
    validated; mismatches raise ParseError.
    """
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(obj, dict) or set(obj) != {"y", "x", "z", "primes", "forbidden"}:
        raise ParseError("provenance must have keys y, x, z, primes, forbidden")
    if obj["y"] != 0:
        raise ParseError("y must be column 0")
    if not isinstance(obj["primes"], list) or not all(type(p) is int for p in obj["primes"]):
        raise ParseError("primes must be an integer array")
    if not isinstance(obj["forbidden"], list) or not all(type(d) is int for d in obj["forbidden"]):
        raise ParseError("forbidden must be an integer array")
    primes = tuple(obj["primes"])
    forbidden = tuple(obj["forbidden"])
    if primes != nth_primes(len(primes)):
        raise ParseError("primes are not the first k primes")

    def check_block_map(mapping, count: int, tag: str) -> None:
        if not isinstance(mapping, dict) or set(mapping) != {str(k) for k in range(count)}:
            raise ParseError(f"{tag} blocks must be indexed 0..{count - 1}")
        for key, cols in mapping.items():
            if not isinstance(cols, list) or len(cols) < 2 or not all(type(c) is int for c in cols):
                raise ParseError(f"{tag} block {key} must be an array of at least two columns")

    def block_starts(mapping: dict, expected_lengths: list[int], tag: str) -> tuple[int, ...]:
        starts = []
        for k, length in enumerate(expected_lengths):
            cols = mapping[str(k)]
            if len(cols) != length:
                raise ParseError(f"{tag} block {k} must list {length} columns")
            if cols != list(range(cols[0], cols[0] + length)):
                raise ParseError(f"{tag} block {k} is not contiguous")
            starts.append(cols[0])
        return tuple(starts)

    check_block_map(obj["x"], len(primes), "x")
    x_start = block_starts(obj["x"], [p + 1 for p in primes], "x")
    if not isinstance(obj["z"], dict):
        raise ParseError("z must be an object")
    check_block_map(obj["z"], len(obj["z"]), "z")
    norms = tuple(len(obj["z"][str(j)]) - 1 for j in range(len(obj["z"])))
    if len(forbidden) != len(norms):
        raise ParseError("forbidden list length differs from clause block count")
    z_start = block_starts(obj["z"], [w + 1 for w in norms], "z")

    col_info: list[tuple] = [("y",)]
    for i, p in enumerate(primes):
        col_info.extend(("x", i, s) for s in range(p + 1))
    for j, w in enumerate(norms):
        col_info.extend(("z", j, s) for s in range(w + 1))
    if len(col_info) != sip.A.cols:
        raise ParseError(f"blocks cover {len(col_info)} columns, instance has {sip.A.cols}")
    expected_x = []
    acc = 1
    for p in primes:
        expected_x.append(acc)
        acc += p + 1
    expected_z = []
    for w in norms:
        expected_z.append(acc)
        acc += w + 1
    if x_start != tuple(expected_x) or z_start != tuple(expected_z):
        raise ParseError("block columns do not follow the generator layout")

    x_eq_start, x_mod_start, z_eq_start, z_mod_start, m = _row_layout(primes, norms)
    if m != sip.A.rows:
        raise ParseError(f"blocks imply {m} rows, instance has {sip.A.rows}")
    if any(v != 0 for v in sip.b):
        raise ParseError("generated instances are homogeneous (b = 0)")
    for j, w in enumerate(norms):
        d = forbidden[j]
        if not 1 <= d <= w:
            raise ParseError(f"forbidden value {d} outside [1, {w}] for clause {j}")
        base = z_start[j]
        if sip.l[base] != d + 1 or sip.u[base] != w + d - 1:
            raise ParseError(f"clause {j} window bounds do not match its forbidden value")

    row_info: list[tuple] = [()] * m
    for i, p in enumerate(primes):
        for slot in range(2, p + 1):
            row_info[x_eq_start[i] + slot - 2] = ("xeq", i, slot)
        row_info[x_mod_start + i] = ("xmod", i)
    for j, w in enumerate(norms):
        for slot in range(2, w + 1):
            row_info[z_eq_start[j] + slot - 2] = ("zeq", j, slot)
        row_info[z_mod_start + j] = ("zmod", j)

    return ReductionOutput(
        sip=sip,
        primes=primes,
        norms=norms,
        forbidden=forbidden,
        x_start=x_start,
        z_start=z_start,
        col_info=tuple(col_info),
        row_info=tuple(row_info),
        certificate=_build_certificate(primes, norms, x_start, z_start),
    )
