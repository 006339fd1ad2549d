"""Feasibility toolkit for standard-form integer programs.

Data model and serialization live in :mod:`tdip.sip`; constraint-matrix
graphs in :mod:`tdip.gaifman`; elimination forests and treedepth in
:mod:`tdip.treedepth`; primes and remainder reconstruction in
:mod:`tdip.numtheory`; the 3-CNF encoder in :mod:`tdip.reduction`; exact
solvers in :mod:`tdip.solvers`; the command line in :mod:`tdip.cli`.
"""

from .sip import (
    NEG_INF,
    POS_INF,
    SipInstance,
    SolveResult,
    SparseMatrix,
    evaluate,
    parse_sip,
    serialize_sip,
    shift_to_zero_lower_bounds,
    validate,
)
from .gaifman import (
    Graph,
    connected_components,
    degree_stats,
    dual_graph,
    incidence_graph,
    primal_graph,
)
from .treedepth import (
    EliminationForest,
    check_forest,
    exact_treedepth,
    incidence_to_dual_forest,
    incidence_to_primal_forest,
)
from .numtheory import CrtSystem, crt, nth_primes
from .reduction import (
    CnfFormula,
    Literal,
    ReductionOutput,
    decide_reduction,
    extract_assignment,
    lift_assignment,
    normalize,
    parse_dimacs,
    reduce,
)
from .solvers import (
    RowBasisResult,
    brute_force,
    min_vertex_cover,
    remove_dependent_rows,
    solve_few_rows,
    solve_vertex_cover,
)

__all__ = [
    "NEG_INF",
    "POS_INF",
    "SipInstance",
    "SolveResult",
    "SparseMatrix",
    "evaluate",
    "parse_sip",
    "serialize_sip",
    "shift_to_zero_lower_bounds",
    "validate",
    "Graph",
    "connected_components",
    "degree_stats",
    "dual_graph",
    "incidence_graph",
    "primal_graph",
    "EliminationForest",
    "check_forest",
    "exact_treedepth",
    "incidence_to_dual_forest",
    "incidence_to_primal_forest",
    "CrtSystem",
    "crt",
    "nth_primes",
    "CnfFormula",
    "Literal",
    "ReductionOutput",
    "decide_reduction",
    "extract_assignment",
    "lift_assignment",
    "normalize",
    "parse_dimacs",
    "reduce",
    "RowBasisResult",
    "brute_force",
    "min_vertex_cover",
    "remove_dependent_rows",
    "solve_few_rows",
    "solve_vertex_cover",
]
