"""aximat: finite truth-table matrices for propositional axiom independence.

A matrix that validates a kept axiom set under modus ponens while
falsifying a target axiom proves the target underivable from the rest.
This package verifies such matrices, renders them, and searches for new
ones by backtracking over partially-assigned tables.
"""

from .formula import (
    Apply,
    Connective,
    Formula,
    ParseError,
    Var,
    parse,
    render_formula,
    variables_of,
)
from .matrix import (
    Assignment,
    Countermodel,
    Matrix,
    MatrixFormatError,
    Permutation,
    designation_preserving_permutations,
    parse_matrix,
    render_matrix,
)
from .partial import (
    CellRef,
    Contradiction,
    Known,
    PartialMatrix,
    Unknown,
    eval_partial,
    propagate,
)
from .problems import (
    IndependenceProblem,
    ProblemFormatError,
    ProblemMatrixMismatch,
    Verdict,
    builtin_matrix,
    builtin_problem,
    check_solution,
    parse_problem,
    render_problem,
)
from .search import (
    OracleSizeError,
    SearchConfig,
    SearchOutcome,
    SearchStatus,
    Solution,
    exhaustive_oracle,
    search,
)

__version__ = "0.1.0"

__all__ = [
    "Apply",
    "Assignment",
    "CellRef",
    "Connective",
    "Contradiction",
    "Countermodel",
    "Formula",
    "IndependenceProblem",
    "Known",
    "Matrix",
    "MatrixFormatError",
    "OracleSizeError",
    "ParseError",
    "PartialMatrix",
    "Permutation",
    "ProblemFormatError",
    "ProblemMatrixMismatch",
    "SearchConfig",
    "SearchOutcome",
    "SearchStatus",
    "Solution",
    "Unknown",
    "Var",
    "Verdict",
    "builtin_matrix",
    "builtin_problem",
    "check_solution",
    "designation_preserving_permutations",
    "eval_partial",
    "exhaustive_oracle",
    "parse",
    "parse_matrix",
    "parse_problem",
    "propagate",
    "render_formula",
    "render_matrix",
    "render_problem",
    "search",
    "variables_of",
]
