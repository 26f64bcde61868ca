"""Verification toolkit for partial quantifier elimination over CNF."""

__version__ = "0.1.0"

from pqeverify.formulas import (
    Assignment,
    Clause,
    CnfFormula,
    FormulaError,
    PqeProblem,
    Solution,
    TautologyError,
    classify_boundary_point,
    cofactor,
    eval_clause,
    is_boundary_point,
)
from pqeverify.sat import KERNEL_NAME, SatOracle, SatOutcome, solve_formula

__all__ = [
    "Assignment",
    "Clause",
    "CnfFormula",
    "FormulaError",
    "KERNEL_NAME",
    "PqeProblem",
    "SatOracle",
    "SatOutcome",
    "Solution",
    "TautologyError",
    "classify_boundary_point",
    "cofactor",
    "eval_clause",
    "is_boundary_point",
    "solve_formula",
    "__version__",
]
