"""Primal-dual active-set solvers for isotonic regression and trend filtering."""

from ._core import (
    Error,
    NotConverged,
    NumericalError,
    ParseError,
    SolveReport,
    ValidationError,
    derive_seed,
    dual_cd_ir,
    dual_cd_tf,
    exhaustive_tf,
    generate,
    kkt_check_ir,
    objective_ir,
    objective_tf,
    optimality_check_tf,
    pav,
    pdas_ir,
    tf,
)

__version__ = "0.1.0"

__all__ = [
    "Error",
    "NotConverged",
    "NumericalError",
    "ParseError",
    "SolveReport",
    "ValidationError",
    "derive_seed",
    "dual_cd_ir",
    "dual_cd_tf",
    "exhaustive_tf",
    "generate",
    "kkt_check_ir",
    "objective_ir",
    "objective_tf",
    "optimality_check_tf",
    "pav",
    "pdas_ir",
    "tf",
]
