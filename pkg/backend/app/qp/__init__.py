"""Condensed quadratic programs and the operator-splitting solver"""

from .problem import QpProblem, QpSettings, QpSolution, QpStatus
from .solver import QpSolver, solve
from .condense import (
    condense_d2pc,
    condense_deepc,
    condense_mpc,
    condense_tracking,
    mpc_prediction_matrices,
)

__all__ = [
    "QpProblem",
    "QpSettings",
    "QpSolution",
    "QpStatus",
    "QpSolver",
    "solve",
    "condense_d2pc",
    "condense_deepc",
    "condense_mpc",
    "condense_tracking",
    "mpc_prediction_matrices",
]
