"""SVD-based pseudoinverse and numeric rank"""

from dataclasses import dataclass
from typing import Any

import numpy as np
from scipy import linalg as sla

from ..errors import InvalidInputError

DEFAULT_REL_TOL = 1e-12


@dataclass(frozen=True)
class RankReport:
    """Outcome of a singular-value rank decision"""
    
    numeric_rank: int
    singular_values: np.ndarray  # descending
    tolerance_used: float
    
    @property
    def shape_rank(self) -> int:
        """Number of singular values computed (min(rows, cols))"""
        return int(self.singular_values.size)


def as_matrix(data: Any, name: str = "matrix") -> np.ndarray:
    """
    Convert data to a finite, two-dimensional float64 array
    
    Args:
        data: Nested sequence or array
        name: Label used in error messages
        
    Returns:
        2-D array (vectors become a single row)
    """
    matrix = np.atleast_2d(np.asarray(data, dtype=float))
    if matrix.ndim != 2:
        raise InvalidInputError(f"{name} must be two-dimensional, got shape {matrix.shape}")
    if not np.all(np.isfinite(matrix)):
        raise InvalidInputError(f"{name} contains non-finite entries")
    return matrix


def _cutoff(singular_values: np.ndarray, shape: tuple, rel_tol: float) -> float:
    if singular_values.size == 0:
        return 0.0
    return float(rel_tol * singular_values[0] * max(shape))


def pinv(J: Any, rel_tol: float = DEFAULT_REL_TOL) -> np.ndarray:
    """
    Moore-Penrose pseudoinverse via truncated SVD
    
    Singular values at or below rel_tol * sigma_max * max(rows, cols) are
    treated as zero.
    
    Args:
        J: Matrix to invert
        rel_tol: Relative truncation tolerance
        
    Returns:
        J^+ with shape (cols, rows)
    """
    if rel_tol <= 0:
        raise InvalidInputError("rel_tol must be positive")
    matrix = as_matrix(J, "J")
    if matrix.size == 0:
        raise InvalidInputError("J must be nonempty")
    
    u, s, vh = sla.svd(matrix, full_matrices=False, check_finite=False)
    cutoff = _cutoff(s, matrix.shape, rel_tol)
    keep = s > cutoff
    
    s_inv = np.zeros_like(s)
    s_inv[keep] = 1.0 / s[keep]
    return (vh.T * s_inv) @ u.T


def numeric_rank(M: Any, rel_tol: float = DEFAULT_REL_TOL) -> RankReport:
    """
    Rank from singular values above rel_tol * sigma_max * max(rows, cols)
    
    Args:
        M: Matrix to inspect
        rel_tol: Relative tolerance
        
    Returns:
        RankReport with the singular values and the tolerance applied
    """
    matrix = as_matrix(M, "M")
    if matrix.size == 0:
        raise InvalidInputError("M must be nonempty")
    
    s = sla.svdvals(matrix, check_finite=False)
    tolerance = _cutoff(s, matrix.shape, rel_tol)
    return RankReport(
        numeric_rank=int(np.count_nonzero(s > tolerance)),
        singular_values=s,
        tolerance_used=tolerance,
    )
