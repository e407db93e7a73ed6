"""Block-Hankel matrices and persistent excitation"""

from typing import Any, Tuple

import numpy as np

from ..errors import InsufficientDataError, InvalidInputError
from .linalg import DEFAULT_REL_TOL, RankReport, numeric_rank


def as_signal(signal: Any, name: str = "signal") -> np.ndarray:
    """
    Normalize a signal to shape (T, m)
    
    A one-dimensional sequence is read as a scalar signal (m = 1).
    """
    array = np.asarray(signal, dtype=float)
    if array.ndim == 1:
        array = array.reshape(-1, 1)
    if array.ndim != 2:
        raise InvalidInputError(f"{name} must be a sequence of vectors, got shape {array.shape}")
    if not np.all(np.isfinite(array)):
        raise InvalidInputError(f"{name} contains non-finite entries")
    return array


def hankel(signal: Any, L: int) -> np.ndarray:
    """
    Depth-L block-Hankel matrix of a vector signal
    
    Column k is col(u(k), ..., u(k+L-1)).
    
    Args:
        signal: Sequence of T vectors of dimension m
        L: Number of block rows
        
    Returns:
        Array of shape (m*L, T-L+1)
    """
    data = as_signal(signal)
    T, m = data.shape
    if L < 1:
        raise InvalidInputError("L must be at least 1")
    if T < L:
        raise InsufficientDataError(f"signal length {T} is shorter than depth {L}")
    
    columns = T - L + 1
    windows = np.lib.stride_tricks.sliding_window_view(data, L, axis=0)
    # windows[k] has shape (m, L); flatten time-major so blocks stack as u(k), u(k+1), ...
    return np.ascontiguousarray(windows.transpose(0, 2, 1).reshape(columns, m * L).T)


def is_persistently_exciting(
    signal: Any,
    L: int,
    rel_tol: float = DEFAULT_REL_TOL,
) -> Tuple[bool, RankReport]:
    """
    Check whether the depth-L Hankel matrix of signal has full row rank
    
    Args:
        signal: Sequence of T vectors of dimension m
        L: Excitation order
        rel_tol: Relative rank tolerance
        
    Returns:
        Tuple of (is exciting, rank report); short signals return False
    """
    data = as_signal(signal)
    T, m = data.shape
    if T < 1:
        raise InsufficientDataError("signal must contain at least one sample")
    if L < 1 or T < L:
        return False, RankReport(numeric_rank=0, singular_values=np.zeros(0), tolerance_used=0.0)
    
    report = numeric_rank(hankel(data, L), rel_tol)
    return report.numeric_rank == m * L, report
