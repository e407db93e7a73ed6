"""Tracking error and per-cell aggregation"""

from dataclasses import dataclass
from typing import Any, Optional, Sequence

import numpy as np

from ..errors import InvalidInputError

NOT_AVAILABLE = "N.A."


def compute_mae(y: Any, y_nom: Any) -> float:
    """
    Mean Euclidean deviation (1/N) sum_t ||y(t) - y_nom(t)||
    
    Args:
        y: Output trajectory, shape (N,) or (N, p)
        y_nom: Nominal trajectory of the same shape
        
    Returns:
        MAE
    """
    y = np.asarray(y, dtype=float)
    y_nom = np.asarray(y_nom, dtype=float)
    if y.ndim == 1:
        y = y.reshape(-1, 1)
    if y_nom.ndim == 1:
        y_nom = y_nom.reshape(-1, 1)
    if y.shape != y_nom.shape:
        raise InvalidInputError(f"trajectory shapes differ: {y.shape} vs {y_nom.shape}")
    if y.shape[0] < 1:
        raise InvalidInputError("trajectories must hold at least one sample")
    return float(np.mean(np.linalg.norm(y - y_nom, axis=1)))


@dataclass(frozen=True)
class TableCell:
    """Mean MAE over non-failed trials and the failure ratio"""
    
    mean_mae: Optional[float]
    failure_ratio: float
    trials: int
    
    @classmethod
    def from_trials(cls, maes: Sequence[Optional[float]]) -> "TableCell":
        """Aggregate per-trial MAEs; None marks a failed trial"""
        if not maes:
            raise InvalidInputError("no trials to aggregate")
        succeeded = [mae for mae in maes if mae is not None]
        failed = len(maes) - len(succeeded)
        return cls(
            mean_mae=float(np.mean(succeeded)) if succeeded else None,
            failure_ratio=failed / len(maes),
            trials=len(maes),
        )
    
    @property
    def mae_text(self) -> str:
        if self.mean_mae is None:
            return NOT_AVAILABLE
        if self.mean_mae < 0.001:
            return "<0.001"
        return f"{self.mean_mae:.3f}"
    
    @property
    def fr_text(self) -> str:
        return f"{self.failure_ratio:g}"
