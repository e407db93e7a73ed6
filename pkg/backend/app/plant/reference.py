"""Reference signals to track"""

from dataclasses import dataclass
from enum import Enum
from typing import Any

import numpy as np

from ..errors import InvalidInputError


class ReferenceKind(Enum):
    """Supported reference shapes"""
    STEP = "step"
    CONSTANT = "constant"


@dataclass(frozen=True)
class ReferenceSignal:
    """Step or constant set-point, constant for t >= start_step"""
    
    value: np.ndarray
    kind: ReferenceKind = ReferenceKind.STEP
    start_step: int = 0
    
    def __post_init__(self):
        value = np.asarray(self.value, dtype=float).reshape(-1)
        if value.size == 0 or not np.all(np.isfinite(value)):
            raise InvalidInputError("reference value must be a nonempty finite vector")
        if self.start_step < 0:
            raise InvalidInputError("start_step must be nonnegative")
        value.setflags(write=False)
        object.__setattr__(self, "value", value)
    
    @classmethod
    def step(cls, value: Any, start_step: int = 0) -> "ReferenceSignal":
        return cls(value=value, kind=ReferenceKind.STEP, start_step=start_step)
    
    @classmethod
    def setpoint(cls, value: Any) -> "ReferenceSignal":
        return cls(value=value, kind=ReferenceKind.CONSTANT)
    
    @property
    def p(self) -> int:
        return self.value.size
    
    def at(self, t: int) -> np.ndarray:
        """r(t) for any t >= 0"""
        if self.kind == ReferenceKind.STEP and t < self.start_step:
            return np.zeros(self.p)
        return self.value.copy()
    
    def horizon(self, t: int, N: int) -> np.ndarray:
        """Stacked col(r(t), ..., r(t+N-1))"""
        return np.concatenate([self.at(t + k) for k in range(N)])
    
    def zero(self) -> "ReferenceSignal":
        """Zero reference of the same dimension"""
        return ReferenceSignal.setpoint(np.zeros(self.p))
