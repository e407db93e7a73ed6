"""Discrete-time LTI plant with bounded measurement noise"""

from dataclasses import dataclass
from typing import Any, Optional

import numpy as np

from ..errors import InvalidInputError
from ..numerics import as_matrix
from ..numerics.hankel import as_signal


@dataclass(frozen=True)
class LtiSystem:
    """
    Plant x(t+1) = A x(t) + B u(t), y(t) = C x(t)
    
    Ground truth for simulation only; controllers other than the
    model-based oracle never see these matrices.
    """
    
    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    
    def __post_init__(self):
        A = as_matrix(self.A, "A")
        B = as_matrix(self.B, "B")
        C = as_matrix(self.C, "C")
        # a flat B is a single-input column
        if B.shape[0] == 1 and A.shape[0] > 1:
            B = B.T
        
        n = A.shape[0]
        if A.shape != (n, n):
            raise InvalidInputError(f"A must be square, got {A.shape}")
        if B.shape[0] != n:
            raise InvalidInputError(f"B must have {n} rows, got {B.shape}")
        if C.shape[1] != n:
            raise InvalidInputError(f"C must have {n} columns, got {C.shape}")
        
        for name, value in (("A", A), ("B", B), ("C", C)):
            value.setflags(write=False)
            object.__setattr__(self, name, value)
    
    @property
    def n(self) -> int:
        return self.A.shape[0]
    
    @property
    def m(self) -> int:
        return self.B.shape[1]
    
    @property
    def p(self) -> int:
        return self.C.shape[0]
    
    def next_state(self, x: np.ndarray, u: np.ndarray) -> np.ndarray:
        """A x + B u"""
        return self.A @ self._state(x) + self.B @ self._input(u)
    
    def output(self, x: np.ndarray) -> np.ndarray:
        """Noise-free output C x"""
        return self.C @ self._state(x)
    
    def _state(self, x: Any) -> np.ndarray:
        state = np.asarray(x, dtype=float).reshape(-1)
        if state.size != self.n:
            raise InvalidInputError(f"state must have dimension {self.n}, got {state.size}")
        return state
    
    def _input(self, u: Any) -> np.ndarray:
        value = np.asarray(u, dtype=float).reshape(-1)
        if value.size != self.m:
            raise InvalidInputError(f"input must have dimension {self.m}, got {value.size}")
        return value


@dataclass(frozen=True)
class NoiseSpec:
    """Uniform measurement noise on [-intensity, intensity] per output component"""
    
    intensity: float = 0.0
    seed: int = 0
    
    def __post_init__(self):
        if not np.isfinite(self.intensity) or self.intensity < 0:
            raise InvalidInputError(f"noise intensity must be nonnegative, got {self.intensity}")
    
    def generator(self) -> np.random.Generator:
        """Fresh generator seeded from this spec"""
        return np.random.default_rng(self.seed)
    
    def sample(self, rng: np.random.Generator, size: Any) -> np.ndarray:
        """
        Draw noise samples
        
        Args:
            rng: Generator supplying the randomness
            size: Output shape, e.g. (T, p)
            
        Returns:
            Array with every entry in [-intensity, intensity]
        """
        if self.intensity == 0.0:
            return np.zeros(size)
        return rng.uniform(-self.intensity, self.intensity, size=size)


def simulate(
    sys: LtiSystem,
    x0: Any,
    inputs: Any,
    noise: Optional[NoiseSpec] = None,
    rng: Optional[np.random.Generator] = None,
) -> np.ndarray:
    """
    Simulate the plant from x0 under an input sequence
    
    Args:
        sys: Plant
        x0: Initial state
        inputs: Sequence of m-vectors
        noise: Measurement noise (defaults to none)
        rng: Generator for the noise (defaults to noise.generator())
        
    Returns:
        Array of shape (len(inputs), p) with y(t) = C x(t) + n(t)
    """
    noise = noise or NoiseSpec()
    u = as_signal(inputs, "inputs")
    if u.shape[1] != sys.m:
        raise InvalidInputError(f"inputs must have dimension {sys.m}, got {u.shape[1]}")
    x = sys._state(x0)
    
    T = u.shape[0]
    y = np.empty((T, sys.p))
    for t in range(T):
        y[t] = sys.C @ x
        x = sys.A @ x + sys.B @ u[t]
    
    rng = rng if rng is not None else noise.generator()
    return y + noise.sample(rng, (T, sys.p))
