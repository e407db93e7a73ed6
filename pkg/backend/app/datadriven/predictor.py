"""Horizon predictor of the stacked data-driven model"""

from dataclasses import dataclass, field
from typing import Any

import numpy as np
from scipy import linalg as sla

from ..errors import InvalidInputError
from .identification import DataDrivenModel


@dataclass(frozen=True)
class Predictor:
    """
    Stacked chi(t+1..t+N) = F chi(t) + G col(u(t..t+N-1))
    
    output_selector picks y(t..t+N-1) out of the stacked chi sequence.
    """
    
    F: np.ndarray
    G: np.ndarray
    output_selector: np.ndarray
    horizon: int
    p: int
    m: int
    phi: np.ndarray = field(init=False, repr=False)
    gamma: np.ndarray = field(init=False, repr=False)
    
    def __post_init__(self):
        # free and forced output response maps
        object.__setattr__(self, "phi", self.output_selector @ self.F)
        object.__setattr__(self, "gamma", self.output_selector @ self.G)
    
    @property
    def state_dim(self) -> int:
        return self.F.shape[1]
    
    def predict(self, chi: Any, u_seq: Any) -> np.ndarray:
        """
        Predicted outputs over the horizon
        
        Args:
            chi: Stacked chi(t)
            u_seq: col(u(t), ..., u(t+N-1)) of length m*N
            
        Returns:
            col(y(t), ..., y(t+N-1)) of length p*N
        """
        chi = np.asarray(chi, dtype=float).reshape(-1)
        u_seq = np.asarray(u_seq, dtype=float).reshape(-1)
        if chi.size != self.state_dim or u_seq.size != self.m * self.horizon:
            raise InvalidInputError("chi or input sequence has the wrong dimension")
        return self.output_selector @ (self.F @ chi + self.G @ u_seq)


def build_predictor(model: DataDrivenModel, N: int) -> Predictor:
    """
    Assemble F, G and the output selector over a horizon of N steps
    
    Args:
        model: Identified model
        N: Prediction horizon
        
    Returns:
        Predictor with F = col(A, A^2, .., A^N) and lower block-triangular G
    """
    if N < 1:
        raise InvalidInputError("horizon must be at least 1")
    A = sla.block_diag(*model.A_blocks)
    B = np.vstack(model.B_blocks)
    s, m, p, d = model.state_dim, model.m, model.p, model.chi_dim
    
    # powers[k] = A^k, k = 0..N
    powers = [np.eye(s)]
    for _ in range(N):
        powers.append(A @ powers[-1])
    impulse = [power @ B for power in powers[:N]]
    
    F = np.vstack(powers[1:])
    G = np.zeros((s * N, m * N))
    for j in range(N):
        for k in range(j + 1):
            G[j * s:(j + 1) * s, k * m:(k + 1) * m] = impulse[j - k]
    
    selector = np.zeros((p * N, s * N))
    for j in range(N):
        for i in range(p):
            selector[j * p + i, j * s + i * d + model.nbar - 1] = 1.0
    
    return Predictor(F=F, G=G, output_selector=selector, horizon=N, p=p, m=m)
