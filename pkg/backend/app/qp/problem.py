"""Quadratic programs min 1/2 z'Hz + f'z s.t. l <= Mz <= u, and their solutions"""

from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Optional, Union

import numpy as np
from pydantic import BaseModel, Field

from ..config import config
from ..errors import InvalidInputError

SYMMETRY_TOL = 1e-10


class QpStatus(Enum):
    """Solver outcome; anything but SOLVED counts as a failed step"""
    SOLVED = "solved"
    MAX_ITER = "max_iter"
    FAILURE = "failure"


class QpSettings(BaseModel):
    """Operator-splitting solver settings"""
    
    eps_abs: float = Field(default_factory=lambda: config.QP_EPS_ABS, gt=0)
    eps_rel: float = Field(default_factory=lambda: config.QP_EPS_REL, ge=0)
    eps_prim_inf: float = Field(default=1e-4, gt=0)
    max_iter: int = Field(default_factory=lambda: config.QP_MAX_ITER, ge=1)
    rho: float = Field(default_factory=lambda: config.QP_RHO, gt=0)
    sigma: float = Field(default=1e-6, gt=0)
    alpha: float = Field(default=1.6, gt=0, lt=2)
    adaptive_rho: bool = True
    adaptive_rho_tolerance: float = Field(default=10.0, gt=1)
    check_interval: int = Field(default=25, ge=1)
    scaling_iter: int = Field(default=10, ge=0)
    polish: bool = True
    polish_refine_iter: int = Field(default=10, ge=0)
    polish_passes: int = Field(default=25, ge=1)
    polish_merit: float = Field(default=1e3, gt=0)
    feasibility_tol: float = Field(default=1e-5, gt=0)
    divergence_window: int = Field(default=500, ge=100)
    divergence_factor: float = Field(default=1e3, gt=1)
    hessian_reg: float = Field(default=1e-9, gt=0)
    
    model_config = {"frozen": True}


@dataclass(frozen=True)
class QpProblem:
    """Condensed quadratic program; equality rows have l = u"""
    
    H: np.ndarray
    f: np.ndarray
    M: np.ndarray
    l: np.ndarray
    u: np.ndarray
    
    def __post_init__(self):
        H = np.atleast_2d(np.asarray(self.H, dtype=float))
        f = np.asarray(self.f, dtype=float).reshape(-1)
        d = f.size
        M = np.asarray(self.M, dtype=float).reshape(-1, d) if d else np.zeros((0, 0))
        l = np.asarray(self.l, dtype=float).reshape(-1)
        u = np.asarray(self.u, dtype=float).reshape(-1)
        
        if d == 0:
            raise InvalidInputError("problem has no decision variables")
        if H.shape != (d, d):
            raise InvalidInputError(f"H must be {d}x{d}, got {H.shape}")
        if l.size != M.shape[0] or u.size != M.shape[0]:
            raise InvalidInputError(
                f"bounds must have {M.shape[0]} entries, got {l.size} and {u.size}"
            )
        if not (np.all(np.isfinite(H)) and np.all(np.isfinite(f)) and np.all(np.isfinite(M))):
            raise InvalidInputError("problem data contains non-finite entries")
        if np.any(np.isnan(l)) or np.any(np.isnan(u)):
            raise InvalidInputError("bounds contain NaN")
        if np.any(l > u):
            raise InvalidInputError("lower bound exceeds upper bound")
        asymmetry = np.max(np.abs(H - H.T)) if d else 0.0
        if asymmetry > SYMMETRY_TOL * max(1.0, np.max(np.abs(H))):
            raise InvalidInputError(f"H is not symmetric (max asymmetry {asymmetry:.3e})")
        
        object.__setattr__(self, "H", 0.5 * (H + H.T))
        object.__setattr__(self, "f", f)
        object.__setattr__(self, "M", M)
        object.__setattr__(self, "l", l)
        object.__setattr__(self, "u", u)
    
    @property
    def dim(self) -> int:
        return self.f.size
    
    @property
    def n_constraints(self) -> int:
        return self.M.shape[0]
    
    @property
    def equality_rows(self) -> np.ndarray:
        return self.l == self.u
    
    def objective(self, z: Any) -> float:
        z = np.asarray(z, dtype=float).reshape(-1)
        return float(0.5 * z @ self.H @ z + self.f @ z)
    
    def violation(self, z: Any) -> float:
        """Largest constraint violation max(l - Mz, Mz - u, 0)"""
        if self.n_constraints == 0:
            return 0.0
        Mz = self.M @ np.asarray(z, dtype=float).reshape(-1)
        return float(max(np.max(self.l - Mz), np.max(Mz - self.u), 0.0))
    
    def dump(self, path: Union[str, Path]) -> Path:
        """Write the problem as plain-text matrix blocks"""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w") as handle:
            handle.write(f"# qp d={self.dim} c={self.n_constraints}\n")
            for name in ("H", "f", "M", "l", "u"):
                block = np.atleast_2d(getattr(self, name))
                handle.write(f"# {name} {block.shape[0]} {block.shape[1]}\n")
                if block.size:
                    np.savetxt(handle, block, fmt="%.17g")
        return path
    
    @classmethod
    def load(cls, path: Union[str, Path]) -> "QpProblem":
        """Read a problem written by dump"""
        with open(path) as handle:
            lines = [line.strip() for line in handle if line.strip()]
        blocks = {}
        k = 1
        while k < len(lines):
            _, name, rows, cols = lines[k].split()
            rows, cols = int(rows), int(cols)
            stored = rows if rows * cols else 0
            values = [[float(v) for v in line.split()] for line in lines[k + 1:k + 1 + stored]]
            blocks[name] = np.array(values, dtype=float).reshape(rows, cols)
            k += 1 + stored
        return cls(
            H=blocks["H"],
            f=blocks["f"].reshape(-1),
            M=blocks["M"],
            l=blocks["l"].reshape(-1),
            u=blocks["u"].reshape(-1),
        )


@dataclass(frozen=True)
class QpSolution:
    """Solver result; z and y are in the problem's original scaling"""
    
    status: QpStatus
    z: np.ndarray
    y: np.ndarray
    iterations: int
    primal_residual: float
    dual_residual: float
    eps_primal: float = 0.0
    eps_dual: float = 0.0
    polished: bool = False
    rho: Optional[float] = field(default=None, compare=False)
    
    @property
    def solved(self) -> bool:
        return self.status == QpStatus.SOLVED
