"""Common contract of the receding-horizon controllers"""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Optional, Tuple, Union

import numpy as np

from ..errors import InvalidInputError
from ..plant import BenchmarkDefaults, ReferenceSignal
from ..qp import QpProblem, QpSettings, QpSolution, QpSolver, QpStatus

logger = logging.getLogger(__name__)


class ControllerMethod(Enum):
    """Supported controllers"""
    MPC = "mpc"
    DEEPC = "deepc"
    RDEEPC = "rdeepc"
    D2PC = "d2pc"


def _optional_vector(value: Any) -> Optional[np.ndarray]:
    if value is None:
        return None
    return np.atleast_1d(np.asarray(value, dtype=float)).reshape(-1)


@dataclass(frozen=True)
class ControllerConfig:
    """
    Horizon, weights and constraint sets shared by every method
    
    Bounds are per-sample; a scalar applies to every component and None
    leaves that side unbounded.
    """
    
    horizon: int
    Q: np.ndarray
    R: np.ndarray
    u_min: Optional[np.ndarray] = None
    u_max: Optional[np.ndarray] = None
    y_min: Optional[np.ndarray] = None
    y_max: Optional[np.ndarray] = None
    
    def __post_init__(self):
        if self.horizon < 1:
            raise InvalidInputError("horizon must be at least 1")
        Q = np.atleast_2d(np.asarray(self.Q, dtype=float))
        R = np.atleast_2d(np.asarray(self.R, dtype=float))
        if Q.shape[0] != Q.shape[1] or R.shape[0] != R.shape[1]:
            raise InvalidInputError("Q and R must be square")
        if not np.allclose(Q, Q.T) or np.min(np.linalg.eigvalsh(Q)) < -1e-12:
            raise InvalidInputError("Q must be symmetric positive semidefinite")
        if not np.allclose(R, R.T) or np.min(np.linalg.eigvalsh(R)) <= 0:
            raise InvalidInputError("R must be symmetric positive definite")
        object.__setattr__(self, "Q", Q)
        object.__setattr__(self, "R", R)
        
        for lower, upper in (("u_min", "u_max"), ("y_min", "y_max")):
            lo = _optional_vector(getattr(self, lower))
            hi = _optional_vector(getattr(self, upper))
            if lo is not None and hi is not None and np.any(lo > hi):
                raise InvalidInputError(f"{lower} exceeds {upper}")
            object.__setattr__(self, lower, lo)
            object.__setattr__(self, upper, hi)
    
    @classmethod
    def from_benchmark(cls, defaults: BenchmarkDefaults) -> "ControllerConfig":
        return cls(
            horizon=defaults.horizon,
            Q=defaults.Q,
            R=defaults.R,
            u_min=defaults.u_min,
            u_max=defaults.u_max,
        )
    
    @property
    def m(self) -> int:
        return self.R.shape[0]
    
    @property
    def p(self) -> int:
        return self.Q.shape[0]
    
    @property
    def input_bounds(self) -> Optional[Tuple[Optional[np.ndarray], Optional[np.ndarray]]]:
        if self.u_min is None and self.u_max is None:
            return None
        return self.u_min, self.u_max
    
    @property
    def output_bounds(self) -> Optional[Tuple[Optional[np.ndarray], Optional[np.ndarray]]]:
        if self.y_min is None and self.y_max is None:
            return None
        return self.y_min, self.y_max
    
    def project_input(self, u: np.ndarray) -> np.ndarray:
        """Clip u onto the input set"""
        lower = -np.inf if self.u_min is None else self.u_min
        upper = np.inf if self.u_max is None else self.u_max
        return np.clip(u, lower, upper)


@dataclass
class ControllerState:
    """Rolling I/O history (oldest first, zero padded), warm start and failure flag"""
    
    inputs: np.ndarray
    outputs: np.ndarray
    warm_start: Optional[Tuple[np.ndarray, np.ndarray]] = None
    failed: bool = False
    steps: int = 0
    
    @classmethod
    def zeros(cls, depth: int, m: int, p: int) -> "ControllerState":
        return cls(inputs=np.zeros((depth, m)), outputs=np.zeros((depth, p)))
    
    @property
    def depth(self) -> int:
        return self.inputs.shape[0]
    
    def record(self, u: Any, y: Any) -> None:
        """Append one measured sample, dropping the oldest"""
        u = np.asarray(u, dtype=float).reshape(-1)
        y = np.asarray(y, dtype=float).reshape(-1)
        if self.depth:
            self.inputs = np.vstack([self.inputs[1:], u])
            self.outputs = np.vstack([self.outputs[1:], y])
        self.steps += 1
    
    def past_inputs(self, length: int) -> np.ndarray:
        return self.inputs[self.depth - length:]
    
    def past_outputs(self, length: int) -> np.ndarray:
        return self.outputs[self.depth - length:]


@dataclass(frozen=True)
class ControlAction:
    """Input to apply plus the solver outcome behind it"""
    
    u: np.ndarray
    status: QpStatus
    iterations: int = 0
    problem: Optional[QpProblem] = field(default=None, compare=False, repr=False)
    solution: Optional[QpSolution] = field(default=None, compare=False, repr=False)
    
    @property
    def ok(self) -> bool:
        return self.status == QpStatus.SOLVED


class BaseController(ABC):
    """Stateful receding-horizon controller; one instance per closed loop"""
    
    method: ControllerMethod
    requires_state: bool = False
    
    def __init__(
        self,
        config: ControllerConfig,
        history_depth: int,
        settings: Optional[QpSettings] = None,
        dump_dir: Optional[Union[str, Path]] = None,
    ):
        self.config = config
        self.settings = settings or QpSettings()
        self.solver = QpSolver(self.settings)
        self.state = ControllerState.zeros(history_depth, config.m, config.p)
        self.dump_dir = Path(dump_dir) if dump_dir else None
    
    @abstractmethod
    def compute(self, r: np.ndarray, x: Optional[np.ndarray] = None) -> ControlAction:
        """
        Solve the horizon problem for the current history
        
        Args:
            r: Stacked reference r(t..t+N-1)
            x: True plant state (used by the model-based oracle only)
            
        Returns:
            ControlAction with the first planned input
        """
        pass
    
    def step(
        self,
        t: int,
        reference: ReferenceSignal,
        x: Optional[np.ndarray] = None,
    ) -> ControlAction:
        """
        Compute u(t) from measurements through t-1
        
        A non-solved QP marks the controller failed; a solved input is
        projected onto the input set.
        """
        if self.requires_state and x is None:
            raise InvalidInputError(f"{self.method.value} needs the true state")
        action = self.compute(reference.horizon(t, self.config.horizon), x)
        
        if not action.ok:
            self.state.failed = True
            self.state.warm_start = None
            logger.info(
                "%s solver returned %s at step %d", self.method.value, action.status.value, t
            )
            self._dump(action, t)
            return action
        return ControlAction(
            u=self.config.project_input(action.u),
            status=action.status,
            iterations=action.iterations,
            problem=action.problem,
            solution=action.solution,
        )
    
    def observe(self, u: Any, y: Any) -> None:
        """Feed back the applied input and the measured output"""
        self.state.record(u, y)
    
    def reset(self) -> None:
        self.state = ControllerState.zeros(self.state.depth, self.config.m, self.config.p)
    
    def _dump(self, action: ControlAction, t: int) -> None:
        if self.dump_dir is None or action.problem is None:
            return
        path = self.dump_dir / f"{self.method.value}_step{t:04d}.qp.txt"
        action.problem.dump(path)
        logger.info("Wrote failed QP to %s", path)


def solve_for_action(
    solver: QpSolver,
    problem: QpProblem,
    inputs_from: Any,
    m: int,
    warm_start: Optional[Tuple[np.ndarray, np.ndarray]] = None,
) -> ControlAction:
    """
    Solve problem and turn its first planned input into an action
    
    Args:
        solver: Solver workspace
        problem: Condensed horizon problem
        inputs_from: Callable mapping the solution vector to the planned input sequence
        m: Input dimension
        warm_start: Optional (z, y) pair
    """
    if warm_start is not None and (
        warm_start[0].size != problem.dim or warm_start[1].size != problem.n_constraints
    ):
        warm_start = None
    solution = solver.solve(problem, warm_start)
    planned = np.asarray(inputs_from(solution.z), dtype=float).reshape(-1)
    return ControlAction(
        u=planned[:m].copy(),
        status=solution.status,
        iterations=solution.iterations,
        problem=problem,
        solution=solution,
    )
