"""Model-based MPC with the true plant and state; produces the nominal trajectory"""

from typing import Any, Optional

import numpy as np

from ..plant import LtiSystem
from ..qp import QpSettings, QpSolver, condense_mpc, mpc_prediction_matrices
from .base import (
    BaseController,
    ControlAction,
    ControllerConfig,
    ControllerMethod,
    solve_for_action,
)


def shift_warm_start(previous, m: int):
    """Shift a planned input sequence one step forward, repeating the last input"""
    if previous is None:
        return None
    z, _ = previous
    shifted = np.concatenate([z[m:], z[-m:]])
    return shifted, np.zeros_like(previous[1])


def mpc_step(
    sys: LtiSystem,
    x: Any,
    config: ControllerConfig,
    r: Any,
    solver: Optional[QpSolver] = None,
    warm_start=None,
    prediction=None,
) -> ControlAction:
    """
    One model-based step from the true state
    
    Args:
        sys: True plant
        x: True state x(t)
        config: Horizon, weights and bounds
        r: Stacked reference r(t..t+N-1)
        solver: Solver workspace (fresh one if omitted)
        warm_start: Optional (z, y) pair
        prediction: Cached mpc_prediction_matrices for sys
        
    Returns:
        ControlAction with u(t)
    """
    problem = condense_mpc(
        sys, x, config.horizon, r, config.Q, config.R,
        config.input_bounds, config.output_bounds, prediction,
    )
    return solve_for_action(solver or QpSolver(), problem, lambda z: z, sys.m, warm_start)


class MpcController(BaseController):
    """Oracle controller; sees the plant matrices and the true state"""
    
    method = ControllerMethod.MPC
    requires_state = True
    
    def __init__(
        self,
        config: ControllerConfig,
        system: LtiSystem,
        settings: Optional[QpSettings] = None,
        **kwargs,
    ):
        super().__init__(config, history_depth=0, settings=settings, **kwargs)
        self.system = system
        self.prediction = mpc_prediction_matrices(system.A, system.B, system.C, config.horizon)
    
    def compute(self, r: np.ndarray, x: Optional[np.ndarray] = None) -> ControlAction:
        action = mpc_step(
            self.system, x, self.config, r, self.solver,
            shift_warm_start(self.state.warm_start, self.config.m), self.prediction,
        )
        if action.ok:
            self.state.warm_start = (action.solution.z, action.solution.y)
        return action
