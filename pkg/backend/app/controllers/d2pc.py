"""Data-driven predictive control on the identified chi-state model"""

from typing import Optional

import numpy as np

from ..datadriven import DataDrivenModel, Predictor, build_chi, build_predictor
from ..errors import InvalidInputError
from ..qp import QpSettings, QpSolver, condense_d2pc
from .base import (
    BaseController,
    ControlAction,
    ControllerConfig,
    ControllerMethod,
    ControllerState,
    solve_for_action,
)
from .mpc import shift_warm_start


def stacked_chi(state: ControllerState, nbar: int, p: int) -> np.ndarray:
    """col(chi_1(t), ..., chi_p(t)) from the rolling history"""
    if state.depth < nbar:
        raise InvalidInputError(f"history holds {state.depth} samples, nbar = {nbar}")
    u_history = state.past_inputs(nbar)
    y_history = state.past_outputs(nbar)
    return np.concatenate([build_chi(y_history[:, i], u_history, nbar) for i in range(p)])


def d2pc_step(
    state: ControllerState,
    config: ControllerConfig,
    model: DataDrivenModel,
    predictor: Predictor,
    r: np.ndarray,
    solver: Optional[QpSolver] = None,
    warm_start=None,
) -> ControlAction:
    """
    One D2PC step
    
    Args:
        state: Rolling history with at least nbar samples
        config: Horizon, weights and bounds
        model: Identified model
        predictor: build_predictor(model, config.horizon)
        r: Stacked reference r(t..t+N-1)
        
    Returns:
        ControlAction with u(t)
    """
    chi = stacked_chi(state, model.nbar, model.p)
    problem = condense_d2pc(
        predictor, chi, r, config.Q, config.R, config.input_bounds, config.output_bounds
    )
    return solve_for_action(solver or QpSolver(), problem, lambda z: z, model.m, warm_start)


class D2pcController(BaseController):
    """Condensed MPC on the identified model"""
    
    method = ControllerMethod.D2PC
    
    def __init__(
        self,
        config: ControllerConfig,
        model: DataDrivenModel,
        settings: Optional[QpSettings] = None,
        **kwargs,
    ):
        if model.m != config.m or model.p != config.p:
            raise InvalidInputError("model dimensions do not match the weights")
        super().__init__(config, history_depth=model.nbar, settings=settings, **kwargs)
        self.model = model
        self.predictor = build_predictor(model, config.horizon)
    
    def compute(self, r: np.ndarray, x: Optional[np.ndarray] = None) -> ControlAction:
        action = d2pc_step(
            self.state, self.config, self.model, self.predictor, r, self.solver,
            shift_warm_start(self.state.warm_start, self.config.m),
        )
        if action.ok:
            self.state.warm_start = (action.solution.z, action.solution.y)
        return action
