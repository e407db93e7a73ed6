"""DeePC and regularized DeePC on Hankel data"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence, Tuple

import numpy as np

from ..errors import InsufficientDataError, InvalidInputError
from ..numerics import hankel, numeric_rank
from ..plant import EpisodeData
from ..qp import QpSettings, QpSolver, condense_deepc
from .base import (
    BaseController,
    ControlAction,
    ControllerConfig,
    ControllerMethod,
    ControllerState,
    solve_for_action,
)

logger = logging.getLogger(__name__)


class HankelCombination(Enum):
    """How Hankel blocks of several episodes are merged"""
    MOSAIC = "mosaic"
    AVERAGE = "average"


@dataclass(frozen=True)
class DeepcData:
    """Past/future splits of the input and output Hankel matrices"""
    
    U_p: np.ndarray
    Y_p: np.ndarray
    U_f: np.ndarray
    Y_f: np.ndarray
    t_ini: int
    horizon: int
    
    @property
    def m(self) -> int:
        return self.U_p.shape[0] // self.t_ini
    
    @property
    def p(self) -> int:
        return self.Y_p.shape[0] // self.t_ini
    
    @property
    def columns(self) -> int:
        return self.U_p.shape[1]
    
    @classmethod
    def from_episodes(
        cls,
        episodes: Sequence[EpisodeData],
        t_ini: int,
        horizon: int,
        combine: HankelCombination = HankelCombination.MOSAIC,
    ) -> "DeepcData":
        """
        Build depth T_ini + N Hankel blocks from recorded episodes
        
        Args:
            episodes: Experiments; samples before each initial_offset are ignored
            t_ini: Length of the initial trajectory
            horizon: Prediction horizon N
            combine: Column concatenation (mosaic) or entrywise averaging
            
        Returns:
            DeepcData split after T_ini block rows
        """
        if t_ini < 1 or horizon < 1:
            raise InvalidInputError("t_ini and horizon must be at least 1")
        if not episodes:
            raise InsufficientDataError("at least one episode is required")
        depth = t_ini + horizon
        m, p = episodes[0].m, episodes[0].p
        
        H_u, H_y = [], []
        for episode in episodes:
            if episode.m != m or episode.p != p:
                raise InvalidInputError("episodes disagree on input/output dimensions")
            start = episode.initial_offset
            H_u.append(hankel(episode.inputs[start:], depth))
            H_y.append(hankel(episode.outputs[start:], depth))
        
        if combine == HankelCombination.MOSAIC:
            U, Y = np.hstack(H_u), np.hstack(H_y)
        else:
            if len({block.shape[1] for block in H_u}) != 1:
                raise InvalidInputError("averaged Hankel blocks need equal-length episodes")
            U, Y = np.mean(H_u, axis=0), np.mean(H_y, axis=0)
        
        rank = numeric_rank(U).numeric_rank
        if rank < m * depth:
            logger.warning(
                "Input Hankel data has rank %d below %d; DeePC predictions may be ambiguous",
                rank, m * depth,
            )
        
        split_u, split_y = m * t_ini, p * t_ini
        return cls(
            U_p=U[:split_u],
            Y_p=Y[:split_y],
            U_f=U[split_u:],
            Y_f=Y[split_y:],
            t_ini=t_ini,
            horizon=horizon,
        )


def deepc_step(
    state: ControllerState,
    config: ControllerConfig,
    data: DeepcData,
    r: np.ndarray,
    regularization: Optional[Tuple[float, Optional[float]]] = None,
    solver: Optional[QpSolver] = None,
    warm_start=None,
) -> ControlAction:
    """
    One DeePC step; regularization (lambda_g, lambda_y) selects rDeePC
    
    Args:
        state: Rolling history with at least T_ini samples
        config: Horizon, weights and bounds
        data: Hankel blocks
        r: Stacked reference r(t..t+N-1)
        regularization: None for plain DeePC
        
    Returns:
        ControlAction with u(t) = (U_f g)[:m]
    """
    u_ini = state.past_inputs(data.t_ini).reshape(-1)
    y_ini = state.past_outputs(data.t_ini).reshape(-1)
    problem = condense_deepc(
        data.U_p, data.Y_p, data.U_f, data.Y_f, u_ini, y_ini, r, config.Q, config.R,
        config.input_bounds, config.output_bounds, regularization,
    )
    columns = data.columns
    return solve_for_action(
        solver or QpSolver(), problem, lambda z: data.U_f @ z[:columns], data.m, warm_start
    )


class DeepcController(BaseController):
    """DeePC, or rDeePC when regularization is given"""
    
    def __init__(
        self,
        config: ControllerConfig,
        data: DeepcData,
        regularization: Optional[Tuple[float, Optional[float]]] = None,
        settings: Optional[QpSettings] = None,
        **kwargs,
    ):
        if data.horizon != config.horizon:
            raise InvalidInputError(
                f"data built for horizon {data.horizon}, controller uses {config.horizon}"
            )
        if data.m != config.m or data.p != config.p:
            raise InvalidInputError("Hankel data dimensions do not match the weights")
        super().__init__(config, history_depth=data.t_ini, settings=settings, **kwargs)
        self.data = data
        self.regularization = regularization
        regularized = regularization is not None and (
            regularization[0] > 0 or regularization[1] is not None
        )
        self.method = ControllerMethod.RDEEPC if regularized else ControllerMethod.DEEPC
    
    def compute(self, r: np.ndarray, x: Optional[np.ndarray] = None) -> ControlAction:
        action = deepc_step(
            self.state, self.config, self.data, r, self.regularization, self.solver,
            self.state.warm_start,
        )
        if action.ok:
            self.state.warm_start = (action.solution.z, action.solution.y)
        return action
