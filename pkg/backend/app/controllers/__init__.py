"""Receding-horizon controllers and the closed loop"""

from .base import (
    BaseController,
    ControlAction,
    ControllerConfig,
    ControllerMethod,
    ControllerState,
)
from .mpc import MpcController, mpc_step
from .deepc import DeepcController, DeepcData, HankelCombination, deepc_step
from .d2pc import D2pcController, d2pc_step
from .factory import ControllerFactory
from .closed_loop import Trajectory, run_closed_loop

__all__ = [
    "BaseController",
    "ControlAction",
    "ControllerConfig",
    "ControllerMethod",
    "ControllerState",
    "MpcController",
    "mpc_step",
    "DeepcController",
    "DeepcData",
    "HankelCombination",
    "deepc_step",
    "D2pcController",
    "d2pc_step",
    "ControllerFactory",
    "Trajectory",
    "run_closed_loop",
]
