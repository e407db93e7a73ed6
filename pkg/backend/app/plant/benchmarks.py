"""Benchmark plants with their default control problems"""

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Union

import numpy as np

from ..errors import BenchmarkNotFoundError
from .reference import ReferenceSignal
from .system import LtiSystem


class BenchmarkName(Enum):
    """Registered benchmark plants"""
    INVERTED_PENDULUM = "inverted_pendulum"
    TWO_MASS = "two_mass"
    FOUR_TANK = "four_tank"
    
    @classmethod
    def from_string(cls, name: str) -> "BenchmarkName":
        key = name.lower().strip().replace("-", "_")
        try:
            return cls(key)
        except ValueError:
            raise BenchmarkNotFoundError(
                f"Unknown benchmark: {name}. "
                f"Supported benchmarks: {[b.value for b in cls]}"
            )


@dataclass(frozen=True)
class BenchmarkDefaults:
    """
    Default control problem and data-collection settings of a benchmark
    
    episode_length of None means the shortest length allowed by the order
    bound, (1+m)(2*nbar+1) - 1.
    """
    
    horizon: int
    Q: np.ndarray
    R: np.ndarray
    u_min: Optional[float]
    u_max: Optional[float]
    reference: ReferenceSignal
    n_sim: int
    episode_length: Optional[int]
    deepc_episode_length: int
    deepc_t_ini: int
    rdeepc_lambda_g: float
    rdeepc_lambda_y: float
    excitation_amplitude: float = 1.0
    
    def d2pc_episode_length(self, nbar: int, m: int) -> int:
        """Episode length T for identification with order bound nbar"""
        minimum = (1 + m) * (2 * nbar + 1) - 1
        if self.episode_length is None:
            return minimum
        return max(self.episode_length, minimum)
    
    @property
    def constrained(self) -> bool:
        return self.u_min is not None or self.u_max is not None


@dataclass(frozen=True)
class Benchmark:
    """Plant plus its defaults"""
    
    name: BenchmarkName
    system: LtiSystem
    defaults: BenchmarkDefaults


def _inverted_pendulum() -> Benchmark:
    system = LtiSystem(
        A=[
            [1.208, 0.106, 0.0, 0.096],
            [4.187, 1.194, 0.0, 1.779],
            [-0.016, -0.001, 1.0, 0.070],
            [-0.299, -0.015, 0.0, 0.460],
        ],
        B=[[-0.022], [-0.414], [0.007], [0.126]],
        C=[[0.0, 0.0, 1.0, 0.0]],
    )
    defaults = BenchmarkDefaults(
        horizon=20,
        Q=np.array([[1000.0]]),
        R=np.array([[1.0]]),
        u_min=-20.0,
        u_max=20.0,
        reference=ReferenceSignal.step([1.0]),
        n_sim=80,
        episode_length=None,
        deepc_episode_length=29,
        deepc_t_ini=4,
        # not reported for this plant; two-mass values reused
        rdeepc_lambda_g=500.0,
        rdeepc_lambda_y=5e5,
    )
    return Benchmark(BenchmarkName.INVERTED_PENDULUM, system, defaults)


def _two_mass() -> Benchmark:
    system = LtiSystem(
        A=[
            [0.990, 0.100, 0.010, 0.000],
            [-0.193, 0.990, 0.193, 0.010],
            [0.098, 0.003, 0.902, 0.097],
            [1.928, 0.098, -1.930, 0.902],
        ],
        B=[[0.005], [0.010], [0.000], [0.003]],
        C=[[0.0, 0.0, 1.0, 0.0]],
    )
    defaults = BenchmarkDefaults(
        horizon=20,
        Q=np.array([[200.0]]),
        R=np.array([[1.0]]),
        u_min=-2.0,
        u_max=2.0,
        reference=ReferenceSignal.step([1.0]),
        n_sim=300,
        episode_length=100,
        deepc_episode_length=100,
        deepc_t_ini=15,
        rdeepc_lambda_g=500.0,
        rdeepc_lambda_y=5e5,
        # open-loop experiment; the input bound applies in closed loop only
        excitation_amplitude=4.0,
    )
    return Benchmark(BenchmarkName.TWO_MASS, system, defaults)


def _four_tank() -> Benchmark:
    system = LtiSystem(
        A=[
            [0.921, 0.0, 0.041, 0.0],
            [0.0, 0.918, 0.0, 0.033],
            [0.0, 0.0, 0.924, 0.0],
            [0.0, 0.0, 0.0, 0.937],
        ],
        B=[
            [0.017, 0.001],
            [0.001, 0.023],
            [0.0, 0.061],
            [0.072, 0.0],
        ],
        C=[
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
        ],
    )
    defaults = BenchmarkDefaults(
        horizon=30,
        Q=3.0 * np.eye(2),
        R=0.01 * np.eye(2),
        u_min=None,
        u_max=None,
        reference=ReferenceSignal.setpoint([0.65, 0.77]),
        n_sim=300,
        episode_length=400,
        deepc_episode_length=400,
        deepc_t_ini=30,
        rdeepc_lambda_g=0.1,
        rdeepc_lambda_y=1000.0,
    )
    return Benchmark(BenchmarkName.FOUR_TANK, system, defaults)


_REGISTRY = {
    BenchmarkName.INVERTED_PENDULUM: _inverted_pendulum,
    BenchmarkName.TWO_MASS: _two_mass,
    BenchmarkName.FOUR_TANK: _four_tank,
}


def benchmark(name: Union[str, BenchmarkName]) -> Benchmark:
    """
    Look up a benchmark by name
    
    Args:
        name: "inverted_pendulum", "two_mass", "four_tank" or a BenchmarkName
        
    Returns:
        Benchmark with freshly built system and defaults
    """
    if isinstance(name, str):
        name = BenchmarkName.from_string(name)
    return _REGISTRY[name]()
