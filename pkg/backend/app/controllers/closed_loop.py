"""Closed-loop simulation of a controller against the true plant"""

import csv
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, List, Optional, Union

import numpy as np

from ..config import config as app_config
from ..errors import InvalidInputError
from ..plant import LtiSystem, NoiseSpec, ReferenceSignal
from ..qp import QpStatus
from .base import BaseController

logger = logging.getLogger(__name__)


@dataclass
class Trajectory:
    """
    Record of one closed loop
    
    Arrays hold the steps actually run; a failed loop stops at the step
    whose solver call failed (that step has a status but no sample).
    """
    
    references: np.ndarray
    inputs: np.ndarray
    outputs: np.ndarray
    true_outputs: np.ndarray
    statuses: List[QpStatus] = field(default_factory=list)
    failed: bool = False
    failure_step: Optional[int] = None
    
    @property
    def length(self) -> int:
        return self.inputs.shape[0]
    
    def to_csv(self, path: Union[str, Path], y_nom: Optional[np.ndarray] = None) -> Path:
        """
        Write columns t, r_*, u_*, y_*, y_nom_*, solver_status
        
        y_nom columns are left empty when no nominal trajectory is given.
        """
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        m, p = self.inputs.shape[1], self.outputs.shape[1]
        header = (
            ["t"]
            + [f"r_{i + 1}" for i in range(p)]
            + [f"u_{j + 1}" for j in range(m)]
            + [f"y_{i + 1}" for i in range(p)]
            + [f"y_nom_{i + 1}" for i in range(p)]
            + ["solver_status"]
        )
        with open(path, "w", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(header)
            for t, status in enumerate(self.statuses):
                if t < self.length:
                    row = (
                        [t]
                        + [repr(float(v)) for v in self.references[t]]
                        + [repr(float(v)) for v in self.inputs[t]]
                        + [repr(float(v)) for v in self.outputs[t]]
                    )
                else:
                    row = [t] + [""] * (p + m + p)
                if y_nom is not None and t < len(y_nom):
                    row += [repr(float(v)) for v in np.atleast_1d(y_nom[t])]
                else:
                    row += [""] * p
                writer.writerow(row + [status.value])
        return path


def run_closed_loop(
    plant: LtiSystem,
    controller: BaseController,
    reference: ReferenceSignal,
    noise: Optional[NoiseSpec] = None,
    n_sim: int = 100,
    x0: Optional[Any] = None,
    rng: Optional[np.random.Generator] = None,
    noise_samples: Optional[np.ndarray] = None,
    divergence_limit: Optional[float] = None,
) -> Trajectory:
    """
    Run controller against plant for n_sim steps
    
    At step t the controller computes u(t) from data through t-1; u(t) is
    applied and y(t) = C x(t) + n(t) is measured and fed back.
    
    Args:
        plant: True plant
        controller: Fresh controller instance
        reference: Signal to track
        noise: Measurement noise spec
        n_sim: Number of steps
        x0: Initial state (defaults to rest)
        rng: Generator for the noise (defaults to noise.generator())
        noise_samples: Explicit (n_sim, p) noise sequence overriding sampling
        divergence_limit: Output magnitude that marks the loop failed
        
    Returns:
        Trajectory of the run
    """
    if n_sim < 1:
        raise InvalidInputError("n_sim must be at least 1")
    if reference.p != plant.p or controller.config.m != plant.m:
        raise InvalidInputError("reference or controller dimensions do not match the plant")
    noise = noise or NoiseSpec()
    rng = rng if rng is not None else noise.generator()
    limit = divergence_limit if divergence_limit is not None else app_config.DIVERGENCE_LIMIT
    if noise_samples is None:
        noise_samples = noise.sample(rng, (n_sim, plant.p))
    noise_samples = np.asarray(noise_samples, dtype=float).reshape(n_sim, plant.p)
    
    x = np.zeros(plant.n) if x0 is None else np.asarray(x0, dtype=float).reshape(plant.n)
    references, inputs, outputs, true_outputs = [], [], [], []
    trajectory = Trajectory(
        references=np.zeros((0, plant.p)),
        inputs=np.zeros((0, plant.m)),
        outputs=np.zeros((0, plant.p)),
        true_outputs=np.zeros((0, plant.p)),
    )
    
    for t in range(n_sim):
        action = controller.step(t, reference, x)
        trajectory.statuses.append(action.status)
        if not action.ok:
            trajectory.failed = True
            trajectory.failure_step = t
            break
        
        y_true = plant.output(x)
        y = y_true + noise_samples[t]
        references.append(reference.at(t))
        inputs.append(action.u)
        outputs.append(y)
        true_outputs.append(y_true)
        controller.observe(action.u, y)
        x = plant.next_state(x, action.u)
        
        if not np.all(np.isfinite(y)) or np.max(np.abs(y)) > limit:
            logger.warning("Closed loop diverged at step %d (|y| = %.3e)", t, np.max(np.abs(y)))
            trajectory.failed = True
            trajectory.failure_step = t
            break
    
    if inputs:
        trajectory.references = np.array(references)
        trajectory.inputs = np.array(inputs)
        trajectory.outputs = np.array(outputs)
        trajectory.true_outputs = np.array(true_outputs)
    return trajectory
