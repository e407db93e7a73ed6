"""Pre-experiment episodes: random excitation, simulation, CSV persistence"""

import csv
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional, Union

import numpy as np

from ..errors import ExcitationError, InsufficientDataError, InvalidInputError
from ..numerics import is_persistently_exciting
from ..numerics.hankel import as_signal
from .system import LtiSystem, NoiseSpec, simulate

logger = logging.getLogger(__name__)

OFFSET_PREFIX = "# initial_offset="


@dataclass(frozen=True)
class ExcitationSpec:
    """I.i.d. uniform excitation on [-amplitude, amplitude] per input component"""
    
    amplitude: float = 1.0
    max_attempts: int = 10
    
    def __post_init__(self):
        if not self.amplitude > 0:
            raise InvalidInputError("excitation amplitude must be positive")
        if self.max_attempts < 1:
            raise InvalidInputError("max_attempts must be at least 1")
    
    def draw(self, rng: np.random.Generator, length: int, m: int) -> np.ndarray:
        return rng.uniform(-self.amplitude, self.amplitude, size=(length, m))


@dataclass(frozen=True)
class EpisodeData:
    """
    One recorded experiment
    
    The first initial_offset samples are history only; time zero of the
    episode is sample initial_offset.
    """
    
    inputs: np.ndarray
    outputs: np.ndarray
    initial_offset: int = 0
    
    def __post_init__(self):
        inputs = as_signal(self.inputs, "inputs")
        outputs = as_signal(self.outputs, "outputs")
        if inputs.shape[0] != outputs.shape[0]:
            raise InvalidInputError(
                f"inputs and outputs differ in length: {inputs.shape[0]} vs {outputs.shape[0]}"
            )
        if self.initial_offset < 0:
            raise InvalidInputError("initial_offset must be nonnegative")
        if inputs.shape[0] < self.initial_offset + 1:
            raise InsufficientDataError(
                f"episode of {inputs.shape[0]} samples cannot hold offset {self.initial_offset}"
            )
        inputs.setflags(write=False)
        outputs.setflags(write=False)
        object.__setattr__(self, "inputs", inputs)
        object.__setattr__(self, "outputs", outputs)
    
    @property
    def total_length(self) -> int:
        return self.inputs.shape[0]
    
    @property
    def length(self) -> int:
        """Samples from time zero on (T)"""
        return self.total_length - self.initial_offset
    
    @property
    def m(self) -> int:
        return self.inputs.shape[1]
    
    @property
    def p(self) -> int:
        return self.outputs.shape[1]
    
    def to_csv(self, path: Union[str, Path]) -> Path:
        """
        Write the episode as CSV with columns t, u_1..u_m, y_1..y_p
        
        t counts from -initial_offset so that t = 0 is the episode's time zero.
        """
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="") as handle:
            handle.write(f"{OFFSET_PREFIX}{self.initial_offset}\n")
            writer = csv.writer(handle)
            writer.writerow(
                ["t"]
                + [f"u_{j + 1}" for j in range(self.m)]
                + [f"y_{i + 1}" for i in range(self.p)]
            )
            for k in range(self.total_length):
                writer.writerow(
                    [k - self.initial_offset]
                    + [repr(float(v)) for v in self.inputs[k]]
                    + [repr(float(v)) for v in self.outputs[k]]
                )
        return path
    
    @classmethod
    def from_csv(cls, path: Union[str, Path]) -> "EpisodeData":
        """Read an episode written by to_csv"""
        path = Path(path)
        offset = 0
        with open(path, newline="") as handle:
            lines = handle.read().splitlines()
        
        body = []
        for line in lines:
            if line.startswith(OFFSET_PREFIX):
                offset = int(line[len(OFFSET_PREFIX):])
            elif line.strip() and not line.startswith("#"):
                body.append(line)
        
        rows = list(csv.reader(body))
        if len(rows) < 2:
            raise InsufficientDataError(f"{path} holds no samples")
        header = rows[0]
        u_cols = [k for k, name in enumerate(header) if name.startswith("u_")]
        y_cols = [k for k, name in enumerate(header) if name.startswith("y_")]
        if not u_cols or not y_cols:
            raise InvalidInputError(f"{path} is missing u_ or y_ columns")
        
        try:
            data = np.array([[float(v) for v in row] for row in rows[1:]])
        except ValueError as e:
            raise InvalidInputError(f"{path}: {e}") from e
        return cls(inputs=data[:, u_cols], outputs=data[:, y_cols], initial_offset=offset)


def collect_episode(
    sys: LtiSystem,
    T: int,
    nbar: int,
    excitation: Optional[ExcitationSpec] = None,
    noise: Optional[NoiseSpec] = None,
    rng: Optional[np.random.Generator] = None,
    pe_order: Optional[int] = None,
) -> EpisodeData:
    """
    Run one pre-experiment from rest
    
    Args:
        sys: Plant
        T: Number of samples from time zero on
        nbar: Order bound; nbar extra leading samples seed the history window
        excitation: Input distribution
        noise: Measurement noise
        rng: Generator (defaults to noise.generator())
        pe_order: Required excitation order (defaults to 2*nbar + 1)
        
    Returns:
        EpisodeData with T + nbar samples and initial_offset = nbar
    """
    if nbar < 0:
        raise InvalidInputError("nbar must be nonnegative")
    if T < 4 * nbar + 1:
        raise InsufficientDataError(f"T = {T} is below 4*nbar + 1 = {4 * nbar + 1}")
    excitation = excitation or ExcitationSpec()
    noise = noise or NoiseSpec()
    rng = rng if rng is not None else noise.generator()
    order = pe_order if pe_order is not None else 2 * nbar + 1
    
    total = T + nbar
    for attempt in range(1, excitation.max_attempts + 1):
        inputs = excitation.draw(rng, total, sys.m)
        exciting, report = is_persistently_exciting(inputs, order)
        if exciting:
            break
        logger.debug(
            "Excitation attempt %d not persistently exciting of order %d (rank %d)",
            attempt, order, report.numeric_rank,
        )
    else:
        raise ExcitationError(
            f"no input persistently exciting of order {order} after "
            f"{excitation.max_attempts} attempts (length {total})"
        )
    
    outputs = simulate(sys, np.zeros(sys.n), inputs, noise, rng=rng)
    return EpisodeData(inputs=inputs, outputs=outputs, initial_offset=nbar)
