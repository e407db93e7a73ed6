"""Seeded trial batteries for one controller configuration"""

import logging
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field, ValidationError, model_validator

from ..config import config
from ..controllers import (
    BaseController,
    ControllerConfig,
    ControllerFactory,
    ControllerMethod,
    DeepcData,
    HankelCombination,
    Trajectory,
    run_closed_loop,
)
from ..datadriven import identify
from ..errors import ConfigurationError, D2pcError, ExcitationError
from ..plant import Benchmark, BenchmarkName, ExcitationSpec, NoiseSpec, benchmark, collect_episode
from ..qp import QpSettings
from .metrics import TableCell, compute_mae

logger = logging.getLogger(__name__)


class ExperimentSpec(BaseModel):
    """One benchmark/controller/noise configuration and its trial budget"""

    benchmark: BenchmarkName
    method: ControllerMethod
    nbar: Optional[int] = Field(default=None, ge=1)
    n_d: int = Field(default=1, ge=1)
    t_ini: Optional[int] = Field(default=None, ge=1)
    q: int = Field(default=1, ge=1)
    lambda_g: Optional[float] = Field(default=None, ge=0)
    lambda_y: Optional[float] = Field(default=None, ge=0)
    noise: float = Field(default=0.0, ge=0)
    trials: int = Field(default_factory=lambda: config.DEFAULT_TRIALS, ge=1)
    n_sim: Optional[int] = Field(default=None, ge=1)
    seed: int = Field(default_factory=lambda: config.DEFAULT_SEED, ge=0)
    episode_length: Optional[int] = Field(default=None, ge=1)

    model_config = {"frozen": True}

    @model_validator(mode="after")
    def check_method_parameters(self) -> "ExperimentSpec":
        if self.method == ControllerMethod.D2PC and self.nbar is None:
            raise ValueError("d2pc needs nbar")
        if self.method in (ControllerMethod.DEEPC, ControllerMethod.RDEEPC):
            if self.q > 1 and self.n_d > 1:
                raise ValueError("choose either q (mosaic) or n_d (averaged) episodes, not both")
            if self.method == ControllerMethod.DEEPC and self.n_d > 1:
                raise ValueError("averaged Hankel data is only used with rdeepc")
        return self

    @classmethod
    def create(cls, **fields) -> "ExperimentSpec":
        """Validate fields, raising ConfigurationError on bad input"""
        try:
            return cls(**fields)
        except ValidationError as e:
            raise ConfigurationError(str(e)) from e

    def label(self) -> str:
        parts = [self.benchmark.value, self.method.value]
        if self.method == ControllerMethod.D2PC:
            parts += [f"nbar={self.nbar}", f"N_d={self.n_d}"]
        elif self.method != ControllerMethod.MPC:
            parts += [f"T_ini={self.t_ini}", f"q={self.q}"]
            if self.n_d > 1:
                parts.append(f"N_d={self.n_d}")
        parts.append(f"A_n={self.noise:g}")
        return " ".join(parts)


@dataclass(frozen=True)
class TrialResult:
    """Outcome of one seeded trial; mae is None exactly when the trial failed"""

    index: int
    seed: int
    mae: Optional[float]
    failed: bool
    trajectory: Optional[Trajectory] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class ExperimentResult:
    """Aggregated cell plus the per-trial results in trial order"""

    spec: ExperimentSpec
    cell: TableCell
    trials: List[TrialResult]


_nominal_cache: Dict[Tuple, np.ndarray] = {}
_nominal_lock = threading.Lock()


def nominal_trajectory(
    bench: Benchmark,
    n_sim: int,
    settings: Optional[QpSettings] = None,
) -> np.ndarray:
    """
    Noise-free closed loop of the model-based oracle, cached per benchmark and length

    Returns:
        y_nom of shape (n_sim, p)
    """
    defaults = bench.defaults
    key = (
        bench.name,
        n_sim,
        defaults.horizon,
        defaults.Q.tobytes(),
        defaults.R.tobytes(),
        defaults.u_min,
        defaults.u_max,
        defaults.reference.value.tobytes(),
    )
    with _nominal_lock:
        if key in _nominal_cache:
            return _nominal_cache[key]

    controller = ControllerFactory.create(
        ControllerMethod.MPC,
        ControllerConfig.from_benchmark(defaults),
        system=bench.system,
        settings=settings,
    )
    trajectory = run_closed_loop(bench.system, controller, defaults.reference, n_sim=n_sim)
    if trajectory.failed:
        raise D2pcError(
            f"nominal loop for {bench.name.value} failed at step {trajectory.failure_step}"
        )

    with _nominal_lock:
        _nominal_cache[key] = trajectory.true_outputs
    return trajectory.true_outputs


def clear_nominal_cache() -> None:
    with _nominal_lock:
        _nominal_cache.clear()


def _deepc_pe_order(length: int, depth: int, m: int) -> int:
    """Excitation order required of a DeePC episode, when the length allows it"""
    return depth if length >= (m + 1) * depth - 1 else 1


def validate_spec(spec: ExperimentSpec) -> Benchmark:
    """
    Check a spec against its benchmark before any trial runs

    Returns:
        The benchmark
    """
    bench = benchmark(spec.benchmark)
    m = bench.system.m
    if spec.method == ControllerMethod.D2PC:
        length = spec.episode_length or bench.defaults.d2pc_episode_length(spec.nbar, m)
        if length < 4 * spec.nbar + 1:
            raise ConfigurationError(
                f"episode length {length} is below 4*nbar + 1 = {4 * spec.nbar + 1}"
            )
    elif spec.method in (ControllerMethod.DEEPC, ControllerMethod.RDEEPC):
        t_ini = spec.t_ini or bench.defaults.deepc_t_ini
        length = spec.episode_length or bench.defaults.deepc_episode_length
        depth = t_ini + bench.defaults.horizon
        if length < depth:
            raise ConfigurationError(
                f"DeePC episodes of length {length} are shorter than T_ini + N = {depth}"
            )
    return bench


def build_controller(
    spec: ExperimentSpec,
    bench: Benchmark,
    rng: np.random.Generator,
    settings: Optional[QpSettings] = None,
    dump_dir: Optional[str] = None,
) -> BaseController:
    """
    Collect fresh episodes and assemble the controller for one trial

    Args:
        spec: Experiment configuration
        bench: Benchmark behind spec
        rng: Generator for excitation and episode noise
        settings: Solver settings
        dump_dir: Directory for failed QP dumps

    Returns:
        Controller ready for run_closed_loop
    """
    system, defaults = bench.system, bench.defaults
    controller_config = ControllerConfig.from_benchmark(defaults)
    excitation = ExcitationSpec(amplitude=defaults.excitation_amplitude)
    noise = NoiseSpec(intensity=spec.noise)
    method = spec.method

    if method == ControllerMethod.MPC:
        return ControllerFactory.create(
            method, controller_config, system=system, settings=settings, dump_dir=dump_dir
        )

    if method == ControllerMethod.D2PC:
        length = spec.episode_length or defaults.d2pc_episode_length(spec.nbar, system.m)
        episodes = [
            collect_episode(system, length, spec.nbar, excitation, noise, rng=rng)
            for _ in range(spec.n_d)
        ]
        model = identify(episodes, spec.nbar)
        return ControllerFactory.create(
            method, controller_config, model=model, settings=settings, dump_dir=dump_dir
        )

    t_ini = spec.t_ini or defaults.deepc_t_ini
    length = spec.episode_length or defaults.deepc_episode_length
    depth = t_ini + defaults.horizon
    pe_order = _deepc_pe_order(length, depth, system.m)
    count = max(spec.q, spec.n_d)
    episodes = [
        collect_episode(system, length, 0, excitation, noise, rng=rng, pe_order=pe_order)
        for _ in range(count)
    ]
    combine = HankelCombination.AVERAGE if spec.n_d > 1 else HankelCombination.MOSAIC
    data = DeepcData.from_episodes(episodes, t_ini, defaults.horizon, combine)

    regularization = None
    if method == ControllerMethod.RDEEPC:
        regularization = (
            spec.lambda_g if spec.lambda_g is not None else defaults.rdeepc_lambda_g,
            spec.lambda_y if spec.lambda_y is not None else defaults.rdeepc_lambda_y,
        )
    return ControllerFactory.create(
        method, controller_config, data=data, regularization=regularization,
        settings=settings, dump_dir=dump_dir,
    )


def trial_generators(
    base_seed: int, index: int
) -> Tuple[np.random.Generator, np.random.Generator]:
    """Independent (data, closed-loop) generators for trial index"""
    data_seq, loop_seq = np.random.SeedSequence(base_seed + index).spawn(2)
    return np.random.default_rng(data_seq), np.random.default_rng(loop_seq)


def run_trial(
    spec: ExperimentSpec,
    index: int,
    bench: Optional[Benchmark] = None,
    settings: Optional[QpSettings] = None,
    y_nom: Optional[np.ndarray] = None,
) -> TrialResult:
    """
    Run trial index of spec

    Returns:
        TrialResult with the closed-loop trajectory attached
    """
    bench = bench or validate_spec(spec)
    n_sim = spec.n_sim or bench.defaults.n_sim
    if y_nom is None:
        y_nom = nominal_trajectory(bench, n_sim, settings)

    data_rng, loop_rng = trial_generators(spec.seed, index)
    try:
        controller = build_controller(spec, bench, data_rng, settings)
    except ExcitationError as e:
        logger.warning("Trial %d of %s counted as failed: %s", index, spec.label(), e)
        return TrialResult(index=index, seed=spec.seed + index, mae=None, failed=True)
    trajectory = run_closed_loop(
        bench.system,
        controller,
        bench.defaults.reference,
        NoiseSpec(intensity=spec.noise),
        n_sim=n_sim,
        rng=loop_rng,
    )
    mae = None if trajectory.failed else compute_mae(trajectory.true_outputs, y_nom)
    logger.debug("Trial %d of %s: failed=%s mae=%s", index, spec.label(), trajectory.failed, mae)
    return TrialResult(
        index=index,
        seed=spec.seed + index,
        mae=mae,
        failed=trajectory.failed,
        trajectory=trajectory,
    )


def run_experiment(
    spec: ExperimentSpec,
    workers: Optional[int] = None,
    settings: Optional[QpSettings] = None,
    on_trial: Optional[Callable[[TrialResult], None]] = None,
) -> ExperimentResult:
    """
    Run spec.trials seeded trials and aggregate MAE and failure ratio

    Args:
        spec: Experiment configuration
        workers: Thread count (defaults to config.WORKERS)
        settings: Solver settings
        on_trial: Callback invoked as trials finish

    Returns:
        ExperimentResult with trials in index order
    """
    bench = validate_spec(spec)
    n_sim = spec.n_sim or bench.defaults.n_sim
    y_nom = nominal_trajectory(bench, n_sim, settings)
    workers = workers if workers is not None else config.WORKERS

    def task(index: int) -> TrialResult:
        result = run_trial(spec, index, bench, settings, y_nom)
        if on_trial is not None:
            on_trial(result)
        return result

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            trials = list(pool.map(task, range(spec.trials)))
    else:
        trials = [task(index) for index in range(spec.trials)]

    cell = TableCell.from_trials([trial.mae for trial in trials])
    logger.info(
        "%s: MAE %s, FR %s over %d trials", spec.label(), cell.mae_text, cell.fr_text, cell.trials
    )
    return ExperimentResult(spec=spec, cell=cell, trials=trials)
