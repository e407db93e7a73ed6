"""Grids of experiments behind each published comparison table"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple, Union

from ..config import config
from ..controllers import ControllerMethod
from ..errors import BenchmarkNotFoundError
from ..plant import BenchmarkName, benchmark
from ..qp import QpSettings
from .experiment import ExperimentResult, ExperimentSpec, run_experiment
from .export import write_table_csv

logger = logging.getLogger(__name__)

PENDULUM = BenchmarkName.INVERTED_PENDULUM
TWO_MASS = BenchmarkName.TWO_MASS
FOUR_TANK = BenchmarkName.FOUR_TANK

D2PC = ControllerMethod.D2PC
DEEPC = ControllerMethod.DEEPC
RDEEPC = ControllerMethod.RDEEPC


@dataclass(frozen=True)
class TableDefinition:
    """
    Rows x columns of experiment fields for one table

    cells maps (row label, column label) to the ExperimentSpec fields of
    that cell, trial settings excluded.
    """

    table_id: int
    title: str
    benchmark: BenchmarkName
    rows: Tuple[str, ...]
    columns: Tuple[str, ...]
    cells: Dict[Tuple[str, str], Dict[str, Any]] = field(repr=False)

    def spec(
        self,
        row: str,
        column: str,
        trials: Optional[int] = None,
        n_sim: Optional[int] = None,
        seed: Optional[int] = None,
    ) -> ExperimentSpec:
        fields = dict(self.cells[(row, column)])
        fields["benchmark"] = self.benchmark
        if trials is not None:
            fields["trials"] = trials
        if n_sim is not None:
            fields["n_sim"] = n_sim
        if seed is not None:
            fields["seed"] = seed
        return ExperimentSpec.create(**fields)


@dataclass(frozen=True)
class TableResult:
    definition: TableDefinition
    results: Dict[Tuple[str, str], ExperimentResult]


def _noise_label(noise: float) -> str:
    return f"A_n={noise:g}"


def _noise_grid(
    table_id: int,
    title: str,
    bench: BenchmarkName,
    noises: List[float],
    columns: List[Tuple[str, Dict[str, Any]]],
) -> TableDefinition:
    """Rows are noise levels; every column holds fixed method parameters"""
    rows = tuple(_noise_label(noise) for noise in noises)
    cells = {
        (_noise_label(noise), label): {**fields, "noise": noise}
        for noise in noises
        for label, fields in columns
    }
    return TableDefinition(table_id, title, bench, rows, tuple(c for c, _ in columns), cells)


def _method_grid(
    table_id: int,
    title: str,
    bench: BenchmarkName,
    noise: float,
    rows: List[Tuple[str, Dict[str, Any]]],
    column_key: str,
    column_values: List[int],
) -> TableDefinition:
    """Rows are methods; columns sweep a single integer parameter"""
    columns = tuple(f"{column_key}={value}" for value in column_values)
    cells = {
        (label, f"{column_key}={value}"): {**fields, column_key: value, "noise": noise}
        for label, fields in rows
        for value in column_values
    }
    return TableDefinition(table_id, title, bench, tuple(r for r, _ in rows), columns, cells)


def _deepc(t_ini: int, q: int = 1) -> Dict[str, Any]:
    return {"method": DEEPC, "t_ini": t_ini, "q": q}


def _rdeepc(t_ini: int, q: int = 1) -> Dict[str, Any]:
    return {"method": RDEEPC, "t_ini": t_ini, "q": q}


def _d2pc(nbar: int, n_d: int = 1) -> Dict[str, Any]:
    return {"method": D2PC, "nbar": nbar, "n_d": n_d}


def _build_tables() -> Dict[int, TableDefinition]:
    tables = [
        _noise_grid(
            1,
            "Noise-free inverted pendulum: DeePC with q episodes vs D2PC",
            PENDULUM,
            [0.0],
            [(f"DeePC q={q}", _deepc(4, q)) for q in (1, 3, 5, 10)]
            + [("D2PC nbar=4", _d2pc(4))],
        ),
        _noise_grid(
            2,
            "Noisy inverted pendulum",
            PENDULUM,
            [1e-4],
            [(f"DeePC q={q}", _deepc(4, q)) for q in (5, 10)]
            + [(f"rDeePC q={q}", _rdeepc(4, q)) for q in (5, 10)]
            + [("D2PC nbar=10 N_d=50", _d2pc(10, 50))],
        ),
        _noise_grid(
            3,
            "D2PC on the noisy inverted pendulum for various nbar",
            PENDULUM,
            [1e-4],
            [(f"nbar={nbar}", _d2pc(nbar, 50)) for nbar in (4, 6, 8, 10, 12, 14)],
        ),
        _noise_grid(
            4,
            "Two-mass system: DeePC, rDeePC and D2PC",
            TWO_MASS,
            [1e-8, 1e-4, 1e-2, 1e-1],
            [(f"DeePC T_ini={t}", _deepc(t)) for t in (4, 15)]
            + [(f"rDeePC T_ini={t}", _rdeepc(t)) for t in (4, 15)]
            + [("D2PC nbar=20", _d2pc(20))],
        ),
        _noise_grid(
            5,
            "D2PC on the two-mass system for various nbar",
            TWO_MASS,
            [1e-2, 1e-1],
            [(f"nbar={nbar}", _d2pc(nbar)) for nbar in (4, 6, 8, 10, 15, 20)],
        ),
        _method_grid(
            6,
            "Two-mass system: averaging over N_d episodes",
            TWO_MASS,
            1e-1,
            [("D2PC nbar=20", _d2pc(20)), ("rDeePC T_ini=15", _rdeepc(15))],
            "n_d",
            [1, 5, 20, 50, 500],
        ),
        _noise_grid(
            7,
            "D2PC on the four-tank system for various nbar",
            FOUR_TANK,
            [1e-2, 1e-1],
            [(f"nbar={nbar}", _d2pc(nbar)) for nbar in (4, 6, 10, 15, 20, 30)],
        ),
        _method_grid(
            8,
            "Four-tank system: averaging over N_d episodes",
            FOUR_TANK,
            1e-1,
            [("D2PC nbar=30", _d2pc(30)), ("rDeePC T_ini=30", _rdeepc(30))],
            "n_d",
            [1, 5, 20, 50, 500],
        ),
        _noise_grid(
            9,
            "Four-tank system: DeePC, rDeePC and D2PC",
            FOUR_TANK,
            [1e-7, 1e-3, 1e-2, 1e-1],
            [(f"DeePC T_ini={t}", _deepc(t)) for t in (4, 30)]
            + [(f"rDeePC T_ini={t}", _rdeepc(t)) for t in (4, 30)]
            + [("D2PC nbar=30", _d2pc(30))],
        ),
    ]
    return {table.table_id: table for table in tables}


TABLES: Dict[int, TableDefinition] = _build_tables()


def get_table(table_id: int) -> TableDefinition:
    try:
        return TABLES[table_id]
    except KeyError:
        raise BenchmarkNotFoundError(
            f"unknown table {table_id}; available: {', '.join(str(k) for k in sorted(TABLES))}"
        ) from None


def run_table(
    table_id: int,
    trials: Optional[int] = None,
    n_sim: Optional[int] = None,
    seed: Optional[int] = None,
    workers: Optional[int] = None,
    settings: Optional[QpSettings] = None,
    on_cell: Optional[Callable[[str, str, ExperimentResult], None]] = None,
) -> TableResult:
    """
    Run every cell of a table

    All specs are validated before the first trial starts.
    """
    definition = get_table(table_id)
    specs = {
        (row, column): definition.spec(row, column, trials, n_sim, seed)
        for row in definition.rows
        for column in definition.columns
    }

    results: Dict[Tuple[str, str], ExperimentResult] = {}
    for index, ((row, column), spec) in enumerate(specs.items(), start=1):
        logger.info("Table %d cell %d/%d: %s / %s", table_id, index, len(specs), row, column)
        result = run_experiment(spec, workers=workers, settings=settings)
        results[(row, column)] = result
        if on_cell is not None:
            on_cell(row, column, result)
    return TableResult(definition=definition, results=results)


def reproduce_table(
    table_id: int,
    out_dir: Optional[Union[str, Path]] = None,
    trials: Optional[int] = None,
    n_sim: Optional[int] = None,
    seed: Optional[int] = None,
    workers: Optional[int] = None,
    settings: Optional[QpSettings] = None,
    on_cell: Optional[Callable[[str, str, ExperimentResult], None]] = None,
) -> Path:
    """
    Run a table and write it as table_<id>.csv

    Args:
        table_id: 1 to 9
        out_dir: Output directory (defaults to config.OUTPUT_DIR)
        trials: Trials per cell
        n_sim: Closed-loop length (defaults to the benchmark's)
        seed: Base seed
        workers: Trial threads per cell
        settings: Solver settings
        on_cell: Progress callback

    Returns:
        Path of the written CSV
    """
    settings = settings or QpSettings()
    table = run_table(table_id, trials, n_sim, seed, workers, settings, on_cell)
    definition = table.definition
    first = next(iter(table.results.values())).spec
    metadata = {
        "table": definition.table_id,
        "title": definition.title,
        "benchmark": definition.benchmark.value,
        "seed": first.seed,
        "trials": first.trials,
        "n_sim": first.n_sim or benchmark(definition.benchmark).defaults.n_sim,
        **{f"qp_{key}": value for key, value in settings.model_dump().items()},
    }
    out_dir = Path(out_dir) if out_dir is not None else Path(config.OUTPUT_DIR)
    return write_table_csv(table, out_dir / f"table_{table_id}.csv", metadata)
