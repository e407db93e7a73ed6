"""Seeded experiments, metrics and table reproduction"""

from .metrics import NOT_AVAILABLE, TableCell, compute_mae
from .experiment import (
    ExperimentResult,
    ExperimentSpec,
    TrialResult,
    build_controller,
    clear_nominal_cache,
    nominal_trajectory,
    run_experiment,
    run_trial,
    trial_generators,
    validate_spec,
)
from .export import write_experiment_csv, write_table_csv
from .tables import TABLES, TableDefinition, TableResult, get_table, reproduce_table, run_table

__all__ = [
    "NOT_AVAILABLE",
    "TableCell",
    "compute_mae",
    "ExperimentResult",
    "ExperimentSpec",
    "TrialResult",
    "build_controller",
    "clear_nominal_cache",
    "nominal_trajectory",
    "run_experiment",
    "run_trial",
    "trial_generators",
    "validate_spec",
    "write_experiment_csv",
    "write_table_csv",
    "TABLES",
    "TableDefinition",
    "TableResult",
    "get_table",
    "reproduce_table",
    "run_table",
]
