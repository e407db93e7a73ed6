"""CSV writers for tables and experiments"""

import csv
from pathlib import Path
from typing import TYPE_CHECKING, Any, Dict, Optional, TextIO, Union

from .metrics import NOT_AVAILABLE

if TYPE_CHECKING:
    from .experiment import ExperimentResult
    from .tables import TableResult


def _write_metadata(handle: TextIO, metadata: Optional[Dict[str, Any]]) -> None:
    for key, value in (metadata or {}).items():
        handle.write(f"# {key}={value}\n")


def write_table_csv(
    table: "TableResult",
    path: Union[str, Path],
    metadata: Optional[Dict[str, Any]] = None,
) -> Path:
    """
    Write a table in its published layout

    One row per table row; each column contributes '<column> MAE' and
    '<column> FR'. Metadata lines precede the header as '# key=value'.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    definition = table.definition
    with open(path, "w", newline="") as handle:
        _write_metadata(handle, metadata)
        writer = csv.writer(handle)
        header = [""]
        for column in definition.columns:
            header += [f"{column} MAE", f"{column} FR"]
        writer.writerow(header)
        for row in definition.rows:
            line = [row]
            for column in definition.columns:
                cell = table.results[(row, column)].cell
                line += [cell.mae_text, cell.fr_text]
            writer.writerow(line)
    return path


def write_experiment_csv(
    result: "ExperimentResult",
    path: Union[str, Path],
    metadata: Optional[Dict[str, Any]] = None,
) -> Path:
    """Write one row per trial; the spec and aggregates go in the metadata"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    spec = result.spec
    header = {
        **spec.model_dump(mode="json"),
        "mean_mae": result.cell.mae_text,
        "failure_ratio": result.cell.fr_text,
        **(metadata or {}),
    }
    with open(path, "w", newline="") as handle:
        _write_metadata(handle, header)
        writer = csv.writer(handle)
        writer.writerow(["trial", "seed", "failed", "failure_step", "mae"])
        for trial in result.trials:
            failure_step = ""
            if trial.trajectory is not None and trial.trajectory.failure_step is not None:
                failure_step = trial.trajectory.failure_step
            mae = NOT_AVAILABLE if trial.mae is None else f"{trial.mae:.6g}"
            writer.writerow([trial.index, trial.seed, int(trial.failed), failure_step, mae])
    return path
