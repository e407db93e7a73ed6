"""Tests for table definitions and CSV reproduction"""

import csv

import pytest

from backend.app.controllers import ControllerMethod
from backend.app.errors import BenchmarkNotFoundError, ConfigurationError
from backend.app.harness import (
    TABLES,
    ExperimentResult,
    TableCell,
    TrialResult,
    get_table,
    reproduce_table,
    run_table,
    write_experiment_csv,
)
from backend.app.harness import tables as tables_module
from backend.app.plant import BenchmarkName


def fake_result(spec, maes):
    trials = [
        TrialResult(index=i, seed=spec.seed + i, mae=mae, failed=mae is None)
        for i, mae in enumerate(maes)
    ]
    return ExperimentResult(spec=spec, cell=TableCell.from_trials(maes), trials=trials)


def read_csv(path):
    with open(path, newline="") as handle:
        lines = handle.read().splitlines()
    metadata = dict(line[2:].split("=", 1) for line in lines if line.startswith("# "))
    rows = list(csv.reader(line for line in lines if not line.startswith("# ")))
    return metadata, rows


class TestTableDefinitions:
    """Test the registered grids"""

    def test_registry(self):
        """Test tables 1 to 9 are registered"""
        assert sorted(TABLES) == list(range(1, 10))

    def test_unknown_table(self):
        """Test an unknown id raises BenchmarkNotFoundError"""
        with pytest.raises(BenchmarkNotFoundError):
            get_table(42)

    def test_two_mass_nbar_grid(self):
        """Test table 5 sweeps nbar over two noise levels"""
        table = get_table(5)
        assert table.benchmark == BenchmarkName.TWO_MASS
        assert table.rows == ("A_n=0.01", "A_n=0.1")
        assert table.columns == tuple(f"nbar={n}" for n in (4, 6, 8, 10, 15, 20))
        spec = table.spec("A_n=0.1", "nbar=15")
        assert (spec.method, spec.nbar, spec.noise) == (ControllerMethod.D2PC, 15, 0.1)

    def test_four_tank_nbar_grid(self):
        """Test table 7 covers nbar up to 30 on the four-tank plant"""
        table = get_table(7)
        assert table.benchmark == BenchmarkName.FOUR_TANK
        assert table.columns[-1] == "nbar=30"
        assert len(table.rows) * len(table.columns) == 12

    def test_four_tank_episode_grid(self):
        """Test table 8 sweeps N_d for D2PC and rDeePC"""
        table = get_table(8)
        assert table.rows == ("D2PC nbar=30", "rDeePC T_ini=30")
        assert table.columns == tuple(f"n_d={n}" for n in (1, 5, 20, 50, 500))
        d2pc = table.spec("D2PC nbar=30", "n_d=500")
        rdeepc = table.spec("rDeePC T_ini=30", "n_d=5")
        assert (d2pc.nbar, d2pc.n_d, d2pc.noise) == (30, 500, 0.1)
        assert (rdeepc.method, rdeepc.t_ini, rdeepc.n_d) == (ControllerMethod.RDEEPC, 30, 5)

    def test_pendulum_deepc_columns(self):
        """Test table 1 compares DeePC episode counts with D2PC"""
        table = get_table(1)
        spec = table.spec("A_n=0", "DeePC q=5")
        assert (spec.method, spec.t_ini, spec.q, spec.noise) == (ControllerMethod.DEEPC, 4, 5, 0)
        assert table.spec("A_n=0", "D2PC nbar=4").nbar == 4

    def test_trial_overrides(self):
        """Test trials, n_sim and seed reach the spec"""
        spec = get_table(4).spec("A_n=0.01", "D2PC nbar=20", trials=2, n_sim=50, seed=9)
        assert (spec.trials, spec.n_sim, spec.seed) == (2, 50, 9)

    @pytest.mark.parametrize("table_id", sorted(TABLES))
    def test_every_cell_builds(self, table_id):
        """Test every cell of every table is a valid spec"""
        table = get_table(table_id)
        for row in table.rows:
            for column in table.columns:
                table.spec(row, column)


class TestRunTable:
    """Test table execution with the experiments stubbed out"""

    def test_runs_every_cell(self, mocker):
        """Test one experiment per cell and a callback per cell"""
        run = mocker.patch.object(
            tables_module, "run_experiment", side_effect=lambda spec, **_: fake_result(spec, [0.1])
        )
        seen = []
        result = run_table(6, trials=1, on_cell=lambda row, column, _: seen.append((row, column)))
        assert run.call_count == 10
        assert len(result.results) == 10
        assert seen[0] == ("D2PC nbar=20", "n_d=1")

    def test_invalid_cell_stops_before_running(self, mocker):
        """Test a bad override fails before the first experiment"""
        run = mocker.patch.object(tables_module, "run_experiment")
        with pytest.raises(ConfigurationError):
            run_table(5, trials=0)
        run.assert_not_called()


class TestReproduceTable:
    """Test table CSV output"""

    def test_writes_layout_and_metadata(self, mocker, tmp_path):
        """Test the CSV mirrors the table grid and records run settings"""

        def stub(spec, **_):
            maes = [None, None] if spec.q == 5 else [0.0005, 0.0002]
            return fake_result(spec, maes)

        mocker.patch.object(tables_module, "run_experiment", side_effect=stub)
        path = reproduce_table(1, out_dir=tmp_path, trials=2, n_sim=30, seed=4)

        assert path == tmp_path / "table_1.csv"
        metadata, rows = read_csv(path)
        assert metadata["table"] == "1"
        assert metadata["benchmark"] == "inverted_pendulum"
        assert metadata["seed"] == "4"
        assert metadata["trials"] == "2"
        assert metadata["n_sim"] == "30"
        assert metadata["qp_max_iter"] == "10000"

        header, data = rows[0], rows[1:]
        assert header[:3] == ["", "DeePC q=1 MAE", "DeePC q=1 FR"]
        assert len(data) == 1
        line = dict(zip(header, data[0]))
        assert line["DeePC q=5 MAE"] == "N.A."
        assert line["DeePC q=5 FR"] == "1"
        assert line["D2PC nbar=4 MAE"] == "<0.001"
        assert line["D2PC nbar=4 FR"] == "0"

    def test_default_n_sim_from_benchmark(self, mocker, tmp_path):
        """Test the metadata falls back to the benchmark's closed-loop length"""
        mocker.patch.object(
            tables_module, "run_experiment", side_effect=lambda spec, **_: fake_result(spec, [0.2])
        )
        metadata, _ = read_csv(reproduce_table(3, out_dir=tmp_path, trials=1))
        assert metadata["n_sim"] == "80"


class TestWriteExperimentCsv:
    """Test per-trial CSV output"""

    def test_trial_rows(self, tmp_path):
        """Test failed trials print N.A. and the spec goes in the metadata"""
        spec = get_table(5).spec("A_n=0.01", "nbar=4", trials=2, seed=3)
        path = write_experiment_csv(fake_result(spec, [0.25, None]), tmp_path / "exp.csv")
        metadata, rows = read_csv(path)
        assert metadata["method"] == "d2pc"
        assert metadata["failure_ratio"] == "0.5"
        assert rows[0] == ["trial", "seed", "failed", "failure_step", "mae"]
        assert rows[1] == ["0", "3", "0", "", "0.25"]
        assert rows[2] == ["1", "4", "1", "", "N.A."]
