"""Tests for the command-line interface"""

import csv
import importlib

from click.testing import CliRunner

from backend.app.api import cli
from backend.app.harness import (
    ExperimentResult,
    ExperimentSpec,
    TableCell,
    TrialResult,
    get_table,
)

# the package re-exports the click group under the module's name
cli_module = importlib.import_module("backend.app.api.cli")


def fake_result(spec, maes):
    trials = [
        TrialResult(index=i, seed=spec.seed + i, mae=mae, failed=mae is None)
        for i, mae in enumerate(maes)
    ]
    return ExperimentResult(spec=spec, cell=TableCell.from_trials(maes), trials=trials)


class TestSimulate:
    """Test the single closed-loop command"""

    def test_writes_trajectory(self, tmp_path):
        """Test a short D2PC run writes a trajectory with nominal outputs"""
        out = tmp_path / "run.csv"
        result = CliRunner().invoke(
            cli,
            ["simulate", "--method", "d2pc", "--nbar", "6", "--nsim", "20", "--out", str(out)],
        )
        assert result.exit_code == 0, result.output
        assert "MAE" in result.output
        with open(out, newline="") as handle:
            rows = list(csv.reader(handle))
        assert rows[0][4] == "y_nom_1"
        assert len(rows) == 21

    def test_missing_nbar(self):
        """Test d2pc without --nbar exits with an error"""
        result = CliRunner().invoke(cli, ["simulate", "--method", "d2pc"])
        assert result.exit_code == 1
        assert "Error" in result.output


class TestIdentify:
    """Test model identification"""

    def test_simulated_then_recorded(self, tmp_path):
        """Test saved episodes identify the same model when loaded back"""
        episodes = tmp_path / "episodes"
        first = tmp_path / "first.txt"
        runner = CliRunner()
        result = runner.invoke(
            cli,
            ["identify", "--nbar", "4", "--nd", "2", "--save-episodes", str(episodes),
             "--out", str(first)],
        )
        assert result.exit_code == 0, result.output
        assert "Identified model" in result.output

        second = tmp_path / "second.txt"
        result = runner.invoke(
            cli,
            ["identify", "--nbar", "4", "--episode-csv", str(episodes / "episode_0.csv"),
             "--episode-csv", str(episodes / "episode_1.csv"), "--out", str(second)],
        )
        assert result.exit_code == 0, result.output
        assert "2 recorded episode(s)" in result.output
        assert first.read_text() == second.read_text()

    def test_episode_too_short(self, tmp_path):
        """Test an episode length below 4*nbar + 1 exits with an error"""
        result = CliRunner().invoke(
            cli, ["identify", "--nbar", "10", "--episode-length", "20"]
        )
        assert result.exit_code == 1


class TestExperiment:
    """Test trial batteries"""

    def test_reports_cell(self, mocker, tmp_path):
        """Test the command prints MAE and FR and writes per-trial rows"""
        run = mocker.patch.object(
            cli_module,
            "run_experiment",
            side_effect=lambda spec, **_: fake_result(spec, [0.02, None]),
        )
        out = tmp_path / "exp.csv"
        result = CliRunner().invoke(
            cli,
            ["experiment", "--benchmark", "four_tank", "--nbar", "30", "--noise", "0.1",
             "--trials", "2", "--out", str(out)],
        )
        assert result.exit_code == 0, result.output
        spec = run.call_args.args[0]
        assert isinstance(spec, ExperimentSpec)
        assert (spec.nbar, spec.noise, spec.trials) == (30, 0.1, 2)
        assert "0.020" in result.output
        assert "0.5" in result.output
        assert out.exists()

    def test_invalid_spec(self):
        """Test conflicting DeePC options exit with an error"""
        result = CliRunner().invoke(
            cli, ["experiment", "--method", "deepc", "--nd", "3", "--q", "2"]
        )
        assert result.exit_code == 1
        assert "Error" in result.output


class TestTable:
    """Test table reproduction"""

    def test_calls_reproduce_table(self, mocker, tmp_path):
        """Test options are forwarded and the written path is reported"""
        path = tmp_path / "table_5.csv"

        def fake_reproduce(table_id, on_cell=None, **kwargs):
            definition = get_table(table_id)
            for row in definition.rows:
                for column in definition.columns:
                    spec = definition.spec(row, column, trials=1)
                    on_cell(row, column, fake_result(spec, [0.05]))
            return path

        reproduce = mocker.patch.object(cli_module, "reproduce_table", side_effect=fake_reproduce)
        result = CliRunner().invoke(
            cli, ["table", "5", "--trials", "1", "--seed", "3", "--out", str(tmp_path)]
        )
        assert result.exit_code == 0, result.output
        kwargs = reproduce.call_args.kwargs
        assert (kwargs["trials"], kwargs["seed"], kwargs["out_dir"]) == (1, 3, str(tmp_path))
        assert "Table written to" in result.output

    def test_unknown_table(self):
        """Test an unknown id exits with an error"""
        result = CliRunner().invoke(cli, ["table", "12"])
        assert result.exit_code == 1
        assert "unknown table" in result.output


class TestBenchmarks:
    """Test the listing"""

    def test_lists_every_plant(self):
        """Test all benchmarks appear"""
        result = CliRunner().invoke(cli, ["benchmarks"])
        assert result.exit_code == 0
        for name in ("inverted_pendulum", "two_mass", "four_tank"):
            assert name in result.output
