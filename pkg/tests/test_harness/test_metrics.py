"""Tests for MAE and cell aggregation"""

import numpy as np
import pytest

from backend.app.errors import InvalidInputError
from backend.app.harness import NOT_AVAILABLE, TableCell, compute_mae


class TestComputeMae:
    """Test the tracking error"""

    def test_identical(self, rng):
        """Test identical trajectories give zero"""
        y = rng.standard_normal((10, 2))
        assert compute_mae(y, y.copy()) == 0.0

    def test_constant_offset(self):
        """Test y = 1 against y_nom = 0 over 10 steps gives 1"""
        assert compute_mae(np.ones(10), np.zeros(10)) == pytest.approx(1.0)

    def test_euclidean_norm_per_sample(self):
        """Test a single (3, 4) deviation contributes 5 / N"""
        y = np.zeros((10, 2))
        y[3] = [3.0, 4.0]
        assert compute_mae(y, np.zeros((10, 2))) == pytest.approx(0.5)

    def test_length_mismatch(self):
        """Test trajectories of different lengths raise InvalidInputError"""
        with pytest.raises(InvalidInputError):
            compute_mae(np.zeros(5), np.zeros(6))

    def test_empty(self):
        """Test empty trajectories raise InvalidInputError"""
        with pytest.raises(InvalidInputError):
            compute_mae(np.zeros(0), np.zeros(0))


class TestTableCell:
    """Test per-cell aggregation"""

    def test_mean_over_successful_trials(self):
        """Test failed trials are excluded from the mean"""
        cell = TableCell.from_trials([0.1, None, 0.3, None])
        assert cell.mean_mae == pytest.approx(0.2)
        assert cell.failure_ratio == 0.5
        assert cell.trials == 4

    def test_all_failed(self):
        """Test FR = 1 reports N.A."""
        cell = TableCell.from_trials([None] * 10)
        assert cell.mean_mae is None
        assert cell.mae_text == NOT_AVAILABLE
        assert cell.fr_text == "1"

    def test_text_formats(self):
        """Test small MAEs print as <0.001 and others with three decimals"""
        assert TableCell.from_trials([1e-5]).mae_text == "<0.001"
        assert TableCell.from_trials([0.0654]).mae_text == "0.065"
        assert TableCell.from_trials([0.1, None]).fr_text == "0.5"
        assert TableCell.from_trials([0.1]).fr_text == "0"

    def test_no_trials(self):
        """Test an empty trial list raises InvalidInputError"""
        with pytest.raises(InvalidInputError):
            TableCell.from_trials([])
