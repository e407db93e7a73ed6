"""Tests for controller configuration and rolling state"""

import numpy as np
import pytest

from backend.app.controllers import ControllerConfig, ControllerState
from backend.app.errors import InvalidInputError


class TestControllerConfig:
    """Test weight and bound validation"""

    def test_scalar_weights(self):
        """Test scalars become 1x1 matrices"""
        config = ControllerConfig(horizon=5, Q=2.0, R=1.0)
        assert config.Q.shape == (1, 1)
        assert (config.m, config.p) == (1, 1)
        assert config.input_bounds is None

    def test_from_benchmark(self, two_mass, four_tank):
        """Test benchmark defaults carry over"""
        config = ControllerConfig.from_benchmark(two_mass.defaults)
        assert config.horizon == 20
        np.testing.assert_array_equal(config.u_max, [2.0])
        assert ControllerConfig.from_benchmark(four_tank.defaults).input_bounds is None

    @pytest.mark.parametrize(
        "fields",
        [
            {"horizon": 0, "Q": 1.0, "R": 1.0},
            {"horizon": 3, "Q": -1.0, "R": 1.0},
            {"horizon": 3, "Q": 1.0, "R": 0.0},
            {"horizon": 3, "Q": [[1.0, 2.0], [0.0, 1.0]], "R": 1.0},
            {"horizon": 3, "Q": 1.0, "R": 1.0, "u_min": 1.0, "u_max": -1.0},
        ],
    )
    def test_invalid(self, fields):
        """Test invalid horizons, weights and bounds raise InvalidInputError"""
        with pytest.raises(InvalidInputError):
            ControllerConfig(**fields)

    def test_project_input(self):
        """Test inputs are clipped onto one-sided bounds"""
        config = ControllerConfig(horizon=1, Q=1.0, R=1.0, u_max=0.5)
        np.testing.assert_array_equal(config.project_input(np.array([-3.0])), [-3.0])
        np.testing.assert_array_equal(config.project_input(np.array([3.0])), [0.5])


class TestControllerState:
    """Test the rolling history"""

    def test_starts_zero_padded(self):
        """Test a fresh state holds zeros"""
        state = ControllerState.zeros(3, 2, 1)
        assert state.inputs.shape == (3, 2)
        assert not state.outputs.any()

    def test_record_keeps_newest_last(self):
        """Test record drops the oldest sample"""
        state = ControllerState.zeros(2, 1, 1)
        for k in range(3):
            state.record([k], [10 * k])
        np.testing.assert_array_equal(state.inputs[:, 0], [1, 2])
        np.testing.assert_array_equal(state.outputs[:, 0], [10, 20])
        assert state.steps == 3

    def test_past_window(self):
        """Test past_inputs returns the most recent samples"""
        state = ControllerState.zeros(4, 1, 1)
        for k in range(4):
            state.record([k], [k])
        np.testing.assert_array_equal(state.past_inputs(2)[:, 0], [2, 3])

    def test_zero_depth(self):
        """Test a history-free state only counts steps"""
        state = ControllerState.zeros(0, 1, 1)
        state.record([1.0], [2.0])
        assert state.depth == 0
        assert state.steps == 1
