"""Tests for the model-based oracle"""

import numpy as np

from backend.app.controllers import ControllerConfig, MpcController, mpc_step, run_closed_loop
from backend.app.plant import ReferenceSignal


class TestMpcStep:
    """Test single steps"""

    def test_origin_gives_zero_input(self, two_mass):
        """Test r = 0 and x = 0 give u = 0"""
        config = ControllerConfig.from_benchmark(two_mass.defaults)
        action = mpc_step(two_mass.system, np.zeros(4), config, np.zeros(config.horizon))
        assert action.ok
        np.testing.assert_allclose(action.u, 0.0, atol=1e-8)

    def test_first_input_of_plan(self, two_mass):
        """Test the action is the first entry of the solved sequence"""
        config = ControllerConfig.from_benchmark(two_mass.defaults)
        action = mpc_step(two_mass.system, np.zeros(4), config, np.ones(config.horizon))
        assert action.u.shape == (1,)
        assert action.u[0] == action.solution.z[0]


class TestMpcClosedLoop:
    """Test the nominal loops"""

    def test_pendulum_converges_within_bounds(self, pendulum):
        """Test the unit step is tracked without violating |u| <= 20"""
        config = ControllerConfig.from_benchmark(pendulum.defaults)
        controller = MpcController(config, pendulum.system)
        trajectory = run_closed_loop(
            pendulum.system, controller, pendulum.defaults.reference, n_sim=80
        )
        assert not trajectory.failed
        assert abs(trajectory.true_outputs[-1, 0] - 1.0) < 0.01
        assert np.max(np.abs(trajectory.inputs)) <= 20.0 + 1e-6

    def test_four_tank_settles(self, four_tank):
        """Test both levels come to rest near the setpoint"""
        config = ControllerConfig.from_benchmark(four_tank.defaults)
        controller = MpcController(config, four_tank.system)
        trajectory = run_closed_loop(
            four_tank.system, controller, four_tank.defaults.reference, n_sim=300
        )
        assert not trajectory.failed
        y = trajectory.true_outputs
        np.testing.assert_allclose(y[-1], y[-2], atol=1e-4)
        assert np.all(np.abs(y[-1] - [0.65, 0.77]) < 0.2)

    def test_warm_start_kept_between_steps(self, two_mass):
        """Test a solved step stores its solution for the next one"""
        config = ControllerConfig.from_benchmark(two_mass.defaults)
        controller = MpcController(config, two_mass.system)
        controller.step(0, ReferenceSignal.step([1.0]), np.zeros(4))
        assert controller.state.warm_start is not None
