"""Tests for the horizon predictor"""

import numpy as np
import pytest

from backend.app.datadriven import DataDrivenModel, build_predictor, identify, propagate
from backend.app.errors import InvalidInputError
from backend.app.plant import collect_episode, simulate


def random_model(rng, nbar: int, m: int, p: int) -> DataDrivenModel:
    d = (1 + m) * nbar
    A_blocks = []
    for _ in range(p):
        A = rng.standard_normal((d, d))
        A_blocks.append(0.9 * A / np.max(np.abs(np.linalg.eigvals(A))))
    B_blocks = tuple(rng.standard_normal((d, m)) for _ in range(p))
    return DataDrivenModel(A_blocks=tuple(A_blocks), B_blocks=B_blocks, nbar=nbar, m=m)


class TestBuildPredictor:
    """Test F, G and the output selector"""

    def test_single_step(self, rng):
        """Test N = 1 gives F = A and G = B"""
        model = random_model(rng, 2, 1, 1)
        predictor = build_predictor(model, 1)
        np.testing.assert_array_equal(predictor.F, model.A_blocks[0])
        np.testing.assert_array_equal(predictor.G, model.B_blocks[0])

    def test_two_step_toy_model(self):
        """Test G = [[B, 0], [A B, B]] for a 2x2 model"""
        A = np.array([[0.0, 1.0], [0.0, 0.5]])
        B = np.array([[0.0], [1.0]])
        model = DataDrivenModel(A_blocks=(A,), B_blocks=(B,), nbar=1, m=1)
        predictor = build_predictor(model, 2)

        expected = np.block([[B, np.zeros((2, 1))], [A @ B, B]])
        np.testing.assert_array_equal(predictor.G, expected)
        np.testing.assert_array_equal(predictor.F, np.vstack([A, A @ A]))

    def test_selector_has_one_entry_per_row(self, rng):
        """Test every selector row picks exactly one chi entry"""
        predictor = build_predictor(random_model(rng, 3, 2, 2), 5)
        selector = predictor.output_selector
        assert selector.shape == (2 * 5, 2 * 9 * 5)
        np.testing.assert_array_equal(selector.sum(axis=1), np.ones(10))
        assert set(np.unique(selector)) == {0.0, 1.0}

    def test_shared_input_drives_every_channel(self, rng):
        """Test the input map stacks the channel blocks vertically"""
        model = random_model(rng, 2, 2, 3)
        predictor = build_predictor(model, 1)
        np.testing.assert_array_equal(predictor.G, np.vstack(model.B_blocks))

    @pytest.mark.parametrize(
        "nbar,m,p,N", [(1, 1, 1, 1), (2, 1, 1, 10), (3, 2, 2, 15), (2, 2, 3, 30)]
    )
    def test_matches_rolling_propagation(self, rng, nbar, m, p, N):
        """Test predict equals N successive propagate calls"""
        model = random_model(rng, nbar, m, p)
        predictor = build_predictor(model, N)
        chi = rng.standard_normal(model.state_dim)
        u_seq = rng.standard_normal(m * N)

        expected = []
        state = chi
        for k in range(N):
            state = propagate(model, state, u_seq[k * m:(k + 1) * m])
            expected.append(model.output(state))
        predicted = predictor.predict(chi, u_seq)
        scale = 1.0 + np.max(np.abs(expected))
        np.testing.assert_allclose(predicted, np.concatenate(expected), atol=1e-10 * scale)

    def test_phi_and_gamma_compose_prediction(self, rng):
        """Test predict = phi chi + gamma u"""
        predictor = build_predictor(random_model(rng, 2, 1, 2), 4)
        chi = rng.standard_normal(predictor.state_dim)
        u_seq = rng.standard_normal(4)
        np.testing.assert_allclose(
            predictor.predict(chi, u_seq), predictor.phi @ chi + predictor.gamma @ u_seq
        )

    def test_identified_predictor_tracks_plant(self, stable_system, rng):
        """Test an identified predictor forecasts a fresh plant trajectory"""
        nbar, N = 3, 10
        model = identify([collect_episode(stable_system, 40, nbar, rng=rng)], nbar)
        predictor = build_predictor(model, N)
        inputs = rng.uniform(-1, 1, (nbar + N, 1))
        outputs = simulate(stable_system, rng.standard_normal(3), inputs)
        chi = np.concatenate([outputs[:nbar, 0], inputs[:nbar, 0]])
        predicted = predictor.predict(chi, inputs[nbar:, 0])
        np.testing.assert_allclose(predicted, outputs[nbar:, 0], atol=1e-6)

    def test_invalid_horizon(self, rng):
        """Test N = 0 is refused"""
        with pytest.raises(InvalidInputError):
            build_predictor(random_model(rng, 1, 1, 1), 0)

    def test_predict_dimension_checks(self, rng):
        """Test wrong chi or input sizes raise InvalidInputError"""
        predictor = build_predictor(random_model(rng, 1, 1, 1), 3)
        with pytest.raises(InvalidInputError):
            predictor.predict(np.zeros(3), np.zeros(3))
        with pytest.raises(InvalidInputError):
            predictor.predict(np.zeros(2), np.zeros(2))
