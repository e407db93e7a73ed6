"""Tests for chi vectors and data matrices"""

import numpy as np
import pytest

from backend.app.datadriven import build_chi, build_data_matrices, chi_dimension
from backend.app.errors import InsufficientDataError, InvalidInputError
from backend.app.plant import EpisodeData, collect_episode


class TestBuildChi:
    """Test chi flattening"""

    def test_siso_ordering(self):
        """Test outputs come before inputs, oldest first"""
        np.testing.assert_array_equal(build_chi([3, 4], [5, 6], 2), [3, 4, 5, 6])

    def test_two_inputs(self):
        """Test vector inputs are flattened sample by sample"""
        np.testing.assert_array_equal(build_chi([7], [[1, 2]], 1), [7, 1, 2])

    def test_zero_history(self):
        """Test zero histories give the zero vector of dimension (1+m)*nbar"""
        chi = build_chi(np.zeros(3), np.zeros((3, 2)), 3)
        assert chi.shape == (chi_dimension(3, 2),)
        assert not chi.any()

    def test_wrong_history_length(self):
        """Test a short history raises InvalidInputError"""
        with pytest.raises(InvalidInputError):
            build_chi([1.0], [2.0, 3.0], 2)


class TestBuildDataMatrices:
    """Test shifted data matrices"""

    def test_hand_unrolled(self):
        """Test nbar = 1, T = 2 against the definition"""
        a = [10.0, 11.0, 12.0]
        b = [20.0, 21.0, 22.0]
        episode = EpisodeData(inputs=a, outputs=b, initial_offset=1)
        data = build_data_matrices(episode, 0, 1)

        np.testing.assert_array_equal(data.X_minus, [[20, 21], [10, 11]])
        np.testing.assert_array_equal(data.X_plus, [[21, 22], [11, 12]])
        np.testing.assert_array_equal(data.U_minus, [[11, 12]])
        assert data.T == 2

    def test_shift_consistency(self, mimo_system, rng):
        """Test column k of X_plus is chi(k+1), rebuilt from raw samples"""
        nbar = 4
        episode = collect_episode(mimo_system, 40, nbar, rng=rng)
        for channel in range(2):
            data = build_data_matrices(episode, channel, nbar)
            for k in range(data.T):
                t = episode.initial_offset + k + 1
                expected = build_chi(
                    episode.outputs[t - nbar:t, channel], episode.inputs[t - nbar:t], nbar
                )
                np.testing.assert_array_equal(data.X_plus[:, k], expected)
            np.testing.assert_array_equal(data.X_minus[:, 1:], data.X_plus[:, :-1])

    def test_top_row_reaches_into_history(self, stable_system, rng):
        """Test the first row of X_minus starts at y(-nbar)"""
        nbar = 3
        episode = collect_episode(stable_system, 20, nbar, rng=rng)
        data = build_data_matrices(episode, 0, nbar)
        np.testing.assert_array_equal(data.X_minus[0], episode.outputs[:data.T, 0])

    def test_stacked_shape(self, mimo_system, rng):
        """Test J stacks X_minus over U_minus"""
        episode = collect_episode(mimo_system, 30, 2, rng=rng)
        data = build_data_matrices(episode, 1, 2)
        assert data.J.shape == (chi_dimension(2, 2) + 2, 30)

    def test_smaller_nbar_than_offset(self, stable_system, rng):
        """Test an order bound below the reserved history is accepted"""
        episode = collect_episode(stable_system, 30, 5, rng=rng)
        data = build_data_matrices(episode, 0, 3)
        assert data.X_minus.shape == (6, 30)

    def test_offset_too_small(self):
        """Test nbar above the reserved history raises InsufficientDataError"""
        episode = EpisodeData(inputs=np.zeros(10), outputs=np.zeros(10), initial_offset=1)
        with pytest.raises(InsufficientDataError):
            build_data_matrices(episode, 0, 2)

    def test_channel_out_of_range(self, stable_system, rng):
        """Test an invalid channel raises InvalidInputError"""
        episode = collect_episode(stable_system, 10, 1, rng=rng)
        with pytest.raises(InvalidInputError):
            build_data_matrices(episode, 1, 1)
