"""Tests for Hankel matrices and persistent excitation"""

import numpy as np
import pytest

from backend.app.errors import InsufficientDataError, InvalidInputError
from backend.app.numerics import hankel, is_persistently_exciting, numeric_rank


class TestHankel:
    """Test block-Hankel construction"""

    def test_scalar_signal(self):
        """Test a scalar signal of length 4 at depth 2"""
        np.testing.assert_array_equal(hankel([1, 2, 3, 4], 2), [[1, 2, 3], [2, 3, 4]])

    def test_constant_signal_has_rank_one(self):
        """Test a constant signal yields a rank-one matrix"""
        H = hankel([5, 5, 5], 2)
        np.testing.assert_array_equal(H, [[5, 5], [5, 5]])
        assert numeric_rank(H).numeric_rank == 1

    def test_vector_signal_stacks_blocks(self):
        """Test two-dimensional samples are stacked as blocks"""
        H = hankel([[1, 0], [0, 1], [1, 1]], 2)
        np.testing.assert_array_equal(H, [[1, 0], [0, 1], [0, 1], [1, 1]])

    @pytest.mark.parametrize("T,m,L", [(10, 1, 1), (10, 1, 10), (12, 3, 4), (7, 2, 2)])
    def test_dimensions(self, rng, T, m, L):
        """Test the shape is (m*L) x (T-L+1)"""
        assert hankel(rng.standard_normal((T, m)), L).shape == (m * L, T - L + 1)

    def test_columns_are_windows(self, rng):
        """Test column k equals col(u(k), ..., u(k+L-1))"""
        signal = rng.standard_normal((9, 2))
        H = hankel(signal, 3)
        for k in range(H.shape[1]):
            np.testing.assert_array_equal(H[:, k], signal[k:k + 3].reshape(-1))

    def test_short_signal(self):
        """Test a signal shorter than the depth raises InsufficientDataError"""
        with pytest.raises(InsufficientDataError):
            hankel([1.0, 2.0], 3)

    def test_zero_depth(self):
        """Test L = 0 is refused"""
        with pytest.raises(InvalidInputError):
            hankel([1.0, 2.0], 0)


class TestPersistentExcitation:
    """Test the persistent-excitation check"""

    def test_binary_sequence_is_exciting(self):
        """Test a hand-checked sequence of order 2"""
        exciting, report = is_persistently_exciting([1, 0, 0, 1, 1, 0, 1], 2)
        assert exciting
        assert report.numeric_rank == 2

    def test_constant_signal_is_not_exciting(self):
        """Test a constant signal fails at order 2"""
        exciting, _ = is_persistently_exciting([3.0] * 10, 2)
        assert not exciting

    @pytest.mark.parametrize("L", [2, 3, 5, 8])
    def test_too_short_signal(self, rng, L):
        """Test T = 2L - 2 violates the length condition for scalar inputs"""
        exciting, _ = is_persistently_exciting(rng.uniform(-1, 1, 2 * L - 2), L)
        assert not exciting

    def test_shorter_than_depth(self):
        """Test a signal shorter than L returns False with an empty report"""
        exciting, report = is_persistently_exciting([1.0, 2.0], 5)
        assert not exciting
        assert report.numeric_rank == 0

    def test_order_is_monotone(self, rng):
        """Test excitation of order L implies every lower order"""
        signal = rng.uniform(-1, 1, (40, 2))
        exciting, _ = is_persistently_exciting(signal, 9)
        assert exciting
        for L in range(1, 9):
            assert is_persistently_exciting(signal, L)[0]
