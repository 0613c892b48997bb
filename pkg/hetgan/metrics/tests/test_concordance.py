import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_almost_equal, assert_raises

from ...exceptions import UndefinedMetricError
from .. import (
    brute_c_index,
    c_index,
    c_index_matrix,
    pattern_agr_index,
    pattern_c_index,
)


class TestCIndex:
    @pytest.mark.parametrize(
        "pred, truth, expected",
        [
            ([1, 2, 3], [1, 2, 3], 1.0),
            ([3, 2, 1], [1, 2, 3], 0.0),
            ([0.2, 0.1, 0.3, 0.4], [1, 2, 3, 4], 5 / 6),
            ([1, 1, 2], [1, 2, 3], 2.5 / 3),
            ([1, 2, 3], [1, 1, 2], 1.0),
        ],
    )
    def test_values(self, pred, truth, expected):
        assert_almost_equal(c_index(pred, truth), expected, decimal=12)

    def test_brute_force(self):
        rng = np.random.default_rng(0)
        for _ in range(500):
            n = int(rng.integers(2, 201))
            levels = int(rng.integers(2, 2 * n + 2))
            pred = rng.integers(0, levels, size=n).astype(float)
            truth = rng.integers(0, levels, size=n).astype(float)
            if np.all(truth == truth[0]):
                assert_raises(UndefinedMetricError, c_index, pred, truth)
                continue
            assert c_index(pred, truth) == brute_c_index(pred, truth)

    def test_monotone_invariance(self):
        rng = np.random.default_rng(1)
        pred, truth = rng.standard_normal(100), rng.uniform(size=100)

        assert c_index(np.exp(3 * pred) + 2.0, truth) == c_index(pred, truth)

    def test_random_half(self):
        rng = np.random.default_rng(2)
        stat = c_index(rng.uniform(size=2000), rng.uniform(size=2000))
        assert_allclose(stat, 0.5, atol=0.02)


class TestCIndexErrorWarn:
    def test_all_tied(self):
        assert_raises(UndefinedMetricError, c_index, [1, 2, 3], [4, 4, 4])
        assert_raises(UndefinedMetricError, brute_c_index, [1, 2, 3], [4, 4, 4])

    def test_lengths(self):
        assert_raises(ValueError, c_index, [1, 2, 3], [1, 2])
        assert_raises(ValueError, c_index, [1], [1])

    def test_nan(self):
        assert_raises(ValueError, c_index, [1, np.nan, 3], [1, 2, 3])


class TestPatternCIndex:
    def setup_method(self):
        self.truth = np.random.default_rng(0).uniform(size=(200, 3))

    def test_identity(self):
        result = pattern_c_index(self.truth, self.truth)

        assert result.permutation == (0, 1, 2)
        assert result.mean == 1.0

    def test_swapped(self):
        r = self.truth[:, [2, 0, 1]]
        result = pattern_c_index(r, self.truth)

        assert result.permutation == (1, 2, 0)
        assert result.mean == 1.0
        assert_allclose(r[:, list(result.permutation)], self.truth)

    def test_mean_of_values(self):
        r = self.truth + np.random.default_rng(1).normal(0, 0.3, size=self.truth.shape)
        result = pattern_c_index(r, self.truth)

        assert_allclose(result.mean, result.values.mean(), rtol=1e-15)
        assert sorted(result.permutation) == [0, 1, 2]
        stats = c_index_matrix(r, self.truth)
        for k, j in enumerate(result.permutation):
            assert result.values[k] == stats[k, j]

    def test_noise(self):
        rng = np.random.default_rng(2)
        truth = rng.uniform(size=(900, 3))
        result = pattern_c_index(rng.uniform(size=(900, 3)), truth)

        assert_allclose(result.mean, 0.5, atol=0.03)

    @pytest.mark.parametrize("perm", [[1, 0, 2], [2, 1, 0], [1, 2, 0]])
    def test_joint_permutation(self, perm):
        r = self.truth + np.random.default_rng(3).normal(0, 0.2, size=self.truth.shape)
        base = pattern_c_index(r, self.truth)
        permuted = pattern_c_index(r[:, perm], self.truth[:, perm])

        assert permuted.mean == base.mean


class TestPatternCIndexErrorWarn:
    def test_shapes(self):
        assert_raises(ValueError, pattern_c_index, np.ones((5, 2)), np.ones((5, 3)))

    def test_too_many_columns(self):
        r = np.random.default_rng(0).uniform(size=(10, 9))
        assert_raises(ValueError, pattern_c_index, r, r)

    def test_tied_truth_column(self):
        truth = np.random.default_rng(0).uniform(size=(10, 2))
        truth[:, 1] = 0.5
        assert_raises(UndefinedMetricError, pattern_c_index, truth, truth)


class TestPatternAgrIndex:
    def setup_method(self):
        self.r = np.random.default_rng(0).uniform(size=(300, 3))

    def test_self(self):
        assert pattern_agr_index(self.r, self.r).mean == 1.0

    def test_monotone(self):
        assert pattern_agr_index(self.r, self.r ** 3).mean == 1.0

    def test_symmetric(self):
        other = self.r + np.random.default_rng(1).normal(0, 0.3, size=self.r.shape)

        forward = pattern_agr_index(self.r, other).mean
        assert forward == pattern_agr_index(other, self.r).mean

    def test_independent(self):
        other = np.random.default_rng(2).uniform(size=(300, 3))

        assert_allclose(pattern_agr_index(self.r, other).mean, 0.5, atol=0.05)
