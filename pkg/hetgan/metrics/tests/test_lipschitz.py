import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_raises

from ...networks import init_bundle, reconstruct_indices, transform
from .. import estimate_lipschitz, lemma1_diagnostic, lemma1_slack


class TestLemma1:
    def setup_method(self):
        self.bundle = init_bundle(2, 6, seed=0, hidden=(5, 4))
        self.x = np.random.default_rng(1).standard_normal((30, 6))

    def test_equal_latents(self):
        z = np.array([0.3, 0.6])

        assert lemma1_slack(self.bundle, self.x[0], z, z, 1.0) >= 0

    def test_formula(self):
        x, z1, z2 = self.x[:1], np.array([[0.1, 0.9]]), np.array([[0.7, 0.2]])
        y1, y2 = transform(self.bundle, x, z1), transform(self.bundle, x, z2)
        r1 = reconstruct_indices(self.bundle, y1)
        r2 = reconstruct_indices(self.bundle, y2)
        d = np.linalg.norm
        expected = d(y1 - y2) - (d(z1 - z2) - d(r1 - z1) - d(r2 - z2)) / 2.5

        assert_allclose(
            lemma1_slack(self.bundle, x[0], z1[0], z2[0], 2.5), expected, rtol=1e-12
        )

    def test_rows(self):
        rng = np.random.default_rng(2)
        z1, z2 = rng.uniform(size=(4, 2)), rng.uniform(size=(4, 2))
        slack = lemma1_slack(self.bundle, self.x[:4], z1, z2, 2.0)

        assert slack.shape == (4,)
        single = lemma1_slack(self.bundle, self.x[1], z1[1], z2[1], 2.0)
        assert_allclose(slack[1], single, rtol=1e-12)

    def test_diagnostic(self):
        diag = lemma1_diagnostic(self.bundle, self.x, rng=3, n_triples=500)

        assert diag.slack.shape == (500,)
        assert diag.k2 > 0
        assert diag.min_slack >= -1e-9
        assert diag.violations == 0.0

    def test_estimate(self):
        k2 = estimate_lipschitz(self.bundle, self.x, rng=4, n_pairs=200)
        y_a, y_b = self.x[:1], self.x[1:2]
        r_a = reconstruct_indices(self.bundle, y_a)
        r_b = reconstruct_indices(self.bundle, y_b)
        ratio = np.linalg.norm(r_a - r_b) / np.linalg.norm(y_a - y_b)

        assert k2 > 0
        assert k2 == estimate_lipschitz(self.bundle, self.x, rng=4, n_pairs=200)
        pair_k2 = estimate_lipschitz(self.bundle, self.x[:2], rng=0, n_pairs=5)
        assert_allclose(pair_k2, ratio, rtol=1e-12)


class TestLemma1ErrorWarn:
    def setup_method(self):
        self.bundle = init_bundle(2, 6, seed=0, hidden=(5, 4))

    @pytest.mark.parametrize("k2", [0.0, -1.0])
    def test_k2(self, k2):
        z = np.array([0.3, 0.6])
        assert_raises(ValueError, lemma1_slack, self.bundle, np.zeros(6), z, z, k2)

    def test_one_row(self):
        assert_raises(ValueError, estimate_lipschitz, self.bundle, np.zeros((1, 6)))
