import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal, assert_raises

from ...networks import init_bundle, transform
from ...nn import finite_difference_check
from .. import (
    LossReport,
    LossWeights,
    change_loss,
    component_deltas,
    decomposer_step,
    discriminator_step,
    generator_step,
    mono_loss,
    reconstructor_step,
    total_generator_loss,
)

UNIT = LossWeights(gamma=1.0, kappa=1.0, zeta=1.0, lam=1.0, mu=1.0, eta=1.0)


def _setup(seed, n_patterns=2, n_features=6, n=8):
    bundle = init_bundle(
        n_patterns, n_features, seed=seed, hidden=(5, 4), clip_bound=None
    )
    rng = np.random.default_rng(seed + 1000)
    x = rng.standard_normal((n, n_features))
    y = rng.standard_normal((n, n_features)) + 0.5
    z = rng.uniform(size=(n, n_patterns))
    z_prime = z + (1 - z) * rng.uniform(size=z.shape)
    z_cn = 0.05 * rng.uniform(size=z.shape)
    return bundle, x, y, z, z_prime, z_cn


class TestLossWeights:
    def test_defaults(self):
        w = LossWeights()

        assert (w.gamma, w.kappa, w.zeta, w.mu, w.eta) == (6.0, 80.0, 80.0, 500.0, 6.0)

    def test_scaled(self):
        w = LossWeights(lam=0.4).scaled(mu=0.5, eta=1.5)

        assert (w.mu, w.eta, w.lam, w.gamma) == (250.0, 9.0, 0.4, 6.0)

    def test_without(self):
        w = LossWeights().without("mu", "zeta")

        assert (w.mu, w.zeta, w.kappa) == (0.0, 0.0, 80.0)

    def test_error_unknown(self):
        assert_raises(ValueError, LossWeights().without, "alpha")
        assert_raises(ValueError, LossWeights().scaled, beta=2.0)

    @pytest.mark.parametrize("value", [-1.0, np.nan, np.inf])
    def test_error_value(self, value):
        assert_raises(ValueError, LossWeights, gamma=value)


class TestTotalGeneratorLoss:
    def _terms(self, **kwargs):
        terms = dict(
            gan_d=0.0, gan_f=0.9, change=0.0, decom=0.0,
            recons=0.0, ortho=0.0, mono=0.0, cn=0.0, total_f=0.0,
        )
        terms.update(kwargs)
        return LossReport(**terms)

    def test_regularizers_zero(self):
        assert total_generator_loss(self._terms(), LossWeights()) == 0.9

    def test_gamma_only(self):
        w = LossWeights().without("kappa", "zeta", "lam", "mu", "eta")
        total = total_generator_loss(self._terms(change=0.5, decom=2.0), w)

        assert_allclose(total, 0.9 + 3.0, rtol=0, atol=1e-12)

    def test_defaults(self):
        terms = self._terms(change=1, decom=1, recons=1, ortho=1, mono=1, cn=1)

        assert_allclose(total_generator_loss(terms, LossWeights(lam=0.6)), 0.9 + 672.6)


class TestComponentDeltas:
    def test_single_component(self):
        bundle, x, _, z, _, _ = _setup(0, n_patterns=1)
        (q,) = component_deltas(bundle, x, z)

        assert_array_equal(q, transform(bundle, x, z) - x)

    def test_masking(self):
        bundle, x, _, z, _, _ = _setup(1, n_patterns=3)
        q = component_deltas(bundle, x, z)

        assert len(q) == 3
        for i in range(3):
            masked = np.zeros_like(z)
            masked[:, i] = z[:, i]
            assert_array_equal(q[i], transform(bundle, x, masked) - x)

    def test_error_latent(self):
        bundle, x, _, z, _, _ = _setup(2)
        assert_raises(ValueError, component_deltas, bundle, x, z + 1.0)


class TestGeneratorStep:
    def test_report(self):
        bundle, x, _, z, z_prime, _ = _setup(3)
        z_cn = np.zeros_like(z)
        report, grads = generator_step(
            bundle, x, z, z_prime, z_cn, LossWeights(), gan_d=1.3
        )
        y_syn = transform(bundle, x, z)

        assert report.gan_d == 1.3
        assert_allclose(report.change, change_loss(x, y_syn), rtol=1e-12)
        assert_allclose(
            report.mono, mono_loss(x, y_syn, transform(bundle, x, z_prime)), rtol=1e-12
        )
        assert_allclose(report.total_f, total_generator_loss(report, LossWeights()))
        assert [g.shape for g in grads] == [p.shape for p in bundle.f.params()]
        assert report.is_finite()

    @pytest.mark.parametrize("seed", range(10))
    def test_finite_differences(self, seed):
        bundle, x, _, z, z_prime, z_cn = _setup(seed)

        def loss():
            return generator_step(bundle, x, z, z_prime, z_cn, UNIT)[0].total_f

        _, grads = generator_step(bundle, x, z, z_prime, z_cn, UNIT)

        assert finite_difference_check(bundle.f, loss, grads) < 1e-4

    def test_finite_differences_default_weights(self):
        bundle, x, _, z, z_prime, z_cn = _setup(42)
        weights = LossWeights(lam=0.4)

        def loss():
            return generator_step(bundle, x, z, z_prime, z_cn, weights)[0].total_f

        _, grads = generator_step(bundle, x, z, z_prime, z_cn, weights)

        assert finite_difference_check(bundle.f, loss, grads) < 1e-4

    def test_only_f_gradients(self):
        bundle, x, _, z, z_prime, z_cn = _setup(4)
        before = {
            k: [p.copy() for p in net.params()] for k, net in bundle.networks().items()
        }
        generator_step(bundle, x, z, z_prime, z_cn, LossWeights())

        for name, net in bundle.networks().items():
            for p, b in zip(net.params(), before[name]):
                assert_array_equal(p, b)


class TestNetworkSteps:
    @pytest.mark.parametrize("seed", range(10))
    def test_discriminator(self, seed):
        bundle, x, y, z, _, _ = _setup(seed)

        def loss():
            return discriminator_step(bundle, x, y, z)[0]

        value, grads = discriminator_step(bundle, x, y, z)

        assert value > 0
        assert finite_difference_check(bundle.d, loss, grads) < 1e-4

    @pytest.mark.parametrize("seed", range(10))
    def test_decomposer(self, seed):
        bundle, x, _, z, _, _ = _setup(seed)

        def loss():
            return decomposer_step(bundle, x, z)[0]

        _, grads = decomposer_step(bundle, x, z)

        assert finite_difference_check(bundle.g1, loss, grads) < 1e-4

    @pytest.mark.parametrize("seed", range(10))
    def test_reconstructor(self, seed):
        bundle, x, _, z, _, _ = _setup(seed)

        def loss():
            return reconstructor_step(bundle, x, z)[0]

        _, grads = reconstructor_step(bundle, x, z)

        assert finite_difference_check(bundle.g2, loss, grads) < 1e-4
