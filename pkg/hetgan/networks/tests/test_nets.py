import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal, assert_raises

from ...nn import finite_difference_check, numerical_gradient
from .. import (
    decompose,
    discriminate,
    init_bundle,
    reconstruct_indices,
    transform,
)

SMALL = dict(n_patterns=2, n_features=6, hidden=(5, 4))


def _small_bundle(seed):
    # unclipped so gradients are not dominated by saturated weights
    return init_bundle(seed=seed, clip_bound=None, **SMALL)


class TestInitBundle:
    def test_shapes(self):
        bundle = init_bundle(3, 139, seed=7)

        assert [layer.weights.shape for layer in bundle.f.encoder_x] == [
            (69, 139),
            (34, 69),
        ]
        assert bundle.f.z_decoder.weights.shape == (34, 3)
        assert [layer.weights.shape for layer in bundle.f.decoder_y] == [
            (69, 34),
            (139, 69),
        ]
        layers = bundle.f.encoder_x + bundle.f.decoder_y
        assert not any(layer.has_bias for layer in layers)
        assert bundle.f.z_decoder.has_bias
        assert [layer.weights.shape for layer in bundle.d.layers] == [
            (69, 139),
            (34, 69),
            (2, 34),
        ]
        assert [layer.activation for layer in bundle.g2.layers] == [
            "leaky_relu",
            "leaky_relu",
            "sigmoid",
        ]

    def test_decomposer_width(self):
        bundle = init_bundle(2, 139, seed=1)

        assert bundle.g1.linear.n_out == 278

    def test_determinism(self):
        a = init_bundle(3, 20, seed=11)
        b = init_bundle(3, 20, seed=11)

        for name, net in a.networks().items():
            for pa, pb in zip(net.params(), b.networks()[name].params()):
                assert_array_equal(pa, pb)

    def test_clipped_after_init(self):
        bundle = init_bundle(1, 2, seed=3)

        for net in (bundle.f, bundle.g1, bundle.g2):
            assert all(np.all(np.abs(p) <= 0.5) for p in net.params())

    @pytest.mark.parametrize("n_features", [1, 35, 200])
    def test_any_width(self, n_features):
        bundle = init_bundle(2, n_features, seed=0)
        x = np.ones((3, n_features))

        assert transform(bundle, x, np.full((3, 2), 0.5)).shape == (3, n_features)
        assert reconstruct_indices(bundle, x).shape == (3, 2)


class TestInitBundleErrorWarn:
    @pytest.mark.parametrize(
        "n_patterns, n_features", [(0, 5), (3, 0), (9, 5), (-1, 5)]
    )
    def test_error_sizes(self, n_patterns, n_features):
        assert_raises(ValueError, init_bundle, n_patterns, n_features, 0)

    def test_error_hidden(self):
        assert_raises(ValueError, init_bundle, 2, 5, 0, (4,))


class TestForwardOps:
    def setup_method(self):
        self.bundle = init_bundle(3, 139, seed=7)
        rng = np.random.default_rng(1)
        self.x = rng.standard_normal((5, 139))
        self.z = rng.uniform(size=(5, 3))

    def test_transform_shape(self):
        assert transform(self.bundle, self.x, self.z).shape == (5, 139)

    def test_transform_identical_rows(self):
        x = np.tile(self.x[:1], (4, 1))
        z = np.tile(self.z[:1], (4, 1))
        y = transform(self.bundle, x, z)

        assert_allclose(y, np.tile(y[:1], (4, 1)), rtol=1e-14, atol=1e-14)

    def test_pure(self):
        assert_array_equal(
            transform(self.bundle, self.x, self.z),
            transform(self.bundle, self.x, self.z),
        )
        assert_array_equal(
            reconstruct_indices(self.bundle, self.x),
            reconstruct_indices(self.bundle, self.x),
        )

    def test_discriminate(self):
        probs = discriminate(self.bundle, 10 * self.x)

        assert probs.shape == (5, 2)
        assert_allclose(probs.sum(axis=1), 1.0, rtol=0, atol=1e-9)
        assert np.all((probs > 0) & (probs < 1))

    def test_decompose(self):
        out = decompose(self.bundle, self.x[:4])

        assert out.shape == (4, 417)
        assert_array_equal(out, decompose(self.bundle, self.x[:4]))

    def test_reconstruct_range(self):
        r = reconstruct_indices(self.bundle, 50 * self.x)

        assert r.shape == (5, 3)
        assert np.all((r > 0) & (r < 1))

    def test_reconstruct_batch_consistency(self):
        r = reconstruct_indices(self.bundle, self.x)
        rows = np.vstack(
            [reconstruct_indices(self.bundle, row[None]) for row in self.x]
        )

        assert_allclose(r, rows, rtol=1e-12, atol=1e-15)

    def test_error_latent_range(self):
        z = self.z.copy()
        z[0, 0] = 1.5
        assert_raises(ValueError, transform, self.bundle, self.x, z)
        z[0, 0] = -0.1
        assert_raises(ValueError, transform, self.bundle, self.x, z)

    def test_error_shapes(self):
        assert_raises(ValueError, transform, self.bundle, self.x, self.z[:3])
        assert_raises(ValueError, transform, self.bundle, self.x[:, :10], self.z)
        assert_raises(ValueError, discriminate, self.bundle, self.x[:, :10])
        assert_raises(ValueError, self.bundle.g2, np.ones((2, 139)))


class TestNetworkGradients:
    @pytest.mark.parametrize("seed", range(10))
    def test_transformation(self, seed):
        bundle = _small_bundle(seed)
        rng = np.random.default_rng(seed + 100)
        x = rng.standard_normal((8, 6))
        z = rng.uniform(size=(8, 2))
        f = bundle.f

        def loss():
            return float(np.mean(np.sum(np.abs(f(x, z) - x), axis=1)))

        out, cache = f.forward(x, z)
        (grad_x, grad_z), grads = f.backward(cache, np.sign(out - x) / x.shape[0])

        assert finite_difference_check(f, loss, grads) < 1e-4
        assert_allclose(grad_z, numerical_gradient([z], loss)[0], rtol=1e-4, atol=1e-8)

    @pytest.mark.parametrize("seed", range(10))
    def test_discriminator(self, seed):
        bundle = _small_bundle(seed)
        rng = np.random.default_rng(seed + 200)
        y = rng.standard_normal((8, 6))
        d = bundle.d

        def loss():
            return float(-np.mean(np.log(d(y)[:, 1])))

        out, cache = d.forward(y)
        upstream = np.zeros_like(out)
        upstream[:, 1] = -1.0 / (y.shape[0] * out[:, 1])
        grad_y, grads = d.backward(cache, upstream)

        assert finite_difference_check(d, loss, grads) < 1e-4
        assert_allclose(grad_y, numerical_gradient([y], loss)[0], rtol=1e-4, atol=1e-8)

    @pytest.mark.parametrize("seed", range(10))
    def test_decomposer(self, seed):
        bundle = _small_bundle(seed)
        rng = np.random.default_rng(seed + 300)
        y = rng.standard_normal((8, 6))
        proj = rng.standard_normal((8, 12))
        g1 = bundle.g1

        def loss():
            return float(np.sum(g1(y) * proj))

        _, cache = g1.forward(y)
        grad_y, grads = g1.backward(cache, proj)

        assert finite_difference_check(g1, loss, grads) < 1e-4
        assert_allclose(grad_y, numerical_gradient([y], loss)[0], rtol=1e-4, atol=1e-8)

    @pytest.mark.parametrize("seed", range(10))
    def test_reconstructor(self, seed):
        bundle = _small_bundle(seed)
        rng = np.random.default_rng(seed + 400)
        blocks = rng.standard_normal((8, 12))
        proj = rng.standard_normal((8, 2))
        g2 = bundle.g2

        def loss():
            return float(np.sum(g2(blocks) * proj))

        _, cache = g2.forward(blocks)
        grad_b, grads = g2.backward(cache, proj)

        assert grad_b.shape == blocks.shape
        assert finite_difference_check(g2, loss, grads) < 1e-4
        numeric = numerical_gradient([blocks], loss)[0]
        assert_allclose(grad_b, numeric, rtol=1e-4, atol=1e-8)
