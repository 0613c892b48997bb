import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal, assert_raises

from .. import (
    DenseLayer,
    dense_backward,
    dense_forward,
    finite_difference_check,
    numerical_gradient,
)


def _random_layer(rng, n_in, n_out, bias, activation):
    weights = rng.standard_normal((n_out, n_in))
    b = rng.standard_normal(n_out) if bias else None
    return DenseLayer(weights, b, activation)


class TestDenseForward:
    def test_identity(self):
        out, _ = dense_forward(DenseLayer(np.eye(2)), np.array([[1.0, 2.0]]))

        assert_array_equal(out, [[1.0, 2.0]])

    def test_leaky_relu(self):
        out, cache = dense_forward(
            DenseLayer(np.eye(2), activation="leaky_relu"), np.array([[-1.0, 1.0]])
        )

        assert_allclose(out, [[-0.2, 1.0]], rtol=0, atol=1e-15)
        assert_array_equal(cache.pre_activation, [[-1.0, 1.0]])

    def test_sigmoid_midpoint(self):
        out, _ = dense_forward(
            DenseLayer(np.ones((1, 1)), activation="sigmoid"), np.array([[0.0]])
        )

        assert out[0, 0] == 0.5

    def test_bias(self):
        layer = DenseLayer(np.eye(2), np.array([1.0, -1.0]))
        out, _ = dense_forward(layer, np.array([[1.0, 2.0]]))

        assert_array_equal(out, [[2.0, 1.0]])

    @pytest.mark.parametrize("seed", [1, 2, 3])
    def test_softmax_rows(self, seed):
        rng = np.random.default_rng(seed)
        layer = _random_layer(rng, 4, 2, True, "softmax")
        out, _ = dense_forward(layer, rng.standard_normal((10, 4)))

        assert_allclose(out.sum(axis=1), 1.0, rtol=0, atol=1e-9)
        assert np.all((out > 0) & (out < 1))

    def test_initialize(self):
        rng = np.random.default_rng(0)
        layer = DenseLayer.initialize(139, 69, rng, activation="leaky_relu")
        bound = np.sqrt(6.0 / (139 + 69))

        assert layer.weights.shape == (69, 139)
        assert np.all(np.abs(layer.weights) <= bound)
        assert_array_equal(layer.bias, np.zeros(69))
        assert not DenseLayer.initialize(3, 2, rng, bias=False).has_bias


class TestDenseBackward:
    def test_identity(self):
        layer = DenseLayer(np.eye(2))
        _, cache = dense_forward(layer, np.array([[1.0, 2.0]]))
        grad, _ = dense_backward(layer, cache, np.array([[1.0, 0.0]]))

        assert_array_equal(grad, [[1.0, 0.0]])

    def test_leaky_relu_negative_factor(self):
        layer = DenseLayer(np.ones((1, 1)), activation="leaky_relu")
        _, cache = dense_forward(layer, np.array([[-3.0]]))
        grad, grads = dense_backward(layer, cache, np.array([[1.0]]))

        assert_allclose(grad, [[0.2]], rtol=1e-15)
        assert_allclose(grads.weights, [[-0.6]], rtol=1e-15)
        assert grads.bias is None

    @pytest.mark.parametrize(
        "activation", ["leaky_relu", "sigmoid", "softmax", "identity"]
    )
    @pytest.mark.parametrize("bias", [True, False])
    @pytest.mark.parametrize("seed", range(10))
    def test_finite_differences(self, activation, bias, seed):
        rng = np.random.default_rng(seed)
        layer = _random_layer(rng, 4, 3, bias, activation)
        x = rng.standard_normal((5, 4))
        proj = rng.standard_normal((5, 3))

        def loss():
            return float(np.sum(dense_forward(layer, x)[0] * proj))

        out, cache = dense_forward(layer, x)
        grad_x, grads = dense_backward(layer, cache, proj)
        param_grads = [g for g in grads if g is not None]

        assert finite_difference_check(layer.params(), loss, param_grads) < 1e-4
        fd_x = numerical_gradient([x], loss)[0]
        assert_allclose(grad_x, fd_x, rtol=1e-4, atol=1e-8)


class TestDenseErrorWarn:
    def test_error_activation(self):
        assert_raises(ValueError, DenseLayer, np.eye(2), None, "tanh")

    def test_error_weights(self):
        assert_raises(ValueError, DenseLayer, np.ones(3))

    def test_error_bias(self):
        assert_raises(ValueError, DenseLayer, np.eye(2), np.zeros(3))

    def test_error_input_width(self):
        assert_raises(ValueError, dense_forward, DenseLayer(np.eye(2)), np.ones((1, 3)))

    def test_error_upstream(self):
        layer = DenseLayer(np.eye(2))
        _, cache = dense_forward(layer, np.ones((1, 2)))
        assert_raises(ValueError, dense_backward, layer, cache, np.ones((2, 2)))

    def test_error_foreign_cache(self):
        layer = DenseLayer(np.ones((2, 3)))
        _, cache = dense_forward(DenseLayer(np.eye(2)), np.ones((1, 2)))
        assert_raises(ValueError, dense_backward, layer, cache, np.ones((1, 2)))
