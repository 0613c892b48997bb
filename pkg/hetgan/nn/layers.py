from typing import NamedTuple, Optional

import numpy as np
from scipy.special import expit, softmax

from ._utils import _CheckShape

LEAKY_SLOPE = 0.2


def leaky_relu(a):
    return np.where(a > 0, a, LEAKY_SLOPE * a)


def _leaky_relu_grad(a, out, upstream):
    return upstream * np.where(a > 0, 1.0, LEAKY_SLOPE)


def _sigmoid(a):
    return expit(a)


def _sigmoid_grad(a, out, upstream):
    return upstream * out * (1.0 - out)


def _softmax(a):
    return softmax(a, axis=1)


def _softmax_grad(a, out, upstream):
    # row-wise Jacobian-vector product of softmax
    return out * (upstream - np.sum(upstream * out, axis=1, keepdims=True))


def _identity(a):
    return a


def _identity_grad(a, out, upstream):
    return upstream


ACTIVATIONS = {
    "leaky_relu": (leaky_relu, _leaky_relu_grad),
    "sigmoid": (_sigmoid, _sigmoid_grad),
    "softmax": (_softmax, _softmax_grad),
    "identity": (_identity, _identity_grad),
}


class LayerCache(NamedTuple):
    inputs: np.ndarray
    pre_activation: np.ndarray
    output: np.ndarray


class LayerGrads(NamedTuple):
    weights: np.ndarray
    bias: Optional[np.ndarray]


class DenseLayer:
    r"""
    A fully connected layer :math:`a = \phi(x W^T + b)`.

    Parameters
    ----------
    weights : ndarray of float
        Weight matrix of shape ``(out, in)``.
    bias : ndarray of float or None, default: None
        Bias vector of shape ``(out,)``. ``None`` builds a layer without a bias
        term.
    activation : "leaky_relu", "sigmoid", "softmax", or "identity", default: "identity"
        Output non-linearity. The leaky ReLU slope is fixed at 0.2.
    """

    def __init__(self, weights, bias=None, activation="identity"):
        if activation not in ACTIVATIONS:
            raise ValueError(
                "activation {}, must be in {}".format(activation, list(ACTIVATIONS))
            )
        weights = np.asarray(weights, dtype=np.float64)
        if weights.ndim != 2:
            raise ValueError(
                "Expected 2-D weights of shape (out, in), found {}".format(
                    weights.shape
                )
            )
        if bias is not None:
            bias = np.asarray(bias, dtype=np.float64)
            if bias.shape != (weights.shape[0],):
                raise ValueError(
                    "Bias of shape {} does not match {} outputs".format(
                        bias.shape, weights.shape[0]
                    )
                )
        self.weights = weights
        self.bias = bias
        self.activation = activation

    @classmethod
    def initialize(cls, n_in, n_out, rng, bias=True, activation="identity"):
        r"""
        Build a layer with fan-based uniform weights :math:`U[-a, a]`,
        :math:`a = \sqrt{6 / (n_{in} + n_{out})}`, and a zero bias.
        """
        bound = np.sqrt(6.0 / (n_in + n_out))
        weights = rng.uniform(-bound, bound, size=(n_out, n_in))
        return cls(weights, np.zeros(n_out) if bias else None, activation)

    @property
    def n_in(self):
        return self.weights.shape[1]

    @property
    def n_out(self):
        return self.weights.shape[0]

    @property
    def has_bias(self):
        return self.bias is not None

    def params(self):
        """Parameter arrays of the layer, weights first."""
        return [self.weights] if self.bias is None else [self.weights, self.bias]

    def copy(self):
        bias = None if self.bias is None else self.bias.copy()
        return DenseLayer(self.weights.copy(), bias, self.activation)

    def __repr__(self):
        return "DenseLayer({}->{}, bias={}, activation={!r})".format(
            self.n_in, self.n_out, self.has_bias, self.activation
        )


def dense_forward(layer, inputs):
    """
    Forward pass of a dense layer.

    Parameters
    ----------
    layer : DenseLayer
        The layer to evaluate.
    inputs : ndarray of float
        Batch of shape ``(n, in)``.

    Returns
    -------
    output : ndarray of float
        Batch of shape ``(n, out)``.
    cache : LayerCache
        Values retained for :func:`dense_backward`.

    Examples
    --------
    >>> import numpy as np
    >>> from hetgan.nn import DenseLayer, dense_forward
    >>> layer = DenseLayer(np.eye(2), activation="leaky_relu")
    >>> out, _ = dense_forward(layer, np.array([[-1.0, 1.0]]))
    >>> out.tolist()
    [[-0.2, 1.0]]
    """
    inputs = _CheckShape(inputs, layer.n_in, "inputs")()
    pre = inputs @ layer.weights.T
    if layer.bias is not None:
        pre = pre + layer.bias
    forward, _ = ACTIVATIONS[layer.activation]
    output = forward(pre)

    return output, LayerCache(inputs, pre, output)


def dense_backward(layer, cache, upstream):
    """
    Backward pass of a dense layer.

    Parameters
    ----------
    layer : DenseLayer
        The layer evaluated by the matching :func:`dense_forward` call.
    cache : LayerCache
        Cache returned by that call.
    upstream : ndarray of float
        Gradient of the loss w.r.t. the layer output, shape ``(n, out)``.

    Returns
    -------
    input_grad : ndarray of float
        Gradient w.r.t. the layer input, shape ``(n, in)``.
    grads : LayerGrads
        Gradients w.r.t. weights and bias (``None`` when the layer has no bias).
    """
    if cache.output.shape != np.shape(upstream):
        raise ValueError(
            "Upstream gradient of shape {} does not match layer output {}".format(
                np.shape(upstream), cache.output.shape
            )
        )
    if cache.inputs.shape[1] != layer.n_in:
        raise ValueError(
            "Cache was built for {} inputs, layer expects {}".format(
                cache.inputs.shape[1], layer.n_in
            )
        )
    _, backward = ACTIVATIONS[layer.activation]
    delta = backward(cache.pre_activation, cache.output, upstream)
    weight_grad = delta.T @ cache.inputs
    bias_grad = None if layer.bias is None else delta.sum(axis=0)
    input_grad = delta @ layer.weights

    return input_grad, LayerGrads(weight_grad, bias_grad)
