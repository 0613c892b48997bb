import copy
from abc import ABC, abstractmethod

from ..nn import DenseLayer, dense_backward, dense_forward


class Network(ABC):
    """
    A base class for the networks trained by hetgan.

    A network owns an ordered list of :class:`hetgan.nn.DenseLayer` objects.
    Its parameters are the layers' weight and bias arrays in layer order, and
    every gradient list produced by :meth:`backward` is aligned with
    :meth:`params`.
    """

    @property
    @abstractmethod
    def layers(self):
        """Ordered list of the dense layers of the network."""

    def params(self):
        """Parameter arrays of every layer, weights before bias."""
        return [p for layer in self.layers for p in layer.params()]

    @staticmethod
    def _flatten_grads(layer_grads):
        grads = []
        for g in layer_grads:
            grads.append(g.weights)
            if g.bias is not None:
                grads.append(g.bias)
        return grads

    @abstractmethod
    def forward(self, *inputs):
        r"""
        Evaluate the network.

        Returns
        -------
        output : ndarray of float
            Network output.
        cache : object
            Values needed by :meth:`backward`.
        """

    @abstractmethod
    def backward(self, cache, upstream):
        r"""
        Back-propagate a gradient w.r.t. the output.

        Returns
        -------
        input_grads : ndarray or tuple of ndarray
            Gradients w.r.t. the network inputs.
        grads : list of ndarray
            Parameter gradients aligned with :meth:`params`.
        """

    def __call__(self, *inputs):
        return self.forward(*inputs)[0]

    def copy(self):
        return copy.deepcopy(self)

    def describe(self):
        """Shape descriptors of every layer, in parameter order."""
        return [
            {
                "shape": [layer.n_out, layer.n_in],
                "bias": layer.has_bias,
                "activation": layer.activation,
            }
            for layer in self.layers
        ]


class SequentialNet(Network):
    """A plain chain of dense layers."""

    def __init__(self, layers):
        self._layers = list(layers)

    @property
    def layers(self):
        return self._layers

    @classmethod
    def initialize(cls, widths, rng, bias=True, activations=None):
        """
        Build a chain with layer widths ``widths[0] -> ... -> widths[-1]``.
        """
        activations = activations or ["identity"] * (len(widths) - 1)
        layers = [
            DenseLayer.initialize(n_in, n_out, rng, bias=bias, activation=act)
            for n_in, n_out, act in zip(widths[:-1], widths[1:], activations)
        ]
        return cls(layers)

    def forward(self, x):
        caches = []
        for layer in self._layers:
            x, cache = dense_forward(layer, x)
            caches.append(cache)
        return x, caches

    def backward(self, cache, upstream):
        layer_grads = []
        for layer, layer_cache in zip(reversed(self._layers), reversed(cache)):
            upstream, grads = dense_backward(layer, layer_cache, upstream)
            layer_grads.append(grads)
        return upstream, self._flatten_grads(layer_grads[::-1])
