import numpy as np

from ..nn import LEAKY_SLOPE, DenseLayer, dense_backward, dense_forward, leaky_relu
from .base import Network, SequentialNet

HIDDEN_WIDTHS = (69, 34)


class TransformationNet(Network):
    r"""
    Transformation function :math:`f: X \times Z \to Y`.

    ``x`` and ``z`` are encoded separately into vectors of the bottleneck
    width; their element-wise product is decoded back to the feature width.

    Parameters
    ----------
    encoder_x : list of DenseLayer
        Two bias-free leaky ReLU layers ``S -> h1 -> h2``.
    z_decoder : DenseLayer
        Sigmoid layer with bias ``M -> h2``.
    decoder_y : list of DenseLayer
        Two bias-free leaky ReLU layers ``h2 -> h1 -> S``.
    """

    def __init__(self, encoder_x, z_decoder, decoder_y):
        self.encoder_x = list(encoder_x)
        self.z_decoder = z_decoder
        self.decoder_y = list(decoder_y)
        if self.encoder_x[-1].n_out != self.z_decoder.n_out:
            raise ValueError(
                "Branch widths differ: x branch {}, z branch {}".format(
                    self.encoder_x[-1].n_out, self.z_decoder.n_out
                )
            )

    @classmethod
    def initialize(cls, n_features, n_patterns, rng, hidden=HIDDEN_WIDTHS):
        h1, h2 = hidden
        encoder_x = [
            DenseLayer.initialize(
                n_features, h1, rng, bias=False, activation="leaky_relu"
            ),
            DenseLayer.initialize(h1, h2, rng, bias=False, activation="leaky_relu"),
        ]
        z_decoder = DenseLayer.initialize(n_patterns, h2, rng, activation="sigmoid")
        decoder_y = [
            DenseLayer.initialize(h2, h1, rng, bias=False, activation="leaky_relu"),
            DenseLayer.initialize(
                h1, n_features, rng, bias=False, activation="leaky_relu"
            ),
        ]
        return cls(encoder_x, z_decoder, decoder_y)

    @property
    def layers(self):
        return self.encoder_x + [self.z_decoder] + self.decoder_y

    def forward(self, x, z):
        enc_caches = []
        h = x
        for layer in self.encoder_x:
            h, cache = dense_forward(layer, h)
            enc_caches.append(cache)
        u, z_cache = dense_forward(self.z_decoder, z)

        out = h * u
        dec_caches = []
        for layer in self.decoder_y:
            out, cache = dense_forward(layer, out)
            dec_caches.append(cache)

        return out, (enc_caches, z_cache, h, u, dec_caches)

    def backward(self, cache, upstream):
        enc_caches, z_cache, h, u, dec_caches = cache

        dec_grads = []
        grad = upstream
        for layer, layer_cache in zip(reversed(self.decoder_y), reversed(dec_caches)):
            grad, g = dense_backward(layer, layer_cache, grad)
            dec_grads.append(g)

        grad_h = grad * u
        grad_u = grad * h
        grad_z, z_grads = dense_backward(self.z_decoder, z_cache, grad_u)

        enc_grads = []
        for layer, layer_cache in zip(reversed(self.encoder_x), reversed(enc_caches)):
            grad_h, g = dense_backward(layer, layer_cache, grad_h)
            enc_grads.append(g)

        layer_grads = enc_grads[::-1] + [z_grads] + dec_grads[::-1]
        return (grad_h, grad_z), self._flatten_grads(layer_grads)


class DiscriminatorNet(SequentialNet):
    """Discriminator ``S -> h1 -> h2 -> 2``; column 1 is the "real" class."""

    @classmethod
    def initialize(cls, n_features, rng, hidden=HIDDEN_WIDTHS):
        h1, h2 = hidden
        return super().initialize(
            [n_features, h1, h2, 2],
            rng,
            activations=["leaky_relu", "leaky_relu", "softmax"],
        )


class DecomposerNet(Network):
    """
    Decomposer :math:`g_1`: a leaky ReLU on the input followed by one linear
    layer ``S -> S * M``. The output holds ``M`` contiguous blocks of width
    ``S``; block ``i`` estimates the change induced by latent component ``i``.
    """

    def __init__(self, linear):
        self.linear = linear

    @classmethod
    def initialize(cls, n_features, n_patterns, rng):
        return cls(DenseLayer.initialize(n_features, n_features * n_patterns, rng))

    @property
    def layers(self):
        return [self.linear]

    def forward(self, y):
        out, cache = dense_forward(self.linear, leaky_relu(y))
        return out, (np.asarray(y, dtype=np.float64), cache)

    def backward(self, cache, upstream):
        y, linear_cache = cache
        grad, g = dense_backward(self.linear, linear_cache, upstream)
        return grad * np.where(y > 0, 1.0, LEAKY_SLOPE), self._flatten_grads([g])


class ReconstructorNet(SequentialNet):
    """
    Reconstructor :math:`g_2: R^S \\to (0, 1)`, a chain ``S -> h1 -> h2 -> 1``
    shared by all ``M`` blocks of the decomposer output.
    """

    def __init__(self, layers, n_patterns):
        super().__init__(layers)
        self.n_patterns = n_patterns

    @classmethod
    def initialize(cls, n_features, n_patterns, rng, hidden=HIDDEN_WIDTHS):
        h1, h2 = hidden
        chain = SequentialNet.initialize(
            [n_features, h1, h2, 1],
            rng,
            activations=["leaky_relu", "leaky_relu", "sigmoid"],
        )
        return cls(chain.layers, n_patterns)

    def forward(self, blocks):
        n = blocks.shape[0]
        width = self.layers[0].n_in
        if blocks.shape[1] != width * self.n_patterns:
            raise ValueError(
                "Expected {} block columns, found {}".format(
                    width * self.n_patterns, blocks.shape[1]
                )
            )
        out, caches = super().forward(blocks.reshape(n * self.n_patterns, width))
        return out.reshape(n, self.n_patterns), caches

    def backward(self, cache, upstream):
        n = upstream.shape[0]
        grad, grads = super().backward(cache, upstream.reshape(n * self.n_patterns, 1))
        return grad.reshape(n, -1), grads
