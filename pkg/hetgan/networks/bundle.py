from dataclasses import dataclass

import numpy as np

from ..nn import clip_weights
from ..tools import check_2d, check_positive_int, check_same_rows, check_unit_interval
from .nets import (
    HIDDEN_WIDTHS,
    DecomposerNet,
    DiscriminatorNet,
    ReconstructorNet,
    TransformationNet,
)

MAX_PATTERNS = 8


@dataclass
class ModelBundle:
    """
    The four networks of one model.

    Attributes
    ----------
    f : TransformationNet
        Transformation function.
    d : DiscriminatorNet
        Discriminator.
    g1 : DecomposerNet
        Decomposer of synthesized changes.
    g2 : ReconstructorNet
        Reconstructor of the latent vector, applied per block of ``g1``.
    n_patterns : int
        Number of patterns `M`.
    n_features : int
        Number of features `S`.
    """

    f: TransformationNet
    d: DiscriminatorNet
    g1: DecomposerNet
    g2: ReconstructorNet
    n_patterns: int
    n_features: int

    def networks(self):
        """Networks by name, in serialization order."""
        return {"f": self.f, "d": self.d, "g1": self.g1, "g2": self.g2}

    def copy(self):
        return ModelBundle(
            self.f.copy(),
            self.d.copy(),
            self.g1.copy(),
            self.g2.copy(),
            self.n_patterns,
            self.n_features,
        )


def init_bundle(
    n_patterns, n_features, seed=None, hidden=HIDDEN_WIDTHS, clip_bound=0.5
):
    """
    Build the four networks with fan-based uniform initialization.

    Parameters
    ----------
    n_patterns : int
        Number of patterns `M` (1 to 8).
    n_features : int
        Number of features `S` (>= 1).
    seed : None, int, SeedSequence or Generator, default: None
        Seed material. Identical seeds give bit-identical parameters.
    hidden : tuple of int, default: (69, 34)
        Hidden widths shared by ``f``, ``D`` and ``g2``.
    clip_bound : float or None, default: 0.5
        Clipping bound applied to ``f``, ``g1`` and ``g2`` after construction.

    Returns
    -------
    bundle : ModelBundle

    Examples
    --------
    >>> from hetgan.networks import init_bundle
    >>> bundle = init_bundle(3, 139, seed=7)
    >>> [layer.weights.shape for layer in bundle.f.encoder_x]
    [(69, 139), (34, 69)]
    >>> bundle.g1.linear.n_out
    417
    """
    check_positive_int(n_patterns, "n_patterns")
    check_positive_int(n_features, "n_features")
    if n_patterns > MAX_PATTERNS:
        raise ValueError(
            "n_patterns must be <= {}, got {}".format(MAX_PATTERNS, n_patterns)
        )
    if len(hidden) != 2 or any(h < 1 for h in hidden):
        raise ValueError("hidden must hold two positive widths, got {}".format(hidden))

    rng = np.random.default_rng(seed)
    f = TransformationNet.initialize(n_features, n_patterns, rng, hidden=hidden)
    d = DiscriminatorNet.initialize(n_features, rng, hidden=hidden)
    g1 = DecomposerNet.initialize(n_features, n_patterns, rng)
    g2 = ReconstructorNet.initialize(n_features, n_patterns, rng, hidden=hidden)
    if clip_bound is not None:
        for net in (f, g1, g2):
            clip_weights(net.params(), clip_bound)

    return ModelBundle(f, d, g1, g2, n_patterns, n_features)


def _check_features(bundle, y, name="y"):
    y = check_2d(np.asarray(y, dtype=np.float64), name=name, width=bundle.n_features)
    return y


def transform(bundle, x, z):
    """
    Synthesize PT rows :math:`y' = f(x, z)`.

    Parameters
    ----------
    bundle : ModelBundle
    x : ndarray of float
        CN rows of shape ``(n, S)``.
    z : ndarray of float
        Latent vectors of shape ``(n, M)`` with entries in [0, 1].

    Returns
    -------
    y : ndarray of float
        Synthesized rows of shape ``(n, S)``.
    """
    x = _check_features(bundle, x, "x")
    z = check_2d(np.asarray(z, dtype=np.float64), name="z", width=bundle.n_patterns)
    check_same_rows(x, z, names=["x", "z"])
    check_unit_interval(z)

    return bundle.f(x, z)


def discriminate(bundle, y):
    """Class probabilities ``(n, 2)`` of the discriminator; column 1 is "real"."""
    return bundle.d(_check_features(bundle, y))


def decompose(bundle, y):
    """Decomposer output ``(n, S * M)``: ``M`` contiguous change estimates."""
    return bundle.g1(_check_features(bundle, y))


def reconstruct_indices(bundle, y):
    """
    Recover latent vectors (R-indices) from PT rows.

    Parameters
    ----------
    bundle : ModelBundle
    y : ndarray of float
        PT rows of shape ``(n, S)``.

    Returns
    -------
    r : ndarray of float
        R-indices of shape ``(n, M)`` with entries in (0, 1).
    """
    return bundle.g2(bundle.g1(_check_features(bundle, y)))
