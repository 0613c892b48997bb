import numpy as np

from ..tools import check_positive_int, check_rng, check_unit_interval

CN_LATENT_BOUND = 0.05


def sample_latent(n, n_patterns, rng=None):
    """
    Draw latent vectors i.i.d. from :math:`U[0, 1]^M`.

    Parameters
    ----------
    n : int
        Number of vectors.
    n_patterns : int
        Dimension `M`.
    rng : None, int or Generator, default: None
        Random stream.

    Returns
    -------
    z : ndarray of float
        Shape ``(n, M)``.

    Examples
    --------
    >>> from hetgan.training import sample_latent
    >>> sample_latent(4, 3, rng=0).shape
    (4, 3)
    """
    check_positive_int(n, "n")
    check_positive_int(n_patterns, "n_patterns")
    return check_rng(rng).uniform(size=(n, n_patterns))


def sample_severity_conditioned(z, rng=None):
    """
    Draw :math:`z'_{ij} \\sim U(z_{ij}, 1]` for every entry of ``z``.

    Parameters
    ----------
    z : ndarray of float
        Latent vectors in [0, 1].
    rng : None, int or Generator, default: None
        Random stream.

    Returns
    -------
    z_prime : ndarray of float
        Same shape as ``z``, with ``z < z_prime <= 1`` wherever ``z < 1``.
    """
    z = np.asarray(z, dtype=np.float64)
    check_unit_interval(z)
    # 1 - U lies in (0, 1], so the draw excludes z and includes 1
    return z + (1.0 - z) * (1.0 - check_rng(rng).uniform(size=z.shape))


def sample_cn_latent(n, n_patterns, rng=None):
    """Draw near-zero latent vectors from :math:`U(0, 0.05)^M`."""
    check_positive_int(n, "n")
    check_positive_int(n_patterns, "n_patterns")
    return check_rng(rng).uniform(0.0, CN_LATENT_BOUND, size=(n, n_patterns))
