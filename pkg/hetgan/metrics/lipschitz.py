from typing import NamedTuple

import numpy as np

from ..networks import reconstruct_indices, transform
from ..tools import check_2d, check_positive_int, check_rng


def _pair_ratios(bundle, y_a, y_b):
    dist_y = np.linalg.norm(y_a - y_b, axis=1)
    dist_r = np.linalg.norm(
        reconstruct_indices(bundle, y_a) - reconstruct_indices(bundle, y_b), axis=1
    )
    keep = dist_y > 0
    return dist_r[keep] / dist_y[keep]


def estimate_lipschitz(bundle, y, rng=None, n_pairs=1000):
    """
    Empirical Lipschitz constant of the inverse mapping ``g2(g1(.))``.

    Parameters
    ----------
    bundle : ModelBundle
    y : ndarray of float
        Rows of shape ``(n, S)`` to draw pairs from, ``n >= 2``.
    rng : None, int or Generator, default: None
    n_pairs : int, default: 1000
        Number of pairs of distinct rows.

    Returns
    -------
    k2 : float
        Largest observed ratio ``||g(y_a) - g(y_b)|| / ||y_a - y_b||``.
    """
    y = check_2d(np.asarray(y, dtype=np.float64), "y", bundle.n_features)
    check_positive_int(n_pairs, "n_pairs")
    if y.shape[0] < 2:
        raise ValueError("At least 2 rows are needed, found {}".format(y.shape[0]))
    rng = check_rng(rng)
    a = rng.integers(0, y.shape[0], size=n_pairs)
    # shift by 1..n-1 so the partner is always another row
    b = (a + rng.integers(1, y.shape[0], size=n_pairs)) % y.shape[0]
    ratios = _pair_ratios(bundle, y[a], y[b])
    return float(ratios.max()) if ratios.size else 0.0


def lemma1_slack(bundle, x, z1, z2, k2):
    r"""
    Slack of the lower bound on the distance between two synthesized rows.

    For a CN row ``x`` and latents ``z1``, ``z2``, with ``y_i = f(x, z_i)``,
    ``r_i = g(y_i)`` and Euclidean distance ``d``,

    .. math::

        d(y_1, y_2) \geq \frac{d(z_1, z_2) - d(r_1, z_1) - d(r_2, z_2)}{K_2}

    whenever ``K2`` bounds the Lipschitz constant of ``g``. The slack is the
    left side minus the right side.

    Parameters
    ----------
    bundle : ModelBundle
    x : ndarray of float
        One CN row ``(S,)`` or rows ``(n, S)``.
    z1, z2 : ndarray of float
        Latents ``(M,)`` or ``(n, M)``.
    k2 : float
        Lipschitz estimate, must be positive.

    Returns
    -------
    slack : float or ndarray of float
        A float for a single row, an array of shape ``(n,)`` otherwise.
    """
    if not k2 > 0:
        raise ValueError("k2 must be positive, got {}".format(k2))
    single = np.ndim(x) == np.ndim(z1) == np.ndim(z2) == 1
    x = np.atleast_2d(np.asarray(x, dtype=np.float64))
    z1 = np.atleast_2d(np.asarray(z1, dtype=np.float64))
    z2 = np.atleast_2d(np.asarray(z2, dtype=np.float64))
    if x.shape[0] == 1 and z1.shape[0] > 1:
        x = np.repeat(x, z1.shape[0], axis=0)

    y1, y2 = transform(bundle, x, z1), transform(bundle, x, z2)
    r1, r2 = reconstruct_indices(bundle, y1), reconstruct_indices(bundle, y2)
    dist = np.linalg.norm
    bound = (
        dist(z1 - z2, axis=1) - dist(r1 - z1, axis=1) - dist(r2 - z2, axis=1)
    ) / k2
    slack = dist(y1 - y2, axis=1) - bound
    return float(slack[0]) if single else slack


class Lemma1Diagnostic(NamedTuple):
    """
    Sampled check of the distance lower bound.

    Attributes
    ----------
    slack : ndarray of float
        Slack of every sampled triple.
    k2 : float
        Lipschitz estimate used, taken on the pairs that were checked.
    min_slack : float
    violations : float
        Fraction of triples with slack below ``-1e-9``.
    """

    slack: np.ndarray
    k2: float
    min_slack: float
    violations: float


def lemma1_diagnostic(bundle, x, rng=None, n_triples=1000, tol=1e-9):
    """
    Check the distance lower bound on sampled ``(x, z1, z2)`` triples.

    ``K2`` is estimated on the very pairs ``(f(x, z1), f(x, z2))`` that are
    checked, so a negative slack beyond ``tol`` can only come from numerical
    error.

    Parameters
    ----------
    bundle : ModelBundle
    x : ndarray of float
        CN rows ``(n, S)`` to sample from.
    rng : None, int or Generator, default: None
    n_triples : int, default: 1000
    tol : float, default: 1e-9

    Returns
    -------
    diagnostic : Lemma1Diagnostic

    Raises
    ------
    ValueError
        If the inverse mapping is constant on the sampled pairs (``K2 = 0``).
    """
    x = check_2d(np.asarray(x, dtype=np.float64), "x", bundle.n_features)
    check_positive_int(n_triples, "n_triples")
    rng = check_rng(rng)
    rows = x[rng.integers(0, x.shape[0], size=n_triples)]
    z1 = rng.uniform(size=(n_triples, bundle.n_patterns))
    z2 = rng.uniform(size=(n_triples, bundle.n_patterns))

    y1, y2 = transform(bundle, rows, z1), transform(bundle, rows, z2)
    ratios = _pair_ratios(bundle, y1, y2)
    k2 = float(ratios.max()) if ratios.size else 0.0
    if not k2 > 0:
        raise ValueError("Degenerate Lipschitz estimate k2={}".format(k2))

    slack = lemma1_slack(bundle, rows, z1, z2, k2)
    return Lemma1Diagnostic(slack, k2, float(slack.min()), float(np.mean(slack < -tol)))
