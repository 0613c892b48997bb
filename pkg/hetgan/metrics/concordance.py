import itertools
import math
from typing import NamedTuple

import numpy as np
from numba import jit

from ..exceptions import UndefinedMetricError
from ..tools import contains_nan
from ._utils import _CheckInputs


class AlignmentResult(NamedTuple):
    """
    Best column matching between two matrices.

    Attributes
    ----------
    permutation : tuple of int
        ``permutation[k]`` is the column of the first matrix matched to column
        ``k`` of the second.
    values : ndarray of float
        c-index of each matched column pair, in the order of the second
        matrix.
    mean : float
        Average of ``values``.
    """

    permutation: tuple
    values: np.ndarray
    mean: float


@jit(nopython=True, cache=True)
def _concordance_counts(pred, truth):  # pragma: no cover
    """Concordant, tied-prediction and comparable pair counts."""
    order = np.argsort(truth)
    pred = pred[order]
    truth = truth[order]
    n = pred.shape[0]
    concordant = 0
    tied = 0
    comparable = 0
    for i in range(n):
        for j in range(i + 1, n):
            # sorted, so truth[i] <= truth[j]
            if truth[i] == truth[j]:
                continue
            comparable += 1
            if pred[i] < pred[j]:
                concordant += 1
            elif pred[i] == pred[j]:
                tied += 1
    return concordant, tied, comparable


def _check_vectors(pred, truth):
    pred = np.asarray(pred, dtype=np.float64).ravel()
    truth = np.asarray(truth, dtype=np.float64).ravel()
    contains_nan(pred)
    contains_nan(truth)
    if pred.shape != truth.shape:
        raise ValueError(
            "pred and truth must have equal lengths, found {} and {}".format(
                pred.shape[0], truth.shape[0]
            )
        )
    if pred.shape[0] < 2:
        raise ValueError(
            "At least 2 entries are needed, found {}".format(pred.shape[0])
        )
    return pred, truth


def _ratio(concordant, tied, comparable):
    if comparable == 0:
        raise UndefinedMetricError(
            "c-index is undefined when every truth value is tied"
        )
    return (concordant + 0.5 * tied) / comparable


def c_index(pred, truth):
    r"""
    Concordance index of predictions against a continuous truth.

    Every pair of entries with distinct truth values is comparable; it counts
    1 when the predictions order it the same way as the truth and 0.5 when the
    predictions are tied. Pairs with tied truth are skipped.

    Parameters
    ----------
    pred : ndarray of float
        Predictions of shape ``(n,)``.
    truth : ndarray of float
        Reference values of shape ``(n,)``.

    Returns
    -------
    stat : float
        Fraction of concordant comparable pairs, in [0, 1].

    Raises
    ------
    UndefinedMetricError
        If every truth value is tied.

    Examples
    --------
    >>> from hetgan.metrics import c_index
    >>> c_index([0.2, 0.1, 0.3, 0.4], [1, 2, 3, 4])
    0.8333333333333334
    """
    pred, truth = _check_vectors(pred, truth)
    return _ratio(*_concordance_counts(pred, truth))


def brute_c_index(pred, truth):
    """Pairwise enumeration of :func:`c_index` without sorting or compilation."""
    pred, truth = _check_vectors(pred, truth)
    concordant = tied = comparable = 0
    n = pred.shape[0]
    for i in range(n):
        for j in range(n):
            if truth[i] < truth[j]:
                comparable += 1
                if pred[i] < pred[j]:
                    concordant += 1
                elif pred[i] == pred[j]:
                    tied += 1
    return _ratio(concordant, tied, comparable)


def c_index_matrix(r, truth):
    """
    c-index of every column of ``r`` against every column of ``truth``.

    Returns
    -------
    stats : ndarray of float
        Entry ``(k, j)`` is ``c_index(r[:, j], truth[:, k])``.
    """
    r, truth = _CheckInputs(r, truth)()
    m = r.shape[1]
    stats = np.empty((m, m))
    for k in range(m):
        for j in range(m):
            stats[k, j] = _ratio(*_concordance_counts(r[:, j], truth[:, k]))
    return stats


def _best_alignment(stats):
    m = stats.shape[0]
    best, best_mean = None, -np.inf
    for perm in itertools.permutations(range(m)):
        mean = math.fsum(stats[k, perm[k]] for k in range(m)) / m
        if mean > best_mean:
            best, best_mean = perm, mean
    values = np.array([stats[k, best[k]] for k in range(m)])
    return AlignmentResult(tuple(best), values, best_mean)


def pattern_c_index(r, truth):
    r"""
    Permutation-aligned mean c-index between R-indices and severities.

    Every matching of the ``M`` columns of ``r`` to the ``M`` columns of
    ``truth`` is scored by the mean of the matched c-indices; the best one is
    returned (the first in lexicographic order among equals).

    Parameters
    ----------
    r : ndarray of float
        R-indices of shape ``(n, M)``, ``M <= 8``.
    truth : ndarray of float
        Severities of shape ``(n, M)``.

    Returns
    -------
    result : AlignmentResult

    Examples
    --------
    >>> import numpy as np
    >>> from hetgan.metrics import pattern_c_index
    >>> truth = np.random.default_rng(0).uniform(size=(50, 2))
    >>> result = pattern_c_index(truth[:, ::-1], truth)
    >>> result.permutation, result.mean
    ((1, 0), 1.0)
    """
    return _best_alignment(c_index_matrix(r, truth))


def pattern_agr_index(r_a, r_b):
    """
    Agreement between the R-indices of two models.

    The columns of ``r_a`` are aligned to those of ``r_b``, which plays the
    role of the truth in :func:`pattern_c_index`.

    Parameters
    ----------
    r_a, r_b : ndarray of float
        R-indices of shape ``(n, M)`` on the same subjects.

    Returns
    -------
    result : AlignmentResult
    """
    r_a, r_b = _CheckInputs(r_a, r_b, names=("r_a", "r_b"))()
    return pattern_c_index(r_a, r_b)
