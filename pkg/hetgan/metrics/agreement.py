import logging
import warnings
from typing import NamedTuple

import numpy as np
from joblib import Parallel, delayed

from ..exceptions import UndefinedMetricError
from ._utils import _CheckInputs
from .concordance import pattern_agr_index

logger = logging.getLogger(__name__)


class AgreementTable(NamedTuple):
    """
    Pairwise agreement among replicas.

    Attributes
    ----------
    matrix : ndarray of float
        Symmetric ``(K, K)`` matrix of pattern-agr-index values with a unit
        diagonal. Pairs with no defined value hold nan.
    replica_means : ndarray of float
        Mean agreement of each replica with the others, over its defined
        pairs; nan when it has none.
    mean : float
        Mean over the defined unordered replica pairs.
    """

    matrix: np.ndarray
    replica_means: np.ndarray
    mean: float

    def pairs(self):
        """``(a, b, value)`` for every unordered pair, ``a < b``."""
        k = self.matrix.shape[0]
        return [
            (a, b, float(self.matrix[a, b])) for a in range(k) for b in range(a + 1, k)
        ]


def _degenerate(r):
    """Whether some column of ``r`` holds a single value."""
    return bool(np.any(np.ptp(r, axis=0) == 0))


def agreement_table(r_list, workers=1):
    """
    Score every pair of replicas with :func:`pattern_agr_index`.

    Parameters
    ----------
    r_list : list of ndarray
        R-indices of each replica on the same subjects, all of shape
        ``(n, M)``.
    workers : int, default: 1
        Number of pairs scored concurrently (``-1`` uses every core).

    Returns
    -------
    table : AgreementTable

    Notes
    -----
    A replica with a constant column cannot be ranked against, so every pair
    it belongs to is left undefined (nan) with a ``RuntimeWarning``. The means
    are taken over the remaining pairs; when none remain
    :class:`~hetgan.exceptions.UndefinedMetricError` is raised.

    Examples
    --------
    >>> import numpy as np
    >>> from hetgan.metrics import agreement_table
    >>> r = np.random.default_rng(0).uniform(size=(30, 2))
    >>> agreement_table([r, r, r]).mean
    1.0
    """
    if len(r_list) < 2:
        raise ValueError("At least 2 replicas are needed, found {}".format(len(r_list)))
    r_list = [
        _CheckInputs(r, r_list[0], names=("replica {}".format(i), "replica 0"))()[0]
        for i, r in enumerate(r_list)
    ]
    k = len(r_list)
    degenerate = [i for i, r in enumerate(r_list) if _degenerate(r)]
    if degenerate:
        warnings.warn(
            "Replicas {} have a constant R-index column, their pairs are "
            "left undefined".format(degenerate),
            RuntimeWarning,
        )
    pairs = [
        (a, b)
        for a in range(k)
        for b in range(a + 1, k)
        if a not in degenerate and b not in degenerate
    ]
    if not pairs:
        raise UndefinedMetricError(
            "Agreement is undefined, fewer than 2 replicas vary in every column"
        )
    results = Parallel(n_jobs=workers)(
        [delayed(pattern_agr_index)(r_list[b], r_list[a]) for a, b in pairs]
    )

    matrix = np.full((k, k), np.nan)
    np.fill_diagonal(matrix, 1.0)
    for (a, b), result in zip(pairs, results):
        matrix[a, b] = matrix[b, a] = result.mean
    off = ~np.eye(k, dtype=bool) & ~np.isnan(matrix)
    counts = off.sum(axis=1)
    totals = np.where(off, matrix, 0.0).sum(axis=1)
    replica_means = np.full(k, np.nan)
    replica_means[counts > 0] = totals[counts > 0] / counts[counts > 0]
    mean = float(np.mean([result.mean for result in results]))
    return AgreementTable(matrix, replica_means, mean)


class HyperSelection(NamedTuple):
    """
    Outcome of agreement-based selection.

    Attributes
    ----------
    n_patterns : int
        Selected `M`.
    lam : float
        Selected orthogonality weight.
    replica : int
        Index of the selected replica within the winning cell.
    tables : dict
        Agreement table of every cell, keyed by ``(M, lam)``.
    """

    n_patterns: int
    lam: float
    replica: int
    tables: dict


def select_hyper(grid, workers=1):
    """
    Pick the cell and replica with the highest agreement.

    The cell with the highest mean pairwise agreement wins; ties go to the
    lower ``lam``, then the lower `M`. Within the cell, the replica with the
    highest mean agreement with the others wins, ties going to the lower
    index.

    Parameters
    ----------
    grid : dict
        Maps ``(M, lam)`` to the list of replica R-index matrices (all on the
        same PT subjects), or directly to an :class:`AgreementTable`.
    workers : int, default: 1

    Returns
    -------
    selection : HyperSelection
    """
    if not grid:
        raise ValueError("The grid holds no cells")

    tables = {}
    for cell, entry in grid.items():
        if isinstance(entry, AgreementTable):
            tables[cell] = entry
        else:
            if len(entry) < 2:
                raise ValueError(
                    "Cell {} needs at least 2 replicas, found {}".format(
                        cell, len(entry)
                    )
                )
            tables[cell] = agreement_table(entry, workers=workers)
        logger.info(
            "Cell M=%d lam=%g mean agreement %.4f", cell[0], cell[1], tables[cell].mean
        )

    # highest mean first, then lower lam, then lower M
    cell = min(tables, key=lambda c: (-tables[c].mean, c[1], c[0]))
    means = tables[cell].replica_means
    replica = int(np.argmax(np.where(np.isnan(means), -np.inf, means)))
    return HyperSelection(int(cell[0]), float(cell[1]), replica, tables)
