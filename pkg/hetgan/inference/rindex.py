import logging
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional

import numpy as np
import pandas as pd

from ..exceptions import CohortFormatError
from ..metrics import pattern_c_index, subgroup_by_r
from ..networks import reconstruct_indices
from ..tools import check_2d

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.12g"


@dataclass
class RIndexMatrix:
    """
    R-indices of a set of subjects.

    Attributes
    ----------
    values : ndarray of float
        Shape ``(n, M)``, entries in (0, 1).
    subject_ids : list of str
    permutation : tuple of int or None
        Column order applied by :func:`align_to`: column ``k`` holds the
        model's dimension ``permutation[k]``.
    checkpoint_id : str or None
        Short id of the checkpoint that produced the values.
    """

    values: np.ndarray
    subject_ids: list = field(default=None)
    permutation: Optional[tuple] = None
    checkpoint_id: Optional[str] = None

    def __post_init__(self):
        self.values = check_2d(np.asarray(self.values, dtype=np.float64), "values")
        n, m = self.values.shape
        if self.subject_ids is None:
            self.subject_ids = ["s{:05d}".format(i) for i in range(n)]
        self.subject_ids = [str(s) for s in self.subject_ids]
        if len(self.subject_ids) != n:
            raise ValueError(
                "subject_ids must hold {} entries, found {}".format(
                    n, len(self.subject_ids)
                )
            )
        if self.permutation is not None:
            self.permutation = tuple(int(p) for p in self.permutation)
            if sorted(self.permutation) != list(range(m)):
                raise ValueError(
                    "permutation {} is not a bijection on {} columns".format(
                        self.permutation, m
                    )
                )

    @property
    def n_patterns(self):
        return self.values.shape[1]

    def labels(self, lo=0.4, hi=0.7):
        """Subgroup label of every subject, see :func:`subgroup_by_r`."""
        return subgroup_by_r(self.values, lo, hi)


def infer(
    checkpoint,
    features,
    subject_ids=None,
    raw=False,
    covariates=None,
    reference=None,
):
    """
    Compute R-indices with a trained model.

    Parameters
    ----------
    checkpoint : Checkpoint
    features : ndarray of float
        PT rows ``(n, S)``, already on the model's standardized scale unless
        ``raw`` is set.
    subject_ids : list of str or None, default: None
    raw : bool, default: False
        Map ``features`` through the stored reference statistics first.
    covariates : ndarray of float or None, default: None
        Covariates of the rows, needed with ``raw`` when the statistics hold
        covariate slopes.
    reference : ReferenceStats or None, default: None
        Statistics to use instead of the ones stored in the checkpoint.

    Returns
    -------
    r : RIndexMatrix

    Raises
    ------
    ValueError
        If the feature width differs from the model's, or ``raw`` is set and
        no statistics are available.
    """
    features = check_2d(
        np.asarray(features, dtype=np.float64), "features", checkpoint.n_features
    )
    if raw:
        stats = reference if reference is not None else checkpoint.reference
        if stats is None:
            raise ValueError(
                "Raw features need reference statistics; the checkpoint holds none"
            )
        features = stats.apply(features, covariates)

    values = reconstruct_indices(checkpoint.bundle, features)
    return RIndexMatrix(values, subject_ids, checkpoint_id=checkpoint.checkpoint_id)


def infer_dataset(checkpoint, dataset, raw=False):
    """:func:`infer` on the PT rows of a :class:`~hetgan.synthdata.Dataset`."""
    pt = ~dataset.is_cn
    covariates = None if dataset.covariates is None else dataset.covariates[pt]
    return infer(
        checkpoint, dataset.pt, dataset.pt_ids, raw=raw, covariates=covariates
    )


def align_to(r, reference):
    """
    Reorder the columns of ``r`` to best match a reference.

    Parameters
    ----------
    r : RIndexMatrix
    reference : RIndexMatrix or ndarray of float
        Another model's R-indices on the same subjects, or ground-truth
        severities ``(n, M)``.

    Returns
    -------
    aligned : RIndexMatrix
        Copy of ``r`` with columns permuted by the best matching of
        :func:`~hetgan.metrics.pattern_c_index`; ``permutation`` is composed
        with any permutation ``r`` already carried.
    """
    if isinstance(reference, RIndexMatrix):
        if reference.subject_ids != r.subject_ids:
            raise ValueError("r and reference must cover the same subjects in order")
        reference = reference.values
    result = pattern_c_index(r.values, reference)
    perm = list(result.permutation)
    base = r.permutation or tuple(range(r.n_patterns))
    return replace(
        r,
        values=r.values[:, perm],
        subject_ids=list(r.subject_ids),
        permutation=tuple(base[p] for p in perm),
    )


def write_rindex(r, path, lo=0.4, hi=0.7):
    """
    Write R-indices as CSV with columns ``subject_id``, ``r_1`` to ``r_M``
    and ``group``.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    columns = ["r_{}".format(k + 1) for k in range(r.n_patterns)]
    frame = pd.DataFrame(r.values, columns=columns)
    frame.insert(0, "subject_id", r.subject_ids)
    frame["group"] = r.labels(lo, hi)
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT)
    logger.info("Wrote R-indices of %d subjects to %s", len(r.subject_ids), path)
    return path


def read_rindex(path):
    """Read a CSV written by :func:`write_rindex`."""
    try:
        frame = pd.read_csv(path, dtype={"subject_id": str})
    except (pd.errors.ParserError, pd.errors.EmptyDataError) as exc:
        raise CohortFormatError("Cannot parse {}: {}".format(path, exc)) from exc
    columns = [c for c in frame.columns if c.startswith("r_")]
    if "subject_id" not in frame.columns or not columns:
        raise CohortFormatError("{} has no subject_id or r_ columns".format(path))
    return RIndexMatrix(frame[columns].to_numpy(dtype=np.float64), frame["subject_id"])
