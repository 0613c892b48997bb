import json
import logging
from pathlib import Path

import numpy as np
import pandas as pd

from ..exceptions import CohortFormatError
from .base import Dataset

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.12g"
COVARIATE_PREFIX = "cov_"
TRUTH_PREFIX = "s"
GROUPS = ("CN", "PT")


def write_dataset(dataset, path, truth_path=None):
    """
    Write a dataset as one CSV row per subject.

    Columns are ``subject_id``, ``group`` (``CN`` or ``PT``), the covariates,
    then the features, with 12 significant digits.

    Parameters
    ----------
    dataset : Dataset
    path : str or Path
    truth_path : str or Path or None, default: None
        When given and the dataset has ground truth, the PT severities are
        written there keyed by ``subject_id`` (columns ``s1`` to ``sM``).

    Returns
    -------
    path : Path
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame = pd.DataFrame(
        {
            "subject_id": dataset.subject_ids,
            "group": np.where(dataset.is_cn, "CN", "PT"),
        }
    )
    if dataset.covariates is not None:
        names = [_covariate_column(n) for n in dataset.covariate_names]
        frame = frame.join(pd.DataFrame(dataset.covariates, columns=names))
    frame = frame.join(pd.DataFrame(dataset.features, columns=dataset.feature_names))
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT)

    if truth_path is not None and dataset.truth is not None:
        write_truth(dataset.pt_ids, dataset.truth, truth_path)
    return path


def _covariate_column(name):
    return name if name.startswith(COVARIATE_PREFIX) else COVARIATE_PREFIX + name


def write_truth(subject_ids, truth, path):
    """Write severities keyed by subject id."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    truth = np.asarray(truth, dtype=np.float64)
    columns = ["{}{}".format(TRUTH_PREFIX, k + 1) for k in range(truth.shape[1])]
    frame = pd.DataFrame(truth, columns=columns)
    frame.insert(0, "subject_id", list(subject_ids))
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT)
    return path


def read_truth(path, subject_ids=None):
    """
    Read a severity CSV written by :func:`write_truth`.

    Parameters
    ----------
    path : str or Path
    subject_ids : list of str or None, default: None
        When given, rows are returned in this order; a missing id raises
        :class:`~hetgan.exceptions.CohortFormatError`.

    Returns
    -------
    truth : ndarray of float
    ids : list of str
    """
    frame = _read_csv(path)
    if "subject_id" not in frame.columns:
        raise CohortFormatError("{} has no subject_id column".format(path))
    frame["subject_id"] = frame["subject_id"].astype(str)
    frame = frame.set_index("subject_id")
    if subject_ids is not None:
        missing = sorted(set(subject_ids) - set(frame.index))
        if missing:
            raise CohortFormatError(
                "{} has no severities for {} subjects, e.g. {}".format(
                    path, len(missing), missing[:3]
                )
            )
        frame = frame.loc[list(subject_ids)]
    return frame.to_numpy(dtype=np.float64), list(frame.index)


def _read_csv(path):
    try:
        return pd.read_csv(path, dtype={"subject_id": str})
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as exc:
        raise CohortFormatError("Cannot parse {}: {}".format(path, exc)) from exc


def read_dataset(path, truth_path=None):
    """
    Read a cohort CSV written by :func:`write_dataset`.

    Columns prefixed with ``cov_`` are covariates, every other column after
    ``subject_id`` and ``group`` is a feature.

    Parameters
    ----------
    path : str or Path
    truth_path : str or Path or None, default: None
        Severity CSV matched to the PT rows by ``subject_id``.

    Returns
    -------
    dataset : Dataset

    Raises
    ------
    CohortFormatError
        On missing columns, unknown groups, non-numeric or missing values.
    """
    frame = _read_csv(path)
    for column in ["subject_id", "group"]:
        if column not in frame.columns:
            raise CohortFormatError("{} has no {} column".format(path, column))
    groups = frame["group"].astype(str).str.upper()
    unknown = sorted(set(groups) - set(GROUPS))
    if unknown:
        raise CohortFormatError("{} has unknown groups {}".format(path, unknown))

    value_columns = [c for c in frame.columns if c not in ("subject_id", "group")]
    cov_columns = [c for c in value_columns if c.startswith(COVARIATE_PREFIX)]
    feature_columns = [c for c in value_columns if c not in cov_columns]
    if not feature_columns:
        raise CohortFormatError("{} has no feature columns".format(path))
    try:
        values = frame[value_columns].apply(pd.to_numeric, errors="raise")
    except (ValueError, TypeError) as exc:
        raise CohortFormatError("{} has non-numeric values: {}".format(path, exc))
    if values.isna().to_numpy().any():
        raise CohortFormatError("{} has missing values".format(path))

    is_cn = (groups == "CN").to_numpy()
    subject_ids = frame["subject_id"].astype(str).tolist()
    truth = None
    if truth_path is not None:
        pt_ids = [s for s, cn in zip(subject_ids, is_cn) if not cn]
        truth, _ = read_truth(truth_path, pt_ids)

    try:
        dataset = Dataset(
            values[feature_columns].to_numpy(dtype=np.float64),
            is_cn,
            subject_ids=subject_ids,
            feature_names=feature_columns,
            covariates=(
                values[cov_columns].to_numpy(dtype=np.float64) if cov_columns else None
            ),
            covariate_names=cov_columns,
            truth=truth,
        )
    except ValueError as exc:
        raise CohortFormatError("{}: {}".format(path, exc)) from exc
    logger.info(
        "Read %d CN and %d PT rows with %d features from %s",
        int(is_cn.sum()),
        dataset.n_pt,
        dataset.n_features,
        path,
    )
    return dataset


def write_cohort(cohort, directory):
    """
    Write a synthetic cohort with its truth and a JSON manifest.

    Parameters
    ----------
    cohort : SyntheticCohort
    directory : str or Path

    Returns
    -------
    paths : dict
        ``{"cohort": ..., "truth": ..., "manifest": ...}``.
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = {
        "cohort": directory / "cohort.csv",
        "truth": directory / "truth.csv",
        "manifest": directory / "manifest.json",
    }
    dataset = cohort.to_dataset()
    write_dataset(dataset, paths["cohort"], paths["truth"])
    manifest = {
        "seed": cohort.seed,
        "n_cn": int(cohort.cn.shape[0]),
        "n_pt": int(cohort.pt.shape[0]),
        "n_features": int(cohort.cn.shape[1]),
        "n_covariates": 0 if cohort.cn_covariates is None else int(
            cohort.cn_covariates.shape[1]
        ),
        "spec": cohort.spec.asdict(),
    }
    paths["manifest"].write_text(
        json.dumps(manifest, sort_keys=True, indent=1) + "\n", encoding="utf-8"
    )
    return paths
