from dataclasses import dataclass
from typing import Optional

import numpy as np
from sklearn.linear_model import LinearRegression
from sklearn.preprocessing import StandardScaler

from ..tools import check_2d
from ._utils import _check_features, _check_mask


@dataclass
class ReferenceStats:
    """
    CN reference statistics of a feature matrix.

    Attributes
    ----------
    mean : ndarray of float
        CN mean of each (residualized) feature, shape ``(S,)``.
    scale : ndarray of float
        CN standard deviation of each (residualized) feature, shape ``(S,)``.
    coef : ndarray of float or None
        Covariate slopes of shape ``(c, S)``, ``None`` without covariates.
    """

    mean: np.ndarray
    scale: np.ndarray
    coef: Optional[np.ndarray] = None

    def __post_init__(self):
        self.mean = np.asarray(self.mean, dtype=np.float64).ravel()
        self.scale = np.asarray(self.scale, dtype=np.float64).ravel()
        if self.mean.shape != self.scale.shape:
            raise ValueError("mean and scale must have the same length")
        if self.coef is not None:
            self.coef = check_2d(
                np.asarray(self.coef, dtype=np.float64), "coef", self.mean.shape[0]
            )

    @property
    def n_features(self):
        return self.mean.shape[0]

    def apply(self, features, covariates=None):
        """
        Map raw features onto the CN-standardized scale.

        Parameters
        ----------
        features : ndarray of float
            Shape ``(n, S)``.
        covariates : ndarray of float or None
            Shape ``(n, c)``; required when the statistics hold slopes.

        Returns
        -------
        z : ndarray of float
        """
        features = check_2d(
            np.asarray(features, dtype=np.float64), "features", self.n_features
        )
        if self.coef is not None:
            if covariates is None:
                raise ValueError(
                    "These statistics were fit with {} covariates, none given".format(
                        self.coef.shape[0]
                    )
                )
            covariates = check_2d(
                np.asarray(covariates, dtype=np.float64),
                "covariates",
                self.coef.shape[0],
            )
            features = features - covariates @ self.coef
        return (features - self.mean) / self.scale

    def asdict(self):
        return {
            "mean": self.mean.tolist(),
            "scale": self.scale.tolist(),
            "coef": None if self.coef is None else self.coef.tolist(),
        }

    @classmethod
    def from_dict(cls, values):
        return cls(values["mean"], values["scale"], values.get("coef"))


def _collinear_columns(design):
    """Columns of ``design`` that add nothing to the rank of their predecessors."""
    found = []
    rank = 0
    for c in range(design.shape[1]):
        new_rank = np.linalg.matrix_rank(design[:, : c + 1])
        if new_rank == rank:
            found.append(c)
        rank = new_rank
    return found


def residualize(features, covariates, cn_mask, return_coef=False):
    """
    Remove covariate effects estimated on the CN rows.

    Each feature is regressed on the covariates (with intercept) over the CN
    rows; the fitted slopes times the covariates are subtracted from every
    row. The intercept is kept.

    Parameters
    ----------
    features : ndarray of float
        Shape ``(n, S)``.
    covariates : ndarray of float
        Shape ``(n, c)``. With ``c = 0`` the features are returned unchanged.
    cn_mask : ndarray of bool
        Shape ``(n,)``.
    return_coef : bool, default: False
        Also return the slopes, shape ``(c, S)``.

    Returns
    -------
    adjusted : ndarray of float
    coef : ndarray of float
        Only with ``return_coef=True``.

    Raises
    ------
    ValueError
        If the covariates are collinear on the CN rows.

    Examples
    --------
    >>> import numpy as np
    >>> from hetgan.synthdata import residualize
    >>> cov = np.arange(6.0).reshape(-1, 1)
    >>> x = 2.0 * cov + 1.0
    >>> np.round(residualize(x, cov, np.ones(6, dtype=bool)).ravel(), 6)
    array([1., 1., 1., 1., 1., 1.])
    """
    features = _check_features(features)
    covariates = check_2d(np.asarray(covariates, dtype=np.float64), "covariates")
    if covariates.shape[0] != features.shape[0]:
        raise ValueError(
            "covariates must have {} rows, found {}".format(
                features.shape[0], covariates.shape[0]
            )
        )
    cn_mask = _check_mask(cn_mask, features.shape[0])
    n_cov = covariates.shape[1]
    if n_cov == 0:
        coef = np.zeros((0, features.shape[1]))
        return (features.copy(), coef) if return_coef else features.copy()

    cov_cn = covariates[cn_mask]
    design = np.column_stack([np.ones(cov_cn.shape[0]), cov_cn])
    if np.linalg.matrix_rank(design) < n_cov + 1:
        bad = [c - 1 for c in _collinear_columns(design)]
        raise ValueError(
            "Covariates are collinear on the CN rows (columns {} are "
            "linear combinations of the intercept and earlier columns)".format(bad)
        )

    model = LinearRegression().fit(cov_cn, features[cn_mask])
    coef = model.coef_.T
    adjusted = features - covariates @ coef
    return (adjusted, coef) if return_coef else adjusted


def standardize(features, cn_mask, feature_names=None):
    """
    Z-score every feature against the CN rows.

    Parameters
    ----------
    features : ndarray of float
        Shape ``(n, S)``.
    cn_mask : ndarray of bool
        Shape ``(n,)``.
    feature_names : list of str or None, default: None
        Used in error messages.

    Returns
    -------
    z : ndarray of float
        ``(x - mean_CN) / std_CN`` per feature.
    stats : ReferenceStats

    Raises
    ------
    ValueError
        If a feature has zero variance over the CN rows.
    """
    features = _check_features(features)
    cn_mask = _check_mask(cn_mask, features.shape[0])
    scaler = StandardScaler().fit(features[cn_mask])
    constant = np.flatnonzero(scaler.var_ == 0)
    if constant.size:
        names = feature_names or [
            "feature {}".format(j) for j in range(len(scaler.var_))
        ]
        raise ValueError(
            "Zero CN variance for {}".format(", ".join(names[j] for j in constant))
        )
    stats = ReferenceStats(scaler.mean_, scaler.scale_)
    return stats.apply(features), stats


def fit_reference(dataset):
    """
    Residualize (when covariates are present) and standardize a dataset.

    Parameters
    ----------
    dataset : Dataset

    Returns
    -------
    standardized : Dataset
        Copy with the transformed features.
    stats : ReferenceStats
        Statistics that reproduce the transformation on new rows through
        :meth:`ReferenceStats.apply`.
    """
    features = dataset.features
    coef = None
    if dataset.covariates is not None and dataset.covariates.shape[1] > 0:
        features, coef = residualize(
            features, dataset.covariates, dataset.is_cn, return_coef=True
        )
    z, stats = standardize(features, dataset.is_cn, dataset.feature_names)
    stats.coef = coef
    return dataset.with_features(z), stats
