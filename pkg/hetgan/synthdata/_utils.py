import numpy as np

from ..tools import check_2d, check_positive_int
from .base import VARIANTS


class _CheckInputs:
    """Check if the cohort arguments are correct."""

    def __init__(self, variant, n_cn, n_pt, n_features, n_covariates=0):
        self.variant = variant
        self.n_cn = n_cn
        self.n_pt = n_pt
        self.n_features = n_features
        self.n_covariates = n_covariates

    def __call__(self):
        if self.variant not in VARIANTS:
            raise ValueError(
                "Unknown variant {}, must be one of {}".format(
                    self.variant, sorted(VARIANTS)
                )
            )
        check_positive_int(self.n_cn, "n_cn")
        check_positive_int(self.n_pt, "n_pt")
        check_positive_int(self.n_features, "n_features")
        check_positive_int(self.n_covariates, "n_covariates", minimum=0)


def _check_mask(cn_mask, n):
    """Boolean CN mask of length ``n`` that selects at least one row."""
    cn_mask = np.asarray(cn_mask, dtype=bool).ravel()
    if cn_mask.shape[0] != n:
        raise ValueError(
            "cn_mask must have {} entries, found {}".format(n, cn_mask.shape[0])
        )
    if not np.any(cn_mask):
        raise ValueError("cn_mask selects no rows")
    return cn_mask


def _check_features(features):
    features = check_2d(np.asarray(features, dtype=np.float64), "features")
    if not np.all(np.isfinite(features)):
        raise ValueError("features contain NaN or infinite values")
    return features
