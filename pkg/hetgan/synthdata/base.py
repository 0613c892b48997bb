from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from ..tools import check_2d, check_same_rows, check_unit_interval

# name: (pattern size, shared regions, atrophy scale, noise spread)
VARIANTS = {
    "basic": (14, 4, 0.3, 0.05),
    "large_overlap": (14, 8, 0.3, 0.05),
    "scarce": (4, 0, 0.3, 0.05),
    "noisy": (14, 4, 0.3, 0.2),
    "mild": (14, 4, 0.2, 0.05),
}


@dataclass(frozen=True)
class PatternSpec:
    """
    Regions and strength of the planted atrophy patterns.

    Parameters
    ----------
    patterns : tuple of tuple of int
        Sorted region indices of each pattern.
    overlap : int
        Number of regions shared by every pair of patterns.
    alpha : float
        Atrophy scale.
    sigma : float
        Spread of the multiplicative noise on each reduction.
    n_features : int
        Number of regions `S`.
    variant : str, default: "custom"
        Name of the variant these settings come from.
    """

    patterns: Tuple[Tuple[int, ...], ...]
    overlap: int
    alpha: float
    sigma: float
    n_features: int
    variant: str = "custom"

    def __post_init__(self):
        patterns = tuple(tuple(sorted(int(j) for j in p)) for p in self.patterns)
        object.__setattr__(self, "patterns", patterns)
        if not patterns:
            raise ValueError("At least one pattern is required")

        sizes = {len(p) for p in patterns}
        if len(sizes) != 1 or 0 in sizes:
            raise ValueError(
                "Patterns must share one nonzero size, got {}".format(sizes)
            )
        for p in patterns:
            if len(set(p)) != len(p):
                raise ValueError("Pattern {} repeats a region".format(p))
            if p[0] < 0 or p[-1] >= self.n_features:
                raise ValueError(
                    "Region indices must lie in [0, {}), got {}".format(
                        self.n_features, p
                    )
                )
        for i in range(len(patterns)):
            for k in range(i + 1, len(patterns)):
                shared = len(set(patterns[i]) & set(patterns[k]))
                if shared != self.overlap:
                    raise ValueError(
                        "Patterns {} and {} share {} regions, expected {}".format(
                            i, k, shared, self.overlap
                        )
                    )
        if not self.alpha > 0:
            raise ValueError("alpha must be positive, got {}".format(self.alpha))
        if not self.sigma >= 0:
            raise ValueError("sigma must be nonnegative, got {}".format(self.sigma))

    @property
    def n_patterns(self):
        return len(self.patterns)

    @property
    def size(self):
        return len(self.patterns[0])

    def membership(self):
        """Boolean matrix of shape ``(M, S)``; entry ``(k, j)`` marks region
        ``j`` as part of pattern ``k``."""
        out = np.zeros((self.n_patterns, self.n_features), dtype=bool)
        for k, p in enumerate(self.patterns):
            out[k, list(p)] = True
        return out

    def asdict(self):
        return {
            "variant": self.variant,
            "patterns": [list(p) for p in self.patterns],
            "overlap": self.overlap,
            "alpha": self.alpha,
            "sigma": self.sigma,
            "n_features": self.n_features,
        }


@dataclass
class Dataset:
    """
    Feature matrix of a cohort with its CN / PT split.

    Attributes
    ----------
    features : ndarray of float
        Shape ``(n, S)``.
    is_cn : ndarray of bool
        Shape ``(n,)``; ``True`` for reference (CN) rows.
    subject_ids : list of str
    feature_names : list of str
    covariates : ndarray of float or None
        Shape ``(n, c)``.
    covariate_names : list of str
    truth : ndarray of float or None
        Ground-truth severities of the PT rows, in PT row order, shape
        ``(n_pt, M)``.
    """

    features: np.ndarray
    is_cn: np.ndarray
    subject_ids: list = None
    feature_names: list = None
    covariates: Optional[np.ndarray] = None
    covariate_names: list = field(default_factory=list)
    truth: Optional[np.ndarray] = None

    def __post_init__(self):
        self.features = check_2d(
            np.asarray(self.features, dtype=np.float64), "features"
        )
        self.is_cn = np.asarray(self.is_cn, dtype=bool).ravel()
        n, s = self.features.shape
        if self.is_cn.shape[0] != n:
            raise ValueError(
                "is_cn must have {} entries, found {}".format(n, self.is_cn.shape[0])
            )
        if self.subject_ids is None:
            self.subject_ids = ["s{:05d}".format(i) for i in range(n)]
        self.subject_ids = [str(s_id) for s_id in self.subject_ids]
        if len(self.subject_ids) != n or len(set(self.subject_ids)) != n:
            raise ValueError("subject_ids must hold {} unique entries".format(n))
        if self.feature_names is None:
            self.feature_names = ["roi_{:03d}".format(j) for j in range(s)]
        self.feature_names = list(self.feature_names)
        if len(self.feature_names) != s:
            raise ValueError("feature_names must hold {} entries".format(s))

        if self.covariates is not None:
            self.covariates = check_2d(
                np.asarray(self.covariates, dtype=np.float64), "covariates"
            )
            check_same_rows(
                self.features, self.covariates, names=["features", "covariates"]
            )
            if not self.covariate_names:
                self.covariate_names = [
                    "cov_{}".format(c) for c in range(self.covariates.shape[1])
                ]
            if len(self.covariate_names) != self.covariates.shape[1]:
                raise ValueError("covariate_names does not match covariate columns")
        if self.truth is not None:
            self.truth = check_2d(np.asarray(self.truth, dtype=np.float64), "truth")
            if self.truth.shape[0] != self.n_pt:
                raise ValueError(
                    "truth must have one row per PT subject ({}), found {}".format(
                        self.n_pt, self.truth.shape[0]
                    )
                )
            check_unit_interval(self.truth, "truth")

    @property
    def n_features(self):
        return self.features.shape[1]

    @property
    def n_pt(self):
        return int(np.sum(~self.is_cn))

    @property
    def cn(self):
        return self.features[self.is_cn]

    @property
    def pt(self):
        return self.features[~self.is_cn]

    @property
    def pt_ids(self):
        return [s_id for s_id, cn in zip(self.subject_ids, self.is_cn) if not cn]

    def with_features(self, features):
        """Copy with the feature matrix replaced (same rows and names)."""
        return Dataset(
            features,
            self.is_cn.copy(),
            list(self.subject_ids),
            list(self.feature_names),
            None if self.covariates is None else self.covariates.copy(),
            list(self.covariate_names),
            None if self.truth is None else self.truth.copy(),
        )


@dataclass
class SyntheticCohort:
    """
    A generated cohort: untouched CN volumes and patterned PT volumes.

    Attributes
    ----------
    cn : ndarray of float
        Shape ``(n_cn, S)``.
    pt : ndarray of float
        Shape ``(n_pt, S)``.
    truth : ndarray of float
        Severities in [0, 1] used to pattern ``pt``, shape ``(n_pt, M)``.
    spec : PatternSpec
    seed : int or None
    cn_covariates, pt_covariates : ndarray of float or None
        Planted covariates, shapes ``(n_cn, c)`` and ``(n_pt, c)``.
    """

    cn: np.ndarray
    pt: np.ndarray
    truth: np.ndarray
    spec: PatternSpec
    seed: Optional[int] = None
    cn_covariates: Optional[np.ndarray] = None
    pt_covariates: Optional[np.ndarray] = None

    def to_dataset(self):
        """Stack CN then PT rows into a :class:`Dataset`."""
        n_cn, n_pt = self.cn.shape[0], self.pt.shape[0]
        covariates = None
        if self.cn_covariates is not None:
            covariates = np.vstack([self.cn_covariates, self.pt_covariates])
        ids = ["CN{:04d}".format(i + 1) for i in range(n_cn)]
        ids += ["PT{:04d}".format(i + 1) for i in range(n_pt)]
        return Dataset(
            np.vstack([self.cn, self.pt]),
            np.r_[np.ones(n_cn, dtype=bool), np.zeros(n_pt, dtype=bool)],
            subject_ids=ids,
            covariates=covariates,
            truth=self.truth,
        )
