import numpy as np

from ..networks import MAX_PATTERNS
from ..tools import check_2d, contains_nan


class _CheckInputs:
    """Checks a pair of R-index (or severity) matrices."""

    def __init__(self, r, truth, names=("r", "truth")):
        self.r = r
        self.truth = truth
        self.names = names

    def __call__(self):
        self.r = check_2d(np.asarray(self.r, dtype=np.float64), self.names[0])
        self.truth = check_2d(np.asarray(self.truth, dtype=np.float64), self.names[1])
        contains_nan(self.r)
        contains_nan(self.truth)
        if self.r.shape != self.truth.shape:
            raise ValueError(
                "Shape mismatch, {} and {} must have the same shape, "
                "found {} and {}".format(
                    *self.names, self.r.shape, self.truth.shape
                )
            )
        n, m = self.r.shape
        if n < 2:
            raise ValueError("At least 2 rows are needed, found {}".format(n))
        if m > MAX_PATTERNS:
            raise ValueError(
                "Permutation search supports at most {} columns, found {}".format(
                    MAX_PATTERNS, m
                )
            )
        return self.r, self.truth
