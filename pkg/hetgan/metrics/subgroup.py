import numpy as np

from ..tools import check_2d, check_unit_interval


def subgroup_by_r(r, lo=0.4, hi=0.7):
    """
    Label subjects by which single pattern they express and how strongly.

    A subject whose R-indices are all below ``lo`` is ``"mixed-low"``. A
    subject with every dimension but ``i`` below ``lo`` is ``"r<i>-mid"`` when
    ``lo <= r_i <= hi`` and ``"r<i>-high"`` when ``r_i > hi`` (dimensions
    numbered from 1). Everyone else is ``"mixed"``.

    Parameters
    ----------
    r : ndarray of float
        R-indices of shape ``(n, M)`` in [0, 1].
    lo, hi : float, default: 0.4, 0.7
        Thresholds with ``0 <= lo < hi <= 1``.

    Returns
    -------
    labels : ndarray of str
        Shape ``(n,)``.

    Examples
    --------
    >>> from hetgan.metrics import subgroup_by_r
    >>> subgroup_by_r([[0.8, 0.1], [0.5, 0.5], [0.1, 0.1], [0.2, 0.6]]).tolist()
    ['r1-high', 'mixed', 'mixed-low', 'r2-mid']
    """
    if not 0 <= lo < hi <= 1:
        raise ValueError(
            "Expected 0 <= lo < hi <= 1, got lo={} and hi={}".format(lo, hi)
        )
    r = check_2d(np.asarray(r, dtype=np.float64), "r")
    check_unit_interval(r, "r")

    low = r < lo
    labels = np.full(r.shape[0], "mixed", dtype=object)
    for i in range(r.shape[1]):
        others_low = np.delete(low, i, axis=1).all(axis=1)
        labels[others_low & ~low[:, i] & (r[:, i] <= hi)] = "r{}-mid".format(i + 1)
        labels[others_low & (r[:, i] > hi)] = "r{}-high".format(i + 1)
    labels[low.all(axis=1)] = "mixed-low"
    return labels.astype(str)
