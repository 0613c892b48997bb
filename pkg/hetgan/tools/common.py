import warnings

import numpy as np


# Adapted from the private scipy 1.7.3 helper, only nan_policy 'raise'
def contains_nan(a):
    """Raise if ``a`` holds nan values; return whether the check could run."""
    nan_policy = "raise"
    try:
        # Calling np.sum to avoid creating a huge array into memory
        with np.errstate(invalid="ignore"):
            contains_nan_var = np.isnan(np.sum(a))
    except TypeError:
        try:
            contains_nan_var = np.nan in set(a.ravel())
        except TypeError:
            contains_nan_var = False
            nan_policy = "omit"
            warnings.warn(
                "The input array could not be properly "
                "checked for nan values. nan values "
                "will be ignored.",
                RuntimeWarning,
            )

    if contains_nan_var:
        raise ValueError("The input contains nan values")

    return contains_nan_var, nan_policy


def check_2d(x, name="x", width=None):
    """
    Promote a 1-D array to a column and check the result is 2-D.

    Parameters
    ----------
    x : ndarray
        Input array.
    name : str, default: "x"
        Name used in error messages.
    width : int or None, default: None
        Expected number of columns, if any.

    Returns
    -------
    x : ndarray
        2-D view of the input.
    """
    x = np.asarray(x)
    if x.ndim == 1:
        x = x[:, np.newaxis]
    elif x.ndim != 2:
        raise ValueError(
            "Expected a 2-D array `{}`, found shape {}".format(name, x.shape)
        )
    if width is not None and x.shape[1] != width:
        raise ValueError(
            "Shape mismatch, `{}` must have {} columns, found shape {}".format(
                name, width, x.shape
            )
        )
    return x


def check_same_rows(*arrays, names=None):
    """Check that every input has the same number of rows."""
    names = names or ["input {}".format(i) for i in range(len(arrays))]
    rows = [arr.shape[0] for arr in arrays]
    if len(set(rows)) > 1:
        raise ValueError(
            "Shape mismatch, {} must have the same number of rows, found {}".format(
                ", ".join(names), [arr.shape for arr in arrays]
            )
        )


def check_unit_interval(z, name="z"):
    """Check that every entry of ``z`` lies in [0, 1]."""
    if np.any(z < 0) or np.any(z > 1):
        raise ValueError(
            "Entries of `{}` must lie in [0, 1], found range [{}, {}]".format(
                name, np.min(z), np.max(z)
            )
        )


def check_positive_int(value, name, minimum=1):
    """Check ``value`` is an integer no smaller than ``minimum``."""
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
        raise ValueError("Expected {} of type int, got {}".format(name, type(value)))
    if value < minimum:
        raise ValueError("{} must be >= {}, got {}".format(name, minimum, value))


def check_rng(random_state=None):
    """
    Turn ``random_state`` into a :class:`numpy.random.Generator`.

    Parameters
    ----------
    random_state : None, int, SeedSequence or Generator, default: None
        Seed material. A ``Generator`` is passed through unchanged so that a
        single stream can be threaded through several calls.

    Returns
    -------
    rng : numpy.random.Generator
    """
    if isinstance(random_state, np.random.Generator):
        return random_state
    return np.random.default_rng(random_state)
