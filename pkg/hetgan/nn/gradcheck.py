import numpy as np

from ._utils import check_congruent


def _as_params(params):
    return params.params() if hasattr(params, "params") else list(params)


def numerical_gradient(params, loss, h=1e-5):
    """
    Central finite-difference gradient of a scalar loss.

    Parameters
    ----------
    params : Network or list of ndarray
        Parameters perturbed in place (restored before returning).
    loss : callable
        Zero-argument callable evaluating the scalar loss at the current
        parameter values. Must be deterministic.
    h : float, default: 1e-5
        Perturbation size.

    Returns
    -------
    grads : list of ndarray
        Numerical gradients aligned with ``params``.
    """
    grads = []
    for p in _as_params(params):
        fd = np.zeros_like(p)
        for idx in np.ndindex(p.shape):
            orig = p[idx]
            p[idx] = orig + h
            loss_plus = loss()
            p[idx] = orig - h
            loss_minus = loss()
            p[idx] = orig
            fd[idx] = (loss_plus - loss_minus) / (2 * h)
        grads.append(fd)

    return grads


def finite_difference_check(params, loss, grads, h=1e-5):
    r"""
    Largest relative error between analytic and central-difference gradients.

    Parameters
    ----------
    params : Network or list of ndarray
        Parameters the analytic gradients were computed for.
    loss : callable
        Zero-argument callable evaluating the scalar loss at the current
        parameter values.
    grads : list of ndarray
        Analytic gradients aligned with ``params``.
    h : float, default: 1e-5
        Perturbation size.

    Returns
    -------
    error : float
        :math:`\max |a - d| / \max(|a|, |d|, 10^{-8})` over every parameter
        entry, where :math:`a` is analytic and :math:`d` the finite difference.

    Examples
    --------
    >>> import numpy as np
    >>> from hetgan.nn import finite_difference_check
    >>> w = [np.array([1.0, -2.0])]
    >>> loss = lambda: float(np.sum(3.0 * w[0]))
    >>> finite_difference_check(w, loss, [np.array([3.0, 3.0])]) < 1e-10
    True
    """
    params = _as_params(params)
    check_congruent(params, grads)
    numeric = numerical_gradient(params, loss, h=h)

    error = 0.0
    for analytic, fd in zip(grads, numeric):
        analytic = np.asarray(analytic, dtype=np.float64)
        denom = np.maximum(np.maximum(np.abs(analytic), np.abs(fd)), 1e-8)
        if analytic.size:
            error = max(error, float(np.max(np.abs(analytic - fd) / denom)))

    return error
