import warnings

import numpy as np

from ..tools import check_2d

PROB_FLOOR = 1e-12
NORM_FLOOR = 1e-12


def _check_pair(a, b, names):
    a = check_2d(np.asarray(a, dtype=np.float64), name=names[0])
    b = check_2d(np.asarray(b, dtype=np.float64), name=names[1])
    if a.shape != b.shape:
        raise ValueError(
            "Shape mismatch, `{}` has shape {} and `{}` has shape {}".format(
                names[0], a.shape, names[1], b.shape
            )
        )
    return a, b


def _cross_entropy(probs, target):
    """Mean ``-log probs[:, target]`` and its gradient w.r.t. ``probs``."""
    probs = check_2d(np.asarray(probs, dtype=np.float64), name="probs", width=2)
    p = probs[:, target]
    clamped = p < PROB_FLOOR
    if np.any(clamped):
        warnings.warn(
            "{} probabilities below {} were clamped before taking the log".format(
                int(clamped.sum()), PROB_FLOOR
            ),
            RuntimeWarning,
        )
    n = probs.shape[0]
    value = float(np.mean(-np.log(np.maximum(p, PROB_FLOOR))))

    grad = np.zeros_like(probs)
    grad[:, target] = np.where(clamped, 0.0, -1.0 / (n * np.maximum(p, PROB_FLOOR)))
    return value, grad


def _row_norm_mean(diff):
    """Batch mean of per-row Euclidean norms, and its gradient w.r.t. ``diff``."""
    norms = np.linalg.norm(diff, axis=1)
    n = diff.shape[0]
    safe = np.where(norms > 0, norms, 1.0)
    grad = np.where((norms > 0)[:, np.newaxis], diff / (n * safe[:, np.newaxis]), 0.0)
    return float(np.mean(norms)), grad


def _row_l1_mean(diff):
    return float(np.mean(np.sum(np.abs(diff), axis=1))), np.sign(diff) / diff.shape[0]


def adversarial_losses(d_real, d_syn, return_grad=False):
    r"""
    Cross-entropy losses of the discriminator and of the transformation.

    Parameters
    ----------
    d_real : ndarray of float
        Discriminator outputs of shape ``(n, 2)`` on real PT rows.
    d_syn : ndarray of float
        Discriminator outputs of shape ``(m, 2)`` on synthesized rows.
    return_grad : bool, default: False
        Whether to also return gradients w.r.t. the probability inputs.

    Returns
    -------
    loss_d : float
        :math:`-\mathrm{mean}\log D(y)_1 - \mathrm{mean}\log D(y')_0`.
    gan_f : float
        :math:`-\mathrm{mean}\log D(y')_1` (non-saturating form).
    grads : tuple of ndarray
        Only when ``return_grad`` is set: gradients of ``loss_d`` w.r.t.
        ``d_real`` and ``d_syn``, then of ``gan_f`` w.r.t. ``d_syn``.

    Warns
    -----
    RuntimeWarning
        When a target-class probability below ``1e-12`` is clamped. Clamped
        entries contribute no gradient.

    Examples
    --------
    >>> import numpy as np
    >>> from hetgan.losses import adversarial_losses
    >>> half = np.full((4, 2), 0.5)
    >>> loss_d, gan_f = adversarial_losses(half, half)
    >>> bool(np.isclose(loss_d, 2 * np.log(2))), bool(np.isclose(gan_f, np.log(2)))
    (True, True)
    """
    real_term, grad_real = _cross_entropy(d_real, 1)
    fake_term, grad_fake = _cross_entropy(d_syn, 0)
    gan_f, grad_f = _cross_entropy(d_syn, 1)
    loss_d = real_term + fake_term

    if return_grad:
        return loss_d, gan_f, (grad_real, grad_fake, grad_f)
    return loss_d, gan_f


def change_loss(x, y_syn, return_grad=False):
    """
    Mean per-row L1 distance between synthesized and source rows.

    Parameters
    ----------
    x : ndarray of float
        Source CN rows of shape ``(n, S)``.
    y_syn : ndarray of float
        Synthesized rows of the same shape.
    return_grad : bool, default: False
        Whether to also return the gradient w.r.t. ``y_syn``.

    Returns
    -------
    loss : float
    grad : ndarray of float
        Only when ``return_grad`` is set.

    Examples
    --------
    >>> from hetgan.losses import change_loss
    >>> change_loss([[0.0, 0.0]], [[0.5, -0.5]])
    1.0
    """
    x, y_syn = _check_pair(x, y_syn, ["x", "y_syn"])
    value, grad = _row_l1_mean(y_syn - x)

    return (value, grad) if return_grad else value


def cn_loss(x, y_cn, return_grad=False):
    """
    Mean per-row L1 distance between rows synthesized from near-zero latent
    vectors and their sources. Same arithmetic as :func:`change_loss`.
    """
    x, y_cn = _check_pair(x, y_cn, ["x", "y_cn"])
    value, grad = _row_l1_mean(y_cn - x)

    return (value, grad) if return_grad else value


def decom_loss(g1_out, q, return_grad=False):
    """
    Mean per-row L2 distance between the decomposer output and the
    concatenated component changes.

    Parameters
    ----------
    g1_out : ndarray of float
        Decomposer output of shape ``(n, S * M)``.
    q : list of ndarray
        ``M`` component changes of shape ``(n, S)``, concatenated in order.
    return_grad : bool, default: False
        Whether to also return gradients w.r.t. ``g1_out`` and each ``q_i``.

    Returns
    -------
    loss : float
    grads : tuple
        Only when ``return_grad`` is set: ``(grad_g1_out, [grad_q_1, ...])``.
    """
    q_hat = np.concatenate([np.asarray(qi, dtype=np.float64) for qi in q], axis=1)
    g1_out, q_hat = _check_pair(g1_out, q_hat, ["g1_out", "q"])
    value, grad = _row_norm_mean(g1_out - q_hat)

    if return_grad:
        return value, (grad, np.split(-grad, len(q), axis=1))
    return value


def recons_loss(r_hat, z, return_grad=False):
    """
    Mean per-row L2 distance between reconstructed and true latent vectors.

    Examples
    --------
    >>> from hetgan.losses import recons_loss
    >>> round(recons_loss([[0.6, 0.8]], [[0.0, 0.0]]), 12)
    1.0
    """
    r_hat, z = _check_pair(r_hat, z, ["r_hat", "z"])
    value, grad = _row_norm_mean(r_hat - z)

    return (value, grad) if return_grad else value


def ortho_loss(q, return_grad=False):
    r"""
    Orthogonality penalty on the component changes.

    Per row, the columns of :math:`A \in R^{S \times M}` are
    :math:`|q_i| / \|q_i\|_2`; the loss is the batch mean of
    :math:`\|A^T A - I\|_F`.

    Parameters
    ----------
    q : list of ndarray
        ``M`` component changes of shape ``(n, S)``.
    return_grad : bool, default: False
        Whether to also return gradients w.r.t. each ``q_i``.

    Returns
    -------
    loss : float
    grads : list of ndarray
        Only when ``return_grad`` is set.

    Notes
    -----
    A row whose ``q_i`` is exactly zero has its norm replaced by ``1e-12``;
    that column of ``A`` is then zero and receives no gradient.

    Examples
    --------
    >>> import numpy as np
    >>> from hetgan.losses import ortho_loss
    >>> q1 = np.array([[1.0, 2.0, 0.0]])
    >>> bool(np.isclose(ortho_loss([q1, 3 * q1]), np.sqrt(2)))
    True
    """
    stacked = np.stack([np.asarray(qi, dtype=np.float64) for qi in q], axis=1)
    if stacked.ndim != 3:
        raise ValueError(
            "Expected M matrices of shape (n, S), found {}".format(stacked.shape)
        )
    n, m, _ = stacked.shape

    a = np.abs(stacked)
    norms = np.linalg.norm(a, axis=2, keepdims=True)
    safe = np.where(norms > 0, norms, NORM_FLOOR)
    cols = a / safe
    gram = np.einsum("nis,njs->nij", cols, cols)
    resid = gram - np.eye(m)
    fro = np.sqrt(np.sum(resid**2, axis=(1, 2)))
    value = float(np.mean(fro))
    if not return_grad:
        return value

    fro_safe = np.where(fro > 0, fro, 1.0)
    scale = np.where(fro > 0, 1.0 / (n * fro_safe), 0.0)[:, None, None]
    grad_gram = resid * scale
    # resid is symmetric, so d/dA_i picks up both (i, j) and (j, i)
    grad_cols = 2.0 * np.einsum("nij,njs->nis", grad_gram, cols)
    radial = np.sum(grad_cols * cols, axis=2, keepdims=True)
    grad_a = np.where(norms > 0, (grad_cols - cols * radial) / safe, 0.0)
    grad_q = grad_a * np.sign(stacked)

    return value, [grad_q[:, i, :] for i in range(m)]


def mono_loss(x, y_z, y_zp, return_grad=False):
    """
    Monotonicity penalty.

    Per row, ``v = max(|y_z - x| - |y_zp - x|, 0)`` element-wise, where
    ``y_zp`` was synthesized from a latent vector dominating the one behind
    ``y_z``. Returns the batch mean of ``||v||_2``.

    Returns
    -------
    loss : float
    grads : tuple of ndarray
        Only when ``return_grad`` is set: gradients w.r.t. ``y_z`` and
        ``y_zp``.

    Examples
    --------
    >>> from hetgan.losses import mono_loss
    >>> round(mono_loss([[0.0, 0.0]], [[0.3, -0.1]], [[0.1, 0.2]]), 12)
    0.2
    """
    x, y_z = _check_pair(x, y_z, ["x", "y_z"])
    _, y_zp = _check_pair(x, y_zp, ["x", "y_zp"])
    delta_z = y_z - x
    delta_zp = y_zp - x
    v = np.maximum(np.abs(delta_z) - np.abs(delta_zp), 0.0)
    value, grad_v = _row_norm_mean(v)

    if return_grad:
        return value, (grad_v * np.sign(delta_z), -grad_v * np.sign(delta_zp))
    return value
