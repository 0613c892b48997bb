import numpy as np

from ..exceptions import TrainingDivergedError
from ._utils import check_congruent


class AdamState:
    r"""
    Moment accumulators and hyper-parameters of the ADAM optimizer.

    Parameters
    ----------
    params : list of ndarray
        Parameter arrays the state is built for. Only their shapes are used.
    lr : float
        Learning rate, must be positive.
    beta1 : float, default: 0.5
        Decay rate of the first moment.
    beta2 : float, default: 0.999
        Decay rate of the second moment.
    epsilon : float, default: 1e-8
        Denominator guard.

    Notes
    -----
    With gradient :math:`g_t` at step :math:`t`,

    .. math::

        m_t &= \beta_1 m_{t-1} + (1 - \beta_1) g_t \\
        v_t &= \beta_2 v_{t-1} + (1 - \beta_2) g_t^2 \\
        \theta_t &= \theta_{t-1} - \mathrm{lr} \frac{m_t / (1 - \beta_1^t)}
                    {\sqrt{v_t / (1 - \beta_2^t)} + \epsilon}
    """

    def __init__(self, params, lr, beta1=0.5, beta2=0.999, epsilon=1e-8):
        if not lr >= 0:
            raise ValueError("lr must be nonnegative, got {}".format(lr))
        self.lr = lr
        self.beta1 = beta1
        self.beta2 = beta2
        self.epsilon = epsilon
        self.m = [np.zeros_like(p) for p in params]
        self.v = [np.zeros_like(p) for p in params]
        self.t = 0


def adam_step(state, params, grads):
    """
    Apply one bias-corrected ADAM update in place.

    Parameters
    ----------
    state : AdamState
        Optimizer state, updated in place.
    params : list of ndarray
        Parameter arrays, updated in place.
    grads : list of ndarray
        Gradients aligned with ``params``.

    Returns
    -------
    params : list of ndarray
        The updated parameters (same objects as the input).

    Raises
    ------
    TrainingDivergedError
        If any gradient entry is not finite.

    Examples
    --------
    >>> import numpy as np
    >>> from hetgan.nn import AdamState, adam_step
    >>> w = [np.array([1.0])]
    >>> state = AdamState(w, lr=0.1)
    >>> _ = adam_step(state, w, [np.array([2.0])])
    >>> round(float(w[0][0]), 6), state.t
    (0.9, 1)
    """
    check_congruent(params, grads)
    for i, g in enumerate(grads):
        if not np.all(np.isfinite(g)):
            raise TrainingDivergedError(
                "Non-finite gradient in parameter array {}".format(i)
            )

    state.t += 1
    bc1 = 1.0 - state.beta1**state.t
    bc2 = 1.0 - state.beta2**state.t
    for p, g, m, v in zip(params, grads, state.m, state.v):
        m *= state.beta1
        m += (1.0 - state.beta1) * g
        v *= state.beta2
        v += (1.0 - state.beta2) * (g * g)
        p -= state.lr * (m / bc1) / (np.sqrt(v / bc2) + state.epsilon)

    return params


def clip_weights(params, bound):
    """
    Clamp every parameter entry into ``[-bound, bound]`` in place.

    Examples
    --------
    >>> import numpy as np
    >>> from hetgan.nn import clip_weights
    >>> clip_weights([np.array([0.7, -0.7, 0.3])], 0.5)[0].tolist()
    [0.5, -0.5, 0.3]
    """
    if not bound > 0:
        raise ValueError("bound must be positive, got {}".format(bound))
    for p in params:
        np.clip(p, -bound, bound, out=p)

    return params
