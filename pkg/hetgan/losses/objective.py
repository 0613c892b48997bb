import dataclasses
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from ..tools import check_2d, check_same_rows, check_unit_interval
from .terms import (
    _cross_entropy,
    adversarial_losses,
    change_loss,
    cn_loss,
    decom_loss,
    mono_loss,
    ortho_loss,
    recons_loss,
)


@dataclass(frozen=True)
class LossWeights:
    r"""
    Coefficients of the regularizers in the transformation objective.

    Parameters
    ----------
    gamma : float, default: 6.0
        Weight of the change loss.
    kappa : float, default: 80.0
        Weight of the decomposition loss.
    zeta : float, default: 80.0
        Weight of the reconstruction loss.
    lam : float, default: 0.2
        Weight of the orthogonality loss. This is the value swept during model
        selection.
    mu : float, default: 500.0
        Weight of the monotonicity loss.
    eta : float, default: 6.0
        Weight of the cn loss.

    Examples
    --------
    >>> from hetgan.losses import LossWeights
    >>> LossWeights(lam=0.4).without("mu", "zeta").mu
    0.0
    >>> LossWeights().scaled(kappa=1.5).kappa
    120.0
    """

    gamma: float = 6.0
    kappa: float = 80.0
    zeta: float = 80.0
    lam: float = 0.2
    mu: float = 500.0
    eta: float = 6.0

    def __post_init__(self):
        for field in dataclasses.fields(self):
            value = getattr(self, field.name)
            if not (math.isfinite(value) and value >= 0):
                raise ValueError(
                    "Loss weight {} must be finite and nonnegative, got {}".format(
                        field.name, value
                    )
                )

    @classmethod
    def names(cls):
        return [field.name for field in dataclasses.fields(cls)]

    def _check_names(self, names):
        unknown = [name for name in names if name not in self.names()]
        if unknown:
            raise ValueError(
                "Unknown loss weights {}, must be in {}".format(unknown, self.names())
            )

    def scaled(self, **factors):
        """Copy with the named weights multiplied by the given factors."""
        self._check_names(factors)
        return dataclasses.replace(
            self, **{name: getattr(self, name) * f for name, f in factors.items()}
        )

    def without(self, *names):
        """Copy with the named weights set to zero."""
        self._check_names(names)
        return dataclasses.replace(self, **{name: 0.0 for name in names})

    def asdict(self):
        return dataclasses.asdict(self)


class LossReport(NamedTuple):
    """Loss values of one training iteration."""

    gan_d: float
    gan_f: float
    change: float
    decom: float
    recons: float
    ortho: float
    mono: float
    cn: float
    total_f: float

    def summary(self):
        return " ".join("{}={:.6g}".format(k, v) for k, v in self._asdict().items())

    def is_finite(self):
        return all(math.isfinite(v) for v in self)


REGULARIZERS = {
    "change": "gamma",
    "decom": "kappa",
    "recons": "zeta",
    "ortho": "lam",
    "mono": "mu",
    "cn": "eta",
}


def total_generator_loss(terms, weights):
    """
    Weighted objective of the transformation function.

    Parameters
    ----------
    terms : LossReport or dict
        Term values; ``gan_f`` and every regularizer in :data:`REGULARIZERS`
        are read, other fields are ignored.
    weights : LossWeights
        Regularizer coefficients.

    Returns
    -------
    total : float
        ``gan_f + gamma*change + kappa*decom + zeta*recons + lam*ortho
        + mu*mono + eta*cn``.

    Examples
    --------
    >>> from hetgan.losses import LossWeights, total_generator_loss
    >>> terms = dict(gan_f=0.7, change=0.5, decom=0, recons=0, ortho=0, mono=0, cn=0)
    >>> w = LossWeights(gamma=6, kappa=0, zeta=0, lam=0, mu=0, eta=0)
    >>> round(total_generator_loss(terms, w), 12)
    3.7
    """
    if hasattr(terms, "_asdict"):
        terms = terms._asdict()
    total = terms["gan_f"]
    for term, weight in REGULARIZERS.items():
        total += getattr(weights, weight) * terms[term]

    return float(total)


def _check_latents(bundle, x, *latents):
    x = check_2d(np.asarray(x, dtype=np.float64), name="x", width=bundle.n_features)
    checked = []
    for name, z in latents:
        z = check_2d(
            np.asarray(z, dtype=np.float64), name=name, width=bundle.n_patterns
        )
        check_same_rows(x, z, names=["x", name])
        check_unit_interval(z, name=name)
        checked.append(z)
    return (x, *checked)


def _masked_latents(z):
    for i in range(z.shape[1]):
        a = np.zeros_like(z)
        a[:, i] = z[:, i]
        yield a


def _component_passes(f, x, z):
    q, caches = [], []
    for a in _masked_latents(z):
        y, cache = f.forward(x, a)
        q.append(y - x)
        caches.append(cache)
    return q, caches


def component_deltas(bundle, x, z):
    """
    Changes induced by each latent component on its own.

    Parameters
    ----------
    bundle : ModelBundle
    x : ndarray of float
        CN rows of shape ``(n, S)``.
    z : ndarray of float
        Latent vectors of shape ``(n, M)`` in [0, 1].

    Returns
    -------
    q : list of ndarray
        ``q_i = f(x, a^i) - x`` where ``a^i`` keeps column ``i`` of ``z`` and
        zeroes the others. One extra forward pass per component.
    """
    x, z = _check_latents(bundle, x, ("z", z))
    return _component_passes(bundle.f, x, z)[0]


def _add_into(total, grads, scale=1.0):
    for t, g in zip(total, grads):
        t += scale * g


def generator_step(bundle, x, z, z_prime, z_cn, weights, gan_d=float("nan")):
    """
    Evaluate the transformation objective and its gradient w.r.t. ``f``.

    Gradients flow back through the discriminator input, the decomposer and
    the reconstructor into ``f``; the parameter gradients of ``D``, ``g1`` and
    ``g2`` computed on the way are discarded.

    Parameters
    ----------
    bundle : ModelBundle
    x : ndarray of float
        CN batch of shape ``(n, S)``.
    z : ndarray of float
        Latent batch of shape ``(n, M)``.
    z_prime : ndarray of float
        Latent batch dominating ``z`` component-wise.
    z_cn : ndarray of float
        Near-zero latent batch.
    weights : LossWeights
        Regularizer coefficients.
    gan_d : float, default: nan
        Discriminator loss of the same iteration, copied into the report.

    Returns
    -------
    report : LossReport
        Every term on this batch.
    grads : list of ndarray
        Gradients aligned with ``bundle.f.params()``.
    """
    x, z, z_prime, z_cn = _check_latents(
        bundle, x, ("z", z), ("z_prime", z_prime), ("z_cn", z_cn)
    )
    f, d, g1, g2 = bundle.f, bundle.d, bundle.g1, bundle.g2

    y_syn, cache_syn = f.forward(x, z)
    probs, cache_d = d.forward(y_syn)
    gan_f, grad_probs = _cross_entropy(probs, 1)
    change, grad_change = change_loss(x, y_syn, return_grad=True)

    q, cache_q = _component_passes(f, x, z)
    g1_out, cache_g1 = g1.forward(y_syn)
    decom, (grad_g1_decom, grad_q_decom) = decom_loss(g1_out, q, return_grad=True)
    r_hat, cache_g2 = g2.forward(g1_out)
    recons, grad_r = recons_loss(r_hat, z, return_grad=True)
    ortho, grad_q_ortho = ortho_loss(q, return_grad=True)

    y_prime, cache_prime = f.forward(x, z_prime)
    mono, (grad_mono_z, grad_mono_prime) = mono_loss(
        x, y_syn, y_prime, return_grad=True
    )
    y_cn, cache_cn = f.forward(x, z_cn)
    cn, grad_cn = cn_loss(x, y_cn, return_grad=True)

    terms = dict(
        gan_d=gan_d,
        gan_f=gan_f,
        change=change,
        decom=decom,
        recons=recons,
        ortho=ortho,
        mono=mono,
        cn=cn,
    )
    report = LossReport(total_f=total_generator_loss(terms, weights), **terms)

    w = weights
    grad_g1_out = w.kappa * grad_g1_decom + w.zeta * g2.backward(cache_g2, grad_r)[0]
    grad_y = (
        d.backward(cache_d, grad_probs)[0]
        + w.gamma * grad_change
        + g1.backward(cache_g1, grad_g1_out)[0]
        + w.mu * grad_mono_z
    )
    _, grads = f.backward(cache_syn, grad_y)

    for cache, g_dec, g_ort in zip(cache_q, grad_q_decom, grad_q_ortho):
        _add_into(grads, f.backward(cache, w.kappa * g_dec + w.lam * g_ort)[1])
    _add_into(grads, f.backward(cache_prime, w.mu * grad_mono_prime)[1])
    _add_into(grads, f.backward(cache_cn, w.eta * grad_cn)[1])

    return report, grads


def discriminator_step(bundle, x, y, z):
    """
    Discriminator loss on real rows ``y`` against ``f(x, z)`` and its
    gradient w.r.t. the parameters of ``D``.
    """
    x, z = _check_latents(bundle, x, ("z", z))
    y = check_2d(np.asarray(y, dtype=np.float64), name="y", width=bundle.n_features)
    d = bundle.d

    y_syn = bundle.f(x, z)
    probs_real, cache_real = d.forward(y)
    probs_syn, cache_syn = d.forward(y_syn)
    loss_d, _, (grad_real, grad_syn, _) = adversarial_losses(
        probs_real, probs_syn, return_grad=True
    )
    _, grads = d.backward(cache_real, grad_real)
    _add_into(grads, d.backward(cache_syn, grad_syn)[1])

    return loss_d, grads


def decomposer_step(bundle, x, z):
    """Decomposition loss and its gradient w.r.t. the parameters of ``g1``."""
    x, z = _check_latents(bundle, x, ("z", z))
    y_syn = bundle.f(x, z)
    q, _ = _component_passes(bundle.f, x, z)
    g1_out, cache = bundle.g1.forward(y_syn)
    decom, (grad_out, _) = decom_loss(g1_out, q, return_grad=True)

    return decom, bundle.g1.backward(cache, grad_out)[1]


def reconstructor_step(bundle, x, z):
    """Reconstruction loss and its gradient w.r.t. the parameters of ``g2``."""
    x, z = _check_latents(bundle, x, ("z", z))
    g1_out = bundle.g1(bundle.f(x, z))
    r_hat, cache = bundle.g2.forward(g1_out)
    recons, grad_r = recons_loss(r_hat, z, return_grad=True)

    return recons, bundle.g2.backward(cache, grad_r)[1]
