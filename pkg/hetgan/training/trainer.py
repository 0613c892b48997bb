import dataclasses
import logging
from typing import NamedTuple

import numpy as np
from joblib import Parallel, delayed

from ..exceptions import ReplicaError, TrainingDivergedError
from ..losses import (
    decomposer_step,
    discriminator_step,
    generator_step,
    reconstructor_step,
)
from ..networks import init_bundle
from ..nn import AdamState, adam_step, clip_weights
from ..tools import check_2d, check_positive_int
from .checkpoint import Checkpoint
from .config import TrainConfig
from .latent import sample_cn_latent, sample_latent, sample_severity_conditioned

logger = logging.getLogger(__name__)


class OptimizerStates(NamedTuple):
    """One ADAM state per network."""

    d: AdamState
    f: AdamState
    g1: AdamState
    g2: AdamState

    @classmethod
    def for_bundle(cls, bundle, config):
        return cls(
            AdamState(bundle.d.params(), config.lr_d),
            AdamState(bundle.f.params(), config.lr_fg),
            AdamState(bundle.g1.params(), config.lr_fg),
            AdamState(bundle.g2.params(), config.lr_fg),
        )


def _update(net, state, grads, clip_bound=None, report=None):
    try:
        adam_step(state, net.params(), grads)
    except TrainingDivergedError as exc:
        raise TrainingDivergedError(str(exc), report=report) from exc
    if clip_bound is not None:
        clip_weights(net.params(), clip_bound)


def train_step(bundle, x_batch, y_batch, config, rng, states, trace=None):
    """
    One iteration of alternating updates.

    The discriminator is updated first on a fresh latent batch ``z``; ``z'``
    and ``z_cn`` are then drawn and ``f``, ``g1`` and ``g2`` are updated in
    that order, each seeing the parameters its predecessors just wrote.
    ``f``, ``g1`` and ``g2`` are clipped right after their own update.

    Parameters
    ----------
    bundle : ModelBundle
        Networks, updated in place.
    x_batch : ndarray of float
        CN batch of shape ``(m, S)``.
    y_batch : ndarray of float
        PT batch of shape ``(m, S)``.
    config : TrainConfig
    rng : Generator
        Training stream.
    states : OptimizerStates
    trace : list or None, default: None
        When given, the name of each updated network is appended in order.

    Returns
    -------
    report : LossReport

    Raises
    ------
    TrainingDivergedError
        If a loss or a gradient is not finite. Carries the last report.
    """
    x_batch = check_2d(x_batch, "x_batch", width=bundle.n_features)
    y_batch = check_2d(y_batch, "y_batch", width=bundle.n_features)
    m = x_batch.shape[0]
    n_patterns = bundle.n_patterns

    z = sample_latent(m, n_patterns, rng)
    loss_d, grads_d = discriminator_step(bundle, x_batch, y_batch, z)
    if not np.isfinite(loss_d):
        raise TrainingDivergedError("Discriminator loss is {}".format(loss_d))
    _update(bundle.d, states.d, grads_d)
    if trace is not None:
        trace.append("d")

    z_prime = sample_severity_conditioned(z, rng)
    z_cn = sample_cn_latent(m, n_patterns, rng)
    report, grads_f = generator_step(
        bundle, x_batch, z, z_prime, z_cn, config.weights, gan_d=loss_d
    )
    if not report.is_finite():
        raise TrainingDivergedError(
            "Non-finite loss: " + report.summary(), report=report
        )
    _update(bundle.f, states.f, grads_f, config.clip_bound, report)
    if trace is not None:
        trace.append("f")

    _, grads_g1 = decomposer_step(bundle, x_batch, z)
    _update(bundle.g1, states.g1, grads_g1, config.clip_bound, report)
    if trace is not None:
        trace.append("g1")

    _, grads_g2 = reconstructor_step(bundle, x_batch, z)
    _update(bundle.g2, states.g2, grads_g2, config.clip_bound, report)
    if trace is not None:
        trace.append("g2")

    return report


def _partitions(dataset):
    cn = check_2d(np.asarray(dataset.cn, dtype=np.float64), "cn")
    pt = check_2d(np.asarray(dataset.pt, dtype=np.float64), "pt", width=cn.shape[1])
    if cn.shape[0] == 0 or pt.shape[0] == 0:
        raise ValueError(
            "Both partitions must be non-empty, found {} CN and {} PT rows".format(
                cn.shape[0], pt.shape[0]
            )
        )
    return cn, pt


def _epoch_batches(n, batch, rng):
    """Endless index batches over shuffled epochs; the short tail is dropped."""
    while True:
        perm = rng.permutation(n)
        for start in range(0, n - batch + 1, batch):
            yield perm[start : start + batch]


def _resampled_batches(n, batch, rng):
    while True:
        yield rng.integers(0, n, size=batch)


def train(dataset, config=None, reference=None):
    """
    Train one model.

    Parameters
    ----------
    dataset : Dataset
        Anything with ``cn`` and ``pt`` feature matrices of equal width.
    config : TrainConfig, default: TrainConfig()
    reference : ReferenceStats or None, default: None
        Preprocessing statistics to store in the checkpoint.

    Returns
    -------
    checkpoint : Checkpoint
        ``converged`` is set when the smoothed reconstruction and
        monotonicity losses both fell below their thresholds at or after
        ``min_iterations``.

    Raises
    ------
    ValueError
        If a partition is empty.
    TrainingDivergedError
        If training produced a non-finite value. ``iteration`` is set.
    """
    config = config or TrainConfig()
    cn, pt = _partitions(dataset)
    init_seq, train_seq = np.random.SeedSequence(config.seed).spawn(2)
    bundle = init_bundle(
        config.n_patterns,
        cn.shape[1],
        seed=init_seq,
        hidden=config.hidden,
        clip_bound=config.clip_bound,
    )
    rng = np.random.default_rng(train_seq)
    states = OptimizerStates.for_bundle(bundle, config)

    batch = config.batch_size(pt.shape[0])
    pt_batches = _epoch_batches(pt.shape[0], batch, rng)
    if cn.shape[0] < pt.shape[0]:
        cn_batches = _resampled_batches(cn.shape[0], batch, rng)
    else:
        cn_batches = _epoch_batches(cn.shape[0], batch, rng)

    report = None
    ema_recons = ema_mono = None
    decay = config.ema_decay
    iteration = 0
    converged = False
    while iteration < config.max_iterations:
        iteration += 1
        try:
            x_batch = cn[next(cn_batches)]
            y_batch = pt[next(pt_batches)]
            report = train_step(bundle, x_batch, y_batch, config, rng, states)
        except TrainingDivergedError as exc:
            exc.iteration = iteration
            logger.error("Training diverged at iter=%d: %s", iteration, exc)
            raise

        if ema_recons is None:
            ema_recons, ema_mono = report.recons, report.mono
        else:
            ema_recons = decay * ema_recons + (1 - decay) * report.recons
            ema_mono = decay * ema_mono + (1 - decay) * report.mono

        if iteration % config.log_interval == 0:
            logger.info(
                "iter=%d %s ema_recons=%.6g ema_mono=%.6g",
                iteration,
                report.summary(),
                ema_recons,
                ema_mono,
            )
        if (
            iteration >= config.min_iterations
            and ema_recons < config.recons_stop
            and ema_mono < config.mono_stop
        ):
            converged = True
            break

    if converged:
        logger.info("Converged at iter=%d (seed=%d)", iteration, config.seed)
    else:
        logger.info(
            "Stopped at max_iterations=%d without convergence (seed=%d)",
            config.max_iterations,
            config.seed,
        )

    return Checkpoint(bundle, config, iteration, converged, report, reference)


def _train_replica(index, dataset, config, reference):
    logger.info("Replica %d started (seed=%d)", index, config.seed)
    try:
        checkpoint = train(dataset, config, reference)
    except Exception as exc:
        raise ReplicaError(
            "Replica {} (seed={}) failed: {!r}".format(index, config.seed, exc),
            replica=index,
        ) from exc
    logger.info("Replica %d finished at iter=%d", index, checkpoint.iteration)
    return checkpoint


def train_replicas(
    dataset, config=None, n_replicas=10, base_seed=None, reference=None, workers=1
):
    """
    Train independent replicas of one configuration.

    Parameters
    ----------
    dataset : Dataset
    config : TrainConfig, default: TrainConfig()
    n_replicas : int, default: 10
        Number of replicas.
    base_seed : int or None, default: None
        Replica ``i`` uses seed ``base_seed + i``. Defaults to ``config.seed``.
    reference : ReferenceStats or None, default: None
    workers : int, default: 1
        Number of replicas trained concurrently (``-1`` uses every core).
        Results do not depend on it.

    Returns
    -------
    checkpoints : list of Checkpoint
        In replica order.

    Raises
    ------
    ReplicaError
        If a replica fails; ``replica`` holds its index.
    """
    config = config or TrainConfig()
    check_positive_int(n_replicas, "n_replicas")
    base_seed = config.seed if base_seed is None else base_seed
    configs = [
        dataclasses.replace(config, seed=base_seed + i) for i in range(n_replicas)
    ]

    return list(
        Parallel(n_jobs=workers)(
            [
                delayed(_train_replica)(i, dataset, cfg, reference)
                for i, cfg in enumerate(configs)
            ]
        )
    )
