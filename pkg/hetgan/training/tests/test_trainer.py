import numpy as np
import pytest
from numpy.testing import assert_array_equal, assert_raises

from ...exceptions import ReplicaError, TrainingDivergedError
from ...losses import discriminator_step
from ...networks import discriminate, init_bundle, transform
from ...synthdata import Dataset
from .. import (
    OptimizerStates,
    TrainConfig,
    dumps_checkpoint,
    sample_latent,
    train,
    train_replicas,
    train_step,
)


def _dataset(seed=0, n_cn=12, n_pt=16, n_features=6):
    rng = np.random.default_rng(seed)
    cn = rng.standard_normal((n_cn, n_features))
    pt = rng.standard_normal((n_pt, n_features)) - 0.5
    return Dataset(np.vstack([cn, pt]), np.r_[np.ones(n_cn), np.zeros(n_pt)])


def _separable(seed, n_cn=24, n_pt=32):
    rng = np.random.default_rng(seed)
    cn = rng.standard_normal((n_cn, 2)) - 2.0
    pt = rng.standard_normal((n_pt, 2)) + 2.0
    return Dataset(np.vstack([cn, pt]), np.r_[np.ones(n_cn), np.zeros(n_pt)])


def _config(**kwargs):
    values = dict(
        n_patterns=2,
        hidden=(5, 4),
        min_iterations=0,
        max_iterations=4,
        batch_fraction=0.25,
        log_interval=2,
        seed=3,
    )
    values.update(kwargs)
    return TrainConfig(**values)


def _params(bundle):
    return {k: [p.copy() for p in net.params()] for k, net in bundle.networks().items()}


class TestTrainStep:
    def setup_method(self):
        self.config = _config()
        self.bundle = init_bundle(2, 6, seed=0, hidden=(5, 4))
        self.states = OptimizerStates.for_bundle(self.bundle, self.config)
        data = _dataset()
        self.x, self.y = data.cn[:4], data.pt[:4]

    def test_update_order(self):
        trace = []
        train_step(
            self.bundle, self.x, self.y, self.config, np.random.default_rng(0),
            self.states, trace=trace,
        )

        assert trace == ["d", "f", "g1", "g2"]

    def test_zero_learning_rate(self):
        config = self.config.replace(lr_d=0.0, lr_fg=0.0)
        states = OptimizerStates.for_bundle(self.bundle, config)
        before = _params(self.bundle)
        rng = np.random.default_rng(0)
        train_step(self.bundle, self.x, self.y, config, rng, states)

        for name, net in self.bundle.networks().items():
            for p, b in zip(net.params(), before[name]):
                assert_array_equal(p, b)

    def test_all_networks_move(self):
        before = _params(self.bundle)
        rng = np.random.default_rng(0)
        report = train_step(
            self.bundle, self.x, self.y, self.config, rng, self.states
        )

        assert report.is_finite()
        for name, net in self.bundle.networks().items():
            assert any(
                not np.array_equal(p, b) for p, b in zip(net.params(), before[name])
            ), name

    def test_clipping(self):
        config = self.config.replace(lr_d=0.5, lr_fg=0.5, clip_bound=0.05)
        states = OptimizerStates.for_bundle(self.bundle, config)
        rng = np.random.default_rng(1)
        for _ in range(3):
            train_step(self.bundle, self.x, self.y, config, rng, states)

        for net in (self.bundle.f, self.bundle.g1, self.bundle.g2):
            for p in net.params():
                assert np.all(np.abs(p) <= 0.05)
        assert max(np.abs(p).max() for p in self.bundle.d.params()) > 0.05

    def test_discriminator_loss_decreases(self):
        config = _config(lr_d=1e-3, lr_fg=0.0)
        drops = []
        for seed in range(20):
            data = _separable(seed, n_cn=8, n_pt=8)
            bundle = init_bundle(2, 2, seed=seed, hidden=(5, 4))
            states = OptimizerStates.for_bundle(bundle, config)
            z = sample_latent(8, 2, np.random.default_rng(100 + seed))
            before, _ = discriminator_step(bundle, data.cn, data.pt, z)
            rng = np.random.default_rng(100 + seed)
            train_step(bundle, data.cn, data.pt, config, rng, states)
            after, _ = discriminator_step(bundle, data.cn, data.pt, z)
            drops.append(before - after)

        assert np.mean(drops) > 0
        assert sum(d > 0 for d in drops) >= 15


class TestTrain:
    def test_zero_iterations(self):
        checkpoint = train(_dataset(), _config(max_iterations=0))

        assert checkpoint.iteration == 0
        assert not checkpoint.converged
        assert checkpoint.report is None

    def test_max_iterations(self):
        checkpoint = train(_dataset(), _config(recons_stop=1e-12, mono_stop=1e-12))

        assert checkpoint.iteration == 4
        assert not checkpoint.converged
        assert checkpoint.report.is_finite()

    def test_stops_at_min_iterations(self):
        config = _config(
            min_iterations=2, max_iterations=10, recons_stop=1e9, mono_stop=1e9
        )
        checkpoint = train(_dataset(), config)

        assert checkpoint.converged
        assert checkpoint.iteration == 2

    @pytest.mark.parametrize("factor", [2.0, 100.0])
    def test_loose_thresholds_stop_no_later(self, factor):
        base = _config(max_iterations=6, recons_stop=0.5, mono_stop=0.05)
        loose = base.replace(
            recons_stop=0.5 * factor, mono_stop=0.05 * factor
        )

        assert train(_dataset(), loose).iteration <= train(_dataset(), base).iteration

    def test_deterministic(self):
        first = train(_dataset(), _config())
        second = train(_dataset(), _config())

        assert dumps_checkpoint(first) == dumps_checkpoint(second)

    def test_seed_changes_result(self):
        first = train(_dataset(), _config(seed=1))
        second = train(_dataset(), _config(seed=2))

        assert dumps_checkpoint(first) != dumps_checkpoint(second)

    def test_discriminator_separates(self):
        data = _separable(0)
        config = _config(max_iterations=100, lr_d=5e-3, hidden=(8, 6))
        bundle = train(data, config).bundle
        z = sample_latent(data.cn.shape[0], 2, np.random.default_rng(7))
        real = discriminate(bundle, data.pt)[:, 1].mean()
        synthetic = discriminate(bundle, transform(bundle, data.cn, z))[:, 1].mean()

        assert real > synthetic

    def test_few_cn_rows(self):
        checkpoint = train(_dataset(n_cn=2, n_pt=16), _config())

        assert checkpoint.iteration == 4

    def test_logging(self, caplog):
        with caplog.at_level("INFO", logger="hetgan.training.trainer"):
            train(_dataset(), _config())

        lines = [r.getMessage() for r in caplog.records if "iter=" in r.getMessage()]
        assert lines[0].startswith("iter=2 gan_d=")
        assert "ema_recons=" in lines[0]


class TestTrainErrorWarn:
    def test_empty_partition(self):
        data = _dataset()
        only_pt = Dataset(data.pt, np.zeros(data.pt.shape[0]))

        assert_raises(ValueError, train, only_pt, _config())

    def test_divergence(self):
        data = _dataset()
        data.features[:] = np.nan

        with pytest.raises(TrainingDivergedError) as exc:
            train(data, _config())
        assert exc.value.iteration == 1


class TestTrainReplicas:
    def test_seeds(self):
        checkpoints = train_replicas(_dataset(), _config(), n_replicas=3, base_seed=10)

        assert [c.seed for c in checkpoints] == [10, 11, 12]
        assert dumps_checkpoint(checkpoints[1]) == dumps_checkpoint(
            train(_dataset(), _config(seed=11))
        )

    def test_workers_do_not_change_results(self):
        serial = train_replicas(_dataset(), _config(), n_replicas=2, workers=1)
        parallel = train_replicas(_dataset(), _config(), n_replicas=2, workers=2)

        assert [dumps_checkpoint(c) for c in serial] == [
            dumps_checkpoint(c) for c in parallel
        ]

    def test_failure_names_replica(self):
        data = _dataset()
        data.features[:] = np.nan

        with pytest.raises(ReplicaError) as exc:
            train_replicas(data, _config(), n_replicas=2)
        assert exc.value.replica == 0
