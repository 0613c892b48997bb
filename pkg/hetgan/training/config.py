import dataclasses
import math
from dataclasses import dataclass, field

from ..losses import LossWeights
from ..networks import HIDDEN_WIDTHS, MAX_PATTERNS


@dataclass(frozen=True)
class TrainConfig:
    r"""
    Hyper-parameters of one training run.

    Parameters
    ----------
    n_patterns : int, default: 3
        Number of patterns `M` (1 to 8).
    weights : LossWeights, default: LossWeights()
        Regularizer coefficients. ``weights.lam`` is the orthogonality weight.
    lr_d : float, default: 4e-5
        ADAM learning rate of the discriminator.
    lr_fg : float, default: 2e-4
        ADAM learning rate of ``f``, ``g1`` and ``g2``.
    clip_bound : float, default: 0.5
        Clipping bound of the ``f``, ``g1`` and ``g2`` parameters.
    batch_fraction : float, default: 0.125
        Batch size as a fraction of the PT partition size.
    min_iterations : int, default: 100000
        Iterations before the stopping rule is consulted.
    max_iterations : int, default: 300000
        Hard iteration limit. Reaching it flags the run as not converged.
    recons_stop : float, default: 0.003
        Threshold on the smoothed reconstruction loss.
    mono_stop : float, default: 6e-4
        Threshold on the smoothed monotonicity loss.
    ema_decay : float, default: 0.999
        Decay of the moving averages the stopping rule reads.
    seed : int, default: 0
        Seed of the run. Initialization and batch sampling use separate
        streams spawned from it.
    log_interval : int, default: 1000
        Iterations between two log lines.
    hidden : tuple of int, default: (69, 34)
        Hidden widths of ``f``, ``D`` and ``g2``.
    """

    n_patterns: int = 3
    weights: LossWeights = field(default_factory=LossWeights)
    lr_d: float = 4e-5
    lr_fg: float = 2e-4
    clip_bound: float = 0.5
    batch_fraction: float = 0.125
    min_iterations: int = 100000
    max_iterations: int = 300000
    recons_stop: float = 0.003
    mono_stop: float = 6e-4
    ema_decay: float = 0.999
    seed: int = 0
    log_interval: int = 1000
    hidden: tuple = HIDDEN_WIDTHS

    def __post_init__(self):
        if isinstance(self.weights, dict):
            object.__setattr__(self, "weights", LossWeights(**self.weights))
        object.__setattr__(self, "hidden", tuple(self.hidden))

        if not 1 <= self.n_patterns <= MAX_PATTERNS:
            raise ValueError(
                "n_patterns must be in [1, {}], got {}".format(
                    MAX_PATTERNS, self.n_patterns
                )
            )
        for name in ["lr_d", "lr_fg"]:
            if not getattr(self, name) >= 0:
                raise ValueError("{} must be nonnegative".format(name))
        for name in ["clip_bound", "recons_stop", "mono_stop"]:
            if not getattr(self, name) > 0:
                raise ValueError(
                    "{} must be positive, got {}".format(name, getattr(self, name))
                )
        if not 0 < self.batch_fraction <= 1:
            raise ValueError(
                "batch_fraction must be in (0, 1], got {}".format(self.batch_fraction)
            )
        if not 0 < self.ema_decay < 1:
            raise ValueError(
                "ema_decay must be in (0, 1), got {}".format(self.ema_decay)
            )
        if not 0 <= self.min_iterations <= self.max_iterations:
            raise ValueError(
                "Expected 0 <= min_iterations <= max_iterations, got {} and {}".format(
                    self.min_iterations, self.max_iterations
                )
            )
        if self.log_interval < 1:
            raise ValueError(
                "log_interval must be >= 1, got {}".format(self.log_interval)
            )
        if len(self.hidden) != 2:
            raise ValueError("hidden must hold two widths, got {}".format(self.hidden))

    @property
    def lam(self):
        return self.weights.lam

    def batch_size(self, n_pt):
        """Rows per batch for a PT partition of ``n_pt`` rows (at least 1)."""
        return max(1, int(math.floor(n_pt * self.batch_fraction)))

    def replace(self, **changes):
        """Copy with ``changes`` applied; ``lam`` updates the loss weights."""
        if "lam" in changes:
            weights = changes.get("weights", self.weights)
            changes["weights"] = dataclasses.replace(weights, lam=changes.pop("lam"))
        return dataclasses.replace(self, **changes)

    def asdict(self):
        """JSON-ready snapshot."""
        out = dataclasses.asdict(self)
        out["hidden"] = list(self.hidden)
        return out

    @classmethod
    def from_dict(cls, values):
        """Inverse of :meth:`asdict`; unknown keys raise ``ValueError``."""
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(values) - names)
        if unknown:
            raise ValueError("Unknown training options {}".format(unknown))
        values = dict(values)
        if "weights" in values and isinstance(values["weights"], dict):
            unknown = sorted(set(values["weights"]) - set(LossWeights.names()))
            if unknown:
                raise ValueError("Unknown loss weights {}".format(unknown))
            values["weights"] = LossWeights(**values["weights"])
        return cls(**values)
