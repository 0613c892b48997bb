import dataclasses
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import yaml

from ..losses import LossWeights
from ..synthdata import VARIANTS
from ..training import TrainConfig

SECTIONS = ("data", "train", "weights", "sweep", "output")


def _check_keys(values, allowed, section):
    if not isinstance(values, dict):
        raise ValueError(
            "Section {} must be a mapping, got {}".format(
                section, type(values).__name__
            )
        )
    unknown = sorted(set(values) - set(allowed))
    if unknown:
        raise ValueError("Unknown keys {} in section {}".format(unknown, section))


def _section(doc, name):
    value = doc.get(name)
    return {} if value is None else value


def _names(cls):
    return [f.name for f in dataclasses.fields(cls)]


@dataclass(frozen=True)
class DataConfig:
    """
    Where the cohort comes from.

    ``cohort`` and ``truth`` name CSV files for the commands that read data;
    the remaining keys drive ``generate``.
    """

    cohort: Optional[str] = None
    truth: Optional[str] = None
    variant: str = "basic"
    n_cn: int = 492
    n_pt: int = 900
    n_features: int = 139
    n_patterns: int = 3
    seed: int = 0
    n_covariates: int = 0
    covariate_effect: float = 0.0

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(
                "Unknown variant {}, must be in {}".format(
                    self.variant, sorted(VARIANTS)
                )
            )


@dataclass(frozen=True)
class SweepConfig:
    """Grid of ``(M, lam)`` cells and the replicas trained in each."""

    n_patterns: tuple = (2, 3, 4)
    lambdas: tuple = (0.1, 0.2, 0.4, 0.6, 0.8)
    n_replicas: int = 10
    workers: int = 1
    base_seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "n_patterns", tuple(int(m) for m in self.n_patterns))
        object.__setattr__(self, "lambdas", tuple(float(v) for v in self.lambdas))
        if not self.n_patterns or not self.lambdas:
            raise ValueError("The sweep grid must hold at least one M and one lambda")
        if self.n_replicas < 2:
            raise ValueError(
                "Agreement needs at least 2 replicas, got {}".format(self.n_replicas)
            )

    @property
    def cells(self):
        return [(m, lam) for m in self.n_patterns for lam in self.lambdas]


@dataclass(frozen=True)
class OutputConfig:
    """Output directory and subgroup thresholds of written R-indices."""

    dir: str = "hetgan-out"
    lo: float = 0.4
    hi: float = 0.7

    def __post_init__(self):
        if not 0 <= self.lo <= self.hi <= 1:
            raise ValueError(
                "Expected 0 <= lo <= hi <= 1, got {} and {}".format(self.lo, self.hi)
            )


@dataclass(frozen=True)
class RunConfig:
    """
    Configuration of a command-line run.

    Every value has a default, so a document may name nothing but the
    cohort file. The YAML layout mirrors the attributes::

        data:
          cohort: cohort.csv
        train:
          max_iterations: 200000
        weights:
          lam: 0.4
          scale: {kappa: 1.5}
        sweep:
          n_replicas: 5
        output:
          dir: runs/basic

    The ``scale`` map multiplies loss weights after the explicit values are
    applied. Unknown keys raise ``ValueError``.
    """

    data: DataConfig = field(default_factory=DataConfig)
    train: TrainConfig = field(default_factory=TrainConfig)
    sweep: SweepConfig = field(default_factory=SweepConfig)
    output: OutputConfig = field(default_factory=OutputConfig)

    @classmethod
    def from_dict(cls, doc):
        """Build a config from a parsed document."""
        doc = {} if doc is None else doc
        _check_keys(doc, SECTIONS, "top level")

        data = _section(doc, "data")
        _check_keys(data, _names(DataConfig), "data")

        weights = _section(doc, "weights")
        _check_keys(weights, LossWeights.names() + ["scale"], "weights")
        weights = dict(weights)
        scale = weights.pop("scale", None) or {}
        _check_keys(scale, LossWeights.names(), "weights.scale")
        loss_weights = LossWeights(**weights).scaled(**scale)

        train = _section(doc, "train")
        _check_keys(
            train, [n for n in _names(TrainConfig) if n != "weights"], "train"
        )
        sweep = _section(doc, "sweep")
        _check_keys(sweep, _names(SweepConfig), "sweep")
        output = _section(doc, "output")
        _check_keys(output, _names(OutputConfig), "output")

        return cls(
            data=DataConfig(**data),
            train=TrainConfig(weights=loss_weights, **train),
            sweep=SweepConfig(**sweep),
            output=OutputConfig(**output),
        )

    @classmethod
    def load(cls, path):
        """Read a YAML document; malformed YAML raises ``ValueError``."""
        text = Path(path).read_text(encoding="utf-8")
        try:
            doc = yaml.safe_load(text)
        except yaml.YAMLError as exc:
            raise ValueError("Cannot parse {}: {}".format(path, exc)) from exc
        return cls.from_dict(doc)

    def asdict(self):
        """Plain document that :meth:`from_dict` turns back into this config."""
        train = self.train.asdict()
        weights = train.pop("weights")
        sweep = dataclasses.asdict(self.sweep)
        sweep["n_patterns"] = list(self.sweep.n_patterns)
        sweep["lambdas"] = list(self.sweep.lambdas)
        return {
            "data": dataclasses.asdict(self.data),
            "train": train,
            "weights": weights,
            "sweep": sweep,
            "output": dataclasses.asdict(self.output),
        }

    def dumps(self):
        return yaml.safe_dump(self.asdict(), sort_keys=True)

    def with_overrides(
        self,
        seed=None,
        variant=None,
        replicas=None,
        workers=None,
        lam=None,
        n_patterns=None,
        out=None,
    ):
        """
        Apply command-line flags on top of the document.

        ``seed`` sets the data seed, the training seed and the sweep base
        seed. ``lam`` and ``n_patterns`` set the training values and shrink
        the sweep grid to that single value.
        """
        data, train, sweep, output = self.data, self.train, self.sweep, self.output
        if seed is not None:
            data = dataclasses.replace(data, seed=seed)
            train = train.replace(seed=seed)
            sweep = dataclasses.replace(sweep, base_seed=seed)
        if variant is not None:
            data = dataclasses.replace(data, variant=variant)
        if replicas is not None:
            sweep = dataclasses.replace(sweep, n_replicas=replicas)
        if workers is not None:
            sweep = dataclasses.replace(sweep, workers=workers)
        if lam is not None:
            train = train.replace(lam=lam)
            sweep = dataclasses.replace(sweep, lambdas=(lam,))
        if n_patterns is not None:
            data = dataclasses.replace(data, n_patterns=n_patterns)
            train = train.replace(n_patterns=n_patterns)
            sweep = dataclasses.replace(sweep, n_patterns=(n_patterns,))
        if out is not None:
            output = dataclasses.replace(output, dir=str(out))
        return RunConfig(data, train, sweep, output)
