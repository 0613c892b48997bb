import hashlib
import json
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from ..exceptions import (
    CheckpointFormatError,
    CheckpointShapeError,
    CheckpointVersionError,
)
from ..losses import LossReport
from ..networks import (
    DecomposerNet,
    DiscriminatorNet,
    ModelBundle,
    ReconstructorNet,
    TransformationNet,
)
from ..nn import DenseLayer
from ..synthdata.preprocess import ReferenceStats
from .config import TrainConfig

FORMAT_VERSION = 1
LAYER_COUNTS = {"f": 5, "d": 3, "g1": 1, "g2": 3}


@dataclass
class Checkpoint:
    """
    A trained (or initialized) model and the metadata needed to replay it.

    Attributes
    ----------
    bundle : ModelBundle
        The four networks.
    config : TrainConfig
        Snapshot of the training configuration; ``config.seed`` is the run
        seed.
    iteration : int
        Last completed iteration.
    converged : bool
        Whether the stopping rule fired before ``max_iterations``.
    report : LossReport or None
        Losses of the last iteration, ``None`` before the first one.
    reference : ReferenceStats or None
        CN reference statistics of the features the model was trained on.
    """

    bundle: ModelBundle
    config: TrainConfig
    iteration: int = 0
    converged: bool = False
    report: Optional[LossReport] = None
    reference: Optional[ReferenceStats] = None

    @property
    def seed(self):
        return self.config.seed

    @property
    def n_patterns(self):
        return self.bundle.n_patterns

    @property
    def n_features(self):
        return self.bundle.n_features

    @property
    def checkpoint_id(self):
        """Short content hash of the canonical encoding."""
        return hashlib.sha256(dumps_checkpoint(self).encode("utf-8")).hexdigest()[:12]


def _encode_network(net):
    layers = []
    for desc, layer in zip(net.describe(), net.layers):
        desc["weights"] = layer.weights.tolist()
        desc["bias_values"] = None if layer.bias is None else layer.bias.tolist()
        layers.append(desc)
    return layers


def dumps_checkpoint(checkpoint):
    """Canonical text encoding of a checkpoint (sorted keys, fixed indent)."""
    doc = {
        "format_version": FORMAT_VERSION,
        "n_patterns": checkpoint.n_patterns,
        "n_features": checkpoint.n_features,
        "seed": checkpoint.seed,
        "iteration": int(checkpoint.iteration),
        "converged": bool(checkpoint.converged),
        "config": checkpoint.config.asdict(),
        "losses": None if checkpoint.report is None else checkpoint.report._asdict(),
        "networks": {
            name: _encode_network(net)
            for name, net in checkpoint.bundle.networks().items()
        },
        "reference": (
            None if checkpoint.reference is None else checkpoint.reference.asdict()
        ),
    }
    return json.dumps(doc, sort_keys=True, indent=1) + "\n"


def save_checkpoint(checkpoint, path):
    """
    Write a checkpoint as structured text.

    The file is written to a temporary sibling first and moved into place, so
    a reader never sees a partial checkpoint.

    Parameters
    ----------
    checkpoint : Checkpoint
    path : str or Path

    Returns
    -------
    path : Path
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    text = dumps_checkpoint(checkpoint)
    fd, tmp = tempfile.mkstemp(dir=str(path.parent), prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.remove(tmp)
        raise

    return path


def _decode_layer(net_name, index, doc):
    try:
        shape = tuple(int(s) for s in doc["shape"])
        activation = doc["activation"]
        has_bias = bool(doc["bias"])
        weights = np.asarray(doc["weights"], dtype=np.float64)
        bias = doc["bias_values"]
    except (KeyError, TypeError, ValueError) as exc:
        raise CheckpointFormatError(
            "Malformed layer {} of network {}: {}".format(index, net_name, exc)
        ) from exc

    if weights.shape != shape:
        raise CheckpointShapeError(
            "Layer {} of network {} declares shape {}, stored weights have {}".format(
                index, net_name, shape, weights.shape
            )
        )
    if has_bias != (bias is not None):
        raise CheckpointFormatError(
            "Layer {} of network {} has inconsistent bias fields".format(
                index, net_name
            )
        )
    if bias is not None:
        bias = np.asarray(bias, dtype=np.float64)
        if bias.shape != (shape[0],):
            raise CheckpointShapeError(
                "Layer {} of network {} declares {} outputs, stored bias has {}".format(
                    index, net_name, shape[0], bias.shape
                )
            )
    try:
        return DenseLayer(weights, bias, activation)
    except ValueError as exc:
        raise CheckpointFormatError(str(exc)) from exc


def _check_widths(bundle):
    m, s = bundle.n_patterns, bundle.n_features
    expected = [
        ("f encoder input", bundle.f.encoder_x[0].n_in, s),
        ("f z-decoder input", bundle.f.z_decoder.n_in, m),
        ("f output", bundle.f.decoder_y[-1].n_out, s),
        ("d input", bundle.d.layers[0].n_in, s),
        ("g1 input", bundle.g1.linear.n_in, s),
        ("g1 output", bundle.g1.linear.n_out, s * m),
        ("g2 input", bundle.g2.layers[0].n_in, s),
    ]
    for what, found, want in expected:
        if found != want:
            raise CheckpointShapeError(
                "{} width is {}, expected {} for M={}, S={}".format(
                    what, found, want, m, s
                )
            )


def load_checkpoint(path):
    """
    Read a checkpoint written by :func:`save_checkpoint`.

    Parameters
    ----------
    path : str or Path

    Returns
    -------
    checkpoint : Checkpoint

    Raises
    ------
    CheckpointVersionError
        The file was written with another format version.
    CheckpointFormatError
        The file is not valid structured text or misses fields.
    CheckpointShapeError
        A declared shape disagrees with the stored arrays or with (M, S).
    """
    text = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CheckpointFormatError(
            "{} is not a valid checkpoint: {}".format(path, exc)
        )
    if not isinstance(doc, dict) or "format_version" not in doc:
        raise CheckpointFormatError("{} has no format_version field".format(path))
    if doc["format_version"] != FORMAT_VERSION:
        raise CheckpointVersionError(
            "{} has format version {}, expected {}".format(
                path, doc["format_version"], FORMAT_VERSION
            )
        )

    try:
        n_patterns = int(doc["n_patterns"])
        n_features = int(doc["n_features"])
        networks = doc["networks"]
        config = TrainConfig.from_dict(doc["config"])
        report = None if doc["losses"] is None else LossReport(**doc["losses"])
        reference = doc["reference"]
        if reference is not None:
            reference = ReferenceStats.from_dict(reference)
        iteration = int(doc["iteration"])
        converged = bool(doc["converged"])
    except (KeyError, TypeError, ValueError) as exc:
        raise CheckpointFormatError(
            "{} is missing or has bad fields: {}".format(path, exc)
        )

    layers = {}
    for name, count in LAYER_COUNTS.items():
        if name not in networks or len(networks[name]) != count:
            raise CheckpointFormatError(
                "Network {} must have {} layers in {}".format(name, count, path)
            )
        layers[name] = [_decode_layer(name, i, d) for i, d in enumerate(networks[name])]

    f = layers["f"]
    try:
        bundle = ModelBundle(
            f=TransformationNet(f[:2], f[2], f[3:]),
            d=DiscriminatorNet(layers["d"]),
            g1=DecomposerNet(layers["g1"][0]),
            g2=ReconstructorNet(layers["g2"], n_patterns),
            n_patterns=n_patterns,
            n_features=n_features,
        )
    except ValueError as exc:
        raise CheckpointShapeError(str(exc)) from exc
    _check_widths(bundle)

    return Checkpoint(bundle, config, iteration, converged, report, reference)
