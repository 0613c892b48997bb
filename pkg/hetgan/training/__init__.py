from .checkpoint import (
    FORMAT_VERSION,
    Checkpoint,
    dumps_checkpoint,
    load_checkpoint,
    save_checkpoint,
)
from .config import TrainConfig
from .latent import (
    CN_LATENT_BOUND,
    sample_cn_latent,
    sample_latent,
    sample_severity_conditioned,
)
from .trainer import OptimizerStates, train, train_replicas, train_step

__all__ = [s for s in dir()]  # add imported training tools to __all__
