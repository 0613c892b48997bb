from .base import Network, SequentialNet
from .bundle import (
    MAX_PATTERNS,
    ModelBundle,
    decompose,
    discriminate,
    init_bundle,
    reconstruct_indices,
    transform,
)
from .nets import (
    HIDDEN_WIDTHS,
    DecomposerNet,
    DiscriminatorNet,
    ReconstructorNet,
    TransformationNet,
)

__all__ = [s for s in dir()]  # add imported networks to __all__
