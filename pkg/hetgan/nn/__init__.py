from .gradcheck import finite_difference_check, numerical_gradient
from .layers import (
    ACTIVATIONS,
    LEAKY_SLOPE,
    DenseLayer,
    LayerCache,
    LayerGrads,
    dense_backward,
    dense_forward,
    leaky_relu,
)
from .optim import AdamState, adam_step, clip_weights

__all__ = [s for s in dir()]  # add imported primitives to __all__
