from .objective import (
    REGULARIZERS,
    LossReport,
    LossWeights,
    component_deltas,
    decomposer_step,
    discriminator_step,
    generator_step,
    reconstructor_step,
    total_generator_loss,
)
from .terms import (
    adversarial_losses,
    change_loss,
    cn_loss,
    decom_loss,
    mono_loss,
    ortho_loss,
    recons_loss,
)

__all__ = [s for s in dir()]  # add imported losses to __all__
