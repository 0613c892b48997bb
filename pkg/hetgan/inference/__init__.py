from .rindex import (
    RIndexMatrix,
    align_to,
    infer,
    infer_dataset,
    read_rindex,
    write_rindex,
)

__all__ = [s for s in dir()]  # add imported tools to __all__
