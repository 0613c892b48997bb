from .common import (
    check_2d,
    check_positive_int,
    check_rng,
    check_same_rows,
    check_unit_interval,
    contains_nan,
)

__all__ = [s for s in dir()]  # add imported helpers to __all__
