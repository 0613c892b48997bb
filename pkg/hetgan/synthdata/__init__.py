from .base import VARIANTS, Dataset, PatternSpec, SyntheticCohort
from .cohort import (
    build_pattern_spec,
    generate_baseline,
    impose_patterns,
    make_cohort,
)
from .io import read_dataset, read_truth, write_cohort, write_dataset, write_truth
from .preprocess import ReferenceStats, fit_reference, residualize, standardize

__all__ = [s for s in dir()]  # add imported tools to __all__
