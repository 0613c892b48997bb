from .agreement import AgreementTable, HyperSelection, agreement_table, select_hyper
from .concordance import (
    AlignmentResult,
    brute_c_index,
    c_index,
    c_index_matrix,
    pattern_agr_index,
    pattern_c_index,
)
from .lipschitz import (
    Lemma1Diagnostic,
    estimate_lipschitz,
    lemma1_diagnostic,
    lemma1_slack,
)
from .subgroup import subgroup_by_r

__all__ = [s for s in dir()]  # add imported metrics to __all__
