"""Independent ground truth: exhaustive Pauli-frame enumeration and dense simulation."""
from .crosscheck import CrossCheck, cross_check
from .enumeration import EnumerationResult, enumerate_multi_round, enumerate_single_round
from .statevector import (
    DenseState,
    LemmaReport,
    check_bilateral_relabel,
    check_commutation_convention,
    check_sum_frame_rules,
    statevector_round,
    verify_propagation_lemmas,
)

__all__ = [
    "CrossCheck",
    "DenseState",
    "EnumerationResult",
    "LemmaReport",
    "check_bilateral_relabel",
    "check_commutation_convention",
    "check_sum_frame_rules",
    "cross_check",
    "enumerate_multi_round",
    "enumerate_single_round",
    "statevector_round",
    "verify_propagation_lemmas",
]
