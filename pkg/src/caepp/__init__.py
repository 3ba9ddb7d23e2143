"""Exact simulation of carrier-assisted entanglement purification for qudit Bell-diagonal states."""
__version__ = "0.1.0"

from .adaptive import (
    EpsilonTracker,
    Schedule,
    epsilon_decay_model,
    final_pauli_correction,
    hadamard_relabel,
    mub_preprocess,
    run_adaptive,
    threshold_predicates,
)
from .exceptions import NonConvergenceError, SizeGuardError, ZeroSuccessError
from .mcaepp import (
    decay_params,
    fixed_point,
    preprocess_permutation,
    round_update_depolarizing,
    round_update_general,
    stationary_table,
    success_probability,
)
from .phase_space import PhasePoint, SymplecticMap, WeylString, commutation_phase, mub_lines
from .single_carrier import closed_form_fidelity, converges, round_update, trajectory
from .state_model import BellTable, depolarizing, from_marginal_params, make_bell_table, mub_weights

__all__ = [
    "BellTable",
    "EpsilonTracker",
    "NonConvergenceError",
    "PhasePoint",
    "Schedule",
    "SizeGuardError",
    "SymplecticMap",
    "WeylString",
    "ZeroSuccessError",
    "closed_form_fidelity",
    "commutation_phase",
    "converges",
    "decay_params",
    "depolarizing",
    "epsilon_decay_model",
    "final_pauli_correction",
    "fixed_point",
    "from_marginal_params",
    "hadamard_relabel",
    "make_bell_table",
    "mub_lines",
    "mub_preprocess",
    "mub_weights",
    "preprocess_permutation",
    "round_update",
    "round_update_depolarizing",
    "round_update_general",
    "run_adaptive",
    "stationary_table",
    "success_probability",
    "threshold_predicates",
    "trajectory",
]
