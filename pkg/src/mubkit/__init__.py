"""Mutually unbiased bases, entropic uncertainty relations and information locking."""

from .designs import fourth_moment, two_design_defect
from .entropy import (
    avg_entropy,
    full_set_bound,
    maassen_uffink_bound,
    measure_distribution,
    renyi2_entropy,
    shannon_entropy,
)
from .locking import (
    Ensemble,
    Povm,
    bell_basis,
    build_locking_ensemble,
    covariant_povm_from_state,
    iacc_covariant,
    iacc_latin,
    iacc_lower_search,
    locking_gap,
    mutual_info_for_measurement,
    uniform_prior,
    unlocked_info,
)
from .mubs import (
    Basis,
    MubSet,
    PauliString,
    check_mub,
    latin_square_mubs,
    pauli_string_operator,
    pauli_x,
    pauli_z,
    permutation_witness,
    prime_mubs,
    product_mubs,
    qubit_triple,
)
from .squares import LatinSquare, are_orthogonal, extra_squares, mols_prime
from .uncertainty import (
    certify_tightness,
    entangled_invariance_check,
    minimize_avg_entropy,
    witness_state,
)

__version__ = "0.1.0"
