"""Exact algebra of Pauli, Majorana and fermionic strings, their Clifford
transformations, Jordan-Wigner maps and Z2 qubit tapering."""

from .clifford import (
    Generator,
    classify_alpha,
    clifford_apply,
    general_conjugate,
    number_phase_conjugate,
    sum_halfbody_conjugate,
    sum_halfbody_exp,
)
from .coeffs import Angle, Coeff, SymbolicCoeff, angle_is_clifford, coeff_add, coeff_mul
from .errors import (
    ConsistencyError,
    HermiticityError,
    ParseError,
    SizeGuardError,
    TaperingError,
    WidthMismatchError,
)
from .fermion import FermionicString, FermionicSum, ferm_commutator, ferm_mul, ferm_normalize
from .majorana import MajoranaString, MajoranaSum, maj_conjugate, maj_hermiticity, maj_mul, maj_parity
from .mappings import (
    fermion_to_majorana,
    inverse_jw,
    jw_fermion_to_pauli,
    jw_majorana_to_pauli,
    majorana_to_fermion,
)
from .parsing import format_sum, from_json, parse, to_json
from .pauli import PauliString, PauliSum, pauli_commutes, pauli_conjugate, pauli_exp, pauli_mul
from .tapering import (
    build_tapering_plan,
    conjugate_hamiltonian,
    find_z2_symmetries,
    h2_demo,
    sector_of_state,
    taper_qubits,
)

__version__ = "0.1.0"
