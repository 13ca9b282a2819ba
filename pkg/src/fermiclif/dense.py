"""Dense-matrix ground truth on the 2^M dimensional Fock space.

Basis states are |n_0 n_1 ... n_{M-1}> with mode 0 the most significant bit,
so |1100> is index 12.  Fermionic operators carry Jordan-Wigner Z tails on the
lower modes.  All matrices here are built from Kronecker products of 2x2
blocks and never from the symbolic mappings, which keeps the oracle
independent of the code it checks.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Mapping

import numpy as np

from .coeffs import to_complex
from .errors import SizeGuardError
from .fermion import ANN, CRE, HOLE, NUM, FermionicString
from .majorana import MajoranaString
from .opsum import OperatorSum
from .pauli import PauliString

MAX_MODES = 12

_I2 = np.eye(2, dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)
_LOWER = np.array([[0, 1], [0, 0]], dtype=complex)  # a|1> = |0>
_PAULI = {"I": _I2, "X": _X, "Y": _Y, "Z": _Z}


def _guard(n: int) -> None:
    if n > MAX_MODES:
        raise SizeGuardError(f"dense matrices limited to {MAX_MODES} modes, got {n}")


def _kron_all(factors) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for f in factors:
        out = np.kron(out, f)
    return out


@lru_cache(maxsize=256)
def _ladder_matrix(n: int, p: int, creation: bool) -> np.ndarray:
    local = _LOWER.T.copy() if creation else _LOWER
    factors = [_Z] * p + [local] + [_I2] * (n - p - 1)
    m = _kron_all(factors)
    m.setflags(write=False)
    return m


def annihilator(n: int, p: int) -> np.ndarray:
    return _ladder_matrix(n, p, False)


def creator(n: int, p: int) -> np.ndarray:
    return _ladder_matrix(n, p, True)


def _pauli_matrix(s: PauliString) -> np.ndarray:
    return (1j ** s.phase) * _kron_all(_PAULI[s.letter(q)] for q in range(s.n))


def _majorana_matrix(s: MajoranaString) -> np.ndarray:
    n = s.n
    out = np.eye(2 ** n, dtype=complex)
    for mode, flavor in s.factors():
        up, down = creator(n, mode), annihilator(n, mode)
        g = up + down if flavor == 1 else 1j * (up - down)
        out = out @ g
    return (1j ** s.phase) * out


def _fermion_matrix(s: FermionicString) -> np.ndarray:
    n = s.n
    if s.is_zero:
        return np.zeros((2 ** n, 2 ** n), dtype=complex)
    out = np.eye(2 ** n, dtype=complex)
    for kind, p in s.ladder():
        up, down = creator(n, p), annihilator(n, p)
        if kind == CRE:
            m = up
        elif kind == ANN:
            m = down
        elif kind == NUM:
            m = up @ down
        else:
            m = down @ up
        out = out @ m
    return (1j ** s.phase) * out


def to_matrix(x, n: int | None = None, bindings: Mapping[str, float] | None = None) -> np.ndarray:
    """Dense matrix of a string or operator sum."""
    width = x.n if n is None else n
    _guard(width)
    if n is not None and n != x.n:
        raise ValueError(f"object acts on {x.n} modes, requested {n}")
    if isinstance(x, OperatorSum):
        out = np.zeros((2 ** width, 2 ** width), dtype=complex)
        for s, c in x.items():
            out += to_complex(c, bindings) * to_matrix(s)
        return out
    if isinstance(x, PauliString):
        return _pauli_matrix(x)
    if isinstance(x, MajoranaString):
        return _majorana_matrix(x)
    if isinstance(x, FermionicString):
        return _fermion_matrix(x)
    raise TypeError(f"no matrix for {type(x).__name__}")


def frobenius_norm_sq(x, n: int | None = None) -> float:
    m = x if isinstance(x, np.ndarray) else to_matrix(x, n)
    return float(np.vdot(m, m).real)


def unitary(generator: np.ndarray, theta: float, hermitian: bool) -> np.ndarray:
    """exp(i theta G) for Hermitian G, exp(theta G) for anti-Hermitian G, by eigendecomposition."""
    h = generator if hermitian else 1j * generator
    w, v = np.linalg.eigh(h)
    # exp(theta G) = exp(-i theta (iG)) in the anti-Hermitian case
    phases = np.exp(1j * theta * w) if hermitian else np.exp(-1j * theta * w)
    return (v * phases) @ v.conj().T


def matrix_conjugate_oracle(o, generator, theta: float, n: int | None = None,
                            hermitian: bool = False) -> np.ndarray:
    """U^dagger O U with U = exp(theta G) (anti-Hermitian G) or exp(i theta G) (Hermitian G)."""
    om = o if isinstance(o, np.ndarray) else to_matrix(o, n)
    gm = generator if isinstance(generator, np.ndarray) else to_matrix(generator, n)
    u = unitary(gm, float(theta), hermitian)
    return u.conj().T @ om @ u


def spectrum(m: np.ndarray) -> np.ndarray:
    return np.linalg.eigvalsh(m)


def max_deviation(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.max(np.abs(a - b))) if a.size else 0.0


def allclose(a: np.ndarray, b: np.ndarray, tol: float = 1e-10) -> bool:
    return max_deviation(a, b) <= tol


def basis_index(occupations) -> int:
    """Index of |n_0 n_1 ...> with mode 0 most significant."""
    idx = 0
    for bit in occupations:
        idx = 2 * idx + int(bit)
    return idx


def basis_vector(occupations) -> np.ndarray:
    v = np.zeros(2 ** len(occupations), dtype=complex)
    v[basis_index(occupations)] = 1
    return v
