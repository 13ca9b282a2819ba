"""Pauli strings in the symplectic (x|z) representation.

Bit ``q`` of ``x``/``z`` describes qubit ``q``: (1,0) is X, (0,1) is Z and
(1,1) is Y.  The bits always denote the Hermitian tensor product of
I/X/Y/Z, so a string equals ``i**phase`` times that product and phase 0 means
Hermitian.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .coeffs import Angle, Number, times_i
from .errors import HermiticityError, WidthMismatchError
from .opsum import OperatorSum

_LETTER = {(0, 0): "I", (1, 0): "X", (1, 1): "Y", (0, 1): "Z"}
_BITS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}


def _popcount(v: int) -> int:
    return bin(v).count("1")


@dataclass(frozen=True)
class PauliString:
    n: int
    x: int = 0
    z: int = 0
    phase: int = 0

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("negative register width")
        if (self.x | self.z) >> self.n:
            raise ValueError(f"Pauli bits exceed {self.n} qubits")
        object.__setattr__(self, "phase", self.phase % 4)

    is_zero = False

    @classmethod
    def identity(cls, n: int) -> "PauliString":
        return cls(n)

    @classmethod
    def from_ops(cls, n: int, ops, phase: int = 0) -> "PauliString":
        """Build from ``[(qubit, letter), ...]`` or ``{qubit: letter}``, multiplying left to right."""
        if isinstance(ops, dict):
            ops = sorted(ops.items())
        out = cls(n, phase=phase)
        for q, letter in ops:
            if not 0 <= q < n:
                raise IndexError(f"qubit {q} out of range for {n} qubits")
            bx, bz = _BITS[letter]
            out = out * cls(n, bx << q, bz << q)
        return out

    @classmethod
    def from_label(cls, label: str, phase: int = 0) -> "PauliString":
        """``"XIZY"`` style label, qubit 0 first."""
        return cls.from_ops(len(label), [(q, c) for q, c in enumerate(label) if c != "I"], phase)

    def with_phase(self, phase: int) -> "PauliString":
        return PauliString(self.n, self.x, self.z, phase)

    def letter(self, q: int) -> str:
        return _LETTER[((self.x >> q) & 1, (self.z >> q) & 1)]

    def ops(self) -> list[tuple[int, str]]:
        return [(q, self.letter(q)) for q in range(self.n) if ((self.x | self.z) >> q) & 1]

    def label(self) -> str:
        return "".join(self.letter(q) for q in range(self.n))

    @property
    def weight(self) -> int:
        return _popcount(self.x | self.z)

    @property
    def support(self) -> int:
        return self.x | self.z

    def is_hermitian(self) -> bool:
        return self.phase % 2 == 0

    def sort_key(self):
        return (self.weight, [(q, "XYZ".index(c)) for q, c in self.ops()])

    def __mul__(self, other: "PauliString") -> "PauliString":
        return pauli_mul(self, other)

    def commutes(self, other: "PauliString") -> bool:
        return pauli_commutes(self, other)

    def __str__(self) -> str:
        body = " ".join(f"{c}{q}" for q, c in self.ops()) or "I"
        prefix = ("", "i*", "-", "-i*")[self.phase]
        return prefix + body


def _check_width(a, b) -> None:
    if a.n != b.n:
        raise WidthMismatchError(f"Pauli strings on {a.n} and {b.n} qubits")


def pauli_mul(a: PauliString, b: PauliString) -> PauliString:
    """Exact product; with sigma = i^(x.z) X^x Z^z the phase follows from Z^z X^x = (-1)^(x.z) X^x Z^z."""
    _check_width(a, b)
    x = a.x ^ b.x
    z = a.z ^ b.z
    phase = (
        a.phase + b.phase
        + _popcount(a.x & a.z) + _popcount(b.x & b.z) - _popcount(x & z)
        + 2 * _popcount(a.z & b.x)
    )
    return PauliString(a.n, x, z, phase)


def pauli_commutes(a: PauliString, b: PauliString) -> bool:
    _check_width(a, b)
    return (_popcount(a.x & b.z) + _popcount(a.z & b.x)) % 2 == 0


class PauliSum(OperatorSum):
    string_type = PauliString
    __slots__ = ()


def _hermitian_parts(p: PauliString, theta: Angle) -> tuple[PauliString, Angle]:
    if p.phase % 2:
        raise HermiticityError(f"{p} is not Hermitian")
    if p.phase == 2:
        return p.with_phase(0), -theta
    return p, theta


def pauli_exp(theta, p: PauliString) -> PauliSum:
    """``exp(i*theta*P) = cos(theta) I + i sin(theta) P``."""
    theta = Angle.coerce(theta)
    p, theta = _hermitian_parts(p, theta)
    return PauliSum(p.n, [
        (PauliString.identity(p.n), theta.cos()),
        (p, times_i(theta.sin(), 1)),
    ])


def pauli_conjugate(o: PauliString, p: PauliString, theta) -> PauliSum:
    """``exp(-i theta P) O exp(i theta P)``."""
    _check_width(o, p)
    theta = Angle.coerce(theta)
    p, theta = _hermitian_parts(p, theta)
    if pauli_commutes(o, p):
        return PauliSum.from_string(o)
    two = theta.scaled(2)
    return PauliSum(o.n, [(o, two.cos()), (o * p, times_i(two.sin(), 1))])


def clifford_gate(kind: str, qubits, n: int) -> PauliSum:
    """S, H or CNOT assembled from their Pauli-exponential factorizations."""
    qubits = [qubits] if isinstance(qubits, int) else list(qubits)
    for q in qubits:
        if not 0 <= q < n:
            raise IndexError(f"qubit {q} out of range for {n} qubits")
    kind = kind.upper()

    def z(q):
        return PauliString.from_ops(n, [(q, "Z")])

    def x(q):
        return PauliString.from_ops(n, [(q, "X")])

    quarter = Angle.pi(Fraction(1, 4))
    if kind == "S":
        (q,) = qubits
        return pauli_exp(-quarter, z(q)).scale(quarter.expi())
    if kind == "H":
        (q,) = qubits
        out = pauli_exp(quarter, z(q)) * pauli_exp(quarter, x(q)) * pauli_exp(quarter, z(q))
        return out.scale(Angle.pi(Fraction(3, 2)).expi())
    if kind == "CNOT":
        c, t = qubits
        if c == t:
            raise ValueError("CNOT needs distinct control and target")
        out = pauli_exp(-quarter, z(c)) * pauli_exp(-quarter, x(t)) * pauli_exp(quarter, z(c) * x(t))
        return out.scale(quarter.expi())
    raise ValueError(f"unknown gate {kind!r}")


def pauli_coeff(h: PauliSum, label: str) -> Number:
    """Coefficient of the string written as e.g. ``"Z0 Z1"`` (``"I"`` for identity)."""
    ops = [] if label.strip() == "I" else [(int(t[1:]), t[0]) for t in label.split()]
    return h.coeff(PauliString.from_ops(h.n, ops))

