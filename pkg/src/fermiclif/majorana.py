"""Majorana strings over 2M Majorana modes.

Linear index ``2j`` is gamma_1 of fermion mode ``j`` and ``2j + 1`` is
gamma_2.  A string is ``i**phase`` times the product of the occupied Majorana
operators in ascending linear order.  gamma_3 = i gamma_2 gamma_1 is accepted
on input and expanded.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .coeffs import Angle, times_i
from .errors import HermiticityError, WidthMismatchError
from .opsum import OperatorSum


def _popcount(v: int) -> int:
    return bin(v).count("1")


class HermiticityClass(Enum):
    HERMITIAN = "HermitianInvolution"
    ANTI_HERMITIAN = "AntiHermitianSkewInvolution"


@dataclass(frozen=True)
class MajoranaString:
    n: int
    occ: int = 0
    phase: int = 0

    def __post_init__(self):
        if self.occ >> (2 * self.n):
            raise ValueError(f"Majorana occupancy exceeds {self.n} modes")
        object.__setattr__(self, "phase", self.phase % 4)

    is_zero = False

    @classmethod
    def identity(cls, n: int) -> "MajoranaString":
        return cls(n)

    @classmethod
    def gamma(cls, n: int, mode: int, flavor: int) -> "MajoranaString":
        if not 0 <= mode < n:
            raise IndexError(f"mode {mode} out of range for {n} modes")
        if flavor == 1:
            return cls(n, 1 << (2 * mode))
        if flavor == 2:
            return cls(n, 1 << (2 * mode + 1))
        if flavor == 3:
            # i gamma_2 gamma_1 = -i gamma_1 gamma_2
            return cls(n, 3 << (2 * mode), 3)
        raise ValueError(f"Majorana flavor must be 1, 2 or 3, got {flavor}")

    @classmethod
    def from_factors(cls, n: int, factors, phase: int = 0) -> "MajoranaString":
        return maj_normalize(n, factors, phase)

    def with_phase(self, phase: int) -> "MajoranaString":
        return MajoranaString(self.n, self.occ, phase)

    @property
    def length(self) -> int:
        return _popcount(self.occ)

    def indices(self) -> list[int]:
        return [j for j in range(2 * self.n) if (self.occ >> j) & 1]

    def factors(self) -> list[tuple[int, int]]:
        """``[(mode, flavor), ...]`` in canonical order."""
        return [(j // 2, 1 + j % 2) for j in self.indices()]

    def sort_key(self):
        return (self.length, self.indices())

    def __mul__(self, other: "MajoranaString") -> "MajoranaString":
        return maj_mul(self, other)

    def commutes(self, other: "MajoranaString") -> bool:
        common = _popcount(self.occ & other.occ)
        return (self.length * other.length - common) % 2 == 0

    def __str__(self) -> str:
        body = " ".join(f"g{f}({m})" for m, f in self.factors()) or "I"
        return ("", "i*", "-", "-i*")[self.phase] + body


def maj_mul(a: MajoranaString, b: MajoranaString) -> MajoranaString:
    if a.n != b.n:
        raise WidthMismatchError(f"Majorana strings on {a.n} and {b.n} modes")
    # each factor of b moves left past the factors of a with larger index
    swaps = 0
    rest = b.occ
    while rest:
        low = rest & -rest
        j = low.bit_length() - 1
        swaps += _popcount(a.occ >> (j + 1))
        rest ^= low
    return MajoranaString(a.n, a.occ ^ b.occ, a.phase + b.phase + 2 * (swaps % 2))


def maj_normalize(n: int, factors, phase: int = 0) -> MajoranaString:
    """Canonical string for ``i**phase`` times the product of ``(mode, flavor)`` factors."""
    out = MajoranaString(n, 0, phase)
    for mode, flavor in factors:
        out = out * MajoranaString.gamma(n, mode, flavor)
    return out


def maj_hermiticity(g: MajoranaString) -> HermiticityClass:
    if g.phase:
        raise HermiticityError("classify the bare string (phase 0) only")
    if g.length % 4 in (0, 1):
        return HermiticityClass.HERMITIAN
    return HermiticityClass.ANTI_HERMITIAN


def maj_is_parity_preserving(g: MajoranaString) -> bool:
    return g.length % 2 == 0


def maj_parity(n: int) -> MajoranaString:
    """Parity operator ``i**M * prod_j gamma_2^(j) gamma_1^(j)``."""
    if n < 1:
        raise ValueError("parity needs at least one mode")
    factors = []
    for j in range(n):
        factors += [(j, 2), (j, 1)]
    return maj_normalize(n, factors, n)


class MajoranaSum(OperatorSum):
    string_type = MajoranaString
    __slots__ = ()


def maj_conjugate(o: MajoranaString, g: MajoranaString, theta) -> MajoranaSum:
    """Conjugate ``o`` by exp(i theta G) for Hermitian G, by exp(theta G) otherwise."""
    if o.n != g.n:
        raise WidthMismatchError(f"Majorana strings on {o.n} and {g.n} modes")
    theta = Angle.coerce(theta)
    cls = maj_hermiticity(g)
    if o.commutes(g):
        return MajoranaSum.from_string(o)
    two = theta.scaled(2)
    sin = two.sin()
    if cls is HermiticityClass.HERMITIAN:
        sin = times_i(sin, 1)
    return MajoranaSum(o.n, [(o, two.cos()), (o * g, sin)])
