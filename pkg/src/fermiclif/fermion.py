"""Fermionic strings: normal-ordered monoid elements.

A string is ``i**phase`` times

    a+_{t1} ... a+_{te}  a_{uf} ... a_{u1}  h_{v1} ... n_{w1} ...

with ``t`` and ``u`` ascending, i.e. creations ascending and annihilations in
descending product order, followed by hole (``h = a a+``) and number
(``n = a+ a``) operators.  The four index sets are disjoint and stored as
bitmasks.  The zero element is a separate value.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import WidthMismatchError
from .opsum import OperatorSum

CRE, ANN, NUM, HOLE = "+", "-", "n", "h"


def _popcount(v: int) -> int:
    return bin(v).count("1")


def _bits(v: int) -> list[int]:
    out = []
    while v:
        low = v & -v
        out.append(low.bit_length() - 1)
        v ^= low
    return out


@dataclass(frozen=True)
class FermionicString:
    n: int
    cre: int = 0
    ann: int = 0
    hole: int = 0
    num: int = 0
    phase: int = 0
    is_zero: bool = False

    def __post_init__(self):
        masks = (self.cre, self.ann, self.hole, self.num)
        total = 0
        for m in masks:
            if total & m:
                raise ValueError("index sets of a fermionic string must be disjoint")
            total |= m
        if total >> self.n:
            raise ValueError(f"fermionic string exceeds {self.n} modes")
        object.__setattr__(self, "phase", self.phase % 4)

    @classmethod
    def identity(cls, n: int) -> "FermionicString":
        return cls(n)

    @classmethod
    def zero(cls, n: int) -> "FermionicString":
        return cls(n, is_zero=True)

    @classmethod
    def from_ops(cls, n: int, ops, phase: int = 0) -> "FermionicString":
        """Normalize a product of elementary ops ``[('+', p), ('-', q), ('n', r), ('h', s)]``."""
        return ferm_normalize(n, ops, phase)

    @classmethod
    def single(cls, n: int, kind: str, p: int) -> "FermionicString":
        if not 0 <= p < n:
            raise IndexError(f"mode {p} out of range for {n} modes")
        bit = 1 << p
        return cls(n, **{{CRE: "cre", ANN: "ann", NUM: "num", HOLE: "hole"}[kind]: bit})

    def with_phase(self, phase: int) -> "FermionicString":
        return FermionicString(self.n, self.cre, self.ann, self.hole, self.num, phase, self.is_zero)

    @property
    def creations(self) -> list[int]:
        return _bits(self.cre)

    @property
    def annihilations(self) -> list[int]:
        return _bits(self.ann)

    @property
    def holes(self) -> list[int]:
        return _bits(self.hole)

    @property
    def numbers(self) -> list[int]:
        return _bits(self.num)

    @property
    def support(self) -> int:
        return self.cre | self.ann | self.hole | self.num

    @property
    def length(self) -> int:
        return _popcount(self.cre) + _popcount(self.ann) + 2 * _popcount(self.hole | self.num)

    @property
    def rank(self) -> Fraction:
        return Fraction(self.length, 2)

    def block_of(self, p: int) -> str | None:
        """Which block mode ``p`` sits in (``'+'``, ``'-'``, ``'h'``, ``'n'``) or None."""
        bit = 1 << p
        if self.cre & bit:
            return CRE
        if self.ann & bit:
            return ANN
        if self.hole & bit:
            return HOLE
        if self.num & bit:
            return NUM
        return None

    def without(self, p: int) -> "FermionicString":
        """The string with mode ``p`` removed, phase kept, no reordering sign."""
        keep = ~(1 << p)
        return FermionicString(self.n, self.cre & keep, self.ann & keep, self.hole & keep,
                               self.num & keep, self.phase)

    def ladder(self) -> list[tuple[str, int]]:
        """Product as a sequence of elementary ops in canonical order."""
        ops = [(CRE, p) for p in self.creations]
        ops += [(ANN, q) for q in reversed(self.annihilations)]
        ops += [(HOLE, r) for r in self.holes]
        ops += [(NUM, s) for s in self.numbers]
        return ops

    def sort_key(self):
        return (self.length, self.creations, self.annihilations, self.holes, self.numbers)

    def __mul__(self, other: "FermionicString") -> "FermionicString":
        return ferm_mul(self, other)

    def dagger(self) -> "FermionicString":
        return ferm_dagger(self)

    def __str__(self) -> str:
        return format_string(self)


def format_string(s: FermionicString, verbose: bool = False) -> str:
    if s.is_zero:
        return "0"
    parts = []
    for kind, p in s.ladder():
        if verbose:
            parts.append({CRE: f"a+({p})", ANN: f"a({p})", HOLE: f"h({p})", NUM: f"n({p})"}[kind])
        else:
            parts.append({CRE: f"a{p}^", ANN: f"a{p}", HOLE: f"h{p}", NUM: f"n{p}"}[kind])
    body = " ".join(parts) or "I"
    return ("", "i*", "-", "-i*")[s.phase] + body


def _reduce_word(word: list[bool]) -> str | None:
    """Collapse a single-mode product of ladder ops (True = creation).

    Returns '' for identity, '+', '-', 'n', 'h', or None for zero.
    """
    if not word:
        return ""
    for a, b in zip(word, word[1:]):
        if a == b:
            return None
    if len(word) % 2:
        return CRE if word[0] else ANN
    return NUM if word[0] else HOLE


def _inversion_parity(seq: list) -> int:
    parity = 0
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                parity ^= 1
    return parity


@lru_cache(maxsize=1 << 16)
def _normalize_ladder(n: int, ops: tuple, phase: int) -> FermionicString:
    # ops: tuple of (is_creation, mode); sort by mode, keeping per-mode order
    modes = [p for _, p in ops]
    sign = _inversion_parity(modes)
    per_mode: dict[int, list[bool]] = {}
    for is_cre, p in ops:
        per_mode.setdefault(p, []).append(is_cre)
    cre = ann = hole = num = 0
    odd: list[tuple[int, int]] = []  # (target position key) for odd ops in ascending mode order
    for p in sorted(per_mode):
        kind = _reduce_word(per_mode[p])
        if kind is None:
            return FermionicString.zero(n)
        bit = 1 << p
        if kind == CRE:
            cre |= bit
            odd.append((0, p))
        elif kind == ANN:
            ann |= bit
            odd.append((1, -p))
        elif kind == NUM:
            num |= bit
        elif kind == HOLE:
            hole |= bit
    # odd ops currently in ascending mode order; target is creations ascending
    # then annihilations descending, which is the sort order of the keys above
    sign ^= _inversion_parity(odd)
    return FermionicString(n, cre, ann, hole, num, phase + 2 * sign)


def _expand(ops) -> tuple:
    out = []
    for kind, p in ops:
        if kind == CRE:
            out.append((True, p))
        elif kind == ANN:
            out.append((False, p))
        elif kind == NUM:
            out += [(True, p), (False, p)]
        elif kind == HOLE:
            out += [(False, p), (True, p)]
        else:
            raise ValueError(f"unknown elementary operator {kind!r}")
    return tuple(out)


def ferm_normalize(n: int, ops, phase: int = 0) -> FermionicString:
    """Canonical string for ``i**phase`` times the product of elementary ops."""
    for _, p in ops:
        if not 0 <= p < n:
            raise IndexError(f"mode {p} out of range for {n} modes")
    return _normalize_ladder(n, _expand(ops), phase % 4)


@lru_cache(maxsize=1 << 18)
def _mul_cached(a: FermionicString, b: FermionicString) -> FermionicString:
    return _normalize_ladder(a.n, _expand(a.ladder() + b.ladder()), (a.phase + b.phase) % 4)


def ferm_mul(a: FermionicString, b: FermionicString) -> FermionicString:
    if a.n != b.n:
        raise WidthMismatchError(f"fermionic strings on {a.n} and {b.n} modes")
    if a.is_zero or b.is_zero:
        return FermionicString.zero(a.n)
    return _mul_cached(a, b)


def ferm_dagger(a: FermionicString) -> FermionicString:
    if a.is_zero:
        return a
    flipped = [(not is_cre, p) for is_cre, p in reversed(_expand(a.ladder()))]
    return _normalize_ladder(a.n, tuple(flipped), (-a.phase) % 4)


class FermionicSum(OperatorSum):
    string_type = FermionicString
    __slots__ = ()

    def dagger(self) -> "FermionicSum":
        out = FermionicSum(self.n)
        for s, c in self._terms.items():
            out._accumulate(s.dagger(), c.conjugate())
        return out

    def canonical(self) -> "FermionicSum":
        """Hole-free form: every h_p rewritten as I - n_p.

        Strings without holes form a basis of the operator algebra, so two sums
        denote the same operator iff their canonical forms are equal.
        """
        out = FermionicSum(self.n)
        for s, c in self._terms.items():
            if not s.hole:
                out._accumulate(s, c)
                continue
            holes = s.holes
            for sub in range(1 << len(holes)):
                extra = 0
                for j, r in enumerate(holes):
                    if (sub >> j) & 1:
                        extra |= 1 << r
                t = FermionicString(self.n, s.cre, s.ann, 0, s.num | extra)
                out._accumulate(t, -c if _popcount(sub) % 2 else c)
        return out

    def equivalent(self, other: "FermionicSum") -> bool:
        """Operator equality, independent of how h and n are written."""
        return self.canonical() == other.canonical()


def ferm_commutator(a: FermionicSum, b: FermionicSum) -> FermionicSum:
    return a.commutator(b)


def cre(n: int, p: int) -> FermionicString:
    return FermionicString.single(n, CRE, p)


def ann(n: int, p: int) -> FermionicString:
    return FermionicString.single(n, ANN, p)


def num(n: int, p: int) -> FermionicString:
    return FermionicString.single(n, NUM, p)


def hole(n: int, p: int) -> FermionicString:
    return FermionicString.single(n, HOLE, p)


def excitation(n: int, creations, annihilations, coeff=1) -> FermionicSum:
    """``a+_{p1} ... a+_{pk} a_{ql} ... a_{q1}`` for index lists in the given order."""
    ops = [(CRE, p) for p in creations] + [(ANN, q) for q in reversed(list(annihilations))]
    return FermionicSum.from_string(ferm_normalize(n, ops), coeff)

