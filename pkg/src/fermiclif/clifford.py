"""Unitary conjugation of fermionic strings.

For F a single fermionic string (not a pure product of number operators), the
generators A = F - F+ and H = F + F+ satisfy A^3 = -A and H^3 = H, so

    e^{-theta A} O e^{theta A} = O + sin(s theta)/s [O,A] + (1 - cos(s theta))/s^2 [[O,A],A]
    e^{-i theta H} O e^{i theta H} = O + i sin(s theta)/s [O,H] + (cos(s theta) - 1)/s^2 [[O,H],H]

with s^2 = 1 when A[O,A]A = 0 and s^2 = 4 when A[O,A]A = [O,A].  At
theta = (2k+1) pi/2 the half-body and pair generators map every string to a
single string; :func:`clifford_apply` produces it from sign tables keyed on
the block and position of the shared index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .coeffs import Angle, Coeff, Number, as_coeff, i_power, times_i
from .errors import ConsistencyError
from .fermion import ANN, CRE, HOLE, NUM, FermionicString, FermionicSum, ferm_mul

ANTI, HERM = "anti", "herm"
KINDS = ("halfbody", "pair", "exc", "number", "raw")


@dataclass(frozen=True)
class Generator:
    """A half-body, pair, single-excitation, number or raw generator.

    ``sign='anti'`` gives A = F - F+, ``sign='herm'`` gives H = F + F+, with
    F = a+_p (halfbody), a+_p a+_q (pair), a+_p a_q (exc) or the given raw
    string.  The number kind is H = n_p and is always Hermitian.
    """

    kind: str
    indices: tuple = ()
    sign: str = ANTI
    raw: FermionicString | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown generator kind {self.kind!r}")
        if self.sign not in (ANTI, HERM):
            raise ValueError(f"generator sign must be 'anti' or 'herm', got {self.sign!r}")
        object.__setattr__(self, "indices", tuple(self.indices))
        need = {"halfbody": 1, "pair": 2, "exc": 2, "number": 1, "raw": 0}[self.kind]
        if len(self.indices) != need:
            raise ValueError(f"{self.kind} generator takes {need} indices")
        if len(set(self.indices)) != len(self.indices):
            raise ValueError("generator indices must be distinct")
        if self.kind == "number" and self.sign != HERM:
            object.__setattr__(self, "sign", HERM)
        if self.kind == "raw":
            if self.raw is None or self.raw.is_zero:
                raise ValueError("raw generator needs a nonzero string")
            if not (self.raw.cre | self.raw.ann):
                raise ValueError("raw generator string must contain a creation or annihilation")

    @classmethod
    def halfbody(cls, p: int, sign: str = ANTI) -> "Generator":
        return cls("halfbody", (p,), sign)

    @classmethod
    def pair(cls, p: int, q: int, sign: str = ANTI) -> "Generator":
        return cls("pair", (p, q), sign)

    @classmethod
    def exc(cls, p: int, q: int, sign: str = ANTI) -> "Generator":
        return cls("exc", (p, q), sign)

    @classmethod
    def number(cls, p: int) -> "Generator":
        return cls("number", (p,), HERM)

    @classmethod
    def from_string(cls, f: FermionicString, sign: str = ANTI) -> "Generator":
        return cls("raw", (), sign, f)

    @property
    def hermitian(self) -> bool:
        return self.sign == HERM

    def min_modes(self) -> int:
        if self.kind == "raw":
            return self.raw.n
        return max(self.indices) + 1

    def string(self, n: int) -> FermionicString:
        """The string F."""
        if self.kind == "raw":
            return self.raw
        if self.kind == "halfbody":
            return FermionicString.single(n, CRE, self.indices[0])
        if self.kind == "number":
            return FermionicString.single(n, NUM, self.indices[0])
        p, q = self.indices
        if self.kind == "pair":
            return ferm_mul(FermionicString.single(n, CRE, p), FermionicString.single(n, CRE, q))
        return ferm_mul(FermionicString.single(n, CRE, p), FermionicString.single(n, ANN, q))

    def operator(self, n: int) -> FermionicSum:
        """A = F - F+ or H = F + F+ (H = n_p for the number kind)."""
        f = self.string(n)
        if self.kind == "number":
            return FermionicSum.from_string(f)
        return FermionicSum(n, [(f, 1), (f.dagger(), -1 if self.sign == ANTI else 1)])

    def __str__(self) -> str:
        if self.kind == "number":
            return f"num({self.indices[0]})"
        mark = "-" if self.sign == ANTI else "+"
        if self.kind == "raw":
            return f"raw{mark}({self.raw})"
        return f"{self.kind}{mark}({','.join(map(str, self.indices))})"


def _width(o, g: Generator, n: int | None) -> int:
    width = o.n if n is None else n
    if g.min_modes() > width:
        raise ValueError(f"generator {g} does not fit {width} modes")
    return width


def classify_alpha(o: FermionicString, g: Generator, n: int | None = None) -> int:
    """Return 1 if G[O,G]G = 0, 4 if A[O,A]A = [O,A] (H[O,H]H = -[O,H] for Hermitian H)."""
    if g.kind == "number":
        raise ValueError("number generators use the phase rule, not the alpha classification")
    n = _width(o, g, n)
    big = g.operator(n)
    osum = o if isinstance(o, FermionicSum) else FermionicSum.from_string(o)
    comm = osum.commutator(big)
    if comm.is_zero():
        return 1
    triple = (big * comm * big).canonical()
    if triple.is_zero():
        return 1
    # for Hermitian H the anti-Hermitian generator is iH, which flips the sign
    target = comm if g.sign == ANTI else -comm
    if triple == target.canonical():
        return 4
    raise ConsistencyError(f"neither G[O,G]G = 0 nor G[O,G]G = [O,G] for O={o}, G={g}")


def _trig(theta: Angle, factor: int) -> tuple[Number, Number]:
    t = theta.scaled(factor)
    return t.sin(), t.cos()


def general_conjugate(o, g: Generator, theta, n: int | None = None) -> FermionicSum:
    """Closed-form e^{-theta A} O e^{theta A} (anti) or e^{-i theta H} O e^{i theta H} (herm)."""
    theta = Angle.coerce(theta)
    if isinstance(o, FermionicSum):
        out = FermionicSum(o.n if n is None else n)
        for s, c in o.items():
            out = out + general_conjugate(s, g, theta, n).scale(c)
        return out
    n = _width(o, g, n)
    osum = FermionicSum.from_string(o)
    if o.is_zero:
        return FermionicSum(n)
    if g.kind == "number":
        return _number_conjugate_sum(osum, g.indices[0], theta)
    big = g.operator(n)
    comm = osum.commutator(big)
    if comm.is_zero():
        return osum
    alpha = classify_alpha(o, g, n)
    double = comm.commutator(big)
    root = 1 if alpha == 1 else 2
    sin, cos = _trig(theta, root)
    inv = Fraction(1, root)
    if g.sign == ANTI:
        c1 = sin * Coeff.rational(inv)
        c2 = (1 - cos) * Coeff.rational(inv * inv)
    else:
        c1 = times_i(sin * Coeff.rational(inv), 1)
        c2 = (cos - 1) * Coeff.rational(inv * inv)
    return osum + comm.scale(c1) + double.scale(c2)


def _number_conjugate_sum(osum: FermionicSum, p: int, theta: Angle) -> FermionicSum:
    # e^{i theta n} = 1 + (e^{i theta} - 1) n, expanded on both sides
    n = osum.n
    nsum = FermionicSum.from_string(FermionicString.single(n, NUM, p))
    plus = theta.expi() - 1
    minus = (-theta).expi() - 1
    cross = plus * minus
    return osum + (osum * nsum).scale(plus) + (nsum * osum).scale(minus) + (nsum * osum * nsum).scale(cross)


def number_phase_conjugate(o: FermionicString, p: int, theta) -> tuple[Number, FermionicString]:
    """e^{-i theta n_p} O e^{i theta n_p}: a phase e^{+-i theta} when O holds a_p or a+_p."""
    theta = Angle.coerce(theta)
    block = o.block_of(p)
    if block == ANN:
        return theta.expi(), o
    if block == CRE:
        return (-theta).expi(), o
    return Coeff.rational(1), o


# ---------------------------------------------------------------- tables

def _position(o: FermionicString, p: int, block: str) -> int:
    """1-based position of ``p`` in the ascending index list of its block."""
    indices = o.creations if block == CRE else o.annihilations
    return indices.index(p) + 1


def _append(rest: FermionicString, kind: str, p: int) -> FermionicString:
    return ferm_mul(rest, FermionicString.single(rest.n, kind, p))


def _swap_even(rest: FermionicString, kind: str, p: int) -> FermionicString:
    bit = 1 << p
    if kind == HOLE:
        return FermionicString(rest.n, rest.cre, rest.ann, rest.hole | bit, rest.num, rest.phase)
    return FermionicString(rest.n, rest.cre, rest.ann, rest.hole, rest.num | bit, rest.phase)


def _halfbody_row(o: FermionicString, c: int, herm: bool) -> tuple[int, FermionicString]:
    """Returns (power of i, string) for a half-body generator on mode c."""
    length = o.length
    block = o.block_of(c)
    if block is None:
        return 2 * (length % 2), o
    rest = o.without(c)
    if block == NUM:
        return 2 * (length % 2), _swap_even(rest, HOLE, c)
    if block == HOLE:
        return 2 * (length % 2), _swap_even(rest, NUM, c)
    i = _position(o, c, block)
    if block == CRE:
        sign = i + 1 if herm else i
        return 2 * (sign % 2), _append(rest, ANN, c)
    sign = length + i if herm else length + i + 1
    return 2 * (sign % 2), _append(rest, CRE, c)


def _pair_row(o: FermionicString, g: Generator, k: int) -> tuple[int, FermionicString]:
    """One shared index between O and a pair/excitation generator."""
    c, d = g.indices
    herm = g.sign == HERM
    if o.block_of(c) is not None:
        common, other, flip = c, d, False
    else:
        common, other, flip = d, c, True
    block = o.block_of(common)
    rest = o.without(common)
    if block == NUM:
        return 0, _swap_even(rest, HOLE if g.kind == "pair" else NUM, other)
    if block == HOLE:
        return 0, _swap_even(rest, NUM if g.kind == "pair" else HOLE, other)
    length = o.length
    i = _position(o, common, block)
    if block == CRE:
        sign = length + i + k + (1 if herm else 0)
        new = ANN if g.kind == "pair" else CRE
    else:
        sign = k + i + 1
        new = CRE if g.kind == "pair" else ANN
    power = 2 * (sign % 2) + (1 if herm else 0)
    # swapping c and d negates the generator, except a+_c a_d + a+_d a_c which is symmetric
    if flip and not (herm and g.kind == "exc"):
        power += 2
    return power, _append(rest, new, other)


def _split_mode(o: FermionicString, p: int) -> tuple[int, FermionicString, FermionicString]:
    """Write O = i^power * f_p * R with f_p the single factor of O on mode p."""
    block = o.block_of(p)
    head = FermionicString.single(o.n, block, p)
    rest = o.without(p).with_phase(0)
    prod = ferm_mul(head, rest)
    return (o.phase - prod.phase) % 4, head, rest


def clifford_apply(o: FermionicString, g: Generator, k: int = 0, theta=None) -> tuple[Number, FermionicString]:
    """Single-string image of O at theta = (2k+1) pi/2 (or any theta for the number kind)."""
    if o.is_zero:
        return Coeff(), o
    if g.kind == "number":
        if theta is None:
            theta = Angle.pi(Fraction(2 * k + 1, 2))
        return number_phase_conjugate(o, g.indices[0], theta)
    if g.kind == "raw":
        raise ValueError("table lookup covers halfbody, pair and exc generators only")
    if g.min_modes() > o.n:
        raise ValueError(f"generator {g} does not fit {o.n} modes")
    power, out = _clifford_string(o, g, k)
    if out.is_zero:
        raise ConsistencyError(f"table produced zero for O={o}, G={g}")
    total = power + out.phase
    return i_power(total), out.with_phase(0)


def _clifford_string(o: FermionicString, g: Generator, k: int) -> tuple[int, FermionicString]:
    phase = o.phase
    bare = o.with_phase(0)
    if g.kind == "halfbody":
        power, out = _halfbody_row(bare, g.indices[0], g.sign == HERM)
        return power + phase, out
    c, d = g.indices
    has_c, has_d = bare.block_of(c) is not None, bare.block_of(d) is not None
    if not has_c and not has_d:
        return phase, bare
    if has_c != has_d:
        power, out = _pair_row(bare, g, k)
        return power + phase, out
    # both indices shared: split off the lower one and transform the two factors
    low = min(c, d)
    split, head, rest = _split_mode(bare, low)
    p1, s1 = _pair_row(head, g, k)
    p2, s2 = _pair_row(rest, g, k)
    prod = ferm_mul(s1, s2)
    return phase + split + p1 + p2, prod


# ---------------------------------------------------------------- sums of half-body generators

def _halfbody_total(thetas: Mapping[int, float], sign: str, n: int) -> FermionicSum:
    out = FermionicSum(n)
    for p, t in thetas.items():
        out = out + Generator.halfbody(p, sign).operator(n).scale(complex(t))
    return out


def _theta_values(thetas) -> dict[int, float]:
    out = {}
    for p, t in thetas.items():
        out[int(p)] = Angle.coerce(t).value() if isinstance(t, (Angle, str)) else float(t)
    return out


def sum_halfbody_exp(thetas, sign: str = ANTI, n: int | None = None) -> FermionicSum:
    """exp(sum_p theta_p A^p) = cos(sqrt c) + sin(sqrt c)/sqrt c sum_p theta_p A^p, c = sum theta_p^2.

    For ``sign='herm'`` this is exp(i sum_p theta_p (a+_p + a_p)).
    """
    vals = _theta_values(thetas)
    n = (max(vals) + 1 if vals else 1) if n is None else n
    c = sum(t * t for t in vals.values())
    if c == 0:
        return FermionicSum.identity(n)
    root = math.sqrt(c)
    total = _halfbody_total(vals, sign, n)
    scale = complex(math.sin(root) / root)
    if sign == HERM:
        scale *= 1j
    return FermionicSum.identity(n, complex(math.cos(root))) + total.scale(scale)


def sum_halfbody_conjugate(o, thetas, sign: str = ANTI, n: int | None = None) -> FermionicSum:
    """U+ O U with U = sum_halfbody_exp(thetas, sign)."""
    vals = _theta_values(thetas)
    osum = o if isinstance(o, FermionicSum) else FermionicSum.from_string(o)
    n = osum.n if n is None else n
    c = sum(t * t for t in vals.values())
    if c == 0:
        return osum
    root = math.sqrt(c)
    total = _halfbody_total(vals, sign, n)
    comm = osum.commutator(total)
    double = comm.commutator(total)
    c1 = 0.5 * math.sin(2 * root) / root
    c2 = 0.5 * math.sin(root) ** 2 / c
    if sign == HERM:
        return osum + comm.scale(1j * c1) + double.scale(-c2)
    return osum + comm.scale(complex(c1)) + double.scale(complex(c2))


def conjugate_sum(h: FermionicSum, g: Generator, theta) -> FermionicSum:
    """Apply :func:`general_conjugate` term by term."""
    return general_conjugate(h, g, theta)


def clifford_apply_sum(h: FermionicSum, g: Generator, k: int = 0) -> FermionicSum:
    out = FermionicSum(h.n)
    for s, c in h.items():
        phase, t = clifford_apply(s, g, k)
        out._accumulate(t, as_coeff(c) * phase)
    return out
