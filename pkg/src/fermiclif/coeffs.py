"""Coefficient arithmetic shared by the three operator algebras.

Two coefficient modes are supported:

* exact: :class:`Coeff`, a complex number whose real and imaginary parts are
  :class:`SymbolicCoeff` polynomials with rational coefficients over named real
  symbols (integrals such as ``h00`` or ``v0123``).  The symbol ``sqrt2`` is
  special and obeys ``sqrt2*sqrt2 -> 2``.
* float: plain Python ``complex``.

Mixing the two coerces to ``complex``; this fails for coefficients that still
carry free symbols.
"""

from __future__ import annotations

import math
import os
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Union

SQRT2 = "sqrt2"
DEFAULT_TOL = 1e-10
# float coefficients below this magnitude are dropped from sums
PRUNE_TOL = 1e-13

Monomial = tuple  # sorted tuple of symbol names, () is the constant monomial


def default_tol() -> float:
    """Comparison tolerance, overridable through the FC_TOL environment variable."""
    value = os.environ.get("FC_TOL")
    if value:
        return float(value)
    return DEFAULT_TOL


def _mono_mul(m1: Monomial, m2: Monomial) -> tuple[Monomial, int]:
    merged = sorted(m1 + m2)
    count = merged.count(SQRT2)
    if count < 2:
        return tuple(merged), 1
    rest = [s for s in merged if s != SQRT2]
    if count % 2:
        rest = sorted(rest + [SQRT2])
    return tuple(rest), 2 ** (count // 2)


def _mono_key(m: Monomial):
    # constant first, sqrt2 multiples right after their plain partner
    plain = tuple(s for s in m if s != SQRT2)
    return (len(plain), plain, SQRT2 in m)


class SymbolicCoeff:
    """Real polynomial with rational coefficients over named symbols."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Fraction] | None = None):
        clean = {}
        if terms:
            for mono, val in terms.items():
                if val:
                    clean[tuple(mono)] = Fraction(val)
        self.terms: dict[Monomial, Fraction] = clean
        self._hash = None

    @classmethod
    def const(cls, value) -> "SymbolicCoeff":
        return cls({(): Fraction(value)})

    @classmethod
    def symbol(cls, name: str, value=1) -> "SymbolicCoeff":
        if not name or not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", name):
            raise ValueError(f"invalid symbol name {name!r}")
        return cls({(name,): Fraction(value)})

    @property
    def constant(self) -> Fraction:
        return self.terms.get((), Fraction(0))

    def is_zero(self) -> bool:
        return not self.terms

    def is_rational(self) -> bool:
        return all(m == () for m in self.terms)

    def symbols(self) -> set[str]:
        return {s for m in self.terms for s in m if s != SQRT2}

    def __add__(self, other: "SymbolicCoeff") -> "SymbolicCoeff":
        out = dict(self.terms)
        for mono, val in other.terms.items():
            out[mono] = out.get(mono, 0) + val
        return SymbolicCoeff(out)

    def __neg__(self) -> "SymbolicCoeff":
        return SymbolicCoeff({m: -v for m, v in self.terms.items()})

    def __sub__(self, other: "SymbolicCoeff") -> "SymbolicCoeff":
        return self + (-other)

    def scale(self, q) -> "SymbolicCoeff":
        q = Fraction(q)
        return SymbolicCoeff({m: v * q for m, v in self.terms.items()})

    def __mul__(self, other: "SymbolicCoeff") -> "SymbolicCoeff":
        if len(other.terms) == 1 and () in other.terms:
            return self.scale(other.terms[()])
        if len(self.terms) == 1 and () in self.terms:
            return other.scale(self.terms[()])
        out: dict[Monomial, Fraction] = {}
        for m1, v1 in self.terms.items():
            for m2, v2 in other.terms.items():
                mono, factor = _mono_mul(m1, m2)
                out[mono] = out.get(mono, 0) + v1 * v2 * factor
        return SymbolicCoeff(out)

    def evaluate(self, bindings: Mapping[str, float] | None = None) -> float:
        total = 0.0
        for mono, val in self.terms.items():
            term = float(val)
            for s in mono:
                if s == SQRT2:
                    term *= math.sqrt(2.0)
                elif bindings is not None and s in bindings:
                    term *= float(bindings[s])
                else:
                    raise ValueError(f"unbound symbol {s!r}")
            total += term
        return total

    def substitute(self, bindings: Mapping[str, "SymbolicCoeff"]) -> "SymbolicCoeff":
        """Replace symbols by other polynomials."""
        out = SymbolicCoeff()
        for mono, val in self.terms.items():
            term = SymbolicCoeff.const(val)
            for s in mono:
                term = term * (bindings[s] if s in bindings else SymbolicCoeff.symbol(s))
            out = out + term
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, SymbolicCoeff):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == ({(): Fraction(other)} if other else {})
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        return sorted(self.terms.items(), key=lambda kv: _mono_key(kv[0]))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for idx, (mono, val) in enumerate(self.sorted_terms()):
            mag = abs(val)
            if not mono:
                body = _fmt_rational(mag)
            elif mag == 1:
                body = "*".join(mono)
            else:
                body = _fmt_rational(mag) + "*" + "*".join(mono)
            if idx == 0:
                parts.append(("-" if val < 0 else "") + body)
            else:
                parts.append((" - " if val < 0 else " + ") + body)
        return "".join(parts)

    def __repr__(self) -> str:
        return f"SymbolicCoeff({str(self)!r})"


def _fmt_rational(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


_ZERO = SymbolicCoeff()


class Coeff:
    """Exact complex coefficient ``re + i*im``."""

    __slots__ = ("re", "im", "_hash")

    def __init__(self, re: SymbolicCoeff | None = None, im: SymbolicCoeff | None = None):
        self.re = re if re is not None else _ZERO
        self.im = im if im is not None else _ZERO
        self._hash = None

    @classmethod
    def rational(cls, re=0, im=0) -> "Coeff":
        return cls(SymbolicCoeff.const(re), SymbolicCoeff.const(im))

    @classmethod
    def symbol(cls, name: str, value=1) -> "Coeff":
        return cls(SymbolicCoeff.symbol(name, value))

    @classmethod
    def sqrt2(cls, value=1) -> "Coeff":
        """``value * sqrt(2)`` exactly."""
        return cls(SymbolicCoeff({(SQRT2,): Fraction(value)}))

    def is_zero(self) -> bool:
        return not self.re.terms and not self.im.terms

    def is_numeric(self) -> bool:
        """True when no free symbols remain (sqrt2 counts as numeric)."""
        return not self.re.symbols() and not self.im.symbols()

    def is_rational(self) -> bool:
        return self.re.is_rational() and self.im.is_rational()

    def symbols(self) -> set[str]:
        return self.re.symbols() | self.im.symbols()

    def to_complex(self, bindings: Mapping[str, float] | None = None) -> complex:
        return complex(self.re.evaluate(bindings), self.im.evaluate(bindings))

    def conjugate(self) -> "Coeff":
        return Coeff(self.re, -self.im)

    def mul_i(self, k: int = 1) -> "Coeff":
        """Multiply by ``i**k``."""
        k %= 4
        if k == 0:
            return self
        if k == 1:
            return Coeff(-self.im, self.re)
        if k == 2:
            return Coeff(-self.re, -self.im)
        return Coeff(self.im, -self.re)

    def scale(self, q) -> "Coeff":
        return Coeff(self.re.scale(q), self.im.scale(q))

    def substitute(self, bindings: Mapping[str, SymbolicCoeff]) -> "Coeff":
        return Coeff(self.re.substitute(bindings), self.im.substitute(bindings))

    def _coerce(self, other):
        if isinstance(other, Coeff):
            return other
        if isinstance(other, (int, Fraction)):
            return Coeff.rational(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, (float, complex)):
                return self.to_complex() + other
            return NotImplemented
        return Coeff(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self) -> "Coeff":
        return Coeff(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, (float, complex)):
                return self.to_complex() * other
            return NotImplemented
        if not o.im.terms:
            if not self.im.terms:
                return Coeff(self.re * o.re)
            return Coeff(self.re * o.re, self.im * o.re)
        if not self.im.terms:
            return Coeff(self.re * o.re, self.re * o.im)
        re = self.re * o.re - self.im * o.im
        im = self.re * o.im + self.im * o.re
        return Coeff(re, im)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        o = self._coerce(other)
        if o is None:
            if isinstance(other, (float, complex)):
                return self.is_numeric() and self.to_complex() == other
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.re, self.im))
        return self._hash

    def __str__(self) -> str:
        if not self.im.terms:
            return str(self.re)
        return f"({self.re}, {self.im})"

    def __repr__(self) -> str:
        return f"Coeff({str(self)!r})"


Number = Union[Coeff, complex]

ONE = Coeff.rational(1)
ZERO = Coeff()
_I_POWERS = (Coeff.rational(1), Coeff.rational(0, 1), Coeff.rational(-1), Coeff.rational(0, -1))
_I_POWERS_FLOAT = (1 + 0j, 1j, -1 + 0j, -1j)


def i_power(k: int) -> Coeff:
    return _I_POWERS[k % 4]


def as_coeff(x) -> Number:
    """Normalize ints, Fractions, floats and complex numbers to a coefficient."""
    if isinstance(x, Coeff):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a coefficient")
    if isinstance(x, (int, Fraction)):
        return Coeff.rational(x)
    if isinstance(x, (float, complex)):
        return complex(x)
    if isinstance(x, SymbolicCoeff):
        return Coeff(x)
    raise TypeError(f"cannot use {type(x).__name__} as a coefficient")


def times_i(c: Number, k: int) -> Number:
    if isinstance(c, Coeff):
        return c.mul_i(k)
    return c * _I_POWERS_FLOAT[k % 4]


def is_zero(c: Number) -> bool:
    if isinstance(c, Coeff):
        return c.is_zero()
    return abs(c) <= PRUNE_TOL


def to_complex(c: Number, bindings: Mapping[str, float] | None = None) -> complex:
    if isinstance(c, Coeff):
        return c.to_complex(bindings)
    return complex(c)


def conj(c: Number) -> Number:
    return c.conjugate()


def coeff_add(a, b) -> Number:
    return as_coeff(a) + as_coeff(b)


def coeff_mul(a, b) -> Number:
    return as_coeff(a) * as_coeff(b)


def format_coeff(c: Number) -> str:
    """Render a coefficient in the text grammar."""
    if isinstance(c, Coeff):
        return str(c)
    c = complex(c)
    if c.imag == 0:
        return repr(c.real)
    return f"({c.real!r}, {c.imag!r})"


# ---------------------------------------------------------------- angles

@dataclass(frozen=True)
class Angle:
    """Either an exact rational multiple of pi or a float in radians."""

    pi_multiple: Fraction | None = None
    radians: float | None = None

    def __post_init__(self):
        if (self.pi_multiple is None) == (self.radians is None):
            raise ValueError("Angle needs exactly one of pi_multiple and radians")
        if self.pi_multiple is not None:
            object.__setattr__(self, "pi_multiple", Fraction(self.pi_multiple))
        else:
            object.__setattr__(self, "radians", float(self.radians))

    @classmethod
    def pi(cls, multiple) -> "Angle":
        return cls(pi_multiple=Fraction(multiple))

    @classmethod
    def rad(cls, value: float) -> "Angle":
        return cls(radians=value)

    @classmethod
    def coerce(cls, theta) -> "Angle":
        if isinstance(theta, Angle):
            return theta
        if isinstance(theta, str):
            return cls.parse(theta)
        if isinstance(theta, (int, float)):
            return cls.rad(float(theta))
        raise TypeError(f"cannot interpret {theta!r} as an angle")

    @classmethod
    def parse(cls, text: str) -> "Angle":
        """Parse ``pi/2``, ``3pi/4``, ``-3*pi/4``, ``pi`` or decimal radians."""
        s = text.strip().replace(" ", "")
        m = re.fullmatch(r"([+-]?)(\d+)?\*?pi(?:/(\d+))?", s)
        if m:
            num = int(m.group(2)) if m.group(2) else 1
            den = int(m.group(3)) if m.group(3) else 1
            if den == 0:
                raise ValueError(f"invalid angle {text!r}")
            q = Fraction(num, den)
            return cls.pi(-q if m.group(1) == "-" else q)
        try:
            return cls.rad(float(s))
        except ValueError:
            raise ValueError(f"invalid angle {text!r}") from None

    @property
    def is_exact(self) -> bool:
        return self.pi_multiple is not None

    def value(self) -> float:
        if self.pi_multiple is not None:
            return float(self.pi_multiple) * math.pi
        return self.radians

    def scaled(self, factor) -> "Angle":
        if self.pi_multiple is not None and isinstance(factor, (int, Fraction)):
            return Angle.pi(self.pi_multiple * factor)
        return Angle.rad(self.value() * float(factor))

    def __neg__(self) -> "Angle":
        return self.scaled(-1)

    def _grid(self):
        """Multiple of pi/4 as an int, or None when off the grid."""
        if self.pi_multiple is None:
            return None
        q = self.pi_multiple * 4
        if q.denominator != 1:
            return None
        return q.numerator % 8

    def cos(self) -> Number:
        k = self._grid()
        if k is None:
            return complex(math.cos(self.value()))
        return _COS_GRID[k]

    def sin(self) -> Number:
        k = self._grid()
        if k is None:
            return complex(math.sin(self.value()))
        return _COS_GRID[(k - 2) % 8]

    def expi(self) -> Number:
        """``exp(i*theta)``."""
        return self.cos() + times_i(self.sin(), 1)

    def __str__(self) -> str:
        if self.pi_multiple is None:
            return repr(self.radians)
        q = self.pi_multiple
        if q == 0:
            return "0"
        sign = "-" if q < 0 else ""
        q = abs(q)
        num = "" if q.numerator == 1 else str(q.numerator)
        den = "" if q.denominator == 1 else f"/{q.denominator}"
        return f"{sign}{num}pi{den}"


_H = Coeff.sqrt2(Fraction(1, 2))
_COS_GRID = (
    Coeff.rational(1), _H, Coeff(), -_H,
    Coeff.rational(-1), -_H, Coeff(), _H,
)


def angle_is_clifford(theta: Angle, algebra: str) -> bool:
    """Whether ``theta`` sits on the Clifford grid of the given algebra."""
    if algebra not in ("pauli", "majorana", "fermionic", "fermion"):
        raise ValueError(f"unknown algebra {algebra!r}")
    if theta.pi_multiple is None:
        return False
    step = 4 if algebra in ("pauli", "majorana") else 2
    return (theta.pi_multiple * step).denominator == 1
