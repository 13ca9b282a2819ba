"""Generic linear combinations of operator strings.

A string type must provide ``n`` (register width), ``phase`` (power of i),
``with_phase(k)``, ``sort_key()``, ``is_zero`` and ``__mul__`` returning a
string of the same type.  Keys of a sum are always phase-0 strings; phases are
folded into the coefficients.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Mapping

from .coeffs import Coeff, Number, as_coeff, is_zero, times_i, to_complex
from .errors import WidthMismatchError


class OperatorSum:
    string_type: type = object

    __slots__ = ("n", "_terms")

    def __init__(self, n: int, terms: Mapping | Iterable | None = None):
        self.n = n
        self._terms: dict = {}
        if terms is None:
            return
        items = terms.items() if isinstance(terms, Mapping) else terms
        for s, c in items:
            self._accumulate(s, as_coeff(c))

    # construction helpers; only used while a sum is being built
    def _accumulate(self, s, c: Number) -> None:
        if s.is_zero:
            return
        if s.n != self.n:
            raise WidthMismatchError(f"string on {s.n} modes added to sum on {self.n}")
        if s.phase:
            c = times_i(c, s.phase)
            s = s.with_phase(0)
        old = self._terms.get(s)
        new = c if old is None else old + c
        if is_zero(new):
            self._terms.pop(s, None)
        else:
            self._terms[s] = new

    @classmethod
    def _raw(cls, n: int, terms: dict):
        out = cls.__new__(cls)
        out.n = n
        out._terms = terms
        return out

    @classmethod
    def from_string(cls, s, coeff=1):
        return cls(s.n, [(s, coeff)])

    @classmethod
    def identity(cls, n: int, coeff=1):
        return cls.from_string(cls.string_type.identity(n), coeff)

    # access
    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator:
        return iter(self.sorted_items())

    def items(self):
        return self._terms.items()

    def sorted_items(self) -> list:
        return sorted(self._terms.items(), key=lambda kv: kv[0].sort_key())

    def coeff(self, s) -> Number:
        """Coefficient of string ``s`` (its phase is taken into account)."""
        if s.phase:
            c = self._terms.get(s.with_phase(0))
            return Coeff() if c is None else times_i(c, -s.phase)
        return self._terms.get(s, Coeff())

    def strings(self) -> list:
        return [s for s, _ in self.sorted_items()]

    def is_zero(self) -> bool:
        return not self._terms

    # arithmetic
    def _check(self, other: "OperatorSum") -> None:
        if type(other) is not type(self):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        if other.n != self.n:
            raise WidthMismatchError(f"widths {self.n} and {other.n} differ")

    def __add__(self, other):
        if isinstance(other, OperatorSum):
            self._check(other)
            out = self._raw(self.n, dict(self._terms))
            for s, c in other._terms.items():
                out._accumulate(s, c)
            return out
        if other == 0:
            return self
        return self + self.identity(self.n, other)

    __radd__ = __add__

    def __neg__(self):
        return self._raw(self.n, {s: -c for s, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "OperatorSum":
        c = as_coeff(c)
        out = self._raw(self.n, {})
        for s, v in self._terms.items():
            out._accumulate(s, v * c)
        return out

    def __mul__(self, other):
        if isinstance(other, OperatorSum):
            self._check(other)
            out = self._raw(self.n, {})
            for s1, c1 in self._terms.items():
                for s2, c2 in other._terms.items():
                    p = s1 * s2
                    if not p.is_zero:
                        out._accumulate(p, c1 * c2)
            return out
        if isinstance(other, self.string_type):
            return self * self.from_string(other)
        return self.scale(other)

    def __rmul__(self, other):
        if isinstance(other, self.string_type):
            return self.from_string(other) * self
        return self.scale(other)

    def commutator(self, other: "OperatorSum") -> "OperatorSum":
        return self * other - other * self

    def map_coeffs(self, fn) -> "OperatorSum":
        out = self._raw(self.n, {})
        for s, c in self._terms.items():
            out._accumulate(s, as_coeff(fn(c)))
        return out

    def to_float(self, bindings: Mapping[str, float] | None = None) -> "OperatorSum":
        return self.map_coeffs(lambda c: to_complex(c, bindings))

    def substitute(self, bindings) -> "OperatorSum":
        return self.map_coeffs(lambda c: c.substitute(bindings) if isinstance(c, Coeff) else c)

    def is_exact(self) -> bool:
        return all(isinstance(c, Coeff) for c in self._terms.values())

    def allclose(self, other: "OperatorSum", tol: float = 1e-10) -> bool:
        self._check(other)
        keys = set(self._terms) | set(other._terms)
        return all(abs(to_complex(self.coeff(k)) - to_complex(other.coeff(k))) <= tol for k in keys)

    def __eq__(self, other) -> bool:
        if not isinstance(other, OperatorSum):
            return NotImplemented
        return type(self) is type(other) and self.n == other.n and self._terms == other._terms

    def __hash__(self):
        return hash((type(self).__name__, self.n, frozenset(self._terms.items())))

    def __str__(self) -> str:
        from .parsing import format_sum

        return format_sum(self, header=False)

    def __repr__(self) -> str:
        return f"{type(self).__name__}(n={self.n}, {str(self)!r})"
