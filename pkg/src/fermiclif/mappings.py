"""Jordan-Wigner maps and the fermion <-> Majorana substitution.

Qubit ``q`` carries mode ``q``; Z tails sit on the lower modes:

    a_p  -> 1/2 (X_p + i Y_p) Z_0 ... Z_{p-1}
    a+_p -> 1/2 (X_p - i Y_p) Z_0 ... Z_{p-1}
    gamma_1^(p) -> X_p Z_0 ... Z_{p-1},  gamma_2^(p) -> Y_p Z_0 ... Z_{p-1}
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .coeffs import Coeff
from .errors import WidthMismatchError
from .fermion import ANN, CRE, HOLE, NUM, FermionicString, FermionicSum
from .majorana import MajoranaString, MajoranaSum
from .pauli import PauliString, PauliSum

HALF = Coeff.rational(Fraction(1, 2))
HALF_I = Coeff.rational(0, Fraction(1, 2))


def _tail(n: int, p: int) -> int:
    return (1 << p) - 1


@lru_cache(maxsize=4096)
def _jw_elementary(n: int, kind: str, p: int) -> PauliSum:
    tail = _tail(n, p)
    bit = 1 << p
    x_p = PauliString(n, bit, tail)
    y_p = PauliString(n, bit, tail | bit)
    z_p = PauliString(n, 0, bit)
    ident = PauliString(n)
    if kind == ANN:
        return PauliSum(n, [(x_p, HALF), (y_p, HALF_I)])
    if kind == CRE:
        return PauliSum(n, [(x_p, HALF), (y_p, -HALF_I)])
    if kind == NUM:
        return PauliSum(n, [(ident, HALF), (z_p, -HALF)])
    return PauliSum(n, [(ident, HALF), (z_p, HALF)])


def jw_fermion_to_pauli(f, n: int | None = None) -> PauliSum:
    """Jordan-Wigner image of a fermionic string or sum."""
    if isinstance(f, FermionicSum):
        width = f.n if n is None else n
        out = PauliSum(width)
        for s, c in f.items():
            out = out + jw_fermion_to_pauli(s, width).scale(c)
        return out
    width = f.n if n is None else n
    if width < f.n:
        raise WidthMismatchError(f"string on {f.n} modes does not fit {width} qubits")
    if f.is_zero:
        return PauliSum(width)
    out = PauliSum(width, [(PauliString(width), Coeff.rational(1).mul_i(f.phase))])
    for kind, p in f.ladder():
        out = out * _jw_elementary(width, kind, p)
    return out


def jw_majorana_to_pauli(g: MajoranaString, n: int | None = None) -> PauliString:
    width = g.n if n is None else n
    if width < g.n:
        raise WidthMismatchError(f"string on {g.n} modes does not fit {width} qubits")
    out = PauliString(width, phase=g.phase)
    for mode, flavor in g.factors():
        bit = 1 << mode
        z = _tail(width, mode) | (bit if flavor == 2 else 0)
        out = out * PauliString(width, bit, z)
    return out


def jw_majorana_sum_to_pauli(g: MajoranaSum, n: int | None = None) -> PauliSum:
    width = g.n if n is None else n
    out = PauliSum(width)
    for s, c in g.items():
        out._accumulate(jw_majorana_to_pauli(s, width), c)
    return out


@lru_cache(maxsize=4096)
def _maj_elementary(n: int, kind: str, p: int) -> MajoranaSum:
    g1 = MajoranaString.gamma(n, p, 1)
    g2 = MajoranaString.gamma(n, p, 2)
    g12 = g1 * g2
    ident = MajoranaString(n)
    if kind == CRE:
        return MajoranaSum(n, [(g1, HALF), (g2, -HALF_I)])
    if kind == ANN:
        return MajoranaSum(n, [(g1, HALF), (g2, HALF_I)])
    if kind == NUM:
        return MajoranaSum(n, [(ident, HALF), (g12, HALF_I)])
    return MajoranaSum(n, [(ident, HALF), (g12, -HALF_I)])


def fermion_to_majorana(f) -> MajoranaSum:
    """Substitute a+ = (g1 - i g2)/2, a = (g1 + i g2)/2, n = (1 + i g1 g2)/2, h = (1 - i g1 g2)/2."""
    if isinstance(f, FermionicSum):
        out = MajoranaSum(f.n)
        for s, c in f.items():
            out = out + fermion_to_majorana(s).scale(c)
        return out
    if f.is_zero:
        return MajoranaSum(f.n)
    out = MajoranaSum(f.n, [(MajoranaString(f.n, phase=f.phase), 1)])
    for kind, p in f.ladder():
        out = out * _maj_elementary(f.n, kind, p)
    return out


def majorana_to_fermion(g) -> FermionicSum:
    """Substitute gamma_1 = a+ + a and gamma_2 = i (a+ - a), then normalize."""
    if isinstance(g, MajoranaSum):
        out = FermionicSum(g.n)
        for s, c in g.items():
            out = out + majorana_to_fermion(s).scale(c)
        return out
    n = g.n
    out = FermionicSum(n, [(FermionicString(n, phase=g.phase), 1)])
    for mode, flavor in g.factors():
        up = FermionicString.single(n, CRE, mode)
        down = FermionicString.single(n, ANN, mode)
        if flavor == 1:
            factor = FermionicSum(n, [(up, 1), (down, 1)])
        else:
            factor = FermionicSum(n, [(up, Coeff.rational(0, 1)), (down, Coeff.rational(0, -1))])
        out = out * factor
    return out


def inverse_jw(p, n: int | None = None, holes: bool = True) -> FermionicSum:
    """Fermionic image of a Pauli string or sum.

    X_p -> (a+_p + a_p) prod_{q<p} Z_q,  Y_p -> i (a+_p - a_p) prod_{q<p} Z_q,
    with Z_q -> h_q - n_q (``holes=True``) or I - 2 n_q (``holes=False``).
    Both choices denote the same operator.
    """
    if isinstance(p, PauliSum):
        width = p.n if n is None else n
        out = FermionicSum(width)
        for s, c in p.items():
            out = out + inverse_jw(s, width, holes).scale(c)
        return out
    width = p.n if n is None else n
    if width < p.n:
        raise WidthMismatchError(f"string on {p.n} qubits does not fit {width} modes")

    def z_image(q):
        if holes:
            return FermionicSum(width, [(FermionicString.single(width, HOLE, q), 1),
                                        (FermionicString.single(width, NUM, q), -1)])
        return FermionicSum(width, [(FermionicString(width), 1),
                                    (FermionicString.single(width, NUM, q), -2)])

    out = FermionicSum(width, [(FermionicString(width, phase=p.phase), 1)])
    for q, letter in p.ops():
        if letter == "Z":
            out = out * z_image(q)
            continue
        up = FermionicString.single(width, CRE, q)
        down = FermionicString.single(width, ANN, q)
        if letter == "X":
            local = FermionicSum(width, [(up, 1), (down, 1)])
        else:
            local = FermionicSum(width, [(up, Coeff.rational(0, 1)), (down, Coeff.rational(0, -1))])
        for r in range(q):
            local = z_image(r) * local
        out = out * local
    return out
