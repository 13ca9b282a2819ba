"""Lie algebras spanned by anti-Hermitian single, pair and half-body operators.

    A^p_q = a+_p a_q - a+_q a_p      (so(M))
    A^{pq} = a+_p a+_q - a_q a_p     (with singles: so(M) + so(M))
    A^p = a+_p - a_p                 (with both: so(M) + so(M+1))

Everything is exact: commutators are computed in the fermionic monoid and
expanded on the basis through each element's leading string.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import numpy as np

from .coeffs import Coeff
from .fermion import ANN, CRE, FermionicString, FermionicSum, ferm_normalize

FAMILIES = ("singles", "pairs", "halfbody", "singles_pairs", "singles_pairs_half")


def single(n: int, p: int, q: int) -> FermionicSum:
    """A^p_q for any p, q (zero when p == q, antisymmetric in p, q)."""
    f = ferm_normalize(n, [(CRE, p), (ANN, q)])
    return (FermionicSum.from_string(f) - FermionicSum.from_string(f.dagger())).canonical()


def pair(n: int, p: int, q: int) -> FermionicSum:
    """A^{pq} = a+_p a+_q - a_q a_p."""
    f = ferm_normalize(n, [(CRE, p), (CRE, q)])
    return (FermionicSum.from_string(f) - FermionicSum.from_string(f.dagger())).canonical()


def half(n: int, p: int) -> FermionicSum:
    f = FermionicString.single(n, CRE, p)
    return FermionicSum(n, [(f, 1), (f.dagger(), -1)])


@dataclass(frozen=True)
class Element:
    kind: str  # "single", "pair" or "half"
    indices: tuple[int, ...]

    def label(self) -> str:
        if self.kind == "single":
            return f"A^{self.indices[0]}_{self.indices[1]}"
        if self.kind == "pair":
            return f"A^{self.indices[0]}{self.indices[1]}"
        return f"A^{self.indices[0]}"

    def operator(self, n: int) -> FermionicSum:
        if self.kind == "single":
            return single(n, *self.indices)
        if self.kind == "pair":
            return pair(n, *self.indices)
        return half(n, self.indices[0])

    def leading(self, n: int) -> FermionicString:
        """The string whose coefficient in the element is +1 and appears in no other element."""
        p = self.indices[0]
        if self.kind == "single":
            return ferm_normalize(n, [(CRE, p), (ANN, self.indices[1])])
        if self.kind == "pair":
            return ferm_normalize(n, [(CRE, p), (CRE, self.indices[1])])
        return FermionicString.single(n, CRE, p)


def elements(family: str, m: int) -> list[Element]:
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")
    if m < 1 or (m < 2 and family != "halfbody"):
        raise ValueError(f"family {family} needs at least 2 modes, got {m}")
    pairs = list(combinations(range(m), 2))
    out: list[Element] = []
    if family in ("singles", "singles_pairs", "singles_pairs_half"):
        out += [Element("single", pq) for pq in pairs]
    if family in ("pairs", "singles_pairs", "singles_pairs_half"):
        out += [Element("pair", pq) for pq in pairs]
    if family in ("halfbody", "singles_pairs_half"):
        out += [Element("half", (p,)) for p in range(m)]
    return out


def basis(family: str, m: int) -> list[FermionicSum]:
    """Anti-Hermitian basis in the fixed order singles (p<q), pairs (p<q), half-body."""
    return [e.operator(m) for e in elements(family, m)]


def expected_dimension(family: str, m: int) -> int:
    return {
        "singles": m * (m - 1) // 2,
        "pairs": m * (m - 1) // 2,
        "halfbody": m,
        "singles_pairs": m * (m - 1),
        "singles_pairs_half": m * m,
    }[family]


def _real_rational(c) -> Fraction:
    if not isinstance(c, Coeff) or not c.is_rational() or not c.im.is_zero():
        raise ValueError(f"structure constant {c} is not a real rational")
    return c.re.constant


def expand(x: FermionicSum, elems: list[Element], ops: list[FermionicSum], m: int):
    """Coefficients of x on the basis and the residual x - sum_k f_k B_k."""
    x = x.canonical()
    coeffs = [Fraction(0)] * len(elems)
    residual = x
    for k, e in enumerate(elems):
        c = x.coeff(e.leading(m))
        if c is None or (isinstance(c, Coeff) and c.is_zero()):
            continue
        coeffs[k] = _real_rational(c)
        residual = residual - ops[k].scale(c)
    return coeffs, residual.canonical()


@dataclass
class ClosureReport:
    family: str
    modes: int
    dimension: int
    closed: bool
    labels: list[str]
    # structure[i][j][k]: coefficient of B_k in [B_i, B_j]
    structure: list[list[list[Fraction]]] = field(repr=False)
    failures: list[str]
    relations_ok: bool | None = None
    antisymmetric: bool | None = None
    jacobi: bool | None = None

    def nonzero_constants(self) -> list[tuple[str, str, str, Fraction]]:
        out = []
        for i, row in enumerate(self.structure):
            for j, vec in enumerate(row):
                if i < j:
                    out += [(self.labels[i], self.labels[j], self.labels[k], c)
                            for k, c in enumerate(vec) if c]
        return out

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "modes": self.modes,
            "dimension": self.dimension,
            "expected_dimension": expected_dimension(self.family, self.modes),
            "closed": self.closed,
            "relations_ok": self.relations_ok,
            "antisymmetric": self.antisymmetric,
            "jacobi": self.jacobi,
            "failures": self.failures,
            "structure_constants": [
                {"a": a, "b": b, "c": c, "value": str(v)} for a, b, c, v in self.nonzero_constants()
            ],
        }


def structure_table(family: str, m: int):
    elems = elements(family, m)
    ops = [e.operator(m) for e in elems]
    d = len(elems)
    table = [[[Fraction(0)] * d for _ in range(d)] for _ in range(d)]
    failures = []
    for i in range(d):
        for j in range(i + 1, d):
            coeffs, residual = expand(ops[i].commutator(ops[j]), elems, ops, m)
            if not residual.is_zero():
                failures.append(f"[{elems[i].label()}, {elems[j].label()}] leaves {residual}")
            table[i][j] = coeffs
            table[j][i] = [-c for c in coeffs]
    return elems, ops, table, failures


def _check_antisymmetry(table) -> bool:
    d = len(table)
    return all(table[i][j][k] == -table[j][i][k] for i in range(d) for j in range(d) for k in range(d))


def _check_jacobi(table) -> bool:
    d = len(table)
    for i in range(d):
        for j in range(i + 1, d):
            for k in range(j + 1, d):
                for out in range(d):
                    total = Fraction(0)
                    for mm in range(d):
                        total += (table[i][j][mm] * table[mm][k][out]
                                  + table[j][k][mm] * table[mm][i][out]
                                  + table[k][i][mm] * table[mm][j][out])
                    if total:
                        return False
    return True


def _delta(a: int, b: int) -> int:
    return 1 if a == b else 0


def check_relations(family: str, m: int) -> list[str]:
    """Test the closed-form commutators on every index tuple; returns failures."""
    s = {(p, q): single(m, p, q) for p in range(m) for q in range(m)}
    pr = {(p, q): pair(m, p, q) for p in range(m) for q in range(m)}
    hb = {p: half(m, p) for p in range(m)}
    zero = FermionicSum(m)
    bad = []

    def combo(table, p, q, r, t):
        # d_qr X_pt - d_qt X_pr - d_pr X_qt + d_pt X_qr
        out = zero
        for coef, key in ((_delta(q, r), (p, t)), (-_delta(q, t), (p, r)),
                          (-_delta(p, r), (q, t)), (_delta(p, t), (q, r))):
            if coef:
                out = out + table[key].scale(coef)
        return out

    def check(name, lhs, rhs):
        if not (lhs - rhs).canonical().is_zero():
            bad.append(name)

    idx = range(m)
    if family in ("singles", "singles_pairs", "singles_pairs_half"):
        for p in idx:
            for q in idx:
                for r in idx:
                    for t in idx:
                        check(f"[A^{p}_{q}, A^{r}_{t}]", s[p, q].commutator(s[r, t]), combo(s, p, q, r, t))
    if family in ("pairs", "singles_pairs", "singles_pairs_half"):
        for p in idx:
            for q in idx:
                for r in idx:
                    for t in idx:
                        check(f"[A^{p}{q}, A^{r}{t}]", pr[p, q].commutator(pr[r, t]), combo(s, p, q, r, t))
                        if family != "pairs":
                            check(f"[A^{p}_{q}, A^{r}{t}]", s[p, q].commutator(pr[r, t]), combo(pr, p, q, r, t))
    if family == "singles_pairs_half":
        for p in idx:
            for q in idx:
                check(f"[A^{p}, A^{q}]", hb[p].commutator(hb[q]), (pr[p, q] - s[p, q]).scale(2))
                for r in idx:
                    rhs = hb[p].scale(_delta(q, r)) - hb[q].scale(_delta(p, r))
                    check(f"[A^{p}_{q}, A^{r}]", s[p, q].commutator(hb[r]), rhs)
                    check(f"[A^{p}{q}, A^{r}]", pr[p, q].commutator(hb[r]), -rhs)
    return bad


def verify_closure(family: str, m: int, relations: bool = True) -> ClosureReport:
    elems, _, table, failures = structure_table(family, m)
    report = ClosureReport(
        family=family,
        modes=m,
        dimension=len(elems),
        closed=not failures,
        labels=[e.label() for e in elems],
        structure=table,
        failures=failures,
    )
    if report.closed:
        report.antisymmetric = _check_antisymmetry(table)
        report.jacobi = _check_jacobi(table)
    if relations:
        bad = check_relations(family, m)
        report.relations_ok = not bad
        report.failures += [f"relation {b} fails" for b in bad]
    return report


# ---------------------------------------------------------------- matrix images

def _L(size: int, p: int, q: int) -> np.ndarray:
    out = np.zeros((size, size), dtype=np.int64)
    out[p, q] = 1
    out[q, p] = -1
    return out


def image(e: Element, m: int, family: str) -> tuple[np.ndarray, np.ndarray]:
    """so(M) + so(M) or so(M) + so(M+1) image of a basis element, as an integer matrix pair."""
    second = m + 1 if family == "singles_pairs_half" else m
    if e.kind == "half":
        return np.zeros((m, m), dtype=np.int64), 2 * _L(second, e.indices[0], m)
    p, q = e.indices
    first = _L(m, p, q)
    embedded = _L(second, p, q)
    if e.kind == "single":
        return first, embedded
    return first, -embedded


def _bracket(a, b):
    return a[0] @ b[0] - b[0] @ a[0], a[1] @ b[1] - b[1] @ a[1]


def _flatten(pair_) -> np.ndarray:
    return np.concatenate([pair_[0].ravel(), pair_[1].ravel()])


def verify_isomorphism(family: str, m: int) -> bool:
    """The linear map B_k -> image(B_k) is injective and preserves every commutator."""
    if family not in ("singles", "singles_pairs", "singles_pairs_half"):
        raise ValueError(f"no matrix image defined for family {family!r}")
    elems, _, table, failures = structure_table(family, m)
    if failures:
        return False
    images = [image(e, m, family) for e in elems]
    if family == "singles":
        images = [(a, np.zeros((0, 0), dtype=np.int64)) for a, _ in images]
    flat = np.array([_flatten(x) for x in images])
    if np.linalg.matrix_rank(flat.astype(float)) != len(elems):
        return False
    for i in range(len(elems)):
        for j in range(i + 1, len(elems)):
            lhs = _flatten(_bracket(images[i], images[j]))
            rhs = np.zeros_like(lhs, dtype=object)
            for k, c in enumerate(table[i][j]):
                if c:
                    rhs = rhs + c * flat[k].astype(object)
            if any(Fraction(a) != Fraction(b) for a, b in zip(lhs.tolist(), list(rhs))):
                return False
    return True
