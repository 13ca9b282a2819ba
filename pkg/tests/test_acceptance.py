"""End-to-end acceptance checks, one group per criterion.

Each check times itself against its budget.  The outcome of every group is
printed as a single PASS/FAIL line at the end of the pytest run.
"""

import random
import time
from fractions import Fraction
from itertools import permutations, product

import numpy as np
import pytest

from fermiclif.clifford import ANTI, HERM, Generator, clifford_apply, general_conjugate, sum_halfbody_conjugate, sum_halfbody_exp
from fermiclif.coeffs import Angle, Coeff, to_complex
from fermiclif.dense import basis_index, frobenius_norm_sq, matrix_conjugate_oracle, max_deviation, to_matrix, unitary
from fermiclif.fermion import ANN, CRE, HOLE, NUM, FermionicString, FermionicSum, ferm_normalize
from fermiclif.lie import basis, verify_closure, verify_isomorphism
from fermiclif.mappings import inverse_jw, jw_fermion_to_pauli
from fermiclif.oracle import random_fermion_string, random_generator, run_oracle_suite
from fermiclif.pauli import PauliString, PauliSum
from fermiclif.tapering import (
    H2_LABELS,
    H2_SYMBOLS,
    conjugate_hamiltonian,
    fermion_term_count,
    find_z2_symmetries,
    h2_fermionic_hamiltonian,
    h2_generic_pauli_hamiltonian,
    h2_pauli_hamiltonian,
    h2_plan,
    h2_table_coefficients,
    sector_of_state,
    taper_qubits,
)

criterion = pytest.mark.criterion


class Budget:
    def __init__(self, seconds: float):
        self.seconds = seconds

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start
        if exc[0] is None:
            assert self.elapsed < self.seconds, f"took {self.elapsed:.2f} s, budget {self.seconds} s"


def L(label: str, n: int = 4) -> PauliString:
    ops = [] if label == "I" else [(int(t[1:]), t[0]) for t in label.split()]
    return PauliString.from_ops(n, ops)


def sym(name, q=1) -> Coeff:
    return Coeff.symbol(name, Fraction(q))


def dense_pauli_coefficients(h_dense: np.ndarray, n: int) -> dict:
    """Tr(P H) / 2^n for every Pauli string: an oracle independent of the JW code."""
    out = {}
    for xs in range(2**n):
        for zs in range(2**n):
            p = PauliString(n, xs, zs)
            c = np.trace(to_matrix(p) @ h_dense) / 2**n
            if abs(c) > 1e-12:
                out[p] = c
    return out


def gf2_rank(rows: list[int]) -> int:
    rows = list(rows)
    rank = 0
    for bit in reversed(range(64)):
        pivot = next((r for r in rows if r >> bit & 1), None)
        if pivot is None:
            continue
        rows.remove(pivot)
        rows = [r ^ pivot if r >> bit & 1 else r for r in rows]
        rank += 1
    return rank


def random_integrals(rng):
    return {s: rng.uniform(-1.5, 1.5) for s in H2_SYMBOLS}


# ---------------------------------------------------------------- 1. JW image of the H2 Hamiltonian

# c1..c15 exactly as tabulated, written out independently of the package
PRINTED = [
    sym("h00") + sym("h22") + sym("v0101", Fraction(1, 4)) + sym("v2323", Fraction(1, 4)) + sym("v0202")
    - sym("v0220", Fraction(1, 2)),
    *[sym("h00", Fraction(-1, 2)) - (sym("v0101") - sym("v0202", 2) + sym("v0220")).scale(Fraction(1, 4))] * 2,
    *[sym("h22", Fraction(-1, 2)) - (sym("v2323") - sym("v0202", 2) + sym("v0220")).scale(Fraction(1, 4))] * 2,
    sym("v0101", Fraction(1, 4)),
    (sym("v0202") - sym("v0220")).scale(Fraction(1, 4)),
    sym("v0202", Fraction(1, 4)),
    sym("v0202", Fraction(1, 4)),
    (sym("v0202") - sym("v0220")).scale(Fraction(1, 4)),
    sym("v2323", Fraction(1, 4)),
    sym("v0123", Fraction(-1, 4)),
    sym("v0123", Fraction(1, 4)),
    sym("v0123", Fraction(1, 4)),
    sym("v0123", Fraction(-1, 4)),
]


@criterion(1, "H2 Pauli Hamiltonian: 15 terms, coefficients equal to the tabulated expressions")
def test_c1_fifteen_terms_and_exact_rows():
    with Budget(1.0):
        h = h2_pauli_hamiltonian()
        assert len(h) == 15
        assert sorted(str(s) for s, _ in h.items()) == sorted(H2_LABELS)
        assert h2_table_coefficients() == PRINTED
        for k, (label, c) in enumerate(zip(H2_LABELS, PRINTED), start=1):
            if k not in (2, 3, 4, 5):
                assert h.coeff(L(label)) == c, label


@criterion(1, "H2 Pauli Hamiltonian: 15 terms, coefficients equal to the tabulated expressions")
def test_c1_jw_image_matches_dense_trace_oracle():
    rng = random.Random(101)
    for _ in range(3):
        vals = random_integrals(rng)
        ref = dense_pauli_coefficients(to_matrix(h2_fermionic_hamiltonian(), 4, bindings=vals), 4)
        got = h2_pauli_hamiltonian()
        assert set(ref) == {s for s, _ in got.items()}
        for s, c in got.items():
            assert abs(to_complex(c, vals) - ref[s]) < 1e-12
        corrected = h2_table_coefficients(corrected=True)
        for label, c in zip(H2_LABELS, corrected):
            assert abs(to_complex(c, vals) - ref[L(label)]) < 1e-12


@criterion(1, "H2 Pauli Hamiltonian: 15 terms, coefficients equal to the tabulated expressions")
@pytest.mark.xfail(strict=True, reason="reference c2..c5 carry the opposite sign on the v0202/v0220 part from the JW image")
def test_c1_rows_c2_to_c5_as_printed():
    h = h2_pauli_hamiltonian()
    for label, c in list(zip(H2_LABELS, PRINTED))[1:5]:
        assert h.coeff(L(label)) == c, f"{label}: JW gives {h.coeff(L(label))}, table gives {c}"


# ---------------------------------------------------------------- 2. symmetry generators

@criterion(2, "Z2 symmetry group of H2 is <Z0Z1, Z0Z2, Z0Z3> (GF(2) row space)")
def test_c2_symmetry_group():
    with Budget(1.0):
        group = find_z2_symmetries(h2_pauli_hamiltonian())
        found = [g.x << 4 | g.z for g in group]
        expected = [L(s).z for s in ("Z0 Z1", "Z0 Z2", "Z0 Z3")]
        assert len(found) == 3
        assert gf2_rank(found) == gf2_rank(expected) == gf2_rank(found + expected) == 3


# ---------------------------------------------------------------- 3. transformed and tapered Hamiltonian

def C(k):
    return Coeff.symbol(f"c{k}")


@criterion(3, "conjugated H2 equals the printed U H U; sector (+,-,-) equals its printed form")
def test_c3_transformed_and_tapered():
    with Budget(1.0):
        plan = h2_plan()
        hbar = conjugate_hamiltonian(h2_generic_pauli_hamiltonian(), plan)
        expected = PauliSum(4, [
            (L("I"), C(1)), (L("Z0"), C(2)), (L("Z0 X1"), C(3)), (L("Z0 X2"), C(4)), (L("Z0 X3"), C(5)),
            (L("X1"), C(6)), (L("X2"), C(7)), (L("X3"), C(8)), (L("X1 X2"), C(9)), (L("X1 X3"), C(10)),
            (L("X2 X3"), C(11)), (L("X0 X2 X3"), -C(12)), (L("X0 X1 X2"), -C(13)), (L("X0 X3"), -C(14)),
            (L("X0 X1"), -C(15)),
        ])
        assert hbar == expected

        # with the tabulated ties c3=c2, c5=c4, c10=c7, c9=c8, c13=c14=-c12, c15=c12
        tied = [C(1), C(2), C(2), C(4), C(4), C(6), C(7), C(8), C(8), C(7), C(11), C(12), -C(12), -C(12), C(12)]
        tapered = taper_qubits(conjugate_hamiltonian(h2_generic_pauli_hamiltonian(tied), plan), plan, "+--")
        assert tapered == PauliSum(1, [
            (L("I", 1), C(1) + C(6) - C(7).scale(2) - C(8).scale(2) + C(11)),
            (L("Z0", 1), C(2).scale(2) - C(4).scale(2)),
            (L("X0", 1), C(12).scale(-4)),
        ])


# ---------------------------------------------------------------- 4. fermionic term counts

@criterion(4, "inverse JW of the conjugated H2 has 82 fermionic terms, 14 before")
def test_c4_term_counts():
    with Budget(5.0):
        h = h2_pauli_hamiltonian()
        hbar = conjugate_hamiltonian(h, h2_plan())
        assert fermion_term_count(h) == 14
        assert fermion_term_count(hbar) == 82
        # the counted expansion really is the same operator
        assert jw_fermion_to_pauli(inverse_jw(hbar, holes=False).canonical(), 4) == hbar
        assert len(h2_fermionic_hamiltonian().canonical()) == 14


# ---------------------------------------------------------------- 5. Fock-space decomposition

FOCK_TABLE = {
    "+++": ["0000", "1111"], "-++": ["0100", "1011"], "+-+": ["0010", "1101"], "++-": ["1110", "0001"],
    "--+": ["0110", "1001"], "-+-": ["1010", "0101"], "+--": ["1100", "0011"], "---": ["1000", "0111"],
}


@criterion(5, "all 16 determinants land in the tabulated 8 sectors")
def test_c5_sector_map():
    with Budget(1.0):
        plan = h2_plan()
        u = to_matrix(plan.unitary())
        xs = {q: to_matrix(L(f"X{q}")) for q in plan.targets}
        covered = []
        for sector, dets in FOCK_TABLE.items():
            want = tuple(1 if ch == "+" else -1 for ch in sector)
            for det in dets:
                occ = tuple(int(b) for b in det)
                assert sector_of_state(occ, plan) == want, det
                v = u[:, basis_index(occ)]
                for q, sign in zip(plan.targets, want):
                    assert np.allclose(xs[q] @ v, sign * v)
                covered.append(det)
        assert sorted(covered) == ["".join(b) for b in product("01", repeat=4)]


# ---------------------------------------------------------------- 6. isospectrality

@criterion(6, "tapered (+,-,-) spectrum equals the {|1100>,|0011>} block spectrum, 20 integral sets")
def test_c6_isospectral():
    with Budget(10.0):
        plan = h2_plan()
        tapered = taper_qubits(conjugate_hamiltonian(h2_pauli_hamiltonian(), plan), plan, "+--")
        fermionic = h2_fermionic_hamiltonian()
        idx = [basis_index((1, 1, 0, 0)), basis_index((0, 0, 1, 1))]
        rng = random.Random(106)
        for _ in range(20):
            vals = random_integrals(rng)
            full = to_matrix(fermionic, 4, bindings=vals)
            block = full[np.ix_(idx, idx)]
            small = to_matrix(tapered, bindings=vals)
            assert max_deviation(np.linalg.eigvalsh(small), np.linalg.eigvalsh(block)) < 1e-10


# ---------------------------------------------------------------- 7 and 9. Clifford tables

def _strings(n):
    for choice in product([None, CRE, ANN, NUM, HOLE], repeat=n):
        yield ferm_normalize(n, [(kind, p) for p, kind in enumerate(choice) if kind is not None])


def _generators(n):
    for sign in (ANTI, HERM):
        for p in range(n):
            yield Generator.halfbody(p, sign)
        for c, d in permutations(range(n), 2):
            yield Generator.pair(c, d, sign)
            yield Generator.exc(c, d, sign)


def _instances():
    for n in (1, 2):
        for g in _generators(n):
            for o in _strings(n):
                yield n, o, g
    rng = random.Random(107)
    for n in (3, 4):
        done = 0
        while done < 600:
            g = random_generator(rng, n)
            if g.kind in ("raw", "number"):
                continue
            yield n, random_fermion_string(rng, n).with_phase(rng.randrange(4)), g
            done += 1


def _exact_norm_sq(phase: Coeff, s: FermionicString) -> Fraction:
    """|phase|^2 2^(n - touched modes): every a, a+, n, h factor has unit norm on its qubit."""
    touched = bin(s.cre | s.ann | s.num | s.hole).count("1")
    mod = phase * phase.conjugate()
    assert mod.is_rational()
    return mod.re.constant * 2 ** (s.n - touched)


@criterion(7, "clifford_apply equals general_conjugate exactly for every table row, M <= 4, k in -2..2")
@criterion(9, "Clifford applications preserve rank, Frobenius norm and length parity")
def test_c7_c9_tables_and_conservation():
    with Budget(30.0):
        count = 0
        rng = random.Random(109)
        for n, o, g in _instances():
            for k in range(-2, 3):
                phase, s = clifford_apply(o, g, k)
                closed = general_conjugate(o, g, Angle.pi(Fraction(2 * k + 1, 2)), n)
                assert closed.is_exact()
                diff = (FermionicSum.from_string(s.with_phase(0), phase.mul_i(s.phase)) - closed).canonical()
                assert diff.is_zero(), (str(o), str(g), k)
                if o.is_zero:
                    continue
                assert s.rank == o.rank
                assert s.length % 2 == o.length % 2
                assert _exact_norm_sq(phase.mul_i(s.phase), s) == _exact_norm_sq(Coeff.rational(1).mul_i(o.phase), o)
                if n <= 3 and rng.random() < 0.02:
                    dense = frobenius_norm_sq(FermionicSum.from_string(s.with_phase(0), phase.mul_i(s.phase)), n)
                    assert abs(dense - float(_exact_norm_sq(Coeff.rational(1), o))) < 1e-9
                count += 1
        assert count >= 200
        # the hopping example: a+_0 a_1 has norm^2 2^(M-2) before and after
        for m in (2, 3, 4):
            o = ferm_normalize(m, [(CRE, 0), (ANN, 1)])
            phase, s = clifford_apply(o, Generator.halfbody(0), 0)
            assert _exact_norm_sq(phase, s) == 2 ** (m - 2)


# ---------------------------------------------------------------- 8. dense oracle suite

@criterion(8, "general_conjugate, maj_conjugate, pauli_conjugate match dense U+OU on 500 cases each")
def test_c8_oracle_suite():
    with Budget(60.0):
        report = run_oracle_suite(seed=108, cases=500, max_modes=4, tol=1e-10)
        for name in ("general_conjugate", "maj_conjugate", "pauli_conjugate"):
            fam = report["families"][name]
            assert fam["passed"], (name, fam["max_deviation"], fam["worst_case"])
            assert fam["max_deviation"] < 1e-10
        assert report["cases"] >= 500


# ---------------------------------------------------------------- 10. sums of half-body generators

@criterion(10, "sum-of-half-body exponential and conjugation match dense results, M <= 3, 200 angle vectors")
def test_c10_halfbody_sums():
    with Budget(30.0):
        rng = random.Random(110)
        for i in range(200):
            n = 1 + i % 3
            sign = ANTI if i % 2 else HERM
            thetas = {p: rng.uniform(-3, 3) for p in range(n)}
            total = sum(to_matrix(Generator.halfbody(p, sign).operator(n)) * t for p, t in thetas.items())
            assert max_deviation(to_matrix(sum_halfbody_exp(thetas, sign, n), n),
                                 unitary(total, 1.0, hermitian=(sign == HERM))) < 1e-10
            o = random_fermion_string(rng, n)
            ref = matrix_conjugate_oracle(o, total, 1.0, n, hermitian=(sign == HERM))
            assert max_deviation(to_matrix(sum_halfbody_conjugate(o, thetas, sign, n), n), ref) < 1e-10


# ---------------------------------------------------------------- 11. rank shift

def _fold(x: FermionicSum, p: int) -> dict:
    """Merge c*X n_p + c*X h_p (coefficients equal exactly) into c*X."""
    terms = dict(x.items())
    bit = 1 << p
    for t in list(terms):
        if t in terms and t.num & bit:
            partner = FermionicString(t.n, t.cre, t.ann, t.hole | bit, t.num & ~bit)
            if partner in terms and terms[partner] == terms[t]:
                c = terms.pop(t)
                terms.pop(partner)
                base = FermionicString(t.n, t.cre, t.ann, t.hole, t.num & ~bit)
                terms[base] = terms[base] + c if base in terms else c
    return terms


@criterion(11, "half-body conjugation shifts ranks by at most one half in the stated direction")
def test_c11_rank_shift():
    with Budget(30.0):
        rng = random.Random(111)
        half = Fraction(1, 2)
        for _ in range(1000):
            n = rng.randint(1, 4)
            o = random_fermion_string(rng, n).with_phase(0)
            p = rng.randrange(n)
            raw = general_conjugate(o, Generator.halfbody(p, rng.choice([ANTI, HERM])), rng.uniform(-3, 3), n)
            r = o.rank
            if o.block_of(p) in (NUM, HOLE):
                out, allowed = dict(raw.items()), {r, r - half}
            else:
                out = _fold(raw, p)
                allowed = {r, r - half} if o.length % 2 == 0 else {r, r + half}
            for s in out:
                assert s.rank in allowed, (str(o), p, str(s))


# ---------------------------------------------------------------- 12. Lie suite

@criterion(12, "Lie closure, dimensions, named relations, Jacobi and matrix isomorphisms for M = 2, 3, 4")
def test_c12_lie_suite():
    with Budget(30.0):
        for m in (2, 3, 4):
            for family, dim in (("singles", m * (m - 1) // 2), ("singles_pairs", m * (m - 1)),
                                ("singles_pairs_half", m * m)):
                assert len(basis(family, m)) == dim
                report = verify_closure(family, m)
                assert report.closed and report.relations_ok, report.failures
                assert report.antisymmetric and report.jacobi
                assert report.dimension == dim
                assert verify_isomorphism(family, m)
