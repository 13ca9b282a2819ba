import math
import random
from fractions import Fraction
from itertools import permutations, product

import numpy as np
import pytest

from fermiclif.clifford import (
    ANTI,
    HERM,
    Generator,
    classify_alpha,
    clifford_apply,
    clifford_apply_sum,
    general_conjugate,
    number_phase_conjugate,
    sum_halfbody_conjugate,
    sum_halfbody_exp,
)
from fermiclif.coeffs import Angle, Coeff, to_complex
from fermiclif.dense import (
    frobenius_norm_sq,
    matrix_conjugate_oracle,
    max_deviation,
    to_matrix,
    unitary,
)
from fermiclif.fermion import ANN, CRE, HOLE, NUM, FermionicString, FermionicSum, ferm_normalize
from fermiclif.oracle import random_fermion_string, random_generator


def F(n, *ops, phase=0):
    return ferm_normalize(n, list(ops), phase)


def S(n, *terms):
    return FermionicSum(n, [(f if isinstance(f, FermionicString) else F(n, *f), c) for f, c in terms])


def same_operator(a: FermionicSum, b: FermionicSum, tol=1e-12) -> bool:
    diff = (a - b).canonical()
    return all(abs(to_complex(c)) < tol for _, c in diff.items())


def odd_grid(k):
    return Angle.pi(Fraction(2 * k + 1, 2))


def all_strings(n):
    for choice in product([None, CRE, ANN, NUM, HOLE], repeat=n):
        yield F(n, *[(kind, p) for p, kind in enumerate(choice) if kind is not None])


def all_generators(n):
    for sign in (ANTI, HERM):
        for p in range(n):
            yield Generator.halfbody(p, sign)
        for c, d in permutations(range(n), 2):
            yield Generator.pair(c, d, sign)
            yield Generator.exc(c, d, sign)


# ---------------------------------------------------------------- alpha classification

def test_alpha_number_under_halfbody():
    assert classify_alpha(F(1, (NUM, 0)), Generator.halfbody(0)) == 4


def test_alpha_excitation_under_pair():
    o = F(3, (CRE, 0), (ANN, 2))
    assert classify_alpha(o, Generator.pair(0, 1)) == 1


def test_alpha_disjoint_even():
    o = F(2, (NUM, 1))
    g = Generator.halfbody(0)
    assert classify_alpha(o, g) == 1
    assert FermionicSum.from_string(o).commutator(g.operator(2)).is_zero()


def test_alpha_always_one_or_four():
    rng = random.Random(21)
    for _ in range(400):
        n = rng.randint(1, 4)
        o = random_fermion_string(rng, n)
        g = random_generator(rng, n)
        if g.kind == "number":
            continue
        assert classify_alpha(o, g) in (1, 4)


# ---------------------------------------------------------------- continuous transformations

THETA = 0.41
C2, S2, SC = math.cos(THETA) ** 2, math.sin(THETA) ** 2, math.sin(2 * THETA) / 2
C1, S1 = math.cos(THETA), math.sin(THETA)

# rows of the continuous-transformation table, c = 0 and d = 1
CONTINUOUS_ROWS = [
    (Generator.halfbody(0), [(ANN, 0)],
     [([(ANN, 0)], C2), ([(CRE, 0)], -S2), ([(HOLE, 0)], SC), ([(NUM, 0)], -SC)]),
    (Generator.halfbody(0), [(CRE, 0)],
     [([(CRE, 0)], C2), ([(ANN, 0)], -S2), ([(HOLE, 0)], SC), ([(NUM, 0)], -SC)]),
    (Generator.halfbody(0), [(NUM, 0)],
     [([(NUM, 0)], C2), ([(HOLE, 0)], S2), ([(ANN, 0)], SC), ([(CRE, 0)], SC)]),
    (Generator.halfbody(0), [(HOLE, 0)],
     [([(HOLE, 0)], C2), ([(NUM, 0)], S2), ([(ANN, 0)], -SC), ([(CRE, 0)], -SC)]),
    (Generator.pair(0, 1), [(ANN, 0)], [([(ANN, 0)], C1), ([(CRE, 1)], S1)]),
    (Generator.pair(0, 1), [(CRE, 0)], [([(CRE, 0)], C1), ([(ANN, 1)], S1)]),
    (Generator.pair(0, 1), [(NUM, 0)],
     [([(NUM, 0)], C2), ([(HOLE, 1)], S2), ([(CRE, 0), (CRE, 1)], SC), ([(ANN, 1), (ANN, 0)], SC)]),
    (Generator.pair(0, 1), [(HOLE, 0)],
     [([(HOLE, 0)], C2), ([(NUM, 1)], S2), ([(CRE, 0), (CRE, 1)], -SC), ([(ANN, 1), (ANN, 0)], -SC)]),
    (Generator.exc(0, 1), [(ANN, 0)], [([(ANN, 0)], C1), ([(ANN, 1)], S1)]),
    (Generator.exc(0, 1), [(CRE, 0)], [([(CRE, 0)], C1), ([(CRE, 1)], S1)]),
    (Generator.exc(0, 1), [(NUM, 0)],
     [([(NUM, 0)], C2), ([(NUM, 1)], S2), ([(CRE, 0), (ANN, 1)], SC), ([(CRE, 1), (ANN, 0)], SC)]),
    (Generator.exc(0, 1), [(HOLE, 0)],
     [([(HOLE, 0)], C2), ([(HOLE, 1)], S2), ([(CRE, 0), (ANN, 1)], -SC), ([(CRE, 1), (ANN, 0)], -SC)]),
]


@pytest.mark.parametrize("g, o, expected", CONTINUOUS_ROWS, ids=[f"{r[0]}-{r[1][0][0]}" for r in CONTINUOUS_ROWS])
def test_continuous_table_rows(g, o, expected):
    n = 2
    out = general_conjugate(F(n, *o), g, THETA, n)
    assert same_operator(out, S(n, *expected))
    ref = matrix_conjugate_oracle(F(n, *o), g.operator(n), THETA, n, hermitian=False)
    assert max_deviation(to_matrix(out, n), ref) < 1e-12


def test_theta_zero_is_identity():
    rng = random.Random(22)
    for _ in range(100):
        n = rng.randint(1, 4)
        o, g = random_fermion_string(rng, n), random_generator(rng, n)
        assert same_operator(general_conjugate(o, g, Angle.pi(0), n), FermionicSum.from_string(o))


def test_general_conjugate_against_dense_oracle():
    rng = random.Random(23)
    for _ in range(500):
        n = rng.randint(1, 4)
        o, g = random_fermion_string(rng, n), random_generator(rng, n)
        theta = rng.uniform(-3, 3)
        ref = matrix_conjugate_oracle(o, g.operator(n), theta, n, hermitian=g.hermitian)
        assert max_deviation(to_matrix(general_conjugate(o, g, theta, n), n), ref) < 1e-10


# ---------------------------------------------------------------- Clifford tables

def _as_sum(phase, s):
    return FermionicSum(s.n, [(s, phase)])


def test_halfbody_on_creation_gives_annihilation_product():
    # a+_c a_b -> a_c a_b
    o = F(2, (CRE, 0), (ANN, 1))
    phase, s = clifford_apply(o, Generator.halfbody(0), 0)
    assert _as_sum(phase, s) == S(2, ([(ANN, 0), (ANN, 1)], 1))


@pytest.mark.parametrize("k", range(-2, 3))
def test_pair_on_creation(k):
    # a+_c a_b under a+_c a+_d - a_d a_c -> (-1)^k a_d a_b
    o = F(3, (CRE, 0), (ANN, 2))
    phase, s = clifford_apply(o, Generator.pair(0, 1), k)
    assert _as_sum(phase, s) == S(3, ([(ANN, 1), (ANN, 2)], (-1) ** k))


def test_halfbody_on_annihilation():
    phase, s = clifford_apply(F(1, (ANN, 0)), Generator.halfbody(0), 0)
    assert _as_sum(phase, s) == S(1, ([(CRE, 0)], -1))


def test_disjoint_rows():
    o = F(3, (CRE, 1), (NUM, 2))
    assert clifford_apply(o, Generator.halfbody(0), 1) == (Coeff.rational(-1), o)
    o2 = F(3, (CRE, 1), (ANN, 2))
    assert clifford_apply(o2, Generator.halfbody(0), 0) == (Coeff.rational(1), o2)
    o3 = F(4, (CRE, 2), (ANN, 3))
    assert clifford_apply(o3, Generator.pair(0, 1, HERM), 1) == (Coeff.rational(1), o3)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_tables_match_closed_form_exhaustively(n):
    for g in all_generators(n):
        for o in all_strings(n):
            for k in range(-2, 3):
                phase, s = clifford_apply(o, g, k)
                closed = general_conjugate(o, g, odd_grid(k), n)
                assert closed.is_exact()
                assert same_operator(_as_sum(phase, s), closed), (str(o), str(g), k)


def test_tables_match_closed_form_four_modes():
    rng = random.Random(24)
    for _ in range(600):
        o = random_fermion_string(rng, 4).with_phase(rng.randrange(4))
        g = random_generator(rng, 4)
        if g.kind in ("raw", "number"):
            continue
        k = rng.randint(-2, 2)
        phase, s = clifford_apply(o, g, k)
        assert same_operator(_as_sum(phase, s), general_conjugate(o, g, odd_grid(k), 4))


def test_clifford_preserves_rank_parity_and_norm():
    rng = random.Random(25)
    for _ in range(400):
        n = rng.randint(1, 4)
        o = random_fermion_string(rng, n)
        g = random_generator(rng, n)
        if g.kind in ("raw", "number"):
            continue
        phase, s = clifford_apply(o, g, rng.randint(-2, 2))
        assert s.rank == o.rank
        assert s.length % 2 == o.length % 2
        assert abs(frobenius_norm_sq(_as_sum(phase, s), n) - frobenius_norm_sq(FermionicSum.from_string(o), n)) < 1e-9


def test_hamiltonian_loses_particle_number():
    # alpha n_p + beta n_q + gamma (a+_p a_q + a+_q a_p) under a+_p - a_p at odd k
    al, be, ga = Coeff.symbol("alpha"), Coeff.symbol("beta"), Coeff.symbol("gamma")
    h = S(2, ([(NUM, 0)], al), ([(NUM, 1)], be), ([(CRE, 0), (ANN, 1)], ga), ([(CRE, 1), (ANN, 0)], ga))
    expected = S(2, ([(HOLE, 0)], al), ([(NUM, 1)], be), ([(ANN, 0), (ANN, 1)], ga), ([(CRE, 1), (CRE, 0)], ga))
    for k in (-1, 0, 1, 2):
        assert clifford_apply_sum(h, Generator.halfbody(0), k) == expected
        assert general_conjugate(h, Generator.halfbody(0), odd_grid(k)).equivalent(expected)


# ---------------------------------------------------------------- number-operator phases

def test_number_phase_rules():
    theta = Angle.pi(Fraction(1, 3))
    assert number_phase_conjugate(F(1, (ANN, 0)), 0, theta) == (theta.expi(), F(1, (ANN, 0)))
    assert number_phase_conjugate(F(1, (NUM, 0)), 0, theta) == (Coeff.rational(1), F(1, (NUM, 0)))
    t = Angle.pi(Fraction(1, 4))
    phase, s = number_phase_conjugate(F(2, (CRE, 0), (ANN, 1)), 0, t)
    assert phase == (-t).expi()
    assert phase == Coeff.sqrt2(Fraction(1, 2)) * Coeff.rational(1, -1)


def test_number_phase_against_dense():
    rng = random.Random(26)
    for _ in range(200):
        n = rng.randint(1, 4)
        o, p, theta = random_fermion_string(rng, n), rng.randrange(n), rng.uniform(-3, 3)
        phase, s = number_phase_conjugate(o, p, theta)
        ref = matrix_conjugate_oracle(o, to_matrix(FermionicString.single(n, NUM, p)), theta, n, hermitian=True)
        assert max_deviation(to_complex(phase) * to_matrix(s), ref) < 1e-10


# ---------------------------------------------------------------- sums of half-body generators

def test_sum_exp_quarter_turn():
    out = sum_halfbody_exp({0: math.pi / 2}, ANTI, 1)
    assert same_operator(out, S(1, ([(CRE, 0)], 1), ([(ANN, 0)], -1)))
    assert same_operator(sum_halfbody_exp({0: 0.0}, ANTI, 1), FermionicSum.identity(1))


def test_sum_exp_matches_matrix_exponential():
    rng = random.Random(27)
    for sign in (ANTI, HERM):
        for _ in range(20):
            n = rng.randint(1, 3)
            thetas = {p: rng.uniform(-2, 2) for p in range(n)}
            total = sum(to_matrix(Generator.halfbody(p, sign).operator(n)) * t for p, t in thetas.items())
            ref = unitary(total, 1.0, hermitian=(sign == HERM))
            assert max_deviation(to_matrix(sum_halfbody_exp(thetas, sign, n), n), ref) < 1e-10


def test_sum_single_generator_reduction():
    t = 0.63
    for o in ([(ANN, 1)], [(CRE, 1)], [(NUM, 1)], [(HOLE, 1)]):
        a = sum_halfbody_conjugate(F(2, *o), {0: 0.0, 1: t}, ANTI, 2)
        b = general_conjugate(F(2, *o), Generator.halfbody(1), t, 2)
        assert same_operator(a, b)


def test_sum_conjugate_against_dense():
    rng = random.Random(28)
    for _ in range(200):
        n = 3
        o = random_fermion_string(rng, n)
        thetas = {p: rng.uniform(-2, 2) for p in range(n)}
        sign = rng.choice([ANTI, HERM])
        total = sum(to_matrix(Generator.halfbody(p, sign).operator(n)) * t for p, t in thetas.items())
        ref = matrix_conjugate_oracle(o, total, 1.0, n, hermitian=(sign == HERM))
        assert max_deviation(to_matrix(sum_halfbody_conjugate(o, thetas, sign, n), n), ref) < 1e-10


def test_sum_conjugate_annihilator_stays_canonical():
    # the image of a_q must still satisfy the anticommutation relations
    n = 3
    thetas = {0: 0.3, 1: -0.8, 2: 1.1}
    images = [to_matrix(sum_halfbody_conjugate(F(n, (ANN, q)), thetas, ANTI, n), n) for q in range(n)]
    for p in range(n):
        for q in range(n):
            anti = images[p] @ images[q].conj().T + images[q].conj().T @ images[p]
            assert np.allclose(anti, np.eye(2**n) * (p == q))


# ---------------------------------------------------------------- rank shift for non-Clifford angles

def _fold(x: FermionicSum, p: int) -> dict:
    """Merge c*X n_p + c*X h_p (equal coefficients, compared exactly) into c*X."""
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


def test_halfbody_rank_shift():
    rng = random.Random(29)
    half = Fraction(1, 2)
    for i in range(1500):
        n = rng.randint(1, 4)
        o = random_fermion_string(rng, n).with_phase(0)
        p = rng.randrange(n)
        theta = rng.uniform(-3, 3) if i % 2 else Angle.pi(Fraction(rng.choice([1, 3, 5, 7]), rng.choice([3, 4, 8])))
        raw = general_conjugate(o, Generator.halfbody(p, rng.choice([ANTI, HERM])), theta, n)
        r = o.rank
        if o.block_of(p) in (NUM, HOLE):
            # n_p and h_p are kept as they are; folding them would undo the input's own factor
            out, allowed = dict(raw.items()), {r, r - half}
        else:
            out = _fold(raw, p)
            allowed = {r, r - half} if o.length % 2 == 0 else {r, r + half}
        assert {s.rank for s in out} <= allowed, (str(o), p, str(theta))
