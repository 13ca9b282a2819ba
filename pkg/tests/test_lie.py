from fractions import Fraction

import numpy as np
import pytest

from fermiclif.lie import (
    basis,
    expected_dimension,
    half,
    pair,
    single,
    verify_closure,
    verify_isomorphism,
)
from fermiclif.dense import max_deviation, to_matrix

FAMILIES = ["singles", "singles_pairs", "singles_pairs_half"]


def test_basis_sizes_three_modes():
    assert len(basis("singles", 3)) == 3
    assert len(basis("singles_pairs", 3)) == 6
    assert len(basis("singles_pairs_half", 3)) == 9


@pytest.mark.parametrize("m", [2, 3, 4])
def test_dimension_formulas(m):
    assert len(basis("singles", m)) == m * (m - 1) // 2
    assert len(basis("singles_pairs", m)) == m * (m - 1)
    assert len(basis("singles_pairs_half", m)) == m * m


def test_basis_errors():
    with pytest.raises(ValueError):
        basis("singles_pairs", 1)
    with pytest.raises(ValueError):
        basis("triples", 3)


@pytest.mark.parametrize("family", FAMILIES)
def test_basis_is_anti_hermitian_and_independent(family):
    m = 3
    mats = [to_matrix(b, m) for b in basis(family, m)]
    for a in mats:
        assert max_deviation(a.conj().T, -a) < 1e-14
    flat = np.array([a.ravel() for a in mats])
    assert np.linalg.matrix_rank(flat) == len(mats)


@pytest.mark.parametrize("m", [2, 3, 4])
@pytest.mark.parametrize("family", FAMILIES)
def test_closure(family, m):
    report = verify_closure(family, m)
    assert report.closed, report.failures
    assert report.relations_ok, report.failures
    assert report.antisymmetric
    assert report.jacobi
    assert report.dimension == expected_dimension(family, m)


def test_so3_structure_constants():
    report = verify_closure("singles", 3)
    consts = {(a, b): (c, v) for a, b, c, v in report.nonzero_constants()}
    assert all(abs(v) == 1 for _, v in consts.values())
    # [A^0_1, A^1_2] = A^0_2
    assert consts[("A^0_1", "A^1_2")] == ("A^0_2", Fraction(1))
    assert consts[("A^0_1", "A^0_2")] == ("A^1_2", Fraction(-1))


def test_pairs_alone_not_closed():
    report = verify_closure("pairs", 3, relations=False)
    assert not report.closed
    # every pair-pair bracket with one shared index leaves a single excitation behind
    assert len(report.failures) == 3
    assert "[A^01, A^12] leaves a0^ a2 - a2^ a0" in report.failures


def test_pair_commutator_lands_in_singles():
    m = 3
    out = pair(m, 0, 1).commutator(pair(m, 1, 2))
    assert out.equivalent(single(m, 0, 1).commutator(single(m, 1, 2)))
    assert out.equivalent(single(m, 0, 2))


def test_half_body_commutator():
    m = 2
    out = half(m, 0).commutator(half(m, 1))
    assert out.equivalent((pair(m, 0, 1) - single(m, 0, 1)).scale(2))


def test_commutators_match_dense():
    m = 3
    elems = basis("singles_pairs_half", m)
    mats = [to_matrix(b, m) for b in elems]
    for i, a in enumerate(elems):
        for j, b in enumerate(elems):
            ref = mats[i] @ mats[j] - mats[j] @ mats[i]
            assert max_deviation(to_matrix(a.commutator(b), m), ref) < 1e-12


@pytest.mark.parametrize("m", [2, 3, 4])
@pytest.mark.parametrize("family", FAMILIES)
def test_isomorphism(family, m):
    assert verify_isomorphism(family, m)


def test_isomorphism_rejects_pairs():
    with pytest.raises(ValueError):
        verify_isomorphism("pairs", 3)


def test_report_json():
    d = verify_closure("singles_pairs_half", 2).to_dict()
    assert d["dimension"] == d["expected_dimension"] == 4
    assert d["closed"] and d["jacobi"] and d["antisymmetric"] and d["relations_ok"]
    assert all(set(c) == {"a", "b", "c", "value"} for c in d["structure_constants"])
