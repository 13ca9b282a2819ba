"""Randomized comparison of the symbolic conjugation rules against dense U+ O U."""

from __future__ import annotations

import random
from fractions import Fraction

import numpy as np

from .clifford import ANTI, HERM, Generator, general_conjugate, sum_halfbody_conjugate
from .coeffs import Angle, default_tol
from .dense import matrix_conjugate_oracle, max_deviation, to_matrix
from .fermion import FermionicString
from .majorana import HermiticityClass, MajoranaString, maj_conjugate, maj_hermiticity
from .pauli import PauliString, pauli_conjugate


def random_fermion_string(rng: random.Random, n: int, need_odd: bool = False) -> FermionicString:
    """Each mode independently absent or in the +, -, h or n block; random phase."""
    while True:
        masks = [0, 0, 0, 0]
        for p in range(n):
            slot = rng.randrange(5)
            if slot < 4:
                masks[slot] |= 1 << p
        f = FermionicString(n, *masks, phase=rng.randrange(4))
        if not need_odd or f.cre | f.ann:
            return f


def random_generator(rng: random.Random, n: int) -> Generator:
    kinds = ["halfbody", "number", "raw"] + (["pair", "exc"] if n >= 2 else [])
    kind = rng.choice(kinds)
    sign = rng.choice([ANTI, HERM])
    if kind == "raw":
        return Generator.from_string(random_fermion_string(rng, n, need_odd=True), sign)
    if kind in ("pair", "exc"):
        return Generator(kind, tuple(rng.sample(range(n), 2)), sign)
    return Generator(kind, (rng.randrange(n),), sign)


def random_angle(rng: random.Random) -> Angle:
    if rng.random() < 0.5:
        return Angle.pi(Fraction(rng.randint(-8, 8), 4))
    return Angle.rad(rng.uniform(-np.pi, np.pi))


def random_pauli(rng: random.Random, n: int, phase: int | None = None) -> PauliString:
    return PauliString(n, rng.getrandbits(n), rng.getrandbits(n), rng.randrange(4) if phase is None else phase)


def random_majorana(rng: random.Random, n: int, phase: int | None = None, nonzero: bool = False) -> MajoranaString:
    while True:
        occ = rng.getrandbits(2 * n)
        if occ or not nonzero:
            return MajoranaString(n, occ, rng.randrange(4) if phase is None else phase)


def _fermion_case(rng, n):
    o = random_fermion_string(rng, n)
    g = random_generator(rng, n)
    theta = random_angle(rng)
    got = to_matrix(general_conjugate(o, g, theta))
    ref = matrix_conjugate_oracle(o, g.operator(n), theta.value(), n, hermitian=g.hermitian)
    return max_deviation(got, ref), f"O={o} G={g} theta={theta}"


def _majorana_case(rng, n):
    o = random_majorana(rng, n)
    g = random_majorana(rng, n, phase=0, nonzero=True)
    theta = random_angle(rng)
    herm = maj_hermiticity(g) is HermiticityClass.HERMITIAN
    got = to_matrix(maj_conjugate(o, g, theta))
    ref = matrix_conjugate_oracle(o, g, theta.value(), n, hermitian=herm)
    return max_deviation(got, ref), f"O={o} G={g} theta={theta}"


def _pauli_case(rng, n):
    o = random_pauli(rng, n)
    p = random_pauli(rng, n, phase=0)
    theta = random_angle(rng)
    got = to_matrix(pauli_conjugate(o, p, theta))
    ref = matrix_conjugate_oracle(o, p, theta.value(), n, hermitian=True)
    return max_deviation(got, ref), f"O={o} P={p} theta={theta}"


def _halfbody_sum_case(rng, n):
    o = random_fermion_string(rng, n)
    thetas = {p: rng.uniform(-2, 2) for p in range(n)}
    sign = rng.choice([ANTI, HERM])
    got = to_matrix(sum_halfbody_conjugate(o, thetas, sign))
    total = sum(to_matrix(Generator.halfbody(p, sign).operator(n)) * t for p, t in thetas.items())
    ref = matrix_conjugate_oracle(o, total, 1.0, n, hermitian=(sign == HERM))
    return max_deviation(got, ref), f"O={o} thetas={thetas} sign={sign}"


CASES = {
    "general_conjugate": _fermion_case,
    "maj_conjugate": _majorana_case,
    "pauli_conjugate": _pauli_case,
    "sum_halfbody_conjugate": _halfbody_sum_case,
}


def run_oracle_suite(seed: int = 0, cases: int = 500, max_modes: int = 4, tol: float | None = None) -> dict:
    """Run ``cases`` random checks per family; report the worst deviation and where it occurred."""
    tol = default_tol() if tol is None else tol
    report = {"seed": seed, "cases": cases, "max_modes": max_modes, "tol": tol, "families": {}}
    ok = True
    for name, fn in CASES.items():
        rng = random.Random(f"{seed}:{name}")
        worst, where, worst_index = 0.0, "", -1
        for i in range(cases):
            lo = 2 if name == "general_conjugate" and max_modes >= 2 and i % 2 else 1
            dev, desc = fn(rng, rng.randint(lo, max_modes))
            if dev > worst:
                worst, where, worst_index = dev, desc, i
        passed = worst <= tol
        ok &= passed
        report["families"][name] = {"max_deviation": worst, "passed": passed,
                                    "worst_case": where, "worst_index": worst_index}
    report["passed"] = ok
    return report
