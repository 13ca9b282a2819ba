"""Z2-symmetry qubit tapering over GF(2), plus the minimal-basis H2 walkthrough.

A Pauli string on M qubits is encoded as the integer ``x | (z << M)``.  Two
strings commute iff their symplectic product vanishes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .coeffs import Coeff, as_coeff, to_complex
from .errors import TaperingError, WidthMismatchError
from .fermion import FermionicSum, excitation, num
from .mappings import inverse_jw, jw_fermion_to_pauli
from .pauli import PauliString, PauliSum, pauli_commutes

INV_SQRT2 = Coeff.sqrt2(Fraction(1, 2))


def _popcount(v: int) -> int:
    return bin(v).count("1")


def encode(p: PauliString) -> int:
    return p.x | (p.z << p.n)


def decode(v: int, n: int) -> PauliString:
    mask = (1 << n) - 1
    return PauliString(n, v & mask, v >> n)


def symplectic(u: int, v: int, n: int) -> int:
    mask = (1 << n) - 1
    ux, uz, vx, vz = u & mask, u >> n, v & mask, v >> n
    return (_popcount(ux & vz) + _popcount(uz & vx)) & 1


# ---------------------------------------------------------------- GF(2)

def _rref(rows: Sequence[int]) -> list[int]:
    """Reduced row echelon form, pivot = highest set bit, rows in descending pivot order."""
    basis: list[int] = []
    for r in rows:
        for b in basis:
            if r & (1 << (b.bit_length() - 1)):
                r ^= b
        if not r:
            continue
        top = 1 << (r.bit_length() - 1)
        basis = [b ^ r if b & top else b for b in basis]
        basis.append(r)
        basis.sort(reverse=True)
    return basis


def _kernel(rows: Sequence[int], width: int) -> list[int]:
    """Basis of {v : popcount(r & v) even for every row r}, vectors of ``width`` bits."""
    reduced = _rref(rows)
    pivots = {b.bit_length() - 1: b for b in reduced}
    out = []
    for free in range(width):
        if free in pivots:
            continue
        v = 1 << free
        for col, row in pivots.items():
            if row & (1 << free):
                v |= 1 << col
        out.append(v)
    return out


def _isotropic(vectors: Sequence[int], n: int) -> list[int]:
    """Maximal mutually commuting subset of span(vectors) by symplectic Gram-Schmidt."""
    remaining = list(vectors)
    keep: list[int] = []
    while remaining:
        u = remaining.pop(0)
        partner = next((w for w in remaining if symplectic(u, w, n)), None)
        keep.append(u)
        if partner is None:
            continue
        remaining.remove(partner)
        remaining = [v ^ (u if symplectic(v, partner, n) else 0) ^ (partner if symplectic(v, u, n) else 0)
                     for v in remaining]
        remaining = [v for v in remaining if v]
    return keep


@dataclass(frozen=True)
class SymmetryGroup:
    n: int
    generators: tuple[PauliString, ...]

    def __len__(self) -> int:
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    def labels(self) -> list[str]:
        return [str(g) for g in self.generators]


def find_z2_symmetries(h: PauliSum) -> SymmetryGroup:
    """Independent commuting Pauli strings that commute with every term of ``h``.

    The output is the reduced echelon basis of the symmetry group with the
    columns ordered z_{M-1} ... z_0, x_{M-1} ... x_0, listed by ascending pivot.
    """
    n = h.n
    mask = (1 << n) - 1
    # row for term P tests x'.z + z'.x, i.e. it is P's z bits in the low half
    rows = [(s.z | (s.x << n)) for s in h.strings()]
    kernel = _kernel(rows, 2 * n)
    iso = _isotropic(kernel, n)
    gens = sorted(_rref(iso))
    out = tuple(PauliString(n, v & mask, v >> n) for v in gens)
    for g in out:
        for s in h.strings():
            if not pauli_commutes(g, s):
                raise AssertionError(f"symmetry {g} fails to commute with {s}")
    return SymmetryGroup(n, out)


def same_group(a: Sequence[PauliString], b: Sequence[PauliString]) -> bool:
    """True when the two generator lists span the same GF(2) row space."""
    return _rref([encode(p) for p in a]) == _rref([encode(p) for p in b])


# ---------------------------------------------------------------- plans

def parse_sector(text) -> tuple[int, ...]:
    if isinstance(text, str):
        out = []
        for ch in text.strip():
            if ch == "+":
                out.append(1)
            elif ch == "-":
                out.append(-1)
            else:
                raise TaperingError(f"sector must be written with '+' and '-', got {text!r}")
        return tuple(out)
    out = tuple(int(s) for s in text)
    if any(s not in (1, -1) for s in out):
        raise TaperingError(f"sector entries must be +1 or -1, got {out}")
    return out


def format_sector(sector: Sequence[int]) -> str:
    return "".join("+" if s > 0 else "-" for s in sector)


@dataclass(frozen=True)
class TaperingPlan:
    n: int
    generators: tuple[PauliString, ...]
    targets: tuple[int, ...]
    cliffords: tuple[PauliSum, ...]
    sector: tuple[int, ...] | None = None

    def with_sector(self, sector) -> "TaperingPlan":
        sector = parse_sector(sector)
        if len(sector) != len(self.generators):
            raise TaperingError(f"sector has {len(sector)} signs for {len(self.generators)} generators")
        return TaperingPlan(self.n, self.generators, self.targets, self.cliffords, sector)

    def unitary(self) -> PauliSum:
        out = PauliSum.identity(self.n)
        for u in self.cliffords:
            out = out * u
        return out


def auto_targets(generators: Sequence[PauliString]) -> list[int]:
    taken: set[int] = set()
    out = []
    for g in generators:
        choice = next((q for q in reversed(range(g.n)) if g.letter(q) == "Z" and q not in taken), None)
        if choice is None:
            raise TaperingError(f"no free qubit where {g} acts with Z; change basis first")
        taken.add(choice)
        out.append(choice)
    return out


def build_tapering_plan(s, targets: Sequence[int] | None = None, sector=None) -> TaperingPlan:
    """U_i = (X_{q_i} + tau_i)/sqrt2 for each generator tau_i and target q_i."""
    gens = tuple(s.generators if isinstance(s, SymmetryGroup) else s)
    if not gens:
        raise TaperingError("no symmetry generators to taper")
    n = gens[0].n
    if targets is None:
        targets = auto_targets(gens)
    targets = tuple(int(q) for q in targets)
    if len(targets) != len(gens):
        raise TaperingError(f"{len(targets)} targets given for {len(gens)} generators")
    if len(set(targets)) != len(targets):
        raise TaperingError("target qubits must be distinct")
    cliffords = []
    for g, q in zip(gens, targets):
        if g.n != n:
            raise WidthMismatchError("generators act on different widths")
        if not 0 <= q < n:
            raise TaperingError(f"target {q} out of range for {n} qubits")
        if g.phase:
            raise TaperingError(f"generator {g} must have phase +1")
        if g.letter(q) != "Z":
            raise TaperingError(f"generator {g} does not act with Z on qubit {q}; change basis first")
        x_q = PauliString.from_ops(n, [(q, "X")])
        cliffords.append(PauliSum(n, [(x_q, INV_SQRT2), (g, INV_SQRT2)]))
    ident = PauliSum.identity(n)
    for i, u in enumerate(cliffords):
        if u * u != ident:
            raise TaperingError(f"U_{i + 1} is not an involution")
        for v in cliffords[i + 1:]:
            if u * v != v * u:
                raise TaperingError("tapering Cliffords do not commute; pick other targets")
    plan = TaperingPlan(n, gens, targets, tuple(cliffords))
    return plan if sector is None else plan.with_sector(sector)


def conjugate_hamiltonian(h: PauliSum, plan: TaperingPlan) -> PauliSum:
    """U H U with U the product of the plan's Hermitian involutions."""
    if h.n != plan.n:
        raise WidthMismatchError(f"Hamiltonian on {h.n} qubits, plan on {plan.n}")
    out = h
    for u in reversed(plan.cliffords):
        out = u * out * u
    return out


def _drop_qubits(s: PauliString, targets: Sequence[int]) -> PauliString:
    keep = [q for q in range(s.n) if q not in targets]
    ops = [(i, s.letter(q)) for i, q in enumerate(keep) if s.letter(q) != "I"]
    return PauliString.from_ops(len(keep), ops)


def taper_qubits(h: PauliSum, plan: TaperingPlan, sector=None) -> PauliSum:
    """Replace X on each target by its sector eigenvalue and delete the targets."""
    if h.n != plan.n:
        raise WidthMismatchError(f"Hamiltonian on {h.n} qubits, plan on {plan.n}")
    if sector is not None:
        plan = plan.with_sector(sector)
    if plan.sector is None:
        raise TaperingError("no sector given")
    out = PauliSum(h.n - len(plan.targets))
    for s, c in h.items():
        sign = 1
        for q, eig in zip(plan.targets, plan.sector):
            letter = s.letter(q)
            if letter == "X":
                sign *= eig
            elif letter != "I":
                raise TaperingError(f"term {s} acts with {letter} on target {q}; conjugate first")
        out._accumulate(_drop_qubits(s, plan.targets), c if sign > 0 else -c)
    return out


def all_sectors(g: int) -> list[tuple[int, ...]]:
    out = []
    for k in range(1 << g):
        out.append(tuple(-1 if (k >> (g - 1 - i)) & 1 else 1 for i in range(g)))
    return out


# ---------------------------------------------------------------- states

State = dict  # occupation tuple -> coefficient


def _apply_string(p: PauliString, state: State) -> State:
    out: State = {}
    for occ, c in state.items():
        bits = list(occ)
        k = p.phase
        for q, letter in p.ops():
            b = bits[q]
            if letter == "Z":
                k += 2 * b
            elif letter == "X":
                bits[q] = 1 - b
            else:  # Y|0> = i|1>, Y|1> = -i|0>
                k += 3 if b else 1
                bits[q] = 1 - b
        key = tuple(bits)
        val = c.mul_i(k) if isinstance(c, Coeff) else c * (1j ** k)
        prev = out.get(key)
        new = val if prev is None else prev + val
        out[key] = new
    return {k: v for k, v in out.items() if not as_coeff(v).is_zero()} if out else out


def apply_pauli_sum(u: PauliSum, state: State) -> State:
    out: State = {}
    for s, c in u.items():
        for occ, v in _apply_string(s, state).items():
            w = c * v
            out[occ] = w if occ not in out else out[occ] + w
    return {k: v for k, v in out.items() if not as_coeff(v).is_zero()}


def _states_equal(a: State, b: State) -> bool:
    keys = set(a) | set(b)
    zero = Coeff()
    return all(as_coeff(a.get(k, zero)) == as_coeff(b.get(k, zero)) for k in keys)


def sector_of_state(occupations, plan: TaperingPlan) -> tuple[int, ...]:
    """Apply U to |n_0 n_1 ...> and read the X eigenvalue on every target."""
    occ = tuple(int(b) for b in occupations)
    if len(occ) != plan.n:
        raise WidthMismatchError(f"state on {len(occ)} modes, plan on {plan.n}")
    state = apply_pauli_sum(plan.unitary(), {occ: Coeff.rational(1)})
    out = []
    for q in plan.targets:
        flipped = _apply_string(PauliString.from_ops(plan.n, [(q, "X")]), state)
        if _states_equal(flipped, state):
            out.append(1)
        elif _states_equal(flipped, {k: -as_coeff(v) for k, v in state.items()}):
            out.append(-1)
        else:
            raise TaperingError(f"U|{''.join(map(str, occ))}> is not an X eigenstate on qubit {q}")
    return tuple(out)


def z_sector(occupations, plan: TaperingPlan) -> tuple[int, ...]:
    """Eigenvalues of Z-type generators on a basis state, (-1)^(popcount(z & occ))."""
    occ = sum(int(b) << q for q, b in enumerate(occupations))
    out = []
    for g in plan.generators:
        if g.x:
            raise TaperingError(f"{g} is not diagonal in the occupation basis")
        out.append(-1 if _popcount(g.z & occ) % 2 else 1)
    return tuple(out)


# ---------------------------------------------------------------- H2 / minimal basis

H2_SYMBOLS = ("h00", "h22", "v0101", "v2323", "v0202", "v0220", "v0123")

# Pauli string of each c_k, in order c1 ... c15
H2_LABELS = (
    "I", "Z0", "Z1", "Z2", "Z3", "Z0 Z1", "Z0 Z2", "Z0 Z3", "Z1 Z2", "Z1 Z3", "Z2 Z3",
    "Y0 Y1 X2 X3", "Y0 X1 X2 Y3", "X0 Y1 Y2 X3", "X0 X1 Y2 Y3",
)


def _sym(name: str, q=1) -> Coeff:
    return Coeff.symbol(name, q)


def h2_fermionic_hamiltonian() -> FermionicSum:
    """Second-quantized minimal-basis H2 with the usual spin-orbital integral symmetries."""
    n = 4
    h00, h22 = _sym("h00"), _sym("h22")
    v0101, v2323, v0202, v0220, v0123 = (_sym(s) for s in ("v0101", "v2323", "v0202", "v0220", "v0123"))

    def nn(p, q):
        return FermionicSum.from_string(num(n, p) * num(n, q))

    def one(p):
        return FermionicSum.from_string(num(n, p))

    h = (one(0) + one(1)).scale(h00) + (one(2) + one(3)).scale(h22)
    h = h + nn(0, 1).scale(v0101) + nn(2, 3).scale(v2323)
    h = h + (nn(0, 2) + nn(1, 3)).scale(v0202 - v0220) + (nn(0, 3) + nn(1, 2)).scale(v0202)
    # a^{pq}_{rs} = a+_p a+_q a_s a_r
    doubles = (excitation(n, [2, 3], [0, 1]) - excitation(n, [0, 3], [1, 2])
               - excitation(n, [1, 2], [0, 3]) + excitation(n, [0, 1], [2, 3]))
    return h + doubles.scale(v0123)


def h2_table_coefficients(corrected: bool = False) -> list[Coeff]:
    """Closed-form c1 ... c15 in terms of the integral symbols (reference form).

    The reference c2 ... c5 carry -2 v0202 + v0220 inside the bracket, which
    is not the Jordan-Wigner image of the second-quantized Hamiltonian (the
    spectra differ).  ``corrected=True`` flips that part to +2 v0202 - v0220.
    """
    q = Fraction
    h00, h22 = _sym("h00"), _sym("h22")
    v0101, v2323, v0202, v0220, v0123 = (_sym(s) for s in ("v0101", "v2323", "v0202", "v0220", "v0123"))
    mixed = v0202.scale(2) - v0220 if corrected else v0220 - v0202.scale(2)
    c1 = h00 + h22 + (v0101 + v2323).scale(q(1, 4)) + v0202 - v0220.scale(q(1, 2))
    c2 = h00.scale(q(-1, 2)) - (v0101 + mixed).scale(q(1, 4))
    c4 = h22.scale(q(-1, 2)) - (v2323 + mixed).scale(q(1, 4))
    c6 = v0101.scale(q(1, 4))
    c7 = (v0202 - v0220).scale(q(1, 4))
    c8 = v0202.scale(q(1, 4))
    c11 = v2323.scale(q(1, 4))
    c12 = v0123.scale(q(-1, 4))
    c13 = v0123.scale(q(1, 4))
    return [c1, c2, c2, c4, c4, c6, c7, c8, c8, c7, c11, c12, c13, c13, c12]


def h2_pauli_hamiltonian() -> PauliSum:
    return jw_fermion_to_pauli(h2_fermionic_hamiltonian(), 4)


def h2_generic_pauli_hamiltonian(cs: Sequence | None = None) -> PauliSum:
    """sum_k c_k P_k with c_k free symbols (or given values)."""
    if cs is None:
        cs = [Coeff.symbol(f"c{k}") for k in range(1, 16)]
    out = PauliSum(4)
    for label, c in zip(H2_LABELS, cs):
        ops = [] if label == "I" else [(int(t[1:]), t[0]) for t in label.split()]
        out._accumulate(PauliString.from_ops(4, ops), as_coeff(c))
    return out


def h2_plan(sector=None) -> TaperingPlan:
    gens = [PauliString.from_label(lbl) for lbl in ("ZZII", "ZIZI", "ZIIZ")]
    return build_tapering_plan(gens, (1, 2, 3), sector)


def fermion_term_count(h: PauliSum) -> int:
    """Number of fermionic strings in the inverse-JW image, with Z -> I - 2n and no holes."""
    return len(inverse_jw(h, holes=False).canonical())


def _bind(h, bindings):
    return h if bindings is None else h.to_float(bindings)


@dataclass
class H2Report:
    pauli_terms: list[tuple[str, str]]
    generators: list[str]
    targets: list[int]
    transformed_terms: list[tuple[str, str]]
    fermionic_terms_before: int
    fermionic_terms_after: int
    sectors: dict[str, str]
    hf_sector: str
    tapered_fermion: str
    tapered_coefficients: dict[str, str]
    numeric: dict | None = field(default=None)

    def to_dict(self) -> dict:
        out = {
            "pauli_terms": [{"pauli": s, "coeff": c} for s, c in self.pauli_terms],
            "generators": self.generators,
            "targets": self.targets,
            "transformed_terms": [{"pauli": s, "coeff": c} for s, c in self.transformed_terms],
            "fermionic_terms_before": self.fermionic_terms_before,
            "fermionic_terms_after": self.fermionic_terms_after,
            "sectors": self.sectors,
            "hf_sector": self.hf_sector,
            "tapered_fermion": self.tapered_fermion,
            "tapered_coefficients": self.tapered_coefficients,
        }
        if self.numeric is not None:
            out["numeric"] = self.numeric
        return out


def _terms(h: PauliSum) -> list[tuple[str, str]]:
    return [(str(s), str(c)) for s, c in h.sorted_items()]


def tapered_one_mode(bindings: Mapping[str, float] | None = None):
    """H00, H11, H10 of the two-determinant block, as coefficients."""
    h00, h22 = _sym("h00"), _sym("h22")
    v0101, v2323, v0123 = _sym("v0101"), _sym("v2323"), _sym("v0123")
    vals = {"H00": h00.scale(2) + v0101, "H11": h22.scale(2) + v2323, "H10": v0123}
    if bindings is None:
        return vals
    return {k: to_complex(v, bindings).real for k, v in vals.items()}


def h2_tapered_fermion() -> FermionicSum:
    """c (I) + d (I - 2n) + H10 (a+ + a) on one mode, with c = (H00+H11)/2, d = (H11-H00)/2."""
    from .fermion import ann, cre
    t = tapered_one_mode()
    half = Fraction(1, 2)
    c = (t["H00"] + t["H11"]).scale(half)
    d = (t["H11"] - t["H00"]).scale(half)
    out = FermionicSum.identity(1, c + d)
    out = out + FermionicSum.from_string(num(1, 0), d.scale(-2))
    out = out + FermionicSum(1, [(cre(1, 0), t["H10"]), (ann(1, 0), t["H10"])])
    return out


def h2_demo(integrals: Mapping[str, float] | None = None) -> H2Report:
    """End-to-end minimal-basis H2 tapering; numeric checks run when integrals are given."""
    from .parsing import format_sum
    fh = h2_fermionic_hamiltonian()
    ph = jw_fermion_to_pauli(fh, 4)
    sym = find_z2_symmetries(ph)
    plan = build_tapering_plan(sym, (1, 2, 3))
    hbar = conjugate_hamiltonian(ph, plan)
    before = fermion_term_count(ph)
    after = fermion_term_count(hbar)
    sectors = {}
    for sec in all_sectors(len(plan.generators)):
        sectors[format_sector(sec)] = str(taper_qubits(hbar, plan, sec))
    hf = sector_of_state((1, 1, 0, 0), plan)
    tapered = taper_qubits(hbar, plan, hf)
    tf = inverse_jw(tapered, holes=False).canonical()
    report = H2Report(
        pauli_terms=_terms(ph),
        generators=[str(g) for g in plan.generators],
        targets=list(plan.targets),
        transformed_terms=_terms(hbar),
        fermionic_terms_before=before,
        fermionic_terms_after=after,
        sectors=sectors,
        hf_sector=format_sector(hf),
        tapered_fermion=format_sum(tf, header=False),
        tapered_coefficients={k: str(v) for k, v in tapered_one_mode().items()},
    )
    if integrals is not None:
        report.numeric = h2_numeric_check(integrals)
    return report


def h2_numeric_check(integrals: Mapping[str, float]) -> dict:
    """Tapered (+--) spectrum against the {|1100>, |0011>} block of the full matrix."""
    import numpy as np

    from .dense import basis_index, to_matrix
    missing = [s for s in H2_SYMBOLS if s not in integrals]
    if missing:
        raise ValueError(f"missing integrals: {', '.join(missing)}")
    bindings = {k: float(integrals[k]) for k in H2_SYMBOLS}
    full = to_matrix(h2_fermionic_hamiltonian(), bindings=bindings)
    idx = [basis_index((1, 1, 0, 0)), basis_index((0, 0, 1, 1))]
    block = full[np.ix_(idx, idx)]
    plan = h2_plan()
    hbar = conjugate_hamiltonian(h2_pauli_hamiltonian(), plan)
    tapered = taper_qubits(hbar, plan, (1, -1, -1))
    small = to_matrix(tapered, bindings=bindings)
    ev_block = np.linalg.eigvalsh(block)
    ev_tapered = np.linalg.eigvalsh(small)
    return {
        "tapered_spectrum": [float(x) for x in ev_tapered],
        "block_spectrum": [float(x) for x in ev_block],
        "full_ground_energy": float(np.linalg.eigvalsh(full)[0]),
        "max_deviation": float(np.max(np.abs(ev_block - ev_tapered))),
    }
