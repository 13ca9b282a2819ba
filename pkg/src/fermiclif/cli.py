"""Command-line front end.

Exit codes: 0 success, 1 usage or input error, 2 verification failure.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

from .clifford import ANTI, HERM, Generator, clifford_apply, general_conjugate
from .coeffs import Angle, angle_is_clifford, default_tol
from .errors import ParseError, TaperingError
from .fermion import FermionicSum
from .majorana import MajoranaSum, maj_conjugate
from .mappings import fermion_to_majorana, inverse_jw, jw_fermion_to_pauli, jw_majorana_sum_to_pauli, majorana_to_fermion
from .parsing import algebra_of, format_sum, from_json, parse, parse_string, to_json
from .pauli import PauliSum, pauli_conjugate

GRAMMAR = """\
expression grammar:
  sum    := term (('+'|'-') term)*
  term   := [coeff '*'] factor+
  pauli factor:    X0 Y1 Z2 ...
  majorana factor: g1(0) g2(3) g3(1)
  fermion factor:  a0^ (creation), a0 (annihilation), n0, h0
  coeff  := rational | symbol | combination in parentheses | (re, im) | i | sqrt2
  optional header line: 'qubits: M' or 'modes: M'
generators: halfbody-(p) halfbody+(p) pair-(p,q) pair+(p,q) exc-(p,q) exc+(p,q)
            num(p) num(p)@theta raw-(a0^ a1) raw+(...)
angles: pi/2, 3pi/4, -pi/4, or decimal radians"""


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n{GRAMMAR}\n")
        raise SystemExit(1)


_GEN = re.compile(r"^\s*(halfbody|pair|exc|raw)([+-])\((.*)\)\s*$")
_NUM = re.compile(r"^\s*num\((\d+)\)\s*(?:@\s*(\S+))?\s*$")


def parse_generator(text: str, n: int | None = None) -> tuple[Generator, Angle | None]:
    """Generator text form; a ``num(p)@theta`` suffix carries its own angle."""
    m = _NUM.match(text)
    if m:
        theta = Angle.parse(m.group(2)) if m.group(2) else None
        return Generator.number(int(m.group(1))), theta
    m = _GEN.match(text)
    if not m:
        raise UsageError(f"cannot parse generator {text!r}")
    kind, mark, body = m.groups()
    sign = ANTI if mark == "-" else HERM
    if kind == "raw":
        f = parse_string(body, "fermion", n)
        return Generator.from_string(f.with_phase(0) if f.phase == 0 else f, sign), None
    try:
        idx = tuple(int(t) for t in body.split(","))
    except ValueError as exc:
        raise UsageError(f"bad generator indices in {text!r}") from exc
    return Generator(kind, idx, sign), None


def _read_expr(text: str) -> str:
    if text == "-":
        return sys.stdin.read()
    if text.startswith("@"):
        return Path(text[1:]).read_text()
    return text


def _load_sum(text: str, algebra: str, n: int | None, mode: str):
    """Read an expression, ``@file`` or JSON document."""
    raw = _read_expr(text)
    if raw.lstrip().startswith("{"):
        out = from_json(raw, None if algebra == "auto" else algebra)
        return out.to_float() if mode == "float" else out
    return parse(raw, "pauli" if algebra == "auto" else algebra, n, mode)


def _emit(args, obj, text: str) -> None:
    if getattr(args, "json", False):
        print(json.dumps(obj, indent=2))
    else:
        print(text)


def _sum_output(args, x) -> None:
    _emit(args, to_json(x), format_sum(x, header=args.header))


def _mode(args) -> str:
    return "float" if args.float else "exact"


# ---------------------------------------------------------------- commands

def cmd_mul(args) -> int:
    a = _load_sum(args.left, args.algebra, args.modes, _mode(args))
    b = _load_sum(args.right, args.algebra, args.modes, _mode(args))
    if a.n != b.n:
        n = max(a.n, b.n)
        a = _load_sum(args.left, args.algebra, n, _mode(args))
        b = _load_sum(args.right, args.algebra, n, _mode(args))
    _sum_output(args, a * b)
    return 0


def _conj_fermion(args, o: FermionicSum) -> FermionicSum:
    g, inline = parse_generator(args.generator, o.n)
    theta = inline or (Angle.parse(args.theta) if args.theta else None)
    if theta is None:
        raise UsageError("--theta is required")
    n = max(o.n, g.min_modes())
    if n != o.n:
        o = parse(format_sum(o, header=False), "fermion", n, _mode(args))
    if args.method == "table":
        if g.kind != "number":
            k = _odd_half_pi(theta)
            if k is None:
                raise UsageError("table lookup needs theta = (2k+1)pi/2")
        else:
            k = 0
        out = FermionicSum(n)
        for s, c in o.items():
            phase, t = clifford_apply(s, g, k, theta if g.kind == "number" else None)
            out = out + FermionicSum.from_string(t, phase).scale(c)
        return out
    return general_conjugate(o, g, theta, n)


def _odd_half_pi(theta: Angle) -> int | None:
    if not theta.is_exact:
        return None
    twice = theta.pi_multiple * 2
    if twice.denominator != 1 or twice.numerator % 2 == 0:
        return None
    return (twice.numerator - 1) // 2


def cmd_conj(args) -> int:
    o = _load_sum(args.operator, args.algebra, args.modes, _mode(args))
    algebra = algebra_of(o)
    if algebra == "fermion":
        out = _conj_fermion(args, o)
    else:
        if args.theta is None:
            raise UsageError("--theta is required")
        theta = Angle.parse(args.theta)
        g = parse_string(args.generator, algebra, o.n)
        out = (PauliSum if algebra == "pauli" else MajoranaSum)(o.n)
        fn = pauli_conjugate if algebra == "pauli" else maj_conjugate
        for s, c in o.items():
            out = out + fn(s, g, theta).scale(c)
    _sum_output(args, out)
    return 0


def cmd_map(args) -> int:
    src, dst = args.source, args.target
    x = _load_sum(args.operator, src, args.modes, _mode(args))
    width = args.modes or x.n
    if src == dst:
        out = x
    elif src == "fermion" and dst == "pauli":
        out = jw_fermion_to_pauli(x, width)
    elif src == "fermion" and dst == "majorana":
        out = fermion_to_majorana(x)
    elif src == "majorana" and dst == "fermion":
        out = majorana_to_fermion(x)
    elif src == "majorana" and dst == "pauli":
        out = jw_majorana_sum_to_pauli(x, width)
    elif src == "pauli" and dst == "fermion":
        out = inverse_jw(x, width, holes=not args.no_holes)
        if args.no_holes:
            out = out.canonical()
    elif src == "pauli" and dst == "majorana":
        out = fermion_to_majorana(inverse_jw(x, width))
    else:
        raise UsageError(f"no map from {src} to {dst}")
    _sum_output(args, out)
    return 0


def _load_hamiltonian(path: str, mode: str) -> PauliSum:
    text = Path(path).read_text() if path != "-" else sys.stdin.read()
    if text.lstrip().startswith("{"):
        h = from_json(text, "pauli")
    else:
        h = parse(text, "pauli")
    return h.to_float() if mode == "float" else h


def _term_line(c: str, s: str) -> str:
    # multi-term coefficients need brackets to read unambiguously
    return f"  ({c}) * {s}" if (" + " in c or " - " in c) else f"  {c} * {s}"


def cmd_taper(args) -> int:
    from . import tapering as tp

    if args.taper_cmd == "find-syms":
        h = _load_hamiltonian(args.file, _mode(args))
        group = tp.find_z2_symmetries(h)
        targets = tp.auto_targets(group.generators) if group.generators else []
        obj = {"n_qubits": h.n, "generators": group.labels(), "targets": targets}
        lines = [f"{len(group)} generator(s) on {h.n} qubits"]
        lines += [f"  {g}  (target {q})" for g, q in zip(group.labels(), targets)]
        _emit(args, obj, "\n".join(lines))
        return 0
    if args.taper_cmd == "run":
        h = _load_hamiltonian(args.file, _mode(args))
        group = tp.find_z2_symmetries(h)
        targets = [int(t) for t in args.targets.split(",")] if args.targets else None
        plan = tp.build_tapering_plan(group, targets, args.sector)
        hbar = tp.conjugate_hamiltonian(h, plan)
        tapered = tp.taper_qubits(hbar, plan)
        obj = {
            "generators": [str(g) for g in plan.generators],
            "targets": list(plan.targets),
            "sector": tp.format_sector(plan.sector),
            "transformed": to_json(hbar),
            "tapered": to_json(tapered),
        }
        text = "\n".join([
            "generators: " + ", ".join(str(g) for g in plan.generators),
            "targets: " + ",".join(map(str, plan.targets)),
            "transformed: " + format_sum(hbar, header=False),
            f"tapered ({tp.format_sector(plan.sector)}): " + format_sum(tapered, header=False),
        ])
        _emit(args, obj, text)
        return 0
    # demo-h2
    integrals = None
    if args.integrals:
        integrals = json.loads(Path(args.integrals).read_text())
    report = tp.h2_demo(integrals)
    if args.json:
        print(json.dumps(report.to_dict(), indent=2))
        return 0 if report.numeric is None or report.numeric["max_deviation"] <= default_tol() else 2
    print("H2 minimal basis: Jordan-Wigner Hamiltonian")
    for s, c in report.pauli_terms:
        print(_term_line(c, s))
    print("symmetry generators: " + ", ".join(report.generators))
    print("targets: " + ",".join(map(str, report.targets)))
    print("transformed Hamiltonian U H U")
    for s, c in report.transformed_terms:
        print(_term_line(c, s))
    print(f"fermionic terms: {report.fermionic_terms_before} before, {report.fermionic_terms_after} after")
    print("sector Hamiltonians")
    for sec, text in report.sectors.items():
        print(f"  ({sec}) {text}")
    print(f"Hartree-Fock determinant |1100> lies in sector ({report.hf_sector})")
    print("tapered one-mode Hamiltonian: " + report.tapered_fermion)
    for k, v in report.tapered_coefficients.items():
        print(f"  {k} = {v}")
    if report.numeric is not None:
        num = report.numeric
        print(f"tapered spectrum: {num['tapered_spectrum']}")
        print(f"block spectrum:   {num['block_spectrum']}")
        print(f"max deviation: {num['max_deviation']:.3e}")
        if num["max_deviation"] > default_tol():
            return 2
    return 0


def cmd_lie(args) -> int:
    from .lie import expected_dimension, verify_closure, verify_isomorphism

    report = verify_closure(args.family, args.modes)
    obj = report.to_dict()
    iso = None
    if args.family in ("singles", "singles_pairs", "singles_pairs_half"):
        iso = verify_isomorphism(args.family, args.modes)
    obj["isomorphism"] = iso
    expected = expected_dimension(args.family, args.modes)
    ok = (report.closed and report.relations_ok and report.jacobi and report.antisymmetric
          and report.dimension == expected and iso is not False)
    obj["passed"] = bool(ok)
    if args.json:
        print(json.dumps(obj, indent=2))
    else:
        print(f"family {args.family}, M = {args.modes}: dimension {report.dimension} (expected {expected})")
        print(f"closed: {report.closed}")
        print(f"named relations: {report.relations_ok}")
        print(f"antisymmetry: {report.antisymmetric}, Jacobi: {report.jacobi}")
        print(f"matrix isomorphism: {iso}")
        for a, b, c, v in report.nonzero_constants():
            print(f"  [{a}, {b}] has {v} * {c}")
        for f in report.failures:
            print(f"  failure: {f}")
    return 0 if ok else 2


def cmd_verify(args) -> int:
    from .oracle import run_oracle_suite

    report = run_oracle_suite(args.seed, args.cases, args.max_modes)
    if args.json:
        print(json.dumps(report, indent=2))
    else:
        for name, fam in report["families"].items():
            status = "ok" if fam["passed"] else "FAIL"
            print(f"{name:24s} {status:4s} max deviation {fam['max_deviation']:.3e}")
            if not fam["passed"]:
                print(f"  worst case (seed {args.seed}, index {fam['worst_index']}): {fam['worst_case']}")
    return 0 if report["passed"] else 2


def cmd_parse(args) -> int:
    text = _read_expr(args.expr)
    try:
        x = parse(text, args.algebra, args.modes, _mode(args))
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if args.check:
        print("ok")
        return 0
    _sum_output(args, x)
    return 0


def cmd_angle(args) -> int:
    theta = Angle.parse(args.theta)
    obj = {alg: angle_is_clifford(theta, alg) for alg in ("pauli", "majorana", "fermionic")}
    _emit(args, obj, "\n".join(f"{k}: {v}" for k, v in obj.items()))
    return 0


# ---------------------------------------------------------------- wiring

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    group = common.add_mutually_exclusive_group()
    group.add_argument("--exact", action="store_true", help="exact coefficients (default)")
    group.add_argument("--float", action="store_true", help="complex floating-point coefficients")
    common.add_argument("--header", action="store_true", help="print the width header line")

    p = _Parser(prog="fermiclif", description="Pauli, Majorana and fermionic string algebra.",
                epilog=GRAMMAR, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True
    algebras = ["pauli", "majorana", "fermion"]

    s = sub.add_parser("mul", parents=[common], help="multiply two expressions")
    s.add_argument("left")
    s.add_argument("right")
    s.add_argument("--algebra", choices=algebras, default="fermion")
    s.add_argument("--modes", type=int)
    s.set_defaults(func=cmd_mul)

    s = sub.add_parser("conj", parents=[common], help="conjugate by exp of a generator")
    s.add_argument("operator")
    s.add_argument("--generator", required=True)
    s.add_argument("--theta")
    s.add_argument("--algebra", choices=algebras, default="fermion")
    s.add_argument("--modes", type=int)
    s.add_argument("--method", choices=["closed", "table"], default="closed")
    s.set_defaults(func=cmd_conj)

    s = sub.add_parser("map", parents=[common], help="translate between algebras")
    s.add_argument("operator")
    s.add_argument("--from", dest="source", choices=algebras, required=True)
    s.add_argument("--to", dest="target", choices=algebras, required=True)
    s.add_argument("--modes", type=int)
    s.add_argument("--no-holes", action="store_true", help="write Z as I - 2n without hole operators")
    s.set_defaults(func=cmd_map)

    s = sub.add_parser("taper", help="Z2 qubit tapering")
    tsub = s.add_subparsers(dest="taper_cmd", parser_class=_Parser)
    tsub.required = True
    t = tsub.add_parser("find-syms", parents=[common])
    t.add_argument("file")
    t = tsub.add_parser("run", parents=[common])
    t.add_argument("file")
    t.add_argument("--sector", required=True)
    t.add_argument("--targets")
    t = tsub.add_parser("demo-h2", parents=[common])
    t.add_argument("--integrals")
    s.set_defaults(func=cmd_taper)

    s = sub.add_parser("lie", help="Lie algebra checks")
    lsub = s.add_subparsers(dest="lie_cmd", parser_class=_Parser)
    lsub.required = True
    t = lsub.add_parser("verify", parents=[common])
    t.add_argument("--family", default="singles_pairs_half",
                   choices=["singles", "pairs", "singles_pairs", "singles_pairs_half"])
    t.add_argument("--modes", type=int, default=3)
    s.set_defaults(func=cmd_lie)

    s = sub.add_parser("verify", parents=[common], help="random checks against dense matrices")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--cases", type=int, default=500)
    s.add_argument("--max-modes", type=int, default=4)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("parse", parents=[common], help="parse and print in canonical form")
    s.add_argument("expr")
    s.add_argument("--algebra", choices=algebras, default="fermion")
    s.add_argument("--modes", type=int)
    s.add_argument("--check", action="store_true", help="only report whether the input parses")
    s.set_defaults(func=cmd_parse)

    s = sub.add_parser("angle", parents=[common], help="is an angle Clifford for each algebra")
    s.add_argument("theta")
    s.set_defaults(func=cmd_angle)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (UsageError, ParseError, TaperingError, ValueError, IndexError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        if isinstance(exc, (UsageError, ParseError)):
            print(GRAMMAR, file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
