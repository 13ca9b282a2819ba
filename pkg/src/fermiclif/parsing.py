"""Text grammar, parser and canonical printer for operator sums.

Grammar::

    document := [("qubits" | "modes") ":" INT (";" | newline)] sum
    sum      := ["+" | "-"] term (("+" | "-") term)*
    term     := item ("*" item)*          # only the last item may be operators
    item     := factor+ | "I" | coeff-atom
    coeff    := rational | symbol | "i" | "sqrt2" | "(" cexpr ["," cexpr] ")"

Operator factors: ``X0 Y3 Z5`` (Pauli), ``g1(0) g2(3) g3(1)`` (Majorana),
``a0^ a1 h2 n3`` or ``a+(0) a(1) h(2) n(3)`` (fermion).  A coefficient
``(re, im)`` denotes ``re + i*im``.  In front of ``*`` an operator-looking
token such as ``h22`` is read as a symbol, which is how integral names that
clash with fermionic factors are written.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction

from .coeffs import SQRT2, Coeff, SymbolicCoeff, as_coeff, format_coeff, to_complex
from .errors import ParseError
from .fermion import ANN, CRE, HOLE, NUM, FermionicString, FermionicSum, ferm_normalize
from .majorana import MajoranaString, MajoranaSum, maj_normalize
from .opsum import OperatorSum
from .pauli import PauliString, PauliSum

ALGEBRAS = ("pauli", "majorana", "fermion")
SUM_TYPES = {"pauli": PauliSum, "majorana": MajoranaSum, "fermion": FermionicSum}

_OP_PATTERNS = {
    "pauli": [(re.compile(r"([XYZ])(\d+)"), lambda m: (m.group(1), int(m.group(2))))],
    "majorana": [(re.compile(r"g([123])\(\s*(\d+)\s*\)"), lambda m: (int(m.group(1)), int(m.group(2))))],
    "fermion": [
        (re.compile(r"a\+\(\s*(\d+)\s*\)"), lambda m: (CRE, int(m.group(1)))),
        (re.compile(r"a\(\s*(\d+)\s*\)"), lambda m: (ANN, int(m.group(1)))),
        (re.compile(r"([nh])\(\s*(\d+)\s*\)"), lambda m: (m.group(1), int(m.group(2)))),
        (re.compile(r"a(\d+)\^"), lambda m: (CRE, int(m.group(1)))),
        (re.compile(r"a(\d+)"), lambda m: (ANN, int(m.group(1)))),
        (re.compile(r"([nh])(\d+)"), lambda m: (m.group(1), int(m.group(2)))),
    ],
}
_FOREIGN = {
    "pauli": re.compile(r"[XYZ]\d+|g[123]\(|a\d+\^?|a\+?\("),
    "majorana": re.compile(r"[XYZ]\d+|a\d+\^?|a\+?\(|[nh]\("),
    "fermion": re.compile(r"[XYZ]\d+|g[123]\("),
}
_NUMBER = re.compile(r"(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?")
_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_HEADER = re.compile(r"\s*(qubits|modes)\s*:\s*(\d+)\s*(?:;|\n|$)")
_WORD_CHAR = re.compile(r"[A-Za-z0-9_^]")


@dataclass
class Token:
    kind: str  # 'op', 'ident', 'num', 'name', or the punctuation character
    text: str
    pos: int
    value: object = None


def _tokenize(text: str, algebra: str, offset: int = 0) -> list[Token]:
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in "+-*/(),":
            tokens.append(Token(ch, ch, offset + i))
            i += 1
            continue
        matched = False
        for pattern, conv in _OP_PATTERNS[algebra]:
            m = pattern.match(text, i)
            if m and (m.end() == n or not _WORD_CHAR.match(text, m.end()) or text[m.end() - 1] == ")"):
                tokens.append(Token("op", m.group(0), offset + i, conv(m)))
                i = m.end()
                matched = True
                break
        if matched:
            continue
        m = _NUMBER.match(text, i)
        if m:
            tokens.append(Token("num", m.group(0), offset + i, Fraction(m.group(0))))
            i = m.end()
            continue
        m = _NAME.match(text, i)
        if m:
            word = m.group(0)
            if m.end() < n and text[m.end()] in "^(":
                # looks like an operator factor that this algebra does not have
                if _FOREIGN[algebra].match(text, i):
                    raise ParseError(f"token {word!r} belongs to a different algebra", offset + i, text)
                raise ParseError(f"unknown operator {word!r}", offset + i, text)
            if word == "I":
                tokens.append(Token("ident", word, offset + i))
            else:
                tokens.append(Token("name", word, offset + i))
            i = m.end()
            continue
        raise ParseError(f"unexpected character {ch!r}", offset + i, text)
    return tokens


class _Parser:
    def __init__(self, text: str, algebra: str, offset: int):
        self.text = text
        self.algebra = algebra
        self.tokens = _tokenize(text, algebra, offset)
        self.i = 0
        self.end = offset + len(text)

    def peek(self) -> Token | None:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def take(self) -> Token:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input", self.end)
        self.i += 1
        return tok

    def expect(self, kind: str) -> Token:
        tok = self.peek()
        if tok is None or tok.kind != kind:
            pos = self.end if tok is None else tok.pos
            raise ParseError(f"expected {kind!r}", pos)
        return self.take()

    # coefficient expressions
    def cexpr(self) -> Coeff:
        total = Coeff()
        sign = 1
        tok = self.peek()
        if tok is not None and tok.kind in "+-":
            sign = -1 if tok.kind == "-" else 1
            self.take()
        total = self.cterm().scale(sign)
        while (tok := self.peek()) is not None and tok.kind in "+-":
            self.take()
            term = self.cterm()
            total = total + (term if tok.kind == "+" else -term)
        return total

    def cterm(self) -> Coeff:
        value = self.cfactor()
        while (tok := self.peek()) is not None and tok.kind == "*":
            self.take()
            value = value * self.cfactor()
        return value

    def cfactor(self) -> Coeff:
        value = self.primary()
        while (tok := self.peek()) is not None and tok.kind == "/":
            self.take()
            den = self.expect("num")
            if den.value == 0:
                raise ParseError("division by zero", den.pos)
            value = value.scale(1 / den.value)
        return value

    def primary(self) -> Coeff:
        tok = self.take()
        if tok.kind == "num":
            return Coeff.rational(tok.value)
        if tok.kind == "name":
            return _name_coeff(tok.text)
        if tok.kind == "op" and _NAME.fullmatch(tok.text):
            return _name_coeff(tok.text)
        if tok.kind == "-":
            return -self.primary()
        if tok.kind == "(":
            re_part = self.cexpr()
            if self.peek() is not None and self.peek().kind == ",":
                self.take()
                im_part = self.cexpr()
                self.expect(")")
                return re_part + im_part.mul_i(1)
            self.expect(")")
            return re_part
        raise ParseError(f"unexpected token {tok.text!r}", tok.pos)

    # operator sums
    def item(self):
        """Either ('ops', [tokens]) or ('coeff', Coeff)."""
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input", self.end)
        if tok.kind in ("op", "ident"):
            ops = []
            while (t := self.peek()) is not None and t.kind in ("op", "ident", "name"):
                if t.kind == "name":
                    if _FOREIGN[self.algebra].match(t.text):
                        raise ParseError(f"token {t.text!r} belongs to a different algebra", t.pos)
                    raise ParseError(f"unexpected name {t.text!r} among operator factors", t.pos)
                ops.append(self.take())
            return "ops", ops
        if tok.kind == "name" and _FOREIGN[self.algebra].fullmatch(tok.text):
            raise ParseError(f"token {tok.text!r} belongs to a different algebra", tok.pos)
        return "coeff", self.cfactor()

    def term(self):
        items = [self.item()]
        while (tok := self.peek()) is not None and tok.kind == "*":
            self.take()
            items.append(self.item())
        coeff = Coeff.rational(1)
        ops = None
        for idx, (kind, val) in enumerate(items):
            if kind == "ops" and idx == len(items) - 1:
                ops = val
            elif kind == "ops":
                if len(val) == 1 and val[0].kind == "op" and _NAME.fullmatch(val[0].text):
                    coeff = coeff * _name_coeff(val[0].text)
                else:
                    raise ParseError("operator factors must come last in a term", val[0].pos)
            else:
                coeff = coeff * val
        return coeff, ops or []

    def sum(self):
        terms = []
        sign = 1
        tok = self.peek()
        if tok is None:
            raise ParseError("empty expression", self.end)
        if tok.kind in "+-":
            sign = -1 if tok.kind == "-" else 1
            self.take()
        while True:
            coeff, ops = self.term()
            terms.append((coeff.scale(sign), ops))
            tok = self.peek()
            if tok is None:
                break
            if tok.kind not in "+-":
                raise ParseError(f"unexpected token {tok.text!r}", tok.pos)
            self.take()
            sign = -1 if tok.kind == "-" else 1
        return terms


def _name_coeff(name: str) -> Coeff:
    if name == "i":
        return Coeff.rational(0, 1)
    if name == SQRT2:
        return Coeff.sqrt2()
    return Coeff.symbol(name)


def _split_header(text: str) -> tuple[int | None, str | None, int]:
    m = _HEADER.match(text)
    if not m:
        return None, None, 0
    return int(m.group(2)), m.group(1), m.end()


def _build_string(algebra: str, n: int, ops: list[Token]):
    factors = [t for t in ops if t.kind == "op"]
    for t in factors:
        idx = t.value[1]
        if idx >= n:
            raise ParseError(f"index {idx} exceeds declared width {n}", t.pos)
    if algebra == "pauli":
        return PauliString.from_ops(n, [(idx, letter) for letter, idx in (t.value for t in factors)])
    if algebra == "majorana":
        return maj_normalize(n, [(mode, flavor) for flavor, mode in (t.value for t in factors)])
    return ferm_normalize(n, [t.value for t in factors])


def parse(text: str, algebra: str, n: int | None = None, mode: str = "exact") -> OperatorSum:
    """Parse an operator sum of the given algebra ('pauli', 'majorana', 'fermion')."""
    algebra = _algebra_name(algebra)
    width, _, start = _split_header(text)
    if n is not None and width is not None and n != width:
        raise ParseError(f"header width {width} conflicts with requested {n}", 0)
    if width is None:
        width = n
    body = text[start:]
    if body.strip() == "0":
        if width is None:
            width = 1
        return SUM_TYPES[algebra](width)
    parser = _Parser(body, algebra, start)
    terms = parser.sum()
    if width is None:
        top = [t.value[1] for _, ops in terms for t in ops if t.kind == "op"]
        width = max(top) + 1 if top else 1
    out = SUM_TYPES[algebra](width)
    for coeff, ops in terms:
        out._accumulate(_build_string(algebra, width, ops), coeff)
    if mode == "float":
        out = out.to_float()
    elif mode != "exact":
        raise ValueError(f"unknown coefficient mode {mode!r}")
    return out


def parse_coeff(text: str) -> Coeff:
    parser = _Parser(text, "pauli", 0)
    value = parser.cexpr()
    tok = parser.peek()
    if tok is not None:
        raise ParseError(f"unexpected token {tok.text!r}", tok.pos)
    return value


def parse_string(text: str, algebra: str, n: int | None = None):
    """Parse a single operator string (a one-term sum with coefficient a power of i)."""
    s = parse(text, algebra, n)
    if len(s) != 1:
        raise ParseError("expected a single operator string", 0)
    ((key, c),) = s.items()
    for k in range(4):
        if c == Coeff.rational(1).mul_i(k):
            return key.with_phase(k)
    raise ParseError("coefficient of a single string must be a power of i", 0)


def _algebra_name(algebra: str) -> str:
    aliases = {"fermionic": "fermion", "f": "fermion", "p": "pauli", "m": "majorana", "qubit": "pauli"}
    algebra = aliases.get(algebra, algebra)
    if algebra not in ALGEBRAS:
        raise ValueError(f"unknown algebra {algebra!r}")
    return algebra


def algebra_of(x) -> str:
    if isinstance(x, (PauliSum, PauliString)):
        return "pauli"
    if isinstance(x, (MajoranaSum, MajoranaString)):
        return "majorana"
    if isinstance(x, (FermionicSum, FermionicString)):
        return "fermion"
    raise TypeError(f"unknown operator type {type(x).__name__}")


# ---------------------------------------------------------------- printing

def _body(s, verbose: bool = False) -> str:
    text = str(s.with_phase(0))
    if verbose and isinstance(s, FermionicString):
        from .fermion import format_string

        text = format_string(s.with_phase(0), verbose=True)
    return text


def _split_sign(c) -> tuple[int, str | None]:
    """(sign, magnitude text) with None magnitude meaning unit coefficient."""
    if isinstance(c, Coeff):
        if not c.im.terms and len(c.re.terms) == 1:
            ((mono, val),) = c.re.terms.items()
            sign = -1 if val < 0 else 1
            mag = SymbolicCoeff({mono: abs(val)})
            if mag == 1:
                return sign, None
            return sign, str(mag)
        if c.im.terms and not c.re.terms and len(c.im.terms) == 1:
            ((mono, val),) = c.im.terms.items()
            sign = -1 if val < 0 else 1
            mag = SymbolicCoeff({mono: abs(val)})
            return sign, "i" if mag == 1 else f"i*{mag}"
        return 1, f"({c})" if not c.im.terms else str(c)
    c = complex(c)
    if c.imag == 0:
        sign = -1 if c.real < 0 else 1
        return sign, repr(abs(c.real))
    return 1, format_coeff(c)


def format_sum(x: OperatorSum, header: bool = True, verbose: bool = False) -> str:
    """Canonical text; ``parse(format_sum(x), algebra) == x``."""
    algebra = algebra_of(x)
    head = ""
    if header:
        head = ("qubits" if algebra == "pauli" else "modes") + f": {x.n}\n"
    if x.is_zero():
        return head + "0"
    parts = []
    for idx, (s, c) in enumerate(x.sorted_items()):
        sign, mag = _split_sign(c)
        body = _body(s, verbose)
        text = body if mag is None else f"{mag} * {body}"
        if idx == 0:
            parts.append(("-" if sign < 0 else "") + text)
        else:
            parts.append((" - " if sign < 0 else " + ") + text)
    return head + "".join(parts)


def format_string(s) -> str:
    return str(s)


# ---------------------------------------------------------------- JSON

_JSON_KEYS = {"pauli": ("n_qubits", "pauli"), "majorana": ("n_modes", "majorana"),
              "fermion": ("n_modes", "fermion")}


def coeff_to_json(c) -> dict:
    if isinstance(c, Coeff):
        return {"re": str(c.re), "im": str(c.im)}
    c = complex(c)
    return {"re": c.real, "im": c.imag}


def coeff_from_json(obj) -> object:
    if isinstance(obj, (int, float)) and not isinstance(obj, bool):
        return as_coeff(obj)
    if isinstance(obj, str):
        return parse_coeff(obj)
    re_v, im_v = obj.get("re", 0), obj.get("im", 0)
    if isinstance(re_v, str) or isinstance(im_v, str):
        re_c = parse_coeff(str(re_v))
        im_c = parse_coeff(str(im_v))
        return re_c + im_c.mul_i(1)
    return complex(float(re_v), float(im_v))


def to_json(x: OperatorSum) -> dict:
    algebra = algebra_of(x)
    width_key, term_key = _JSON_KEYS[algebra]
    terms = []
    for s, c in x.sorted_items():
        terms.append({term_key: _body(s), "coeff": coeff_to_json(c)})
    return {"algebra": algebra, width_key: x.n, "terms": terms}


def from_json(obj: dict | str, algebra: str | None = None) -> OperatorSum:
    if isinstance(obj, str):
        obj = json.loads(obj)
    if algebra is None and "algebra" in obj:
        algebra = obj["algebra"]
    if algebra is None:
        terms = obj.get("terms", [])
        found = {k for t in terms for k in ("pauli", "majorana", "fermion") if k in t}
        if len(found) > 1:
            raise ParseError("terms mix several algebras")
        algebra = found.pop() if found else ("pauli" if "n_qubits" in obj else "fermion")
    algebra = _algebra_name(algebra)
    width_key, term_key = _JSON_KEYS[algebra]
    n = obj.get(width_key, obj.get("n_qubits", obj.get("n_modes")))
    if n is None:
        raise ParseError(f"missing {width_key!r}")
    out = SUM_TYPES[algebra](int(n))
    for term in obj.get("terms", []):
        s = parse_string(term[term_key], algebra, int(n))
        c = coeff_from_json(term.get("coeff", 1))
        out._accumulate(s, c)
    return out


def dumps(x: OperatorSum) -> str:
    return json.dumps(to_json(x), indent=2, sort_keys=False)


def numeric_close(a: OperatorSum, b: OperatorSum, tol: float = 1e-10) -> bool:
    keys = set(s for s, _ in a.items()) | set(s for s, _ in b.items())
    return all(abs(to_complex(a.coeff(k)) - to_complex(b.coeff(k))) <= tol for k in keys)
