"""Text grammar for necklace and height-monomial expressions.

Grammar (whitespace-insensitive)::

    expr    := ['-'] term (('+' | '-') term)*
    term    := factor ('*' factor)*
    factor  := '-' factor | NUMBER | HBAR | '(' expr ')' | group
    group   := atom ('&' atom)*
    atom    := 'cyc' '(' NAME (',' NAME)* ')'
             | 'e' '(' NAME ')'
             | 'h' '[' pair (',' pair)* ']'
    pair    := '(' NAME ',' NUMBER ')'
    HBAR    := 'hbar' ['^' INT]
    NUMBER  := INT ['/' INT]

``cyc`` atoms build necklaces (cyclic words up to rotation); ``h`` atoms build
height-monomial components with explicit letter heights, and ``&`` joins
components and idempotent factors into a single monomial whose heights must
cover 1..N.  The two families cannot be mixed in one expression: ``h``,
``hbar`` or ``&`` force the height reading, ``cyc`` the necklace reading, and
a bare ``e(v)`` (or pure scalar) defaults to the necklace reading unless the
caller requests otherwise.  ``*`` multiplies by scalars only; combining two
cyclic atoms with ``*`` is rejected (use ``&`` for height components).

Every error carries the 1-based (line, col) of the offending token, and the
``str`` forms of NecklaceSum / HeightSum re-parse to equal values.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .hpoly import HPoly
from .heights import HeightMonomial, HeightSum
from .necklace import Necklace, NecklaceSum
from .quiver import Quiver, QuiverError


class ExprError(ValueError):
    """Parse or evaluation error with a 1-based source position."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{message} (line {line}, col {col})")
        self.line = line
        self.col = col


@dataclass(frozen=True)
class Token:
    type: str  # "num", "name", or the operator character itself
    value: str
    line: int
    col: int


_OPS = set("+-*&()[],^/")


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    line, col = 1, 1
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch.isspace():
            col += 1
            i += 1
            continue
        if ch in _OPS:
            tokens.append(Token(ch, ch, line, col))
            col += 1
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            tokens.append(Token("num", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            name = text[i:j]
            # trailing stars belong to reversed-arrow names: a*, b*
            while j < len(text) and text[j] == "*" and name not in ("cyc", "e", "h", "hbar"):
                name += "*"
                j += 1
            tokens.append(Token("name", name, line, col))
            col += j - i
            i = j
            continue
        raise ExprError(f"unexpected character {ch!r}", line, col)
    return tokens


def _detect_kind(tokens: list[Token]) -> str:
    for idx, tok in enumerate(tokens):
        if tok.type == "&":
            return "height"
        if tok.type == "name":
            if tok.value == "hbar":
                return "height"
            if tok.value == "h" and idx + 1 < len(tokens) and tokens[idx + 1].type == "[":
                return "height"
    for tok in tokens:
        if tok.type == "name" and tok.value == "cyc":
            return "necklace"
    return "necklace"


class _Parser:
    def __init__(self, quiver: Quiver, tokens: list[Token], kind: str):
        self.quiver = quiver
        self.tokens = tokens
        self.kind = kind
        self.pos = 0

    # --- token plumbing ----------------------------------------------------

    def _peek(self) -> Token | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def _next(self) -> Token:
        tok = self._peek()
        if tok is None:
            last = self.tokens[-1] if self.tokens else Token("", "", 1, 1)
            raise ExprError("unexpected end of expression", last.line, last.col + len(last.value))
        self.pos += 1
        return tok

    def _expect(self, type_: str) -> Token:
        tok = self._next()
        if tok.type != type_:
            raise ExprError(f"expected {type_!r}, found {tok.value!r}", tok.line, tok.col)
        return tok

    def _fail(self, message: str, tok: Token):
        raise ExprError(message, tok.line, tok.col)

    # --- values --------------------------------------------------------------
    # a value is ("scalar", HPoly) | ("elem", NecklaceSum | HeightSum)

    def _zero_elem(self):
        if self.kind == "height":
            return HeightSum.zero(self.quiver)
        return NecklaceSum(self.quiver, {})

    def _as_elem(self, value, tok: Token):
        tag, payload = value
        if tag == "elem":
            return payload
        # a standalone scalar: the empty monomial carries it in the height
        # algebra; the cycle space has no unit
        if self.kind == "height":
            return HeightSum(self.quiver, {HeightMonomial((), ()): payload})
        if not payload:
            return self._zero_elem()
        self._fail("the cycle space has no scalar term; multiply a cyc/e atom", tok)

    def _add(self, left, right, sign: int, tok: Token):
        ltag, lval = left
        rtag, rval = right
        if ltag == "scalar" and rtag == "scalar":
            return ("scalar", lval + rval.scale(sign))
        lelem = self._as_elem(left, tok)
        relem = self._as_elem(right, tok)
        if sign < 0:
            relem = -relem
        return ("elem", lelem + relem)

    def _mul(self, left, right, tok: Token):
        ltag, lval = left
        rtag, rval = right
        if ltag == "scalar" and rtag == "scalar":
            return ("scalar", lval * rval)
        if ltag == "scalar" or rtag == "scalar":
            scalar = lval if ltag == "scalar" else rval
            elem = rval if ltag == "scalar" else lval
            if isinstance(elem, NecklaceSum):
                if set(scalar.coeffs) - {0}:
                    self._fail("hbar does not scale cycle-space elements", tok)
                return ("elem", elem.scale(scalar.at_zero()))
            return ("elem", elem.scale(scalar))
        self._fail("cannot multiply two cyclic atoms; '&' joins height components", tok)

    # --- grammar ---------------------------------------------------------------

    def parse(self):
        value = self.expr()
        trailing = self._peek()
        if trailing is not None:
            self._fail(f"unexpected trailing {trailing.value!r}", trailing)
        return value

    def expr(self):
        tok = self._peek()
        negate = False
        if tok is not None and tok.type == "-":
            self._next()
            negate = True
        value = self.term()
        if negate:
            value = self._mul(("scalar", HPoly.const(-1)), value, tok)
        while True:
            tok = self._peek()
            if tok is None or tok.type not in "+-":
                return value
            self._next()
            right = self.term()
            value = self._add(value, right, 1 if tok.type == "+" else -1, tok)

    def term(self):
        value = self.factor()
        while True:
            tok = self._peek()
            if tok is None or tok.type != "*":
                return value
            self._next()
            value = self._mul(value, self.factor(), tok)

    def factor(self):
        tok = self._peek()
        if tok is None:
            self._next()  # raises with position
        if tok.type == "-":
            self._next()
            return self._mul(("scalar", HPoly.const(-1)), self.factor(), tok)
        if tok.type == "num":
            return ("scalar", HPoly.const(self._number()))
        if tok.type == "(":
            self._next()
            value = self.expr()
            self._expect(")")
            return value
        if tok.type == "name" and tok.value == "hbar":
            self._next()
            power = 1
            nxt = self._peek()
            if nxt is not None and nxt.type == "^":
                self._next()
                power = int(self._expect("num").value)
            if self.kind == "necklace":
                self._fail("hbar only appears in height expressions", tok)
            return ("scalar", HPoly.hbar(power))
        if tok.type == "name":
            return self.group()
        self._fail(f"unexpected {tok.value!r}", tok)

    def _number(self) -> Fraction:
        num = self._expect("num")
        value = Fraction(int(num.value))
        nxt = self._peek()
        if nxt is not None and nxt.type == "/":
            self._next()
            den = self._expect("num")
            if int(den.value) == 0:
                self._fail("zero denominator", den)
            value /= int(den.value)
        return value

    def group(self):
        """One necklace atom, or '&'-joined height components/idempotents."""
        start = self._peek()
        components: list[tuple[tuple[str, int], ...]] = []
        idempotents: list[str] = []
        single_necklace: Necklace | None = None
        while True:
            tok = self._expect("name")
            if tok.value == "cyc":
                if self.kind == "height":
                    self._fail("cyc atoms have no heights; write h[(arrow,height),...]", tok)
                single_necklace = self._cyc_atom()
            elif tok.value == "e":
                self._expect("(")
                vtok = self._expect("name")
                if vtok.value not in self.quiver.vertices:
                    self._fail(f"unknown vertex {vtok.value!r}", vtok)
                self._expect(")")
                if self.kind == "height":
                    idempotents.append(vtok.value)
                else:
                    single_necklace = Necklace.idempotent(self.quiver, vtok.value)
            elif tok.value == "h":
                if self.kind == "necklace":
                    self._fail("height atoms only appear in height expressions", tok)
                components.append(self._height_atom())
            else:
                self._fail(f"unknown atom {tok.value!r}", tok)
            nxt = self._peek()
            if nxt is None or nxt.type != "&":
                break
            if self.kind == "necklace":
                self._fail("'&' joins height components, not cycle-space terms", nxt)
            self._next()
        if self.kind == "necklace":
            return ("elem", NecklaceSum(self.quiver, {single_necklace: Fraction(1)}))
        try:
            mono = HeightMonomial.make(self.quiver, components, idempotents)
        except QuiverError as exc:
            self._fail(str(exc), start)
        return ("elem", HeightSum(self.quiver, {mono: HPoly.const(1)}))

    def _cyc_atom(self) -> Necklace:
        self._expect("(")
        word: list[str] = []
        positions: list[Token] = []
        while True:
            tok = self._expect("name")
            word.append(tok.value)
            positions.append(tok)
            nxt = self._next()
            if nxt.type == ")":
                break
            if nxt.type != ",":
                self._fail(f"expected ',' or ')', found {nxt.value!r}", nxt)
        try:
            return Necklace.make(self.quiver, tuple(word))
        except QuiverError as exc:
            self._fail(str(exc), positions[0])

    def _height_atom(self) -> tuple[tuple[str, int], ...]:
        self._expect("[")
        pairs: list[tuple[str, int]] = []
        while True:
            self._expect("(")
            atok = self._expect("name")
            if atok.value not in self.quiver.arrows:
                self._fail(f"unknown arrow {atok.value!r}", atok)
            self._expect(",")
            htok = self._expect("num")
            self._expect(")")
            pairs.append((atok.value, int(htok.value)))
            nxt = self._next()
            if nxt.type == "]":
                break
            if nxt.type != ",":
                self._fail(f"expected ',' or ']', found {nxt.value!r}", nxt)
        return tuple(pairs)


def parse_expression(text: str, quiver: Quiver, kind: str = "auto"):
    """Parse ``text`` into a NecklaceSum or HeightSum over ``quiver``.

    ``kind`` forces the reading: "necklace", "height", or "auto" (height iff
    an ``h[...]``, ``hbar`` or ``&`` token occurs)."""
    if kind not in ("auto", "necklace", "height"):
        raise ValueError(f"unknown kind {kind!r}")
    tokens = tokenize(text)
    if not tokens:
        raise ExprError("empty expression", 1, 1)
    resolved = _detect_kind(tokens) if kind == "auto" else kind
    parser = _Parser(quiver, tokens, resolved)
    value = parser.parse()
    return parser._as_elem(value, tokens[0])
