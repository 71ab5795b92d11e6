"""Cyclic words on a doubled quiver and the necklace Lie bracket.

A necklace is a rotation class of closed words (left-to-right composition) or
a vertex idempotent, written ``cyc(a, a*)`` / ``e(v)`` in the element grammar.
Canonical form: the rotation whose arrow-index tuple is lexicographically
minimal, first such rotation for periodic words.  The total order used by
normal forms downstream puts idempotents first (by vertex index), then sorts
by (length, index tuple).

The bracket pairs mutually reversed letters and glues the complementary arcs:

    {x, y} = sum over letters p of x, q of y with q = p* of
             <p, q> * cyc(arc of x after p, arc of y after q)

where the arc after a letter starts at its target and ends at its source, an
empty glued word degenerates to the idempotent at t(p), and <a, a*> = +1,
<a*, a> = -1 up to the global orientation ``sign``.  The displayed orientation
(+1) gives {a, a*} = e(v) on the one-loop quiver; the trace-compatible
orientation is sign = -1 (see SkeinConvention.pairing_sign).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .quiver import Quiver, QuiverError


@dataclass(frozen=True)
class Necklace:
    """Canonical rotation of a closed word; empty word = vertex idempotent."""

    word: tuple[str, ...]
    base: str

    @staticmethod
    def idempotent(quiver: Quiver, vertex: str) -> "Necklace":
        if vertex not in quiver.vertices:
            raise QuiverError(f"unknown vertex {vertex!r}")
        return Necklace((), vertex)

    @staticmethod
    def make(quiver: Quiver, word: tuple[str, ...], base: str | None = None) -> "Necklace":
        if not word:
            if base is None:
                raise QuiverError("empty necklace needs a vertex")
            return Necklace.idempotent(quiver, base)
        quiver.validate_cycle(word)
        rotated = canonical_rotation(quiver, word)
        return Necklace(rotated, quiver.source[rotated[0]])

    @property
    def is_idempotent(self) -> bool:
        return not self.word

    def degree(self) -> int:
        return len(self.word)

    def sort_key(self, quiver: Quiver):
        if self.is_idempotent:
            return (0, quiver.vertex_index(self.base), ())
        return (1, len(self.word), tuple(quiver.arrow_index(a) for a in self.word))

    def __str__(self) -> str:
        if self.is_idempotent:
            return f"e({self.base})"
        return "cyc(" + ",".join(self.word) + ")"


def canonical_rotation(quiver: Quiver, word: tuple[str, ...]) -> tuple[str, ...]:
    indices = [quiver.arrow_index(a) for a in word]
    best = None
    best_key = None
    for k in range(len(word)):
        key = tuple(indices[k:] + indices[:k])
        if best_key is None or key < best_key:
            best_key = key
            best = word[k:] + word[:k]
    return best


class NecklaceSum:
    """Finite rational linear combination of necklaces over one quiver."""

    def __init__(self, quiver: Quiver, terms=None):
        self.quiver = quiver
        self.terms: dict[Necklace, Fraction] = {}
        if terms:
            for neck, coeff in terms.items():
                coeff = Fraction(coeff)
                if coeff:
                    self.terms[neck] = coeff

    @classmethod
    def zero(cls, quiver: Quiver) -> "NecklaceSum":
        return cls(quiver)

    @classmethod
    def single(cls, quiver: Quiver, word: tuple[str, ...], base=None, coeff=1) -> "NecklaceSum":
        return cls(quiver, {Necklace.make(quiver, word, base): Fraction(coeff)})

    def _check(self, other: "NecklaceSum"):
        if self.quiver is not other.quiver and self.quiver != other.quiver:
            raise QuiverError("necklace sums live over different quivers")

    def __add__(self, other: "NecklaceSum") -> "NecklaceSum":
        self._check(other)
        out = dict(self.terms)
        for neck, coeff in other.terms.items():
            total = out.get(neck, Fraction(0)) + coeff
            if total:
                out[neck] = total
            else:
                out.pop(neck, None)
        return NecklaceSum(self.quiver, out)

    def __neg__(self) -> "NecklaceSum":
        return NecklaceSum(self.quiver, {n: -c for n, c in self.terms.items()})

    def __sub__(self, other: "NecklaceSum") -> "NecklaceSum":
        return self + (-other)

    def scale(self, coeff) -> "NecklaceSum":
        coeff = Fraction(coeff)
        return NecklaceSum(self.quiver, {n: c * coeff for n, c in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((n.degree() for n in self.terms), default=0)

    def vector(self) -> dict:
        """Sparse vector keyed by the canonical sort key (for linear algebra)."""
        return {n.sort_key(self.quiver): c for n, c in self.terms.items()}

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, NecklaceSum)
            and self.quiver == other.quiver
            and self.terms == other.terms
        )

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        items = sorted(self.terms.items(), key=lambda kv: kv[0].sort_key(self.quiver))
        parts = []
        for neck, coeff in items:
            if coeff == 1:
                parts.append(str(neck))
            elif coeff == -1:
                parts.append(f"-{neck}")
            else:
                parts.append(f"{coeff}*{neck}")
        text = parts[0]
        for part in parts[1:]:
            text += " - " + part[1:] if part.startswith("-") else " + " + part
        return text

    __repr__ = __str__


def generator_pairing(quiver: Quiver, p: str, q: str, sign: int = 1) -> int:
    """<p, q>: +-1 for mutually reversed letters, 0 otherwise."""
    if quiver.star.get(p) != q:
        return 0
    value = 1 if not p.endswith("*") else -1
    return sign * value


def arc_after(word: tuple[str, ...], i: int) -> tuple[str, ...]:
    """The letters of the cycle read from just after position i, once around."""
    return word[i + 1 :] + word[:i]


def join_cut_words(
    quiver: Quiver, u: tuple[str, ...], i: int, w: tuple[str, ...], j: int
) -> Necklace:
    """Glue (arc of u after i) then (arc of w after j) into one necklace.

    Defined when w[j] == u[i]*; the arcs compose because the cut letters run
    between the same two vertices in opposite directions.  Both arcs empty
    degenerates to the idempotent at t(u[i]).
    """
    glued = arc_after(u, i) + arc_after(w, j)
    if not glued:
        return Necklace.idempotent(quiver, quiver.target[u[i]])
    return Necklace.make(quiver, glued)


def bracket(x: NecklaceSum, y: NecklaceSum, sign: int = 1) -> NecklaceSum:
    """The necklace bracket with global orientation ``sign`` (default +1)."""
    x._check(y)
    quiver = x.quiver
    out = NecklaceSum.zero(quiver)
    acc: dict[Necklace, Fraction] = {}
    for nx, cx in x.terms.items():
        for ny, cy in y.terms.items():
            scale = cx * cy
            for i, p in enumerate(nx.word):
                for j, q in enumerate(ny.word):
                    pairing = generator_pairing(quiver, p, q, sign)
                    if not pairing:
                        continue
                    joined = join_cut_words(quiver, nx.word, i, ny.word, j)
                    total = acc.get(joined, Fraction(0)) + scale * pairing
                    if total:
                        acc[joined] = total
                    else:
                        acc.pop(joined, None)
    out.terms = acc
    return out


# --- moment element and the cyclified ideal --------------------------------


def moment(quiver: Quiver, lam: dict[str, Fraction] | None = None) -> dict:
    """The path-algebra element sum_a (a a* - a* a) minus lambda, as a dict
    {(base_vertex, word): coefficient}; empty words are vertex idempotents."""
    if not quiver.is_doubled:
        raise QuiverError("moment element lives on the doubled quiver")
    terms: dict[tuple[str, tuple[str, ...]], Fraction] = {}
    for a in quiver.base_arrows():
        rev = quiver.star[a]
        key = (quiver.source[a], (a, rev))
        terms[key] = terms.get(key, Fraction(0)) + 1
        key = (quiver.target[a], (rev, a))
        terms[key] = terms.get(key, Fraction(0)) - 1
    for v, value in (lam or {}).items():
        if v not in quiver.vertices:
            raise QuiverError(f"unknown vertex {v!r} in lambda")
        value = Fraction(value)
        if value:
            key = (v, ())
            total = terms.get(key, Fraction(0)) - value
            if total:
                terms[key] = total
            else:
                terms.pop(key, None)
    return terms


def cyclify(quiver: Quiver, path_terms: dict) -> NecklaceSum:
    """Project a path-algebra element to necklaces: open words die, closed
    words become their rotation class, idempotent paths stay idempotents."""
    out: dict[Necklace, Fraction] = {}
    for (base, word), coeff in path_terms.items():
        if word:
            start, end = quiver.validate_path(word)
            if start != end:
                continue
            neck = Necklace.make(quiver, word)
        else:
            neck = Necklace.idempotent(quiver, base)
        total = out.get(neck, Fraction(0)) + coeff
        if total:
            out[neck] = total
        else:
            out.pop(neck, None)
    return NecklaceSum(quiver, out)


def cyclified_ideal_span(
    quiver: Quiver, maxdeg: int, lam: dict[str, Fraction] | None = None
) -> list[NecklaceSum]:
    """Independent spanning set of the degree-truncated cyclified ideal.

    Generators are cyc(p * (moment - lambda)) over all paths p with
    len(p) + 2 <= maxdeg, deduplicated by exact row reduction.
    """
    if maxdeg < 2:
        return []
    mom = moment(quiver, lam)
    from .linalg import RowBasis

    basis = RowBasis()
    span: list[NecklaceSum] = []
    for start, pword in quiver.paths(maxdeg - 2):
        end = quiver.target[pword[-1]] if pword else start
        product: dict[tuple[str, tuple[str, ...]], Fraction] = {}
        for (mbase, mword), coeff in mom.items():
            if mbase != end:
                continue
            key = (start, pword + mword)
            product[key] = product.get(key, Fraction(0)) + coeff
        element = cyclify(quiver, product)
        if element.is_zero():
            continue
        if basis.add(element.vector()):
            span.append(element)
    return span


def reduce_classical(
    x: NecklaceSum, span: list[NecklaceSum], maxdeg: int
) -> NecklaceSum:
    """Canonical coset representative of x modulo the span (exact reduction)."""
    if x.degree() > maxdeg:
        raise QuiverError(f"degree {x.degree()} exceeds maxdeg {maxdeg}")
    from .linalg import RowBasis

    basis = RowBasis()
    for element in span:
        basis.add(element.vector())
    residual, _ = basis.reduce(x.vector())
    lookup = {n.sort_key(x.quiver): n for n in x.terms}
    for element in span:
        for n in element.terms:
            lookup.setdefault(n.sort_key(x.quiver), n)
    # residual keys are sort keys of necklaces seen in x or the span
    terms = {lookup[key]: coeff for key, coeff in residual.items()}
    return NecklaceSum(x.quiver, terms)
