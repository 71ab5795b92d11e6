"""The height-graded quantization of the necklace space.

Elements are rational[hbar] combinations of *height monomials*: multisets of
cyclic words whose letter slots carry globally distinct heights 1..N, together
with a multiset of vertex idempotent factors.  The product stacks the right
factor above the left (its heights are shifted up), and the two-sided skein
relations push any monomial to a canonical normal form:

* swapping adjacent heights h, h+1 carried by letters p (lower) and q of the
  same component costs hbar * <p, q> times the monomial where the component is
  split along the two cut letters;
* across two components it costs hbar^k * <p, q> times the monomial where the
  components are glued along the cuts (k = SkeinConvention.inter_hbar_power);
* <p, q> is the generator pairing: pairing_sign * (+1 if q == p* with p
  unstarred, -1 if p starred), zero otherwise, in which case swapping is free.

Arcs glue exactly like the classical bracket (necklace.join_cut_words); an
empty glued word degenerates to an idempotent factor.  The normal form sorts
components by the cyclic-word order and assigns heights block-sequentially
along each component from its canonical first letter; rewriting terminates
because contractions strictly drop letters and swaps strictly reduce the
inversion count against that target.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .hpoly import HPoly, ONE
from .necklace import Necklace, NecklaceSum, arc_after, canonical_rotation, generator_pairing
from .quiver import Quiver, QuiverError


@dataclass(frozen=True)
class SkeinConvention:
    """The three switches that calibration decides between."""

    inter_hbar_power: int = 1
    pairing_sign: int = -1
    operator_order: str = "low-left"

    def __post_init__(self):
        if self.inter_hbar_power not in (0, 1):
            raise ValueError("inter_hbar_power must be 0 or 1")
        if self.pairing_sign not in (1, -1):
            raise ValueError("pairing_sign must be +1 or -1")
        if self.operator_order not in ("low-left", "low-right"):
            raise ValueError("operator_order must be 'low-left' or 'low-right'")

    def describe(self) -> dict:
        return {
            "inter_hbar_power": self.inter_hbar_power,
            "pairing_sign": self.pairing_sign,
            "operator_order": self.operator_order,
        }


DEFAULT_CONVENTION = SkeinConvention()

ALL_CONVENTIONS = tuple(
    SkeinConvention(k, s, o)
    for k in (0, 1)
    for s in (1, -1)
    for o in ("low-left", "low-right")
)


Component = tuple[tuple[str, int], ...]


@dataclass(frozen=True)
class HeightMonomial:
    components: tuple[Component, ...]
    idempotents: tuple[str, ...] = ()

    @staticmethod
    def make(
        quiver: Quiver,
        components,
        idempotents=(),
        relabel: bool = False,
    ) -> "HeightMonomial":
        comps = [tuple(c) for c in components]
        for comp in comps:
            if not comp:
                raise QuiverError("components must be nonempty; use idempotents")
            quiver.validate_cycle(tuple(a for a, _ in comp))
        heights = [h for comp in comps for _, h in comp]
        if len(set(heights)) != len(heights):
            raise QuiverError("heights must be pairwise distinct")
        if relabel:
            order = {h: i + 1 for i, h in enumerate(sorted(heights))}
            comps = [tuple((a, order[h]) for a, h in comp) for comp in comps]
        elif sorted(heights) != list(range(1, len(heights) + 1)):
            raise QuiverError("heights must be exactly 1..N")
        comps = [_canonical_component(quiver, comp) for comp in comps]
        comps.sort(key=lambda comp: _component_key(quiver, comp))
        for v in idempotents:
            if v not in quiver.vertices:
                raise QuiverError(f"unknown vertex {v!r}")
        return HeightMonomial(tuple(comps), tuple(sorted(idempotents)))

    @property
    def letters(self) -> int:
        return sum(len(c) for c in self.components)

    @property
    def weight(self) -> int:
        return self.letters + len(self.idempotents)

    def sort_key(self, quiver: Quiver):
        comp_keys = tuple(_component_key(quiver, c) for c in self.components)
        idem_keys = tuple(quiver.vertex_index(v) for v in self.idempotents)
        return (self.weight, len(self.components), comp_keys, idem_keys)

    def __str__(self) -> str:
        parts = []
        for comp in self.components:
            inner = ",".join(f"({a},{h})" for a, h in comp)
            parts.append(f"h[{inner}]")
        parts.extend(f"e({v})" for v in self.idempotents)
        return " & ".join(parts) if parts else "1"


def _canonical_component(quiver: Quiver, comp: Component) -> Component:
    word = tuple(a for a, _ in comp)
    rotated = canonical_rotation(quiver, word)
    best = None
    for k in range(len(comp)):
        cand = comp[k:] + comp[:k]
        if tuple(a for a, _ in cand) == rotated:
            if best is None or cand[0][1] < best[0][1]:
                best = cand
    return best


def _component_key(quiver: Quiver, comp: Component):
    return (
        len(comp),
        tuple(quiver.arrow_index(a) for a, _ in comp),
        tuple(h for _, h in comp),
    )


class HeightSum:
    """Finite rational[hbar] combination of height monomials."""

    def __init__(self, quiver: Quiver, terms=None):
        self.quiver = quiver
        self.terms: dict[HeightMonomial, HPoly] = {}
        if terms:
            for mono, coeff in terms.items():
                if not isinstance(coeff, HPoly):
                    coeff = HPoly.const(coeff)
                if coeff:
                    self.terms[mono] = coeff

    @classmethod
    def zero(cls, quiver: Quiver) -> "HeightSum":
        return cls(quiver)

    @classmethod
    def unit(cls, quiver: Quiver) -> "HeightSum":
        return cls(quiver, {HeightMonomial((), ()): ONE})

    def _check(self, other: "HeightSum"):
        if self.quiver is not other.quiver and self.quiver != other.quiver:
            raise QuiverError("height sums live over different quivers")

    def __add__(self, other: "HeightSum") -> "HeightSum":
        self._check(other)
        out = dict(self.terms)
        for mono, coeff in other.terms.items():
            total = out.get(mono, HPoly()) + coeff
            if total:
                out[mono] = total
            else:
                out.pop(mono, None)
        return HeightSum(self.quiver, out)

    def __neg__(self) -> "HeightSum":
        return HeightSum(self.quiver, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "HeightSum") -> "HeightSum":
        return self + (-other)

    def scale(self, coeff) -> "HeightSum":
        if not isinstance(coeff, HPoly):
            coeff = HPoly.const(coeff)
        return HeightSum(self.quiver, {m: c * coeff for m, c in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def max_letters(self) -> int:
        return max((m.letters for m in self.terms), default=0)

    def vector(self, htrunc: int) -> dict:
        """Sparse vector keyed by (monomial key, hbar power), truncated."""
        out = {}
        for mono, coeff in self.terms.items():
            key = mono.sort_key(self.quiver)
            for power, value in coeff.coeffs.items():
                if power <= htrunc:
                    out[(key, power)] = value
        return out

    def at_hbar_zero(self) -> dict:
        """Sparse rational vector of the hbar^0 layer, keyed by monomial key."""
        out = {}
        for mono, coeff in self.terms.items():
            value = coeff.at_zero()
            if value:
                out[mono.sort_key(self.quiver)] = value
        return out

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, HeightSum)
            and self.quiver == other.quiver
            and self.terms == other.terms
        )

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        items = sorted(self.terms.items(), key=lambda kv: kv[0].sort_key(self.quiver))
        parts = []
        for mono, coeff in items:
            cs = str(coeff)
            if cs == "1":
                parts.append(str(mono) if str(mono) != "1" else "1")
            elif cs == "-1":
                parts.append(f"-{mono}")
            elif "+" in cs or (cs.count("-") and not cs.startswith("-")) or " " in cs:
                parts.append(f"({cs})*{mono}" if str(mono) != "1" else f"({cs})")
            else:
                parts.append(f"{cs}*{mono}" if str(mono) != "1" else cs)
        text = parts[0]
        for part in parts[1:]:
            text += " - " + part[1:] if part.startswith("-") else " + " + part
        return text

    __repr__ = __str__


# --- lifting and the PBW basis ---------------------------------------------


def lift_necklace(quiver: Quiver, neck: Necklace) -> HeightMonomial:
    """Canonical lift: heights 1..k along the canonical rotation; idempotent
    necklaces become idempotent factors."""
    if neck.is_idempotent:
        return HeightMonomial((), (neck.base,))
    comp = tuple((a, i + 1) for i, a in enumerate(neck.word))
    return HeightMonomial.make(quiver, [comp])


def lift(x: NecklaceSum) -> HeightSum:
    return HeightSum(
        x.quiver,
        {lift_necklace(x.quiver, n): HPoly.const(c) for n, c in x.terms.items()},
    )


def pbw_monomial(quiver: Quiver, necklaces: list[Necklace]) -> HeightMonomial:
    """The canonical basis monomial on a multiset of necklaces: components in
    canonical order, heights assigned block-sequentially."""
    idems = [n.base for n in necklaces if n.is_idempotent]
    words = sorted(
        (n.word for n in necklaces if not n.is_idempotent),
        key=lambda w: (len(w), tuple(quiver.arrow_index(a) for a in w)),
    )
    comps = []
    next_height = 1
    for word in words:
        comps.append(tuple((a, next_height + i) for i, a in enumerate(word)))
        next_height += len(word)
    return HeightMonomial.make(quiver, comps, idems)


def pbw_basis(quiver: Quiver, maxdeg: int) -> list[HeightMonomial]:
    """All canonical basis monomials of weight <= maxdeg (letters plus
    idempotent factors), including the empty monomial 1."""
    atoms: list[tuple[int, Necklace]] = []
    for v in quiver.vertices:
        atoms.append((1, Necklace.idempotent(quiver, v)))
    seen = set()
    for start, word in quiver.cycles(maxdeg):
        neck = Necklace.make(quiver, word)
        if neck not in seen:
            seen.add(neck)
            atoms.append((neck.degree(), neck))
    atoms.sort(key=lambda pair: (pair[0], pair[1].sort_key(quiver)))

    out: list[HeightMonomial] = []

    def build(start: int, budget: int, chosen: list[Necklace]):
        out.append(pbw_monomial(quiver, chosen))
        for i in range(start, len(atoms)):
            w, neck = atoms[i]
            if w > budget:
                continue
            chosen.append(neck)
            build(i, budget - w, chosen)
            chosen.pop()

    build(0, maxdeg, [])
    uniq = {}
    for mono in out:
        uniq.setdefault(mono.sort_key(quiver), mono)
    return [uniq[k] for k in sorted(uniq)]


# --- skein rewriting --------------------------------------------------------


def _slots(components: list[list[tuple[str, int]]]):
    """(component index, position) for every letter slot, listing order."""
    return [(ci, pos) for ci, comp in enumerate(components) for pos in range(len(comp))]


def _contraction(
    quiver: Quiver,
    components: list[list[tuple[str, int]]],
    idempotents: tuple[str, ...],
    lo: tuple[int, int],
    hi: tuple[int, int],
) -> HeightMonomial:
    """The glued/split monomial for cut slots lo (lower height) and hi."""
    (ci, pi), (cj, pj) = lo, hi
    new_comps = [list(c) for k, c in enumerate(components) if k not in (ci, cj)]
    new_idems = list(idempotents)
    if ci == cj:
        comp = components[ci]
        arc1 = arc_between(comp, pi, pj)
        arc2 = arc_between(comp, pj, pi)
        for arc, cut in ((arc1, pi), (arc2, pj)):
            if arc:
                new_comps.append(list(arc))
            else:
                new_idems.append(quiver.target[comp[cut][0]])
    else:
        glued = arc_after(tuple(components[ci]), pi) + arc_after(tuple(components[cj]), pj)
        if glued:
            new_comps.append(list(glued))
        else:
            new_idems.append(quiver.target[components[ci][pi][0]])
    return HeightMonomial.make(quiver, new_comps, tuple(new_idems), relabel=True)


def arc_between(comp, i, j):
    """Letters strictly between positions i and j, read cyclically from i."""
    n = len(comp)
    out = []
    k = (i + 1) % n
    while k != j:
        out.append(comp[k])
        k = (k + 1) % n
    return tuple(out)


def _target_heights(quiver: Quiver, components: list[list[tuple[str, int]]]):
    """PBW height of every slot: blocks follow the canonical component order,
    heights run along each component from its canonical first letter."""
    order = sorted(
        range(len(components)),
        key=lambda ci: _component_key(quiver, tuple(components[ci])),
    )
    target = {}
    next_height = 1
    for ci in order:
        for pos in range(len(components[ci])):
            target[(ci, pos)] = next_height
            next_height += 1
    return target


class Rewriter:
    """Skein normal-form computer with a per-(quiver, convention) memo."""

    def __init__(self, quiver: Quiver, convention: SkeinConvention = DEFAULT_CONVENTION):
        self.quiver = quiver
        self.convention = convention
        self._memo: dict[HeightMonomial, dict[HeightMonomial, HPoly]] = {}

    def normal_form(self, x: HeightSum) -> HeightSum:
        out = HeightSum.zero(self.quiver)
        acc: dict[HeightMonomial, HPoly] = {}
        for mono, coeff in x.terms.items():
            for nf, c in self.monomial_normal_form(mono).items():
                total = acc.get(nf, HPoly()) + coeff * c
                if total:
                    acc[nf] = total
                else:
                    acc.pop(nf, None)
        out.terms = acc
        return out

    def monomial_normal_form(self, mono: HeightMonomial) -> dict[HeightMonomial, HPoly]:
        cached = self._memo.get(mono)
        if cached is None:
            cached = self._compute(mono, rng=None)
            self._memo[mono] = cached
        return cached

    def monomial_normal_form_random(self, mono: HeightMonomial, rng: random.Random):
        """Same normal form via randomized swap choices (confluence checks)."""
        return self._compute(mono, rng=rng)

    def _compute(self, mono: HeightMonomial, rng):
        quiver = self.quiver
        components = [list(c) for c in mono.components]
        slots = _slots(components)
        target = _target_heights(quiver, components)
        contractions: list[tuple[HPoly, HeightMonomial]] = []

        def height_of(slot):
            ci, pos = slot
            return components[ci][pos][1]

        def set_height(slot, h):
            ci, pos = slot
            components[ci][pos] = (components[ci][pos][0], h)

        while True:
            by_height = {height_of(s): s for s in slots}
            n = len(slots)
            candidates = []
            for h in range(1, n):
                lo, hi = by_height[h], by_height[h + 1]
                # the swap reduces inversions iff the lower height sits later
                # in the target listing
                if target[lo] > target[hi]:
                    candidates.append(h)
            if not candidates:
                break
            h = rng.choice(candidates) if rng is not None else candidates[0]
            lo, hi = by_height[h], by_height[h + 1]
            p = components[lo[0]][lo[1]][0]
            q = components[hi[0]][hi[1]][0]
            pairing = generator_pairing(quiver, p, q, self.convention.pairing_sign)
            if pairing:
                power = 1 if lo[0] == hi[0] else self.convention.inter_hbar_power
                coeff = HPoly.hbar(power, pairing)
                contractions.append(
                    (coeff, _contraction(quiver, components, mono.idempotents, lo, hi))
                )
            set_height(lo, h + 1)
            set_height(hi, h)

        settled = HeightMonomial.make(
            quiver, [tuple(c) for c in components], mono.idempotents
        )
        result: dict[HeightMonomial, HPoly] = {settled: ONE}
        for coeff, sub in contractions:
            sub_nf = (
                self.monomial_normal_form(sub)
                if rng is None
                else self.monomial_normal_form_random(sub, rng)
            )
            for nf, c in sub_nf.items():
                total = result.get(nf, HPoly()) + coeff * c
                if total:
                    result[nf] = total
                else:
                    result.pop(nf, None)
        return result

    # --- product ---------------------------------------------------------

    def star(self, x: HeightSum, y: HeightSum) -> HeightSum:
        """The associative product: stack y's heights above x's, normalize."""
        x._check(y)
        acc: dict[HeightMonomial, HPoly] = {}
        for mx, cx in x.terms.items():
            shift = mx.letters
            for my, cy in y.terms.items():
                comps = [list(c) for c in mx.components]
                comps.extend(
                    [(a, h + shift) for a, h in comp] for comp in my.components
                )
                raw = HeightMonomial.make(
                    self.quiver, comps, mx.idempotents + my.idempotents
                )
                coeff = cx * cy
                for nf, c in self.monomial_normal_form(raw).items():
                    total = acc.get(nf, HPoly()) + coeff * c
                    if total:
                        acc[nf] = total
                    else:
                        acc.pop(nf, None)
        out = HeightSum.zero(self.quiver)
        out.terms = acc
        return out

    def commutator(self, x: HeightSum, y: HeightSum) -> HeightSum:
        return self.star(x, y) - self.star(y, x)

    def skein_parts(
        self, mono: HeightMonomial, h: int
    ) -> tuple[HeightMonomial, HPoly | None, HeightMonomial | None]:
        """The pieces (X', coeff, X'') with X - X' - coeff X'' a relation
        generator at adjacent heights (h, h+1); coeff and X'' are None when
        the two letters do not pair."""
        components = [list(c) for c in mono.components]
        slots = _slots(components)
        by_height = {components[ci][pos][1]: (ci, pos) for ci, pos in slots}
        if h not in by_height or h + 1 not in by_height:
            raise QuiverError(f"monomial has no adjacent heights ({h}, {h+1})")
        lo, hi = by_height[h], by_height[h + 1]
        p = components[lo[0]][lo[1]][0]
        q = components[hi[0]][hi[1]][0]

        swapped = [list(c) for c in components]
        swapped[lo[0]][lo[1]] = (p, h + 1)
        swapped[hi[0]][hi[1]] = (q, h)
        xprime = HeightMonomial.make(self.quiver, swapped, mono.idempotents)

        pairing = generator_pairing(self.quiver, p, q, self.convention.pairing_sign)
        if not pairing:
            return xprime, None, None
        power = 1 if lo[0] == hi[0] else self.convention.inter_hbar_power
        xsecond = _contraction(self.quiver, components, mono.idempotents, lo, hi)
        return xprime, HPoly.hbar(power, pairing), xsecond

    def skein_generator(self, mono: HeightMonomial, h: int) -> HeightSum:
        """X - X' - hbar^k <p,q> X'' for the adjacent heights (h, h+1) of X."""
        xprime, coeff, xsecond = self.skein_parts(mono, h)
        terms: dict[HeightMonomial, HPoly] = {mono: ONE}
        terms[xprime] = terms.get(xprime, HPoly()) - ONE
        if coeff is not None:
            terms[xsecond] = terms.get(xsecond, HPoly()) - coeff
        if not terms[xprime]:
            del terms[xprime]
        return HeightSum(self.quiver, terms)


def quantum_moment_components(
    quiver: Quiver,
) -> list[tuple[Component, Fraction]]:
    """sum_a (a,1)(a*,2) - (a*,1)(a,2) with the written rotations kept.

    The rotation matters when the terms are read as matrices over the
    representation space (it fixes which vertex block each word opens at), so
    this returns raw components; canonicalize only when summing traces.
    """
    if not quiver.is_doubled:
        raise QuiverError("quantum moment lives on the doubled quiver")
    out: list[tuple[Component, Fraction]] = []
    for a in quiver.base_arrows():
        rev = quiver.star[a]
        out.append((((a, 1), (rev, 2)), Fraction(1)))
        out.append((((rev, 1), (a, 2)), Fraction(-1)))
    return out


def quantum_moment_raw(quiver: Quiver) -> HeightSum:
    """sum_a h[(a,1),(a*,2)] - h[(a*,1),(a,2)], not normalized."""
    terms: dict[HeightMonomial, HPoly] = {}
    for comp, coeff in quantum_moment_components(quiver):
        mono = HeightMonomial.make(quiver, [comp])
        total = terms.get(mono, HPoly()) + HPoly.const(coeff)
        if total:
            terms[mono] = total
        else:
            terms.pop(mono, None)
    return HeightSum(quiver, terms)


def quantum_moment(rewriter: Rewriter) -> HeightSum:
    """The moment element in PBW normal form."""
    return rewriter.normal_form(quantum_moment_raw(rewriter.quiver))


def quantum_ideal_span(
    rewriter: Rewriter, maxdeg: int, htrunc: int = 4
) -> list[HeightSum]:
    """Independent spanning set (up to hbar-degree htrunc) of the two-sided
    ideal generated by lifts of the cyclified moment ideal, letter-degree
    truncated at maxdeg."""
    from .linalg import RowBasis
    from .necklace import cyclified_ideal_span

    quiver = rewriter.quiver
    gens = [lift(g) for g in cyclified_ideal_span(quiver, maxdeg)]
    basis = RowBasis()
    span: list[HeightSum] = []
    flank_cache: dict[int, list[HeightMonomial]] = {}
    for ghat in gens:
        gdeg = ghat.max_letters()
        budget = maxdeg - gdeg
        if budget < 0:
            continue
        if budget not in flank_cache:
            flank_cache[budget] = pbw_basis(quiver, budget)
        for u in flank_cache[budget]:
            for v in flank_cache[budget]:
                if u.weight + v.weight > budget:
                    continue
                x = rewriter.star(
                    HeightSum(quiver, {u: ONE}),
                    rewriter.star(ghat, HeightSum(quiver, {v: ONE})),
                )
                if x.is_zero():
                    continue
                if basis.add(x.vector(htrunc)):
                    span.append(x)
    return span
