"""Trace maps from necklace and height elements into functions and operators.

A closed word turns into a sum over index chains: letter m contributes the
(c_m, c_{m+1}) entry of its coordinate slot (contravariant chaining, see
weyl.word_blocks), idempotent factors contribute the scalar d_v, and on the
quantum side the entry variables of all components multiply in height order --
lowest height leftmost for operator_order "low-left", rightmost for
"low-right".  Reversed arrows contribute their own coordinates classically and
transposed derivations quantumly, so setting hbar to zero intertwines the two
traces with the symbol map by construction; all the content is in which
operator orderings make the quantized statements exact.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .hpoly import HPoly, ONE
from .heights import (
    HeightMonomial,
    HeightSum,
    Rewriter,
    SkeinConvention,
    DEFAULT_CONVENTION,
    quantum_moment_components,
)
from .necklace import Necklace, NecklaceSum
from .quiver import Quiver, QuiverError, check_dim
from .weyl import (
    Mono,
    PolySum,
    WeylSum,
    check_var,
    letter_variable,
    moment_operator,
    open_word_sizes,
    word_block_vertex,
    word_blocks,
)


def _mono_inc(mono: Mono, var, delta: int) -> Mono:
    acc = dict(mono)
    acc[var] = acc.get(var, 0) + delta
    if not acc[var]:
        del acc[var]
    return tuple(sorted(acc.items()))


def _mul_single(terms: dict, kind: str, var) -> dict:
    """Multiply a normal-ordered term dict by one variable on the right."""
    out: dict[tuple[Mono, Mono], HPoly] = {}

    def put(key, coeff):
        total = out.get(key, HPoly()) + coeff
        if total:
            out[key] = total
        else:
            out.pop(key, None)

    for (xs, ds), coeff in terms.items():
        if kind == "D":
            put((xs, _mono_inc(ds, var, 1)), coeff)
        else:
            put((_mono_inc(xs, var, 1), ds), coeff)
            beta = dict(ds).get(var, 0)
            if beta:
                put((xs, _mono_inc(ds, var, -1)), coeff * HPoly.hbar(1, beta))
    return out


def _tup_inc(mono: Mono, var, delta: int) -> Mono:
    """Adjust one exponent in a sorted ((var, power), ...) tuple."""
    for idx, (v, p) in enumerate(mono):
        if v == var:
            p += delta
            if p:
                return mono[:idx] + ((v, p),) + mono[idx + 1 :]
            return mono[:idx] + mono[idx + 1 :]
        if v > var:
            return mono[:idx] + ((var, delta),) + mono[idx:]
    return mono + ((var, delta),)


def _raw_add(acc: dict, key, coeffs: dict) -> None:
    slot = acc.get(key)
    if slot is None:
        acc[key] = dict(coeffs)
        return
    for power, c in coeffs.items():
        total = slot.get(power, Fraction(0)) + c
        if total:
            slot[power] = total
        else:
            del slot[power]
    if not slot:
        del acc[key]


def _mul_raw(terms: dict, kind: str, var) -> dict:
    """Right-multiply raw terms {(xs, ds): {hbar_power: coeff}} by a variable."""
    out: dict = {}
    if kind == "D":
        for (xs, ds), coeffs in terms.items():
            _raw_add(out, (xs, _tup_inc(ds, var, 1)), coeffs)
        return out
    for (xs, ds), coeffs in terms.items():
        _raw_add(out, (_tup_inc(xs, var, 1), ds), coeffs)
        beta = 0
        for v, p in ds:
            if v == var:
                beta = p
                break
        if beta:
            shifted = {power + 1: c * beta for power, c in coeffs.items()}
            _raw_add(out, (xs, _tup_inc(ds, var, -1)), shifted)
    return out


def _trace_components(quiver, dim, components, low_left: bool) -> dict:
    """Joint trace of a product of height-carrying closed words.

    Sums the product of entry variables over all junction index chains, with
    the factors multiplied in height order.  Junction indices are bound lazily
    (at the first factor touching them) so that partial products are shared
    across every completion of the remaining indices.
    """
    plan = []
    for ci, comp in enumerate(components):
        word = tuple(a for a, _ in comp)
        sizes = word_blocks(quiver, dim, word)
        k = len(comp)
        for m, (letter, height) in enumerate(comp):
            a, b = (ci, m), (ci, (m + 1) % k)
            table = [
                [letter_variable(quiver, letter, i, j) for j in range(sizes[b[1]])]
                for i in range(sizes[m])
            ]
            plan.append((height, a, b, table))
    plan.sort(key=lambda f: f[0], reverse=not low_left)
    depth_max = len(plan)
    acc: dict = {}
    bound: dict = {}

    def rec(depth: int, terms: dict) -> None:
        if depth == depth_max:
            for key, coeffs in terms.items():
                _raw_add(acc, key, coeffs)
            return
        _, a, b, table = plan[depth]
        a_new = a not in bound
        rows = range(len(table)) if a_new else (bound[a],)
        for i in rows:
            if a_new:
                bound[a] = i
            b_new = b not in bound
            cols = range(len(table[i])) if b_new else (bound[b],)
            for j in cols:
                if b_new:
                    bound[b] = j
                kind, var = table[i][j]
                rec(depth + 1, _mul_raw(terms, kind, var))
            if b_new:
                del bound[b]
        if a_new:
            del bound[a]

    rec(0, {((), ()): {0: Fraction(1)}})
    return acc


class TraceContext:
    """Carries (quiver, dim, convention) plus the trace/rewrite memo caches."""

    def __init__(
        self,
        quiver: Quiver,
        dim: dict[str, int],
        convention: SkeinConvention = DEFAULT_CONVENTION,
    ):
        check_dim(quiver, dim)
        if not quiver.is_doubled:
            raise QuiverError("traces live on the doubled quiver")
        self.quiver = quiver
        self.dim = dim
        self.convention = convention
        self.rewriter = Rewriter(quiver, convention)
        self._qtrace_memo: dict[HeightMonomial, WeylSum] = {}

    # --- classical -------------------------------------------------------

    def classical_trace(self, x: NecklaceSum) -> PolySum:
        out = PolySum.zero(self.quiver, self.dim)
        for neck, coeff in x.terms.items():
            out = out + self._necklace_trace(neck).scale(coeff)
        return out

    def _necklace_trace(self, neck: Necklace) -> PolySum:
        if neck.is_idempotent:
            return PolySum.const(self.quiver, self.dim, self.dim[neck.base])
        word = neck.word
        sizes = word_blocks(self.quiver, self.dim, word)
        k = len(word)
        acc: dict[Mono, Fraction] = {}
        for indices in itertools.product(*[range(s) for s in sizes]):
            mono: dict = {}
            for m in range(k):
                i, j = indices[m], indices[(m + 1) % k]
                kind, var = letter_variable(self.quiver, word[m], i, j)
                if kind == "D":
                    base, r, c = var
                    var = (self.quiver.star[base], c, r)
                mono[var] = mono.get(var, 0) + 1
            key = tuple(sorted(mono.items()))
            acc[key] = acc.get(key, Fraction(0)) + 1
        return PolySum(self.quiver, self.dim, acc)

    # --- quantum -----------------------------------------------------------

    def quantum_trace(self, x: HeightSum) -> WeylSum:
        out = WeylSum.zero(self.quiver, self.dim)
        for mono, coeff in x.terms.items():
            out = out + self._monomial_qtrace(mono).scale(coeff)
        return out

    def _monomial_qtrace(self, mono: HeightMonomial) -> WeylSum:
        cached = self._qtrace_memo.get(mono)
        if cached is not None:
            return cached
        result = self._monomial_qtrace_uncached(mono)
        self._qtrace_memo[mono] = result
        return result

    def _monomial_qtrace_uncached(self, mono: HeightMonomial) -> WeylSum:
        scalar = Fraction(1)
        for v in mono.idempotents:
            scalar *= self.dim[v]
        if not mono.components:
            return WeylSum.const(self.quiver, self.dim, scalar)
        acc = _trace_components(
            self.quiver,
            self.dim,
            mono.components,
            self.convention.operator_order == "low-left",
        )
        result_terms: dict[tuple[Mono, Mono], HPoly] = {}
        for key, coeffs in acc.items():
            value = HPoly({p: c * scalar for p, c in coeffs.items()})
            if value:
                result_terms[key] = value
        return WeylSum(self.quiver, self.dim, result_terms)

    def quantum_word_matrix(
        self, component: tuple[tuple[str, int], ...]
    ) -> dict[tuple[int, int], WeylSum]:
        """Open-ended entries of one height component, multiplied in height
        order; the matrix sits at the block of t(first letter)."""
        word = tuple(a for a, _ in component)
        sizes = open_word_sizes(self.quiver, self.dim, word)
        block = sizes[0]
        if sizes[-1] != block:
            raise QuiverError(f"component {component!r} is not square at its block")
        k = len(word)
        low_left = self.convention.operator_order == "low-left"
        out: dict[tuple[int, int], dict] = {}
        for indices in itertools.product(*[range(s) for s in sizes]):
            factors = []
            for m, (letter, height) in enumerate(component):
                i, j = indices[m], indices[m + 1]
                factors.append((height, letter_variable(self.quiver, letter, i, j)))
            factors.sort(key=lambda f: f[0], reverse=not low_left)
            terms = {((), ()): ONE}
            for _, (kind, var) in factors:
                terms = _mul_single(terms, kind, var)
            slot = out.setdefault((indices[0], indices[-1]), {})
            for key, coeff in terms.items():
                total = slot.get(key, HPoly()) + coeff
                if total:
                    slot[key] = total
                else:
                    slot.pop(key, None)
        return {
            entry: WeylSum(self.quiver, self.dim, terms)
            for entry, terms in out.items()
        }


def quantum_moment_check(
    ctx: TraceContext, chi: dict[str, Fraction]
) -> list[dict]:
    """Compare -tr([moment element] e^k_pq) against (tau - hbar*chi)(e^k_pq)
    for every elementary gl matrix; returns one record per (k, p, q)."""
    blocks: dict[str, dict[tuple[int, int], WeylSum]] = {}
    for comp, coeff in quantum_moment_components(ctx.quiver):
        vertex = word_block_vertex(ctx.quiver, tuple(a for a, _ in comp))
        matrix = ctx.quantum_word_matrix(comp)
        target = blocks.setdefault(vertex, {})
        for entry, op in matrix.items():
            before = target.get(entry)
            scaled = op.scale(coeff)
            target[entry] = scaled if before is None else before + scaled
    records = []
    for vertex in ctx.quiver.vertices:
        d = ctx.dim[vertex]
        block = blocks.get(vertex, {})
        for p in range(d):
            for q in range(d):
                entry = block.get((q, p))
                lhs = (
                    WeylSum.zero(ctx.quiver, ctx.dim) if entry is None else -entry
                )
                rhs = moment_operator(ctx.quiver, ctx.dim, chi, vertex, p, q)
                records.append(
                    {
                        "vertex": vertex,
                        "p": p,
                        "q": q,
                        "lhs": lhs,
                        "rhs": rhs,
                        "equal": lhs == rhs,
                    }
                )
    return records
