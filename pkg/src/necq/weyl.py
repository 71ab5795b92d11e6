"""Polynomial functions and homogenized differential operators on the
representation space of a (doubled) quiver.

Bases and shapes
----------------
A dimension vector d assigns d_v to each vertex.  The coordinate slot of an
arrow x is a d_{t(x)} x d_{s(x)} matrix: ``x[a][i][j]`` has i < d_{t(a)},
j < d_{s(a)} (0-based internally, 1-based in printed output).  Classically
every arrow of the double carries its own coordinates; the operator algebra
uses coordinates only for the base arrows together with derivations
``D[a][i][j]`` = hbar * d/d(x[a][i][j]), with the reversed arrows realized as
transposed derivations: the coordinate [a*]_{ij} corresponds to D[a][j][i].

The product is normal ordered (all x left of all D) and homogenized:
D[a][i][j] * x[a][k][l] = x[a][k][l] * D[a][i][j] + hbar * delta_ik delta_jl,
extended by the exact one-shot formula for powers.  Setting hbar to zero and
renaming D[a][i][j] -> x[a*][j][i] recovers the classical functions; the
Poisson bracket is *defined* as the hbar-linear term of the lifted commutator,
so {x[a*][i][j], x[a][k][l]} = delta_jk delta_il.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import comb

from .hpoly import HPoly, ONE, HBAR
from .quiver import DimensionError, Quiver, QuiverError, check_dim


Var = tuple[str, int, int]  # (arrow, row at target, column at source)
Mono = tuple[tuple[Var, int], ...]  # sorted ((var, exponent), ...)


def check_var(quiver: Quiver, dim: dict[str, int], var: Var):
    a, i, j = var
    if a not in quiver.source:
        raise QuiverError(f"unknown arrow {a!r}")
    rows = dim[quiver.target[a]]
    cols = dim[quiver.source[a]]
    if not (0 <= i < rows and 0 <= j < cols):
        raise DimensionError(
            f"index ({i + 1},{j + 1}) outside the {rows}x{cols} slot of {a!r}"
        )


def mono_mul(m1: Mono, m2: Mono) -> Mono:
    acc: dict[Var, int] = {}
    for var, exp in itertools.chain(m1, m2):
        acc[var] = acc.get(var, 0) + exp
    return tuple(sorted(acc.items()))


def mono_degree(m: Mono) -> int:
    return sum(exp for _, exp in m)


def _format_mono(xs: Mono, ds: Mono = ()) -> str:
    parts = []
    for mono, kind in ((xs, "x"), (ds, "D")):
        for (a, i, j), exp in mono:
            body = f"{kind}[{a}][{i + 1}][{j + 1}]"
            parts.append(body if exp == 1 else f"{body}^{exp}")
    return "*".join(parts) if parts else "1"


class PolySum:
    """Commutative polynomial in the coordinates of all doubled arrows."""

    def __init__(self, quiver: Quiver, dim: dict[str, int], terms=None):
        self.quiver = quiver
        self.dim = dim
        self.terms: dict[Mono, Fraction] = {}
        if terms:
            for mono, coeff in terms.items():
                coeff = Fraction(coeff)
                if coeff:
                    self.terms[mono] = coeff

    @classmethod
    def zero(cls, quiver, dim):
        return cls(quiver, dim)

    @classmethod
    def variable(cls, quiver, dim, var: Var, coeff=1):
        check_var(quiver, dim, var)
        return cls(quiver, dim, {((var, 1),): Fraction(coeff)})

    @classmethod
    def const(cls, quiver, dim, coeff):
        coeff = Fraction(coeff)
        return cls(quiver, dim, {(): coeff} if coeff else {})

    def __add__(self, other: "PolySum") -> "PolySum":
        out = dict(self.terms)
        for mono, coeff in other.terms.items():
            total = out.get(mono, Fraction(0)) + coeff
            if total:
                out[mono] = total
            else:
                out.pop(mono, None)
        return PolySum(self.quiver, self.dim, out)

    def __neg__(self):
        return PolySum(self.quiver, self.dim, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other: "PolySum") -> "PolySum":
        out: dict[Mono, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                mono = mono_mul(m1, m2)
                total = out.get(mono, Fraction(0)) + c1 * c2
                if total:
                    out[mono] = total
                else:
                    out.pop(mono, None)
        return PolySum(self.quiver, self.dim, out)

    def scale(self, coeff):
        coeff = Fraction(coeff)
        return PolySum(self.quiver, self.dim, {m: c * coeff for m, c in self.terms.items()})

    def is_zero(self):
        return not self.terms

    def degree(self):
        return max((mono_degree(m) for m in self.terms), default=0)

    def vector(self) -> dict:
        return dict(self.terms)

    def __eq__(self, other):
        return (
            isinstance(other, PolySum)
            and self.quiver == other.quiver
            and self.terms == other.terms
        )

    def __str__(self):
        if not self.terms:
            return "0"
        items = sorted(self.terms.items(), key=lambda kv: (mono_degree(kv[0]), kv[0]))
        parts = []
        for mono, coeff in items:
            body = _format_mono(mono)
            if coeff == 1 and body != "1":
                parts.append(body)
            elif coeff == -1 and body != "1":
                parts.append(f"-{body}")
            else:
                parts.append(str(coeff) if body == "1" else f"{coeff}*{body}")
        text = parts[0]
        for part in parts[1:]:
            text += " - " + part[1:] if part.startswith("-") else " + " + part
        return text

    __repr__ = __str__


class WeylSum:
    """Normal-ordered rational[hbar] operator: x-monomial times D-monomial."""

    def __init__(self, quiver: Quiver, dim: dict[str, int], terms=None):
        self.quiver = quiver
        self.dim = dim
        self.terms: dict[tuple[Mono, Mono], HPoly] = {}
        if terms:
            for key, coeff in terms.items():
                if not isinstance(coeff, HPoly):
                    coeff = HPoly.const(coeff)
                if coeff:
                    self.terms[key] = coeff

    @classmethod
    def zero(cls, quiver, dim):
        return cls(quiver, dim)

    @classmethod
    def const(cls, quiver, dim, coeff):
        if not isinstance(coeff, HPoly):
            coeff = HPoly.const(coeff)
        return cls(quiver, dim, {((), ()): coeff} if coeff else {})

    @classmethod
    def coordinate(cls, quiver, dim, var: Var, coeff=1):
        check_var(quiver, dim, var)
        return cls(quiver, dim, {(((var, 1),), ()): coeff})

    @classmethod
    def derivation(cls, quiver, dim, var: Var, coeff=1):
        check_var(quiver, dim, var)
        return cls(quiver, dim, {((), ((var, 1),)): coeff})

    def __add__(self, other: "WeylSum") -> "WeylSum":
        out = dict(self.terms)
        for key, coeff in other.terms.items():
            total = out.get(key, HPoly()) + coeff
            if total:
                out[key] = total
            else:
                out.pop(key, None)
        return WeylSum(self.quiver, self.dim, out)

    def __neg__(self):
        return WeylSum(self.quiver, self.dim, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, coeff):
        if not isinstance(coeff, HPoly):
            coeff = HPoly.const(coeff)
        return WeylSum(self.quiver, self.dim, {k: c * coeff for k, c in self.terms.items()})

    def is_zero(self):
        return not self.terms

    def degree(self):
        return max((mono_degree(x) + mono_degree(d) for x, d in self.terms), default=0)

    def __mul__(self, other: "WeylSum") -> "WeylSum":
        out: dict[tuple[Mono, Mono], HPoly] = {}
        for (x1, d1), c1 in self.terms.items():
            for (x2, d2), c2 in other.terms.items():
                base = c1 * c2
                for (xm, dm), factor in _reorder(d1, x2).items():
                    key = (mono_mul(x1, xm), mono_mul(dm, d2))
                    total = out.get(key, HPoly()) + base * factor
                    if total:
                        out[key] = total
                    else:
                        out.pop(key, None)
        return WeylSum(self.quiver, self.dim, out)

    def commutator(self, other: "WeylSum") -> "WeylSum":
        return self * other - other * self

    def divide_hbar(self) -> "WeylSum":
        return WeylSum(
            self.quiver, self.dim, {k: c.divide_hbar() for k, c in self.terms.items()}
        )

    def vector(self, htrunc: int) -> dict:
        out = {}
        for key, coeff in self.terms.items():
            for power, value in coeff.coeffs.items():
                if power <= htrunc:
                    out[(key, power)] = value
        return out

    def __eq__(self, other):
        return (
            isinstance(other, WeylSum)
            and self.quiver == other.quiver
            and self.terms == other.terms
        )

    def __str__(self):
        if not self.terms:
            return "0"
        items = sorted(
            self.terms.items(),
            key=lambda kv: (mono_degree(kv[0][0]) + mono_degree(kv[0][1]), kv[0]),
        )
        parts = []
        for (xs, ds), coeff in items:
            body = _format_mono(xs, ds)
            cs = str(coeff)
            if cs == "1" and body != "1":
                parts.append(body)
            elif cs == "-1" and body != "1":
                parts.append(f"-{body}")
            elif ("+" in cs) or (" " in cs):
                parts.append(f"({cs})" if body == "1" else f"({cs})*{body}")
            else:
                parts.append(cs if body == "1" else f"{cs}*{body}")
        text = parts[0]
        for part in parts[1:]:
            text += " - " + part[1:] if part.startswith("-") else " + " + part
        return text

    __repr__ = __str__


def _reorder(dmono: Mono, xmono: Mono) -> dict[tuple[Mono, Mono], HPoly]:
    """Normal order D^beta * x^alpha: sum over contractions k of
    prod C(beta,k) C(alpha,k) k! hbar^|k| x^(alpha-k) D^(beta-k)."""
    dmap = dict(dmono)
    xmap = dict(xmono)
    shared = sorted(set(dmap) & set(xmap))
    if not shared:
        return {(xmono, dmono): ONE}
    out: dict[tuple[Mono, Mono], HPoly] = {}
    ranges = [range(min(dmap[v], xmap[v]) + 1) for v in shared]
    for ks in itertools.product(*ranges):
        factor = Fraction(1)
        total_k = 0
        xres = dict(xmap)
        dres = dict(dmap)
        for v, k in zip(shared, ks):
            beta, alpha = dmap[v], xmap[v]
            factor *= comb(beta, k) * comb(alpha, k)
            for m in range(1, k + 1):
                factor *= m
            total_k += k
            if xres[v] == k:
                del xres[v]
            else:
                xres[v] = alpha - k
            if dres[v] == k:
                del dres[v]
            else:
                dres[v] = beta - k
        key = (tuple(sorted(xres.items())), tuple(sorted(dres.items())))
        coeff = HPoly.hbar(total_k, factor) if total_k else HPoly.const(factor)
        out[key] = out.get(key, HPoly()) + coeff
    return out


# --- the classical/quantum dictionary ---------------------------------------


def symbol(op: WeylSum) -> PolySum:
    """hbar -> 0 and D[a][i][j] -> x[a*][j][i]."""
    quiver = op.quiver
    out: dict[Mono, Fraction] = {}
    for (xs, ds), coeff in op.terms.items():
        value = coeff.at_zero()
        if not value:
            continue
        extra: dict[Var, int] = {}
        for (a, i, j), exp in ds:
            star = quiver.star.get(a)
            if star is None:
                raise QuiverError(f"arrow {a!r} has no reversed partner")
            var = (star, j, i)
            extra[var] = extra.get(var, 0) + exp
        mono = mono_mul(xs, tuple(sorted(extra.items())))
        total = out.get(mono, Fraction(0)) + value
        if total:
            out[mono] = total
        else:
            out.pop(mono, None)
    return PolySum(quiver, op.dim, out)


def lift_function(f: PolySum) -> WeylSum:
    """Normal-ordered lift: x[a*][i][j] -> D[a][j][i], base coordinates kept."""
    quiver = f.quiver
    out: dict[tuple[Mono, Mono], HPoly] = {}
    for mono, coeff in f.terms.items():
        xs: dict[Var, int] = {}
        ds: dict[Var, int] = {}
        for (a, i, j), exp in mono:
            base = quiver.star.get(a)
            if a.endswith("*"):
                if base is None:
                    raise QuiverError(f"arrow {a!r} has no reversed partner")
                ds[(base, j, i)] = ds.get((base, j, i), 0) + exp
            else:
                xs[(a, i, j)] = xs.get((a, i, j), 0) + exp
        key = (tuple(sorted(xs.items())), tuple(sorted(ds.items())))
        out[key] = out.get(key, HPoly()) + HPoly.const(coeff)
    return WeylSum(f.quiver, f.dim, out)


def poisson(f: PolySum, g: PolySum) -> PolySum:
    """The bracket induced by the quantization: symbol([lift f, lift g]/hbar)."""
    commutator = lift_function(f).commutator(lift_function(g))
    divided = WeylSum(
        f.quiver, f.dim, {k: c.divide_hbar() for k, c in commutator.terms.items()}
    )
    return symbol(divided)


# --- gl action, characters, comoments ---------------------------------------


def gl_elements(quiver: Quiver, dim: dict[str, int]):
    """(vertex, p, q) for every elementary matrix of prod_v gl(d_v)."""
    for v in quiver.vertices:
        for p in range(dim[v]):
            for q in range(dim[v]):
                yield (v, p, q)


def tau(quiver: Quiver, dim: dict[str, int], vertex: str, p: int, q: int) -> WeylSum:
    """The operator representing the elementary gl(d_vertex) matrix e_pq:

        sum_{a: s(a)=vertex} sum_j x[a][j][p] D[a][j][q]
      - sum_{a: t(a)=vertex} sum_j x[a][q][j] D[a][p][j]

    where a runs over base arrows only (the reversed arrows act through the
    same derivations).
    """
    check_dim(quiver, dim)
    if not (0 <= p < dim[vertex] and 0 <= q < dim[vertex]):
        raise DimensionError(f"gl index ({p + 1},{q + 1}) too large at {vertex!r}")
    out = WeylSum.zero(quiver, dim)
    terms: dict[tuple[Mono, Mono], HPoly] = {}
    for a in quiver.base_arrows():
        if quiver.source[a] == vertex:
            for j in range(dim[quiver.target[a]]):
                key = (((((a, j, p)), 1),), ((((a, j, q)), 1),))
                terms[key] = terms.get(key, HPoly()) + ONE
        if quiver.target[a] == vertex:
            for j in range(dim[quiver.source[a]]):
                key = (((((a, q, j)), 1),), ((((a, p, j)), 1),))
                terms[key] = terms.get(key, HPoly()) - ONE
    out.terms = {k: c for k, c in terms.items() if c}
    return out


def chi_zero(quiver: Quiver, dim: dict[str, int]) -> dict[str, Fraction]:
    """The distinguished character: - sum_{a: s(a)=k} d_{t(a)} at vertex k."""
    out = {}
    for k in quiver.vertices:
        total = Fraction(0)
        for a in quiver.base_arrows():
            if quiver.source[a] == k:
                total -= dim[quiver.target[a]]
        out[k] = total
    return out


def moment_operator(
    quiver: Quiver,
    dim: dict[str, int],
    chi: dict[str, Fraction],
    vertex: str,
    p: int,
    q: int,
) -> WeylSum:
    """(tau - hbar*chi)(e^vertex_pq)."""
    op = tau(quiver, dim, vertex, p, q)
    if p == q and chi.get(vertex):
        op = op - WeylSum.const(quiver, dim, HBAR.scale(chi[vertex]))
    return op


# --- word matrices (shared chaining for classical and quantum traces) -------


def word_blocks(quiver: Quiver, dim: dict[str, int], word: tuple[str, ...]):
    """Index ranges for a cyclic word under the contravariant chaining.

    Letter m contributes the (c_m, c_{m+1}) entry of its slot, with c_m living
    at t(w_m) and c_{m+1} at s(w_m); the junction therefore identifies
    s(w_m) with t(w_{m+1}), whose dimensions must agree (they are the same
    vertex whenever consecutive letters reverse each other, in particular on
    one- and two-vertex doubles).  Returns the list of junction sizes
    [|c_1|, ..., |c_k|].
    """
    sizes = []
    k = len(word)
    for m in range(k):
        here = dim[quiver.target[word[m]]]
        prev = word[m - 1]
        other = dim[quiver.source[prev]]
        if here != other:
            raise DimensionError(
                f"junction between {prev!r} and {word[m]!r} pairs blocks of "
                f"sizes {other} and {here}; this trace convention needs them "
                "equal (use a uniform dimension vector)"
            )
        sizes.append(here)
    return sizes


def letter_variable(quiver: Quiver, letter: str, i: int, j: int) -> tuple[str, Var]:
    """The operator variable for the (i, j) entry of a letter's slot:
    coordinates for base arrows, transposed derivations for reversed ones."""
    if letter.endswith("*"):
        base = quiver.star.get(letter)
        if base is None:
            raise QuiverError(f"arrow {letter!r} has no reversed partner")
        return ("D", (base, j, i))
    return ("x", (letter, i, j))


def open_word_sizes(quiver: Quiver, dim: dict[str, int], word: tuple[str, ...]):
    """Index ranges c_1..c_{k+1} for an open word under the same chaining:
    c_1 at t(w_1), c_{k+1} at s(w_k), interior junctions must agree in size."""
    k = len(word)
    sizes = [dim[quiver.target[word[0]]]]
    for m in range(1, k):
        here = dim[quiver.target[word[m]]]
        other = dim[quiver.source[word[m - 1]]]
        if here != other:
            raise DimensionError(
                f"junction between {word[m - 1]!r} and {word[m]!r} pairs blocks "
                f"of sizes {other} and {here}; this trace convention needs them "
                "equal (use a uniform dimension vector)"
            )
        sizes.append(here)
    sizes.append(dim[quiver.source[word[-1]]])
    return sizes


def word_block_vertex(quiver: Quiver, word: tuple[str, ...]) -> str:
    """The gl block a closed word's matrix contracts against: t(first letter)."""
    return quiver.target[word[0]]


def classical_word_matrix(
    quiver: Quiver, dim: dict[str, int], word: tuple[str, ...]
) -> dict[tuple[int, int], PolySum]:
    """Entries of the product of coordinate slots along a closed word, with
    letter m contributing its (c_m, c_{m+1}) entry; reversed arrows use their
    own classical coordinates (transposed slot)."""
    sizes = open_word_sizes(quiver, dim, word)
    block = sizes[0]
    if sizes[-1] != block:
        raise DimensionError(
            f"word {word!r} is not square at its block: {block} vs {sizes[-1]}"
        )
    k = len(word)
    out: dict[tuple[int, int], dict[Mono, Fraction]] = {}
    for indices in itertools.product(*[range(s) for s in sizes]):
        mono: dict[Var, int] = {}
        for m in range(k):
            i, j = indices[m], indices[m + 1]
            kind, var = letter_variable(quiver, word[m], i, j)
            if kind == "D":
                # classical entry of a reversed arrow: its own coordinate,
                # stored transposed relative to the derivation slot
                base, r, c = var
                var = (quiver.star[base], c, r)
            mono[var] = mono.get(var, 0) + 1
        key = tuple(sorted(mono.items()))
        slot = out.setdefault((indices[0], indices[-1]), {})
        slot[key] = slot.get(key, Fraction(0)) + 1
    return {
        entry: PolySum(quiver, dim, terms) for entry, terms in out.items()
    }


def classical_comoment(
    quiver: Quiver,
    dim: dict[str, int],
    vertex: str,
    p: int,
    q: int,
    lam: dict[str, Fraction] | None = None,
) -> PolySum:
    """tr((moment matrix) e^vertex_pq): the (q, p) entry of the block of the
    classical moment element sitting at ``vertex``."""
    from .necklace import moment

    check_dim(quiver, dim)
    out = PolySum.zero(quiver, dim)
    for (base, word), coeff in moment(quiver, lam).items():
        if word:
            if word_block_vertex(quiver, word) != vertex:
                continue
            entry = classical_word_matrix(quiver, dim, word).get((q, p))
            if entry is not None:
                out = out + entry.scale(coeff)
        elif base == vertex and p == q:
            out = out + PolySum.const(quiver, dim, coeff)
    return out


def all_x_variables(quiver: Quiver, dim: dict[str, int]) -> list[Var]:
    out = []
    for a in quiver.arrows:
        for i in range(dim[quiver.target[a]]):
            for j in range(dim[quiver.source[a]]):
                out.append((a, i, j))
    return out


def operator_variables(quiver: Quiver, dim: dict[str, int]):
    """(kind, var) for the generators of the operator algebra: coordinates and
    derivations of the base arrows."""
    out = []
    for a in quiver.base_arrows():
        for i in range(dim[quiver.target[a]]):
            for j in range(dim[quiver.source[a]]):
                out.append(("x", (a, i, j)))
    for a in quiver.base_arrows():
        for i in range(dim[quiver.target[a]]):
            for j in range(dim[quiver.source[a]]):
                out.append(("D", (a, i, j)))
    return out


def comoment_ideal_span(
    quiver: Quiver,
    dim: dict[str, int],
    maxdeg: int,
    lam: dict[str, Fraction] | None = None,
) -> list[PolySum]:
    """Independent spanning set of the degree-truncated ideal generated by the
    classical comoment entries."""
    from .linalg import RowBasis

    generators = [
        classical_comoment(quiver, dim, v, p, q, lam)
        for v, p, q in gl_elements(quiver, dim)
    ]
    generators = [g for g in generators if not g.is_zero()]
    xvars = all_x_variables(quiver, dim)
    basis = RowBasis()
    span: list[PolySum] = []
    budget = maxdeg - 2
    for total in range(budget + 1):
        for combo in itertools.combinations_with_replacement(xvars, total):
            acc: dict[Var, int] = {}
            for var in combo:
                acc[var] = acc.get(var, 0) + 1
            mono = PolySum(quiver, dim, {tuple(sorted(acc.items())): Fraction(1)})
            for g in generators:
                x = mono * g
                if x.is_zero():
                    continue
                if basis.add(x.vector()):
                    span.append(x)
    return span


def quantum_reduction_span(
    quiver: Quiver,
    dim: dict[str, int],
    chi: dict[str, Fraction],
    maxdeg: int,
    htrunc: int = 4,
) -> list[WeylSum]:
    """Independent spanning set of the degree-truncated left ideal generated
    by the shifted gl action (tau - hbar*chi)."""
    from .linalg import RowBasis

    generators = [
        moment_operator(quiver, dim, chi, v, p, q)
        for v, p, q in gl_elements(quiver, dim)
    ]
    generators = [g for g in generators if not g.is_zero()]
    opvars = operator_variables(quiver, dim)
    basis = RowBasis()
    span: list[WeylSum] = []
    budget = maxdeg - 2
    for total in range(budget + 1):
        for combo in itertools.combinations_with_replacement(opvars, total):
            xs: dict[Var, int] = {}
            ds: dict[Var, int] = {}
            for kind, var in combo:
                part = xs if kind == "x" else ds
                part[var] = part.get(var, 0) + 1
            mono = WeylSum(
                quiver,
                dim,
                {(tuple(sorted(xs.items())), tuple(sorted(ds.items()))): ONE},
            )
            for g in generators:
                x = mono * g
                if x.is_zero():
                    continue
                if basis.add(x.vector(htrunc)):
                    span.append(x)
    return span
