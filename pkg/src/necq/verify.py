"""Convention calibration and the six-face verification of the reduction cube.

The cube relates four algebras: necklace elements and their quantization
upstairs, polynomial functions and homogenized differential operators on the
representation space downstairs, with classical/quantum ideals cutting out the
reductions.  Each face is an executable identity or a certified ideal
membership at a degree truncation:

    TOP     quantum traces of quantum-ideal elements land in the left ideal
            generated by the moment operators (tau - hbar*chi0)(e), checked
            three ways: the entrywise moment-matrix identity, certified span
            membership, and coset agreement on sampled PBW monomials;
    BOTTOM  classical traces of cyclified-ideal elements land in the ideal
            generated by the comoment polynomials;
    BACK    hbar-linear term of traced commutators equals the Poisson bracket
            of the classical traces;
    FRONT   the same identity after reduction modulo the comoment ideal;
    LEFT    PBW monomials over necklaces outside the classical ideal stay
            independent modulo (quantum ideal + hbar);
    RIGHT   symbol-level surrogate: symbols of the moment operators match the
            negated comoment polynomials, and the scalar direction killed by
            tau pairs nontrivially with chi0.

Calibration enumerates all eight skein-convention switch settings and keeps
the ones under which (i) the quantum trace annihilates every skein-relation
generator up to a letter bound, (ii) traced commutators are hbar-divisible,
and (iii) the hbar-linear term reproduces the Poisson bracket.  Anything other
than exactly one survivor is a hard error carrying the full evidence table.
"""

from __future__ import annotations

import itertools
import json
import random
from fractions import Fraction

from .hpoly import HPoly
from .heights import (
    ALL_CONVENTIONS,
    HeightMonomial,
    HeightSum,
    Rewriter,
    SkeinConvention,
    lift,
    pbw_basis,
    quantum_ideal_span,
)
from .linalg import RowBasis
from .necklace import Necklace, NecklaceSum, bracket, cyclified_ideal_span
from .quiver import Quiver, QuiverError, check_dim
from .traces import TraceContext, quantum_moment_check
from .weyl import (
    PolySum,
    WeylSum,
    chi_zero,
    classical_comoment,
    comoment_ideal_span,
    gl_elements,
    moment_operator,
    poisson,
    quantum_reduction_span,
    symbol,
    tau,
)

FACE_ORDER = ("TOP", "BOTTOM", "BACK", "FRONT", "LEFT", "RIGHT")

REPORT_SCHEMA = "necq-verification-report/1"


class ResourceLimit(RuntimeError):
    """An enumeration bound was exceeded; nothing was silently truncated."""


class CalibrationError(RuntimeError):
    """No unique admissible convention; carries the per-convention evidence."""

    def __init__(self, message: str, evidence: list[dict]):
        super().__init__(message)
        self.evidence = evidence


# --- exhaustive skein-generator annihilation --------------------------------


def _canonical_cycle_words(quiver: Quiver, max_len: int) -> dict[int, list]:
    """Canonical cyclic words grouped by length, sorted for determinism."""
    by_len: dict[int, set] = {}
    for _, word in quiver.cycles(max_len):
        if not word:
            continue
        neck = Necklace.make(quiver, word)
        by_len.setdefault(len(word), set()).add(neck.word)
    return {
        n: sorted(words, key=lambda w: tuple(quiver.arrow_index(a) for a in w))
        for n, words in sorted(by_len.items())
    }


def _shapes(quiver: Quiver, letters: int, max_len_cache: dict[int, list]):
    """Multisets of canonical cyclic words with the given total letter count,
    as non-decreasing tuples over the deterministic word order."""
    words: list[tuple[str, ...]] = []
    for n in sorted(max_len_cache):
        if n <= letters:
            words.extend(max_len_cache[n])
    out: list[tuple[tuple[str, ...], ...]] = []

    def build(start: int, budget: int, chosen: list):
        if budget == 0:
            out.append(tuple(chosen))
            return
        for idx in range(start, len(words)):
            w = words[idx]
            if len(w) > budget:
                continue
            chosen.append(w)
            build(idx, budget - len(w), chosen)
            chosen.pop()

    build(0, letters, [])
    return out


def _shape_monomials(quiver: Quiver, shape) -> list[HeightMonomial]:
    """All height monomials whose underlying cyclic words form ``shape``."""
    total = sum(len(w) for w in shape)
    seen: set[HeightMonomial] = set()
    out: list[HeightMonomial] = []
    for perm in itertools.permutations(range(1, total + 1)):
        pos = 0
        comps = []
        for w in shape:
            comps.append(tuple(zip(w, perm[pos : pos + len(w)])))
            pos += len(w)
        mono = HeightMonomial.make(quiver, comps)
        if mono not in seen:
            seen.add(mono)
            out.append(mono)
    return out


_SWEEP_CACHE: dict[tuple, int] = {}


def _generator_residual(ctx, tx, txp, coeff, xsecond):
    """Tr(X) - Tr(X') - coeff Tr(X'') as a sparse term dict (empty == zero)."""
    residual: dict = {}
    for key in tx.keys() | txp.keys():
        a = tx.get(key)
        b = txp.get(key)
        if a == b:
            continue
        residual[key] = (a - b) if a is not None and b is not None else (a or -b)
    if coeff is not None:
        for key, value in ctx._monomial_qtrace(xsecond).terms.items():
            total = residual.get(key, HPoly()) - coeff * value
            if total:
                residual[key] = total
            else:
                residual.pop(key, None)
    return residual


def skein_annihilation_sweep(
    ctx: TraceContext,
    max_letters: int,
    fail_fast: bool = False,
    letter_limit: int = 8,
):
    """Check Tr^q(generator) == 0 for every skein-relation generator with at
    most ``max_letters`` letters; returns (checked, failures).

    Each generator X - X' - coeff X'' is checked once per unordered pair
    {X, X'} (the X' side is the same relation negated), by comparing the
    sparse difference of the cached X, X' traces against the contraction's
    trace.  Clean full sweeps are cached per (quiver, dim, convention).
    """
    if max_letters > letter_limit:
        raise ResourceLimit(
            f"skein sweep requested {max_letters} letters, limit {letter_limit}"
        )
    quiver = ctx.quiver
    cache_key = (
        quiver,
        tuple(sorted(ctx.dim.items())),
        ctx.convention,
        max_letters,
    )
    cached = _SWEEP_CACHE.get(cache_key)
    if cached is not None:
        return cached, []
    word_cache = _canonical_cycle_words(quiver, max_letters)
    failures: list[tuple[HeightMonomial, int, WeylSum]] = []
    checked = 0
    for letters in range(2, max_letters + 1):
        for shape in _shapes(quiver, letters, word_cache):
            local: dict[HeightMonomial, dict] = {}
            for mono in _shape_monomials(quiver, shape):
                local[mono] = ctx._monomial_qtrace_uncached(mono).terms
            for mono, tx in local.items():
                mono_key = (mono.components, mono.idempotents)
                for h in range(1, letters):
                    xprime, coeff, xsecond = ctx.rewriter.skein_parts(mono, h)
                    if (xprime.components, xprime.idempotents) < mono_key:
                        continue  # counted from the partner's side
                    checked += 1
                    residual = _generator_residual(
                        ctx, tx, local[xprime], coeff, xsecond
                    )
                    if residual:
                        witness = WeylSum(quiver, ctx.dim, residual)
                        failures.append((mono, h, witness))
                        if fail_fast:
                            return checked, failures
    if not failures:
        _SWEEP_CACHE[cache_key] = checked
    return checked, failures


# --- calibration -------------------------------------------------------------


def _degree_le_necklaces(quiver: Quiver, maxdeg: int) -> list[Necklace]:
    out = [Necklace.idempotent(quiver, v) for v in quiver.vertices]
    seen = set()
    for _, word in quiver.cycles(maxdeg):
        if word:
            neck = Necklace.make(quiver, word)
            if neck not in seen:
                seen.add(neck)
                out.append(neck)
    out.sort(key=lambda n: n.sort_key(quiver))
    return out


def _lie_pair_check(ctx: TraceContext, x: Necklace, y: Necklace):
    """Returns (hbar_divisible, identity_holds) for one necklace pair."""
    xs = NecklaceSum(ctx.quiver, {x: Fraction(1)})
    ys = NecklaceSum(ctx.quiver, {y: Fraction(1)})
    comm = ctx.rewriter.commutator(lift(xs), lift(ys))
    traced = ctx.quantum_trace(comm)
    try:
        linear = traced.divide_hbar()
    except ValueError:
        return False, False
    lhs = symbol(linear)
    rhs = poisson(ctx.classical_trace(xs), ctx.classical_trace(ys))
    return True, lhs == rhs


def calibrate(
    quiver: Quiver,
    dim: dict[str, int],
    max_letters: int = 6,
) -> tuple[SkeinConvention, list[dict]]:
    """Select the unique convention passing all three checks; hard error with
    the full evidence table otherwise."""
    if len(quiver.vertices) > 2 or len(quiver.base_arrows()) > 2:
        raise QuiverError("calibration expects a quiver with <= 2 vertices and arrows")
    if any(d > 2 for d in dim.values()):
        raise QuiverError("calibration expects dimension entries <= 2")
    pairs = list(
        itertools.product(_degree_le_necklaces(quiver, 2), repeat=2)
    )
    evidence: list[dict] = []
    survivors: list[SkeinConvention] = []
    for conv in ALL_CONVENTIONS:
        ctx = TraceContext(quiver, dim, conv)
        record = {"convention": conv.describe(), "passed": False,
                  "failed_check": None, "witness": None}
        ok = True
        for x, y in pairs:
            divisible, identity = _lie_pair_check(ctx, x, y)
            if not divisible:
                record["failed_check"] = "hbar-divisibility"
                record["witness"] = f"pair ({x}, {y})"
                ok = False
                break
            if not identity:
                record["failed_check"] = "poisson-identity"
                record["witness"] = f"pair ({x}, {y})"
                ok = False
                break
        if ok:
            checked, failures = skein_annihilation_sweep(
                ctx, max_letters, fail_fast=True
            )
            if failures:
                mono, h, residue = failures[0]
                record["failed_check"] = "generator-annihilation"
                record["witness"] = f"generator ({mono}, h={h}) -> {residue}"
                ok = False
            else:
                record["cases"] = checked
        record["passed"] = ok
        evidence.append(record)
        if ok:
            survivors.append(conv)
    if len(survivors) != 1:
        raise CalibrationError(
            f"expected exactly one admissible convention, found {len(survivors)}",
            evidence,
        )
    return survivors[0], evidence


# --- face machinery ----------------------------------------------------------


def _span_basis(elements, vector):
    basis = RowBasis()
    for i, el in enumerate(elements):
        basis.add(vector(el), i)
    return basis


def _certified_member(query_vec, query, span, basis, scale, sub):
    """Reduce, then re-verify the certificate by exact recombination.
    Returns (member, residual_vec)."""
    residual, cert = basis.reduce(query_vec)
    if residual:
        return False, residual
    rebuilt = query
    for label, coeff in cert.items():
        if coeff:
            rebuilt = sub(rebuilt, scale(span[label], coeff))
    if not rebuilt.is_zero():
        return False, {"certificate recombination failed": 1}
    return True, {}


def _face_record(face: str, statement: str, cases: int, witness: str | None):
    return {
        "face": face,
        "statement": statement,
        "cases": cases,
        "passed": witness is None,
        "witness": witness,
    }


HTRUNC = 4


def face_top(ctx: TraceContext, chi, maxdeg: int, rng: random.Random) -> dict:
    quiver, dim = ctx.quiver, ctx.dim
    witness = None
    cases = 0

    for rec in quantum_moment_check(ctx, chi):
        cases += 1
        if witness is None and not rec["equal"]:
            diff = rec["lhs"] - rec["rhs"]
            witness = (
                f"moment identity at ({rec['vertex']},{rec['p']},{rec['q']}): "
                f"residual {diff}"
            )

    qspan = quantum_ideal_span(ctx.rewriter, maxdeg)
    red = quantum_reduction_span(quiver, dim, chi, maxdeg)
    basis = _span_basis(red, lambda op: op.vector(HTRUNC))
    traces = []
    for el in qspan:
        traced = ctx.quantum_trace(el)
        traces.append(traced)
        cases += 1
        member, residual = _certified_member(
            traced.vector(HTRUNC),
            traced,
            red,
            basis,
            lambda op, c: op.scale(c),
            lambda x, y: x - y,
        )
        if witness is None and not member:
            witness = f"membership failed for Trq({el}); residual keys {sorted(residual)[:3]}"

    qbasis = _span_basis(qspan, lambda el: el.vector(HTRUNC))
    monomials = pbw_basis(quiver, maxdeg)
    sample = rng.sample(monomials, min(8, len(monomials)))
    for mono in sample:
        cases += 1
        m = HeightSum(quiver, {mono: HPoly.const(1)})
        _, cert = qbasis.reduce(m.vector(HTRUNC))
        reduced = m
        for label, coeff in cert.items():
            if coeff:
                reduced = reduced - qspan[label].scale(coeff)
        lhs = ctx.quantum_trace(m)
        rhs = ctx.quantum_trace(reduced)
        _, lcert = basis.reduce(lhs.vector(HTRUNC))
        for label, coeff in lcert.items():
            if coeff:
                lhs = lhs - red[label].scale(coeff)
        _, rcert = basis.reduce(rhs.vector(HTRUNC))
        for label, coeff in rcert.items():
            if coeff:
                rhs = rhs - red[label].scale(coeff)
        if witness is None and lhs != rhs:
            witness = f"coset mismatch for PBW monomial {mono}"

    return _face_record(
        "TOP",
        "quantum traces of quantum-ideal elements agree with the moment-operator "
        "matrix entrywise and lie in its left ideal; traced cosets match",
        cases,
        witness,
    )


def face_bottom(ctx: TraceContext, maxdeg: int) -> dict:
    quiver, dim = ctx.quiver, ctx.dim
    witness = None
    cases = 0
    cspan = cyclified_ideal_span(quiver, maxdeg)
    ideal = comoment_ideal_span(quiver, dim, maxdeg)
    basis = _span_basis(ideal, lambda f: f.vector())
    for x in cspan:
        cases += 1
        traced = ctx.classical_trace(x)
        member, residual = _certified_member(
            traced.vector(),
            traced,
            ideal,
            basis,
            lambda f, c: f.scale(c),
            lambda u, v: u - v,
        )
        if witness is None and not member:
            witness = f"Tr({x}) not in comoment ideal; residual keys {sorted(residual)[:3]}"
    return _face_record(
        "BOTTOM",
        "classical traces of cyclified-ideal elements lie in the ideal "
        "generated by the comoment polynomials",
        cases,
        witness,
    )


def _back_pairs(quiver: Quiver, rng: random.Random):
    necks = _degree_le_necklaces(quiver, 3)
    pairs = list(itertools.combinations_with_replacement(necks, 2))
    if len(pairs) > 60:
        pairs = rng.sample(pairs, 60)
        pairs.sort(key=lambda p: (p[0].sort_key(quiver), p[1].sort_key(quiver)))
    return pairs


def face_back(ctx: TraceContext, rng: random.Random) -> dict:
    witness = None
    cases = 0
    for x, y in _back_pairs(ctx.quiver, rng):
        cases += 1
        divisible, identity = _lie_pair_check(ctx, x, y)
        if witness is None and not (divisible and identity):
            reason = "hbar-divisibility" if not divisible else "identity"
            witness = f"{reason} failed for pair ({x}, {y})"
    return _face_record(
        "BACK",
        "hbar-linear term of traced commutators equals the Poisson bracket of "
        "the classical traces",
        cases,
        witness,
    )


def face_front(ctx: TraceContext, maxdeg: int, rng: random.Random) -> dict:
    quiver, dim = ctx.quiver, ctx.dim
    witness = None
    cases = 0
    ideal = comoment_ideal_span(quiver, dim, maxdeg)
    basis = _span_basis(ideal, lambda f: f.vector())

    def reduce_cl(f: PolySum) -> PolySum:
        _, cert = basis.reduce(f.vector())
        out = f
        for label, coeff in cert.items():
            if coeff:
                out = out - ideal[label].scale(coeff)
        return out

    for x, y in _back_pairs(ctx.quiver, rng):
        xs = NecklaceSum(quiver, {x: Fraction(1)})
        ys = NecklaceSum(quiver, {y: Fraction(1)})
        comm = ctx.rewriter.commutator(lift(xs), lift(ys))
        traced = ctx.quantum_trace(comm)
        try:
            lhs = symbol(traced.divide_hbar())
        except ValueError:
            if witness is None:
                witness = f"hbar-divisibility failed for pair ({x}, {y})"
            cases += 1
            continue
        rhs = poisson(ctx.classical_trace(xs), ctx.classical_trace(ys))
        cases += 1
        if witness is None and reduce_cl(lhs) != reduce_cl(rhs):
            witness = f"reduced identity failed for pair ({x}, {y})"
    return _face_record(
        "FRONT",
        "the bracket-compatibility identity survives reduction modulo the "
        "comoment ideal",
        cases,
        witness,
    )


def face_left(ctx: TraceContext, maxdeg: int) -> dict:
    quiver = ctx.quiver
    witness = None
    cspan = cyclified_ideal_span(quiver, maxdeg)
    cbasis = RowBasis()
    for i, x in enumerate(cspan):
        cbasis.add(x.vector(), i)
    pivots = set(cbasis.pivots)
    complement = [
        n for n in _degree_le_necklaces(quiver, maxdeg)
        if n.sort_key(quiver) not in pivots
    ]
    candidates = []

    def build(start: int, budget: int, chosen: list[Necklace]):
        from .heights import pbw_monomial

        candidates.append(pbw_monomial(quiver, list(chosen)))
        for idx in range(start, len(complement)):
            n = complement[idx]
            weight = max(1, n.degree())
            if weight <= budget:
                chosen.append(n)
                build(idx, budget - weight, chosen)
                chosen.pop()

    build(0, maxdeg, [])
    qspan = quantum_ideal_span(ctx.rewriter, maxdeg)
    basis = RowBasis()
    for i, el in enumerate(qspan):
        vec = el.at_hbar_zero()
        if vec:
            basis.add(vec, i)
    base_rank = len(basis.pivots)
    added = 0
    for mono in sorted(set(candidates), key=lambda m: m.sort_key(quiver)):
        vec = {mono.sort_key(quiver): Fraction(1)}
        if basis.add(vec, f"candidate {mono}"):
            added += 1
        elif witness is None:
            witness = f"PBW monomial {mono} became dependent modulo (ideal + hbar)"
    cases = len(set(candidates))
    if witness is None and len(basis.pivots) != base_rank + added:
        witness = "rank bookkeeping mismatch"
    return _face_record(
        "LEFT",
        "PBW monomials over necklaces outside the classical ideal remain "
        "independent modulo (quantum ideal + hbar)",
        cases,
        witness,
    )


def face_right(ctx: TraceContext, chi) -> dict:
    quiver, dim = ctx.quiver, ctx.dim
    witness = None
    cases = 0
    for v, p, q in gl_elements(quiver, dim):
        cases += 1
        lhs = symbol(moment_operator(quiver, dim, chi, v, p, q))
        rhs = -classical_comoment(quiver, dim, v, p, q)
        if witness is None and lhs != rhs:
            witness = f"symbol mismatch at ({v},{p},{q})"
    # the scalar direction: tau kills the identity matrix, chi must not
    cases += 1
    total_tau = WeylSum.zero(quiver, dim)
    for v in quiver.vertices:
        for p in range(dim[v]):
            total_tau = total_tau + tau(quiver, dim, v, p, p)
    pairing = sum(chi[v] * dim[v] for v in quiver.vertices)
    if witness is None and not total_tau.is_zero():
        witness = "tau does not vanish on the identity direction"
    if witness is None and pairing == 0:
        witness = "character pairs to zero with the dimension vector"
    return _face_record(
        "RIGHT",
        "surrogate: symbols of the moment operators equal the negated comoment "
        "polynomials, and the identity direction killed by tau pairs "
        "nontrivially with the character",
        cases,
        witness,
    )


# --- report ------------------------------------------------------------------


def verify_faces(
    quiver: Quiver,
    dim: dict[str, int],
    maxdeg: int = 4,
    seed: int = 0,
    convention: SkeinConvention | None = None,
    chi=None,
    calibrated: bool = False,
) -> dict:
    check_dim(quiver, dim)
    if maxdeg > 6:
        raise ResourceLimit(f"maxdeg {maxdeg} exceeds the supported bound 6")
    if convention is None:
        from .heights import DEFAULT_CONVENTION

        convention = DEFAULT_CONVENTION
    ctx = TraceContext(quiver, dim, convention)
    if chi is None:
        chi = chi_zero(quiver, dim)
    chi = {v: Fraction(chi[v]) for v in quiver.vertices}
    faces = {}
    rng = random.Random(seed)
    faces["TOP"] = face_top(ctx, chi, maxdeg, rng)
    faces["BOTTOM"] = face_bottom(ctx, maxdeg)
    faces["BACK"] = face_back(ctx, random.Random(seed + 1))
    faces["FRONT"] = face_front(ctx, maxdeg, random.Random(seed + 2))
    faces["LEFT"] = face_left(ctx, maxdeg)
    faces["RIGHT"] = face_right(ctx, chi)
    conv = convention.describe()
    conv["calibrated"] = calibrated
    return {
        "schema": REPORT_SCHEMA,
        "quiver": quiver.name,
        "dim": {v: dim[v] for v in quiver.vertices},
        "maxdeg": maxdeg,
        "seed": seed,
        "convention": conv,
        "chi": {v: str(chi[v]) for v in quiver.vertices},
        "faces": [faces[name] for name in FACE_ORDER],
    }


def report_json(report: dict) -> str:
    return json.dumps(report, indent=2) + "\n"


def report_passed(report: dict) -> bool:
    return all(face["passed"] for face in report["faces"])
