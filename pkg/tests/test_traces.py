import itertools
from fractions import Fraction

import pytest

from necq.hpoly import HPoly, HBAR
from necq.necklace import Necklace, NecklaceSum, moment
from necq.heights import (
    HeightMonomial,
    HeightSum,
    lift,
    lift_necklace,
    quantum_moment,
    quantum_moment_raw,
)
from necq.quiver import DimensionError, QuiverError, jordan_quiver
from necq.traces import TraceContext, quantum_moment_check
from necq.weyl import PolySum, WeylSum, chi_zero, poisson, symbol, tau


def neck_sum(quiver, word):
    return NecklaceSum(quiver, {Necklace.make(quiver, word): Fraction(1)})


def idem_sum(quiver, v):
    return NecklaceSum(quiver, {Necklace.idempotent(quiver, v): Fraction(1)})


def height_sum(quiver, *components, idem=()):
    mono = HeightMonomial.make(
        quiver, tuple(tuple(c) for c in components), tuple(idem)
    )
    return HeightSum(quiver, {mono: HPoly.const(1)})


def euler_operator(ctx):
    out = WeylSum.zero(ctx.quiver, ctx.dim)
    for a in ctx.quiver.base_arrows():
        for i in range(ctx.dim[ctx.quiver.target[a]]):
            for j in range(ctx.dim[ctx.quiver.source[a]]):
                out = out + WeylSum.coordinate(
                    ctx.quiver, ctx.dim, (a, i, j)
                ) * WeylSum.derivation(ctx.quiver, ctx.dim, (a, i, j))
    return out


# --- construction guards -------------------------------------------------------


def test_trace_context_needs_a_doubled_quiver():
    with pytest.raises(QuiverError, match="doubled"):
        TraceContext(jordan_quiver(), {"v": 2})


def test_trace_context_checks_the_dimension_vector(jordan):
    with pytest.raises(DimensionError):
        TraceContext(jordan, {"v": 0})
    with pytest.raises(DimensionError):
        TraceContext(jordan, {"w": 2})


# --- classical traces ----------------------------------------------------------


def test_classical_trace_of_idempotent_is_the_dimension(jordan2, a2_11):
    assert jordan2.classical_trace(idem_sum(jordan2.quiver, "v")) == PolySum.const(
        jordan2.quiver, jordan2.dim, 2
    )
    assert a2_11.classical_trace(idem_sum(a2_11.quiver, "v1")) == PolySum.const(
        a2_11.quiver, a2_11.dim, 1
    )


def test_classical_trace_of_a_loop_is_the_matrix_trace(jordan2):
    q, d = jordan2.quiver, jordan2.dim
    expect = PolySum.variable(q, d, ("a", 0, 0)) + PolySum.variable(q, d, ("a", 1, 1))
    assert jordan2.classical_trace(neck_sum(q, ("a",))) == expect


def test_classical_trace_of_a_two_cycle(jordan2, a2_11):
    q, d = jordan2.quiver, jordan2.dim
    expect = PolySum.zero(q, d)
    for i, j in itertools.product(range(2), repeat=2):
        expect = expect + PolySum.variable(q, d, ("a", i, j)) * PolySum.variable(
            q, d, ("a*", j, i)
        )
    assert jordan2.classical_trace(neck_sum(q, ("a", "a*"))) == expect

    q2, d2 = a2_11.quiver, a2_11.dim
    expect2 = PolySum.variable(q2, d2, ("a", 0, 0)) * PolySum.variable(
        q2, d2, ("a*", 0, 0)
    )
    assert a2_11.classical_trace(neck_sum(q2, ("a", "a*"))) == expect2


def test_classical_trace_is_rotation_invariant(jordan2):
    q = jordan2.quiver
    one = jordan2.classical_trace(neck_sum(q, ("a", "a", "a*")))
    two = jordan2.classical_trace(neck_sum(q, ("a", "a*", "a")))
    assert one == two


def test_classical_moment_trace_vanishes(jordan2, a2_11):
    # tr(xy) = tr(yx) kills the moment necklace
    for ctx in (jordan2, a2_11):
        total = PolySum.zero(ctx.quiver, ctx.dim)
        for (base, word), coeff in moment(ctx.quiver).items():
            if word:
                total = total + ctx.classical_trace(
                    neck_sum(ctx.quiver, word)
                ).scale(coeff)
        assert total.is_zero()


# --- quantum traces ------------------------------------------------------------


def test_quantum_trace_of_the_unit_and_idempotents(jordan2, a2_11):
    q, d = jordan2.quiver, jordan2.dim
    unit = HeightSum.unit(q)
    assert jordan2.quantum_trace(unit) == WeylSum.const(q, d, 1)
    assert jordan2.quantum_trace(height_sum(q, idem=("v",))) == WeylSum.const(q, d, 2)
    assert jordan2.quantum_trace(height_sum(q, idem=("v", "v"))) == WeylSum.const(
        q, d, 4
    )
    q2, d2 = a2_11.quiver, a2_11.dim
    assert a2_11.quantum_trace(
        height_sum(q2, idem=("v1", "v2"))
    ) == WeylSum.const(q2, d2, 1)


def test_quantum_trace_of_single_loop(jordan2):
    q, d = jordan2.quiver, jordan2.dim
    got = jordan2.quantum_trace(height_sum(q, (("a", 1),)))
    expect = WeylSum.coordinate(q, d, ("a", 0, 0)) + WeylSum.coordinate(
        q, d, ("a", 1, 1)
    )
    assert got == expect


def test_quantum_trace_ordered_two_cycle_is_the_euler_operator(jordan2, a2_11):
    for ctx in (jordan2, a2_11):
        got = ctx.quantum_trace(height_sum(ctx.quiver, (("a", 1), ("a*", 2))))
        assert got == euler_operator(ctx)


def test_quantum_trace_reversed_heights_pick_up_the_block_size(jordan2, a2_11):
    # D x = x D + hbar in every one of the n^2 (resp. d1*d2) slots
    for ctx, slots in ((jordan2, 4), (a2_11, 1)):
        got = ctx.quantum_trace(height_sum(ctx.quiver, (("a", 2), ("a*", 1))))
        expect = euler_operator(ctx) + WeylSum.const(
            ctx.quiver, ctx.dim, HPoly.hbar(1, slots)
        )
        assert got == expect


def test_quantum_trace_of_the_moment_element(jordan2, a2_11):
    for ctx, slots in ((jordan2, 4), (a2_11, 1)):
        raw = ctx.quantum_trace(quantum_moment_raw(ctx.quiver))
        nf = ctx.quantum_trace(quantum_moment(ctx.rewriter))
        expect = WeylSum.const(ctx.quiver, ctx.dim, HPoly.hbar(1, -slots))
        assert raw == expect
        assert nf == expect


def test_quantum_trace_is_invariant_under_rewriting(jordan2):
    q = jordan2.quiver
    for components in [
        ((("a", 2), ("a*", 1)),),
        ((("a", 1), ("a", 3), ("a*", 2), ("a*", 4)),),
        ((("a", 2),), (("a*", 1),)),
        ((("a", 1), ("a*", 4)), (("a", 3), ("a*", 2))),
    ]:
        x = height_sum(q, *components)
        direct = jordan2.quantum_trace(x)
        rewritten = jordan2.quantum_trace(jordan2.rewriter.normal_form(x))
        assert direct == rewritten


def test_idempotent_factors_scale_by_the_block_dimension(jordan2):
    q = jordan2.quiver
    bare = jordan2.quantum_trace(height_sum(q, (("a", 1),)))
    dressed = jordan2.quantum_trace(height_sum(q, (("a", 1),), idem=("v",)))
    assert dressed == bare.scale(2)


def test_quantum_trace_matches_diagonal_of_word_matrix(jordan2, a2_11):
    # cross-check the depth-first trace kernel against the independent
    # single-factor chaining used for open word matrices
    cases = [
        (jordan2, (("a", 1), ("a*", 2))),
        (jordan2, (("a", 2), ("a*", 1))),
        (jordan2, (("a", 1), ("a", 4), ("a*", 2), ("a*", 3))),
        (jordan2, (("a", 3), ("a*", 1), ("a", 2), ("a*", 4))),
        (a2_11, (("a", 2), ("a*", 1))),
    ]
    for ctx, component in cases:
        matrix = ctx.quantum_word_matrix(component)
        total = WeylSum.zero(ctx.quiver, ctx.dim)
        block = ctx.dim[ctx.quiver.target[component[0][0]]]
        for i in range(block):
            total = total + matrix[(i, i)]
        assert total == ctx.quantum_trace(height_sum(ctx.quiver, component))


def test_symbol_of_quantum_trace_is_the_classical_trace(jordan2, a2_11):
    for ctx in (jordan2, a2_11):
        seen = set()
        for _, word in ctx.quiver.cycles(4):
            neck = Necklace.make(ctx.quiver, word)
            if neck in seen:
                continue
            seen.add(neck)
            x = NecklaceSum(ctx.quiver, {neck: Fraction(1)})
            assert symbol(ctx.quantum_trace(lift(x))) == ctx.classical_trace(x)


def test_traced_commutator_descends_to_the_poisson_bracket(jordan2):
    q = jordan2.quiver
    pairs = [
        (("a",), ("a*",)),
        (("a", "a"), ("a*", "a*")),
        (("a", "a*"), ("a", "a*")),
        (("a", "a", "a*"), ("a*",)),
    ]
    for w1, w2 in pairs:
        x, y = neck_sum(q, w1), neck_sum(q, w2)
        qcomm = jordan2.quantum_trace(lift(x)).commutator(
            jordan2.quantum_trace(lift(y))
        )
        lhs = symbol(qcomm.divide_hbar())
        rhs = poisson(jordan2.classical_trace(x), jordan2.classical_trace(y))
        assert lhs == rhs


def test_traced_commutator_pins(jordan2):
    q, d = jordan2.quiver, jordan2.dim
    x = jordan2.quantum_trace(lift(neck_sum(q, ("a",))))
    y = jordan2.quantum_trace(lift(neck_sum(q, ("a*",))))
    # [Tr a, Tr a*] = -n hbar on the n-dimensional Jordan representation
    assert x.commutator(y) == WeylSum.const(q, d, HPoly.hbar(1, -2))
    assert y.commutator(x) == WeylSum.const(q, d, HPoly.hbar(1, 2))


# --- the moment identity ---------------------------------------------------------


def test_quantum_moment_identity_holds_entrywise(jordan2, a2_11):
    for ctx in (jordan2, a2_11):
        records = quantum_moment_check(ctx, chi_zero(ctx.quiver, ctx.dim))
        assert records
        assert all(r["equal"] for r in records)


def test_quantum_moment_identity_is_chi_sensitive(jordan2):
    chi = dict(chi_zero(jordan2.quiver, jordan2.dim))
    chi["v"] = chi["v"] + 1
    records = quantum_moment_check(jordan2, chi)
    bad = [r for r in records if not r["equal"]]
    assert bad
    # only diagonal entries feel a character shift
    assert all(r["p"] == r["q"] for r in bad)
    for r in bad:
        assert (r["lhs"] - r["rhs"]) == WeylSum.const(
            jordan2.quiver, jordan2.dim, HBAR
        )


def test_gl_action_commutes_with_quantum_traces(jordan2):
    q, d = jordan2.quiver, jordan2.dim
    for word in [("a",), ("a", "a*"), ("a", "a", "a*")]:
        op = jordan2.quantum_trace(lift(neck_sum(q, word)))
        for p, qq in itertools.product(range(2), repeat=2):
            assert tau(q, d, "v", p, qq).commutator(op).is_zero()
