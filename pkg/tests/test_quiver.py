import pytest

from necq.quiver import (
    DimensionError,
    Quiver,
    QuiverError,
    QuiverFormatError,
    a2_quiver,
    builtin_quiver,
    check_dim,
    jordan_quiver,
    parse_quiver,
    serialize_quiver,
)


def test_jordan_shape():
    q = jordan_quiver()
    assert q.vertices == ("v",)
    assert q.arrows == ("a",)
    assert not q.is_doubled


def test_double_interleaves_and_reverses():
    q = a2_quiver().double()
    assert q.arrows == ("a", "a*")
    assert q.source["a*"] == "v2" and q.target["a*"] == "v1"
    assert q.star == {"a": "a*", "a*": "a"}
    assert q.base_arrows() == ("a",)


def test_double_twice_rejected():
    with pytest.raises(QuiverError):
        jordan_quiver().double().double()


def test_validate_path_positions():
    q = a2_quiver().double()
    assert q.validate_path(("a", "a*")) == ("v1", "v1")
    with pytest.raises(QuiverError, match="breaks at position 1"):
        q.validate_path(("a", "a"))
    with pytest.raises(QuiverError, match="unknown arrow"):
        q.validate_path(("zz",))


def test_validate_cycle_base_is_source_of_first_letter():
    q = a2_quiver().double()
    assert q.validate_cycle(("a", "a*")) == "v1"
    assert q.validate_cycle(("a*", "a")) == "v2"
    with pytest.raises(QuiverError, match="does not close"):
        q.validate_cycle(("a",))
    # loops do close at length one
    assert jordan_quiver().double().validate_cycle(("a",)) == "v"


def test_paths_and_cycles_counts():
    j = jordan_quiver().double()
    # length <= 2 over two loops: 1 idempotent + 2 + 4
    assert len(j.paths(2)) == 7
    assert len(j.cycles(2)) == 6
    a2 = a2_quiver().double()
    # closed words must alternate a and a*
    assert sorted(w for _, w in a2.cycles(2)) == [("a", "a*"), ("a*", "a")]


def test_p_value_moment_dimension():
    # 1 + sum_arrows d_s d_t - sum_vertices d^2 on the base quiver
    assert jordan_quiver().p_value({"v": 2}) == 1
    assert a2_quiver().p_value({"v1": 1, "v2": 1}) == 0


def test_check_dim_errors():
    q = jordan_quiver()
    assert check_dim(q, {"v": 3}) == {"v": 3}
    with pytest.raises(DimensionError):
        check_dim(q, {})
    with pytest.raises(DimensionError):
        check_dim(q, {"v": 2, "w": 1})
    with pytest.raises(DimensionError):
        check_dim(q, {"v": 0})


def test_builtin_lookup():
    assert builtin_quiver("jordan").name == "jordan"
    with pytest.raises(QuiverError):
        builtin_quiver("e8")


def test_parse_serialize_round_trip():
    q = a2_quiver()
    text = serialize_quiver(q)
    assert parse_quiver(text) == q
    # quiver files describe base quivers; doubles are derived, not stored
    with pytest.raises(QuiverError, match="base quiver"):
        serialize_quiver(q.double())


def test_parse_reports_line_numbers():
    bad = "quiver x\nvertices u\narrow b u w\n"
    with pytest.raises(QuiverFormatError) as err:
        parse_quiver(bad)
    assert err.value.line == 3


def test_custom_quiver_double():
    q = Quiver("star3", ("c", "l1", "l2"), ("p", "q"), {"p": "l1", "q": "l2"}, {"p": "c", "q": "c"})
    d = q.double()
    assert d.arrows == ("p", "p*", "q", "q*")
    assert d.validate_cycle(("p", "p*")) == "l1"
