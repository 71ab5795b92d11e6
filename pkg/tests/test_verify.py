import json
from fractions import Fraction

import pytest

from necq.heights import DEFAULT_CONVENTION
from necq.quiver import DimensionError, QuiverError, a2_quiver, jordan_quiver
from necq.traces import TraceContext
from necq.verify import (
    FACE_ORDER,
    CalibrationError,
    ResourceLimit,
    calibrate,
    report_json,
    report_passed,
    skein_annihilation_sweep,
    verify_faces,
)
from necq.weyl import chi_zero


def test_face_order_is_fixed():
    assert FACE_ORDER == ("TOP", "BOTTOM", "BACK", "FRONT", "LEFT", "RIGHT")


def test_all_faces_pass_on_jordan_dim_two(jordan):
    report = verify_faces(jordan, {"v": 2}, maxdeg=4, seed=0)
    assert report_passed(report)
    assert [f["face"] for f in report["faces"]] == list(FACE_ORDER)
    assert all(f["witness"] is None for f in report["faces"])
    assert all(f["cases"] > 0 for f in report["faces"])
    assert report["convention"]["calibrated"] is False
    assert report["quiver"] == "jordan"
    assert report["chi"] == {"v": "-2"}


def test_all_faces_pass_on_a2(a2):
    report = verify_faces(a2, {"v1": 1, "v2": 1}, maxdeg=4, seed=0)
    assert report_passed(report)
    assert all(f["witness"] is None for f in report["faces"])
    assert report["chi"] == {"v1": "-1", "v2": "0"}


def test_face_case_counts_are_stable(jordan, a2):
    report = verify_faces(jordan, {"v": 2}, maxdeg=4, seed=0)
    assert {f["face"]: f["cases"] for f in report["faces"]} == {
        "TOP": 13,
        "BOTTOM": 1,
        "BACK": 55,
        "FRONT": 55,
        "LEFT": 92,
        "RIGHT": 5,
    }
    report2 = verify_faces(a2, {"v1": 1, "v2": 1}, maxdeg=4, seed=0)
    assert {f["face"]: f["cases"] for f in report2["faces"]} == {
        "TOP": 18,
        "BOTTOM": 2,
        "BACK": 6,
        "FRONT": 6,
        "LEFT": 15,
        "RIGHT": 3,
    }


def test_shifted_character_breaks_exactly_the_top_face(jordan):
    chi = dict(chi_zero(jordan, {"v": 2}))
    chi["v"] = chi["v"] + 1
    report = verify_faces(jordan, {"v": 2}, maxdeg=4, seed=0, chi=chi)
    assert not report_passed(report)
    by_face = {f["face"]: f for f in report["faces"]}
    assert not by_face["TOP"]["passed"]
    assert "moment identity" in by_face["TOP"]["witness"]
    assert "residual" in by_face["TOP"]["witness"]
    for name in ("BOTTOM", "BACK", "FRONT", "LEFT", "RIGHT"):
        assert by_face[name]["passed"], name


def test_right_face_statement_is_marked_surrogate(jordan):
    report = verify_faces(jordan, {"v": 2}, maxdeg=3, seed=0)
    right = [f for f in report["faces"] if f["face"] == "RIGHT"][0]
    assert right["statement"].startswith("surrogate")


def test_report_is_byte_identical_for_a_fixed_seed(a2):
    one = report_json(verify_faces(a2, {"v1": 1, "v2": 1}, maxdeg=4, seed=7))
    two = report_json(verify_faces(a2, {"v1": 1, "v2": 1}, maxdeg=4, seed=7))
    assert one == two
    assert json.loads(one) == json.loads(two)


def test_verify_faces_resource_limit_and_dim_check(jordan):
    with pytest.raises(ResourceLimit):
        verify_faces(jordan, {"v": 2}, maxdeg=7)
    with pytest.raises(DimensionError):
        verify_faces(jordan, {"v": 0})


# --- the skein sweep -----------------------------------------------------------


def test_skein_sweep_clean_on_small_generators(jordan2, a2_11):
    checked, failures = skein_annihilation_sweep(jordan2, 4)
    assert failures == []
    assert checked > 0
    again, failures2 = skein_annihilation_sweep(jordan2, 4)
    assert (again, failures2) == (checked, [])
    checked_a2, failures_a2 = skein_annihilation_sweep(a2_11, 4)
    assert failures_a2 == []
    assert checked_a2 > 0


def test_skein_sweep_letter_limit():
    ctx = TraceContext(jordan_quiver().double(), {"v": 1})
    with pytest.raises(ResourceLimit):
        skein_annihilation_sweep(ctx, 9)


# --- calibration ---------------------------------------------------------------


def test_calibration_guards_reject_large_inputs(jordan):
    with pytest.raises(QuiverError):
        calibrate(jordan, {"v": 3})


def test_calibration_is_degenerate_on_the_smallest_a2_representation(a2):
    # 1x1 blocks cannot separate the mirrored convention; this must surface
    # as a hard error carrying the full evidence table
    with pytest.raises(CalibrationError) as err:
        calibrate(a2, {"v1": 1, "v2": 1}, max_letters=4)
    evidence = err.value.evidence
    assert len(evidence) == 8
    survivors = [r for r in evidence if r["passed"]]
    assert len(survivors) == 2
    assert DEFAULT_CONVENTION.describe() in [r["convention"] for r in survivors]
    for record in evidence:
        if not record["passed"]:
            assert record["failed_check"] in (
                "hbar-divisibility",
                "poisson-identity",
                "generator-annihilation",
            )
            assert record["witness"]
