"""Exact symbolic tools for necklace Lie algebras on doubled quivers and
their quantization by height monomials, together with trace maps into
polynomial functions and homogenized differential operators on quiver
representation spaces and a face-by-face verifier for the resulting
quantization/reduction square."""

from .hpoly import HPoly
from .quiver import (
    BUILTIN_QUIVERS,
    DimensionError,
    Quiver,
    QuiverError,
    QuiverFormatError,
    jordan_quiver,
    a2_quiver,
    builtin_quiver,
    parse_quiver,
    serialize_quiver,
)
from .necklace import Necklace, NecklaceSum, bracket, moment, reduce_classical
from .heights import (
    HeightMonomial,
    HeightSum,
    Rewriter,
    SkeinConvention,
    ALL_CONVENTIONS,
    DEFAULT_CONVENTION,
    lift,
    lift_necklace,
    pbw_basis,
    pbw_monomial,
    quantum_moment,
    quantum_moment_raw,
)
from .weyl import (
    PolySum,
    WeylSum,
    chi_zero,
    classical_comoment,
    lift_function,
    moment_operator,
    poisson,
    symbol,
    tau,
)
from .traces import TraceContext, quantum_moment_check
from .verify import (
    CalibrationError,
    ResourceLimit,
    calibrate,
    report_json,
    report_passed,
    verify_faces,
)

__all__ = [
    "HPoly",
    "BUILTIN_QUIVERS",
    "Quiver",
    "QuiverError",
    "QuiverFormatError",
    "DimensionError",
    "jordan_quiver",
    "a2_quiver",
    "builtin_quiver",
    "parse_quiver",
    "serialize_quiver",
    "Necklace",
    "NecklaceSum",
    "bracket",
    "moment",
    "reduce_classical",
    "HeightMonomial",
    "HeightSum",
    "Rewriter",
    "SkeinConvention",
    "ALL_CONVENTIONS",
    "DEFAULT_CONVENTION",
    "lift",
    "lift_necklace",
    "pbw_basis",
    "pbw_monomial",
    "quantum_moment",
    "quantum_moment_raw",
    "PolySum",
    "WeylSum",
    "chi_zero",
    "classical_comoment",
    "lift_function",
    "moment_operator",
    "poisson",
    "symbol",
    "tau",
    "TraceContext",
    "quantum_moment_check",
    "CalibrationError",
    "ResourceLimit",
    "calibrate",
    "report_json",
    "report_passed",
    "verify_faces",
]
