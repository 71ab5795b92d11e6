"""Command-line front end.

Commands operate on a doubled quiver given as a builtin name (``jordan``,
``a2``), a quiver-definition file path, or either form prefixed with
``quiver=``.  Element arguments use the expression grammar of
:mod:`necq.exprs`.  Exit codes: 0 success, 1 verification/calibration
failure, 2 parse or usage error, 3 dimension mismatch, 4 resource limit.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .exprs import ExprError, parse_expression
from .heights import HeightSum, Rewriter, lift
from .necklace import NecklaceSum, bracket, cyclified_ideal_span, reduce_classical
from .quiver import (
    BUILTIN_QUIVERS,
    DimensionError,
    Quiver,
    QuiverError,
    builtin_quiver,
    check_dim,
    parse_quiver,
)
from .traces import TraceContext
from .verify import (
    CalibrationError,
    ResourceLimit,
    calibrate,
    report_json,
    report_passed,
    verify_faces,
)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_DIM = 3
EXIT_RESOURCE = 4


def load_quiver(spec: str) -> Quiver:
    """Builtin name or definition-file path, doubled and ready for use."""
    if spec.startswith("quiver="):
        spec = spec[len("quiver=") :]
    if spec in BUILTIN_QUIVERS:
        quiver = builtin_quiver(spec)
    else:
        path = Path(spec)
        if not path.exists():
            raise QuiverError(
                f"{spec!r} is neither a builtin quiver "
                f"({', '.join(sorted(BUILTIN_QUIVERS))}) nor a file"
            )
        quiver = parse_quiver(path.read_text())
    return quiver if quiver.is_doubled else quiver.double()


def parse_dim(text: str, quiver: Quiver) -> dict[str, int]:
    """``2`` / ``1,1`` (vertex order) or ``v1=1,v2=1`` (named)."""
    entries = [e.strip() for e in text.split(",") if e.strip()]
    named = any("=" in e for e in entries)
    if not named and len(entries) != len(quiver.vertices):
        raise DimensionError(
            f"--dim lists {len(entries)} entries for "
            f"{len(quiver.vertices)} vertices {list(quiver.vertices)}"
        )
    dim: dict[str, int] = {}
    try:
        if named:
            for e in entries:
                v, _, value = e.partition("=")
                dim[v.strip()] = int(value)
        else:
            dim = {v: int(e) for v, e in zip(quiver.vertices, entries)}
    except ValueError:
        raise DimensionError(f"--dim entries must be integers: {text!r}") from None
    return check_dim(quiver, dim)


def _as_height(value, quiver) -> HeightSum:
    return lift(value) if isinstance(value, NecklaceSum) else value


def _cmd_bracket(args) -> int:
    quiver = load_quiver(args.quiver)
    x = parse_expression(args.x, quiver, kind="necklace")
    y = parse_expression(args.y, quiver, kind="necklace")
    print(bracket(x, y))
    return EXIT_OK


def _cmd_star(args) -> int:
    quiver = load_quiver(args.quiver)
    rewriter = Rewriter(quiver)
    x = _as_height(parse_expression(args.x, quiver), quiver)
    y = _as_height(parse_expression(args.y, quiver), quiver)
    print(rewriter.star(x, y))
    return EXIT_OK


def _cmd_commutator(args) -> int:
    quiver = load_quiver(args.quiver)
    rewriter = Rewriter(quiver)
    x = _as_height(parse_expression(args.x, quiver), quiver)
    y = _as_height(parse_expression(args.y, quiver), quiver)
    print(rewriter.commutator(x, y))
    return EXIT_OK


def _cmd_trace(args) -> int:
    quiver = load_quiver(args.quiver)
    dim = parse_dim(args.dim, quiver)
    ctx = TraceContext(quiver, dim)
    x = parse_expression(args.x, quiver, kind="necklace")
    print(ctx.classical_trace(x))
    return EXIT_OK


def _cmd_qtrace(args) -> int:
    quiver = load_quiver(args.quiver)
    dim = parse_dim(args.dim, quiver)
    ctx = TraceContext(quiver, dim)
    x = _as_height(parse_expression(args.x, quiver), quiver)
    print(ctx.quantum_trace(x))
    return EXIT_OK


def _cmd_reduce_classical(args) -> int:
    quiver = load_quiver(args.quiver)
    x = parse_expression(args.x, quiver, kind="necklace")
    span = cyclified_ideal_span(quiver, args.maxdeg)
    print(reduce_classical(x, span, args.maxdeg))
    return EXIT_OK


def _convention_line(conv: dict) -> str:
    return ", ".join(f"{key}={value}" for key, value in conv.items())


def _cmd_calibrate(args) -> int:
    quiver = load_quiver(args.quiver)
    dim = parse_dim(args.dim, quiver)
    try:
        winner, evidence = calibrate(quiver, dim, max_letters=args.max_letters)
    except CalibrationError as exc:
        print(f"calibration failed: {exc}")
        for record in exc.evidence:
            _print_calibration_record(record)
        return EXIT_FAIL
    print(f"calibrated convention: {_convention_line(winner.describe())}")
    for record in evidence:
        _print_calibration_record(record)
    return EXIT_OK


def _print_calibration_record(record: dict) -> None:
    status = "pass" if record["passed"] else "FAIL"
    line = f"  [{status}] {_convention_line(record['convention'])}"
    if record.get("failed_check"):
        line += f" -- {record['failed_check']}: {record['witness']}"
    elif "cases" in record:
        line += f" -- {record['cases']} generator checks"
    print(line)


def _cmd_verify(args) -> int:
    quiver = load_quiver(args.quiver)
    dim = parse_dim(args.dim, quiver)
    convention = None
    calibrated = False
    if args.calibrate:
        convention, _ = calibrate(quiver, dim)
        calibrated = True
    chi = None
    if args.chi_shift:
        from .weyl import chi_zero

        chi = {v: c + args.chi_shift for v, c in chi_zero(quiver, dim).items()}
    report = verify_faces(
        quiver,
        dim,
        maxdeg=args.maxdeg,
        seed=args.seed,
        convention=convention,
        chi=chi,
        calibrated=calibrated,
    )
    for face in report["faces"]:
        status = "passed" if face["passed"] else "FAILED"
        line = f"  {face['face']:<6} {status}  ({face['cases']} cases)"
        if face["witness"]:
            line += f"  witness: {face['witness']}"
        print(line)
    passed = report_passed(report)
    print(f"verification: {'PASSED' if passed else 'FAILED'}")
    text = report_json(report)
    if args.report == "-":
        print(text, end="")
    elif args.report:
        Path(args.report).write_text(text)
        print(f"report written to {args.report}")
    return EXIT_OK if passed else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="necq",
        description="Exact necklace-algebra computations and the "
        "quantization/reduction verifier.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_, exprs=(), dim=False, maxdeg=None):
        p = sub.add_parser(name, help=help_)
        p.add_argument("quiver", help="builtin name (jordan, a2), file path, or quiver=...")
        for expr in exprs:
            p.add_argument(expr, help=f"element expression {expr}")
        if dim:
            p.add_argument("--dim", required=True, help="dimension vector, e.g. 2 or 1,1 or v=2")
        if maxdeg is not None:
            p.add_argument("--maxdeg", type=int, default=maxdeg, help="degree truncation")
        p.set_defaults(func=func)
        return p

    add("bracket", _cmd_bracket, "necklace bracket of two cycle-space elements", exprs=("x", "y"))
    add("star", _cmd_star, "height-algebra product", exprs=("x", "y"))
    add("commutator", _cmd_commutator, "height-algebra commutator", exprs=("x", "y"))
    add("trace", _cmd_trace, "classical trace (polynomial functions)", exprs=("x",), dim=True)
    add("qtrace", _cmd_qtrace, "quantum trace (homogenized operators)", exprs=("x",), dim=True)
    add(
        "reduce-classical",
        _cmd_reduce_classical,
        "coset representative modulo the cyclified ideal",
        exprs=("x",),
        maxdeg=4,
    )
    p = add("calibrate", _cmd_calibrate, "select the unique admissible sign/ordering convention", dim=True)
    p.add_argument("--max-letters", type=int, default=6, help="generator sweep depth")
    p = add("verify", _cmd_verify, "run the six-face verification and report", dim=True, maxdeg=4)
    p.add_argument("--seed", type=int, default=0, help="seed for sampled cases")
    p.add_argument("--report", help="write the JSON report here ('-' for stdout)")
    p.add_argument("--calibrate", action="store_true", help="recalibrate before verifying")
    p.add_argument(
        "--chi-shift",
        type=int,
        default=0,
        help="verify with the character shifted by this integer at every vertex",
    )
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ExprError as exc:
        print(f"expression error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceLimit as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except CalibrationError as exc:
        print(f"calibration failed: {exc}", file=sys.stderr)
        for record in exc.evidence:
            _print_calibration_record(record)
        return EXIT_FAIL
    except DimensionError as exc:
        print(f"dimension error: {exc}", file=sys.stderr)
        return EXIT_DIM
    except QuiverError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
