"""Command-line interface.

Exit codes: 0 success, 1 input error, 2 mathematical inconsistency in the
input, 3 negative verdict (the certificate is still printed).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from fractions import Fraction

from .algebra import GaussianRational, MatC
from .autonomous import DEFAULT_ORDER, eval_series, make_seed, recurse_coefficients
from .bispectral import as_potential, lambda_residual, membership, synthesize_B
from .encoding import (
    decode_mat,
    decode_poly,
    decode_potential,
    dumps,
    encode_diffop,
    encode_gr,
    encode_laurent,
    encode_mat,
)
from .errors import (
    DimensionMismatch,
    EvalAtPole,
    PotentialNotAutonomous,
    QuadraticRelationViolated,
    SeedInconsistent,
    SignConventionFailure,
)
from .fixtures import CASE_NAMES, run_fixtures
from .verify import OracleReport, expand_bispectral_identity

__all__ = ["main", "build_parser"]

EXIT_OK, EXIT_INPUT, EXIT_INCONSISTENT, EXIT_NEGATIVE = 0, 1, 2, 3

MAX_DEGREE_ENV = "BISPECTRAL_MAX_DEGREE"
DEFAULT_MAX_DEGREE = 64


class InputError(Exception):
    pass


class Inconsistent(Exception):
    pass


# ----------------------------------------------------------------------------
# input helpers


def _load_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc


def _decode(path: str, decoder):
    obj = _load_json(path)
    try:
        return decoder(obj)
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise InputError(f"{path}: {exc}") from exc


def parse_scalar(text: str) -> GaussianRational:
    """``re`` or ``re,im`` with each part an integer or p/q."""
    parts = text.split(",")
    if len(parts) > 2:
        raise InputError(f"cannot parse {text!r}; expected re or re,im")
    try:
        return GaussianRational(*(Fraction(p.strip()) for p in parts))
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"cannot parse {text!r}: {exc}") from exc


def _max_work() -> int:
    raw = os.environ.get(MAX_DEGREE_ENV)
    if raw is None:
        return DEFAULT_MAX_DEGREE
    try:
        return int(raw)
    except ValueError as exc:
        raise InputError(f"{MAX_DEGREE_ENV} must be an integer, got {raw!r}") from exc


def _check_work(theta, dim: int) -> None:
    m = max(theta.degree, 0) if theta.coeffs else 0
    cap = _max_work()
    if m * dim > cap:
        raise InputError(f"deg(theta) * N = {m * dim} exceeds {MAX_DEGREE_ENV} = {cap}")


def _load_pair(args):
    theta = _decode(args.theta, decode_poly)
    pot = _decode(args.potential, decode_potential)
    if theta.dim != pot.dim:
        raise InputError(f"theta has dimension {theta.dim} but the potential has {pot.dim}")
    _check_work(theta, theta.dim)
    return theta, pot


# ----------------------------------------------------------------------------
# text rendering


def _fmt_mat(m: MatC) -> str:
    return "[" + "; ".join(", ".join(str(v) for v in row) for row in m.rows) + "]"


def _text_solve(doc: dict, series, form) -> str:
    lines = [f"residue block size m = {form.m}", f"similarity = {_fmt_mat(form.similarity)}"]
    lines.append(f"V_-1 = {_fmt_mat(series.residue)}")
    for k, c in enumerate(series.coeffs):
        if not c.is_zero():
            lines.append(f"V_{k} = {_fmt_mat(c)}")
    if "evaluation" in doc:
        ev = doc["evaluation"]
        lines.append(f"V(x) at x = {ev['x_text']}: {ev['value_text']}")
        lines.append(f"tail bound: {ev['tail_bound']}")
    return "\n".join(lines)


def _text_certificate(cert) -> str:
    if cert.verdict:
        return "member: yes"
    return f"member: no ({cert.failed_condition}, k={cert.k})\nwitness: {_fmt_mat(cert.witness)}"


def _text_report(report: OracleReport) -> str:
    line = f"{'ok  ' if report.passed else 'FAIL'} {report.name}"
    if report.first_discrepancy is not None:
        loc, expected, got = report.first_discrepancy
        line += f" at {loc}: expected {_short(expected)}, got {_short(got)}"
    return line


def _short(value) -> str:
    if isinstance(value, MatC):
        return _fmt_mat(value)
    return str(value)


# ----------------------------------------------------------------------------
# commands


def certificate_json(cert) -> dict:
    return {
        "member": cert.verdict,
        "failed": cert.failed_condition,
        "k": cert.k,
        "witness": None if cert.witness is None else encode_mat(cert.witness),
    }


def cmd_solve(args):
    obj = _load_json(args.seed)
    try:
        residue = decode_mat(obj["residue"])
        v0 = decode_mat(obj["V0"])
        v1 = decode_mat(obj["V1"])
        v212 = decode_mat(obj["V212"]) if obj.get("V212") is not None else None
        seed_k = obj.get("K")
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{args.seed}: malformed seed: {exc}") from exc
    K = args.order if args.order is not None else (int(seed_k) if seed_k is not None else DEFAULT_ORDER)
    if K < 3:
        raise InputError("the order K must be at least 3")
    n = residue.n_rows
    if residue.shape != (n, n) or v0.shape != (n, n) or v1.shape != (n, n):
        raise InputError("residue, V0 and V1 must be square matrices of one size")
    try:
        seed = make_seed(residue, v0, v1, v212)
    except (SeedInconsistent, QuadraticRelationViolated) as exc:
        raise Inconsistent(str(exc)) from exc
    series = recurse_coefficients(seed, K)
    form = seed.residue_form
    doc = {"m": form.m, "similarity": encode_mat(form.similarity), "series": encode_laurent(series)}
    if args.eval is not None:
        x = parse_scalar(args.eval)
        try:
            ev = eval_series(series, x, K)
        except EvalAtPole as exc:
            raise InputError(str(exc)) from exc
        value = form.from_canonical(ev.value)
        doc["evaluation"] = {
            "x": encode_gr(x),
            "value": encode_mat(value),
            "tail_bound": None if ev.tail_bound is None else str(ev.tail_bound),
        }
    if args.format == "text":
        text_doc = dict(doc)
        if "evaluation" in doc:
            text_doc["evaluation"] = dict(doc["evaluation"], x_text=str(x), value_text=_fmt_mat(value))
        return EXIT_OK, _text_solve(text_doc, series, form)
    return EXIT_OK, doc


def cmd_membership(args):
    theta, pot = _load_pair(args)
    try:
        cert = membership(theta, pot, prefilter=args.prefilter)
    except PotentialNotAutonomous as exc:
        raise Inconsistent(str(exc)) from exc
    code = EXIT_OK if cert.verdict else EXIT_NEGATIVE
    if args.format == "text":
        return code, _text_certificate(cert)
    return code, certificate_json(cert)


def cmd_synthesize(args):
    theta, pot = _load_pair(args)
    try:
        cert = membership(theta, pot)
    except PotentialNotAutonomous as exc:
        raise Inconsistent(str(exc)) from exc
    if not cert.verdict:
        if args.format == "text":
            return EXIT_NEGATIVE, _text_certificate(cert)
        return EXIT_NEGATIVE, {"certificate": certificate_json(cert), "operator": None}
    try:
        op = synthesize_B(theta, pot)
    except SignConventionFailure as exc:
        raise Inconsistent(str(exc)) from exc
    reports = []
    if args.verify in ("residual", "both"):
        bad = next((s for s, r in lambda_residual(theta, op, pot) if not r.is_zero()), None)
        reports.append(OracleReport("lambda_residual", True) if bad is None
                       else OracleReport("lambda_residual", False, (f"x^{bad}", None, None)))
    if args.verify in ("expand", "both"):
        reports.append(expand_bispectral_identity(theta, op, as_potential(pot)))
    if not all(reports):
        failed = "; ".join(_text_report(r) for r in reports if not r.passed)
        raise Inconsistent(f"refusing to emit an unverified operator: {failed}")
    if args.format == "text":
        lines = [f"order {op.order}"]
        for j, b in enumerate(op.coeffs):
            lines.append(f"b_{j}: numerator degree {b.numerator.degree}, denominator {b.denominator}")
        lines += [_text_report(r) for r in reports]
        return EXIT_OK, "\n".join(lines)
    return EXIT_OK, {"operator": encode_diffop(op), "verification": [r.to_json() for r in reports]}


def cmd_fixtures(args):
    names = list(CASE_NAMES) if args.all or not args.case else args.case
    unknown = [n for n in names if n not in CASE_NAMES]
    if unknown:
        raise InputError(f"unknown fixture case(s) {', '.join(unknown)}; choose from {', '.join(CASE_NAMES)}")
    reports = run_fixtures(names)
    ok = all(r.passed for r in reports)
    code = EXIT_OK if ok else EXIT_INCONSISTENT
    if args.format == "text":
        lines = []
        for r in reports:
            mode = " (report mode)" if r.discrepancy_allowed else ""
            lines.append(f"[{'PASS' if r.passed else 'FAIL'}] {r.name}{mode}")
            lines += ["  " + _text_report(c) for c in r.checks]
            lines += ["  finding: " + _text_report(c) for c in r.findings]
        return code, "\n".join(lines)
    return code, {"passed": ok, "cases": [r.to_json() for r in reports]}


# ----------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", "-o", help="write the result here instead of stdout")
    common.add_argument("--format", choices=("json", "text"), default="json")

    parser = argparse.ArgumentParser(
        prog="matbispec",
        description="Exact solver and bispectral-algebra decider for V'' = V'V.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", parents=[common], help="Laurent solution from a seed file")
    p.add_argument("seed", help="seed JSON: residue, V0, V1, optional V212 and K")
    p.add_argument("--order", "-K", type=int, default=None, help=f"truncation order (default {DEFAULT_ORDER})")
    p.add_argument("--eval", help="evaluate at x, written re or re,im with rationals p/q")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("membership", parents=[common], help="decide whether theta is in the algebra")
    p.add_argument("theta", help="matrix polynomial JSON")
    p.add_argument("potential", help="matrix polynomial or Laurent JSON")
    p.add_argument("--prefilter", action="store_true", help="run the commutator-degree test first")
    p.set_defaults(func=cmd_membership)

    p = sub.add_parser("synthesize", parents=[common], help="build and verify the spectral operator")
    p.add_argument("theta")
    p.add_argument("potential")
    p.add_argument("--verify", choices=("residual", "expand", "both"), default="both")
    p.set_defaults(func=cmd_synthesize)

    p = sub.add_parser("fixtures", parents=[common], help="run the worked examples")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--case", action="append", help=f"one of {', '.join(CASE_NAMES)} (repeatable)")
    group.add_argument("--all", action="store_true")
    p.set_defaults(func=cmd_fixtures)
    return parser


def _emit(result, args) -> None:
    text = result if isinstance(result, str) else dumps(result)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        code, result = args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except DimensionMismatch as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except Inconsistent as exc:
        print(f"inconsistent input: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    _emit(result, args)
    return code


if __name__ == "__main__":
    sys.exit(main())
