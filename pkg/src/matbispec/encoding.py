"""Bit-exact JSON encoding of the algebraic values.

A GaussianRational is ``{"re": "p/q", "im": "r/s"}``, a MatC is
``{"rows": n, "cols": n, "entries": [[...]]}``, a matrix polynomial is
``{"dim": N, "coeffs": [MatC, ...]}`` with list index = degree.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .algebra import DiffOpZ, GaussianRational, MatC, MatLaurent, MatPoly, RatMatZ, ScalarPolyZ

__all__ = [
    "encode_gr",
    "decode_gr",
    "encode_mat",
    "decode_mat",
    "encode_poly",
    "decode_poly",
    "encode_laurent",
    "decode_laurent",
    "encode_scalar_poly",
    "decode_scalar_poly",
    "encode_ratmat",
    "decode_ratmat",
    "encode_diffop",
    "decode_diffop",
    "decode_potential",
    "dumps",
]


def _frac(text) -> Fraction:
    if isinstance(text, int) and not isinstance(text, bool):
        return Fraction(text)
    if not isinstance(text, str):
        raise ValueError(f"expected a rational string, got {text!r}")
    num, sep, den = text.strip().partition("/")
    return Fraction(int(num), int(den)) if sep else Fraction(int(num))


def encode_gr(v: GaussianRational) -> dict:
    return {"re": str(v.re), "im": str(v.im)}


def decode_gr(obj) -> GaussianRational:
    if isinstance(obj, dict):
        return GaussianRational(_frac(obj.get("re", "0")), _frac(obj.get("im", "0")))
    # bare rational strings/ints are accepted as real values
    return GaussianRational(_frac(obj))


def encode_mat(m: MatC) -> dict:
    return {
        "rows": m.n_rows,
        "cols": m.n_cols,
        "entries": [[encode_gr(v) for v in row] for row in m.rows],
    }


def decode_mat(obj) -> MatC:
    if not isinstance(obj, dict) or "entries" not in obj:
        raise ValueError("a matrix needs an 'entries' field")
    entries = [[decode_gr(v) for v in row] for row in obj["entries"]]
    rows = obj.get("rows", len(entries))
    cols = obj.get("cols", len(entries[0]) if entries else 0)
    if len(entries) != rows or any(len(r) != cols for r in entries):
        raise ValueError("matrix 'rows'/'cols' disagree with 'entries'")
    if rows == 0 or cols == 0:
        return MatC.zeros(rows, cols)
    return MatC(entries, cols)


def encode_poly(p: MatPoly) -> dict:
    return {"dim": p.dim, "coeffs": [encode_mat(c) for c in p.coeffs]}


def decode_poly(obj) -> MatPoly:
    if not isinstance(obj, dict) or "dim" not in obj or "coeffs" not in obj:
        raise ValueError("a matrix polynomial needs 'dim' and 'coeffs'")
    return MatPoly([decode_mat(c) for c in obj["coeffs"]], int(obj["dim"]))


def encode_laurent(v: MatLaurent) -> dict:
    return {
        "dim": v.dim,
        "residue": encode_mat(v.residue),
        "coeffs": [encode_mat(c) for c in v.coeffs],
        "truncation_order": v.truncation_order,
    }


def decode_laurent(obj) -> MatLaurent:
    if not isinstance(obj, dict) or "residue" not in obj:
        raise ValueError("a Laurent series needs a 'residue'")
    return MatLaurent(
        decode_mat(obj["residue"]),
        [decode_mat(c) for c in obj.get("coeffs", [])],
        obj.get("truncation_order"),
    )


def decode_potential(obj) -> MatPoly | MatLaurent:
    """A potential is a matrix polynomial, or a Laurent object when it has a residue."""
    if isinstance(obj, dict) and "residue" in obj:
        return decode_laurent(obj)
    return decode_poly(obj)


def encode_scalar_poly(p: ScalarPolyZ) -> dict:
    return {"coeffs": [encode_gr(c) for c in p.coeffs]}


def decode_scalar_poly(obj) -> ScalarPolyZ:
    return ScalarPolyZ([decode_gr(c) for c in obj["coeffs"]])


def encode_ratmat(r: RatMatZ) -> dict:
    return {"num": encode_poly(r.numerator), "den": encode_scalar_poly(r.denominator)}


def decode_ratmat(obj) -> RatMatZ:
    return RatMatZ(decode_poly(obj["num"]), decode_scalar_poly(obj["den"]))


def encode_diffop(b: DiffOpZ) -> dict:
    return {"order": b.order, "b": [encode_ratmat(c) for c in b.coeffs]}


def decode_diffop(obj) -> DiffOpZ:
    op = DiffOpZ([decode_ratmat(c) for c in obj["b"]])
    if "order" in obj and int(obj["order"]) != op.order:
        raise ValueError("'order' disagrees with the number of coefficients")
    return op


def dumps(obj) -> str:
    """Deterministic JSON text (stable key order, fixed separators)."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False)
