"""Independent oracles.

Nothing here reuses the solver or decision code paths: the scalar series
comes from the tanh recurrence, the residue-case forms are written out in
closed form, and the bispectral identity is expanded term by term. Only the
ring tower in ``algebra`` is shared.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .algebra import DiffOpZ, GaussianRational, MatC, MatLaurent, MatPoly, RatMatZ, ScalarPolyZ
from .algebra.rational import poly_gcd
from .encoding import encode_mat, encode_ratmat

__all__ = [
    "OracleReport",
    "scalar_tanh_series",
    "residue_case_closed_forms",
    "residue_power_closed_form",
    "residue_b_closed_form",
    "expand_bispectral_identity",
]


@dataclass(frozen=True)
class OracleReport:
    name: str
    passed: bool
    first_discrepancy: tuple[str, Any, Any] | None = None
    notes: tuple[str, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.passed != (self.first_discrepancy is None):
            raise ValueError("passed must hold exactly when there is no discrepancy")

    def __bool__(self):
        return self.passed

    def to_json(self) -> dict:
        disc = None
        if self.first_discrepancy is not None:
            loc, expected, got = self.first_discrepancy
            disc = {"location": loc, "expected": _enc(expected), "got": _enc(got)}
        out = {"name": self.name, "passed": self.passed, "discrepancy": disc}
        if self.notes:
            out["notes"] = list(self.notes)
        return out


def _enc(value):
    if isinstance(value, MatC):
        return encode_mat(value)
    if isinstance(value, RatMatZ):
        return encode_ratmat(value)
    if value is None or isinstance(value, (bool, int, str)):
        return value
    return str(value)


# ----------------------------------------------------------------------------
# scalar oracle


def scalar_tanh_series(v1, K: int) -> list[GaussianRational]:
    """Taylor coefficients c_0..c_K of -2 lam tanh(lam x) with lam^2 = -v1/2.

    tanh u = sum t_n u^n with (n+1) t_{n+1} = [n = 0] - sum_{i+j=n} t_i t_j,
    so c_n = -2 t_n (lam^2)^{(n+1)/2} for odd n and 0 for even n.
    """
    if K < 3:
        raise ValueError("K must be at least 3")
    v1 = GaussianRational.coerce(v1)
    t = [Fraction(0)] * (K + 1)
    for n in range(0, K):
        conv = sum((t[i] * t[n - i] for i in range(n + 1)), Fraction(0))
        t[n + 1] = ((1 if n == 0 else 0) - conv) / (n + 1)
    lam2 = v1 * Fraction(-1, 2)
    out = []
    for n in range(K + 1):
        if n % 2 == 0:
            out.append(GaussianRational(0))
        else:
            out.append(lam2 ** ((n + 1) // 2) * (-2 * t[n]))
    return out


# ----------------------------------------------------------------------------
# closed forms for V = -2I/x


def residue_power_closed_form(m: int, k: int, n: int) -> MatC:
    """sum_{j=2}^{m-k+1} (j+k-2)!/(j-2)! e_{j,j+k} (1-based blocks) as a full matrix."""
    size = (m + 1) * n
    rows = [[0] * size for _ in range(size)]
    for j in range(2, m - k + 2):
        coef = math.factorial(j + k - 2) // math.factorial(j - 2)
        r0, c0 = (j - 1) * n, (j + k - 1) * n
        for d in range(n):
            rows[r0 + d][c0 + d] = coef
    return MatC(rows, size)


def residue_b_closed_form(coeffs: list[MatC]) -> list[RatMatZ]:
    """b_0 = a_0 and b_k = a_k + sum_{j>k} (j-2)! j (-1)^{j-k} / ((k-1)! z^{j-k}) a_j."""
    m = len(coeffs) - 1
    n = coeffs[0].n_rows
    out = [RatMatZ.constant(coeffs[0])]
    for k in range(1, m + 1):
        acc = RatMatZ.constant(coeffs[k])
        for j in range(k + 1, m + 1):
            coef = Fraction(math.factorial(j - 2) * j * (-1) ** (j - k), math.factorial(k - 1))
            term = RatMatZ(MatPoly([coeffs[j].scale(coef)], n), ScalarPolyZ.z_power(j - k))
            acc = acc + term
        out.append(acc)
    return out


def _sample_coefficients(m: int, n: int) -> list[MatC]:
    """Deterministic non-commuting coefficients with a_1 = 0."""
    out = []
    for l in range(m + 1):
        if l == 1:
            out.append(MatC.zeros(n))
            continue
        rows = [[Fraction((l + 1) * (i + 2) - j * (l + 3), 1 + i + j) for j in range(n)] for i in range(n)]
        rows[0][n - 1] = GaussianRational(rows[0][n - 1], l)
        out.append(MatC(rows, n))
    return out


def residue_case_closed_forms(m: int, n: int = 2) -> OracleReport:
    """Compare block powers, membership verdicts and synthesized b_j for V = -2I/x."""
    # local imports keep the module's top level free of solver code
    from .bispectral import build_A1, membership, synthesize_B

    if m < 1:
        raise ValueError("m must be at least 1")
    name = f"residue_full(m={m})"
    v = MatLaurent.exact(MatC.scalar(n, -2))

    a1 = build_A1(v, m).to_matc()
    size = a1.n_rows
    power = MatC.identity(size)
    for k in range(1, m + 2):
        power = power @ a1
        expected = residue_power_closed_form(m, k, n) if k < m else MatC.zeros(size)
        if power != expected:
            return OracleReport(name, False, (f"A1^{k}", expected, power))

    for l in range(0, m + 1):
        for p in range(n):
            for q in range(n):
                theta = MatPoly.monomial(MatC.unit(n, p, q), l)
                got = membership(theta, v).verdict
                if got != (l != 1):
                    return OracleReport(name, False, (f"member(x^{l} E_{p}{q})", l != 1, got))

    coeffs = _sample_coefficients(m, n)
    theta = MatPoly(coeffs, n)
    op = synthesize_B(theta, v)
    expected_b = residue_b_closed_form(coeffs[: theta.degree + 1])
    if op.order != len(expected_b) - 1:
        return OracleReport(name, False, ("order", len(expected_b) - 1, op.order))
    for j, eb in enumerate(expected_b):
        if op.coeff(j) != eb:
            return OracleReport(name, False, (f"b_{j}", eb, op.coeff(j)))
    return OracleReport(name, True)


# ----------------------------------------------------------------------------
# direct expansion of psi B = theta psi


def _add(d: dict, key, value: MatC) -> None:
    if value.is_zero():
        return
    cur = d.get(key)
    d[key] = value if cur is None else cur + value


def _potential_terms(V) -> tuple[dict[int, MatC], int | None]:
    """x-power -> coefficient, plus the last trusted power (None = exact)."""
    if isinstance(V, MatPoly):
        return {s: c for s, c in enumerate(V.coeffs) if not c.is_zero()}, None
    terms = {}
    if not V.residue.is_zero():
        terms[-1] = V.residue
    for s, c in enumerate(V.coeffs):
        if not c.is_zero():
            terms[s] = c
    return terms, (None if V.is_exact else V.truncation_order)


def _lcm(a: ScalarPolyZ, b: ScalarPolyZ) -> ScalarPolyZ:
    return (a * b).exact_div(poly_gcd(a, b)).monic()


def expand_bispectral_identity(theta: MatPoly, B: DiffOpZ, V, K: int | None = None) -> OracleReport:
    """Expand D(z) e^{-xz} (psi B) and D(z) e^{-xz} theta psi as sums of
    x^s z^t terms, D the common denominator of the b_j, and compare.

    psi = (Iz + V/2) e^{xz}; (psi B) = sum_j (d/dz)^j psi . b_j(z), where
    d/dz acts on f e^{xz} as f -> f_z + x f. For a truncated V only powers
    x^s with s <= K are compared.
    """
    n = theta.dim
    terms, trusted = _potential_terms(V)
    if K is not None:
        trusted = K if trusted is None else min(trusted, K)
    name = "bispectral_identity"

    psi: dict[tuple[int, int], MatC] = {(0, 1): MatC.identity(n)}
    for s, c in terms.items():
        _add(psi, (s, 0), c.scale(Fraction(1, 2)))

    den = ScalarPolyZ([GaussianRational(1)])
    for j in range(B.order + 1):
        den = _lcm(den, B.coeff(j).denominator)

    lhs: dict[tuple[int, int], MatC] = {}
    deriv = dict(psi)
    for j in range(B.order + 1):
        bj = B.coeff(j)
        factor = den.exact_div(bj.denominator)
        # numerator of D b_j as z-power -> matrix
        scaled = {}
        for u, c in enumerate(bj.numerator.coeffs):
            for w, f in enumerate(factor.coeffs):
                if f and not c.is_zero():
                    _add(scaled, u + w, c.scale(f))
        for (s, t), c in deriv.items():
            for u, b in scaled.items():
                _add(lhs, (s, t + u), c @ b)
        nxt: dict[tuple[int, int], MatC] = {}
        for (s, t), c in deriv.items():
            if t:
                _add(nxt, (s, t - 1), c.scale(t))
            _add(nxt, (s + 1, t), c)
        deriv = nxt

    rhs: dict[tuple[int, int], MatC] = {}
    for l, a in enumerate(theta.coeffs):
        if a.is_zero():
            continue
        for (s, t), c in psi.items():
            prod = a @ c
            for w, f in enumerate(den.coeffs):
                if f:
                    _add(rhs, (s + l, t + w), prod.scale(f))

    keys = sorted(set(lhs) | set(rhs))
    zero = MatC.zeros(n)
    for key in keys:
        s, t = key
        if trusted is not None and s > trusted:
            continue
        got, expected = lhs.get(key, zero), rhs.get(key, zero)
        if got != expected:
            return OracleReport(name, False, (f"x^{s} z^{t}", expected, got))
    return OracleReport(name, True)
