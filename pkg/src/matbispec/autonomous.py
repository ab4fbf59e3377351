"""Laurent solutions of the matrix autonomous equation V'' = V'V.

Writing V = sum_{k>=-1} V_k x^k, the equation is equivalent to

    k(k-1) V_k = sum_{j=-1}^{k} j V_j V_{k-1-j},   k = -1, 0, 1, ...

Order -1 forces R(R + 2I) = 0 for the residue R = V_{-1}, order 0 forces
R V_0 = 0, order 1 forces V_1 R = R V_1 (seeds here also satisfy R V_1 = 0), and for k >= 2 the unknown V_k enters only through
T_k(a) = k(k-1)a + R a - k a R. Everything here works in the basis where
R = diag(-2 I_m, 0), in which T_k acts on the four blocks by scalars.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .algebra import GaussianRational, MatC, MatLaurent, MatPoly
from .algebra.scalars import ONE
from .errors import (
    EvalAtPole,
    HypothesisViolated,
    KNotInvertible,
    NotNilpotent,
    QuadraticRelationViolated,
    SeedInconsistent,
)

__all__ = [
    "Check",
    "ResidueForm",
    "SeedData",
    "SeriesValue",
    "canonical_residue",
    "normalize_residue",
    "make_seed",
    "canonical_seed",
    "tk_apply",
    "tk_inverse",
    "tk_inverse_bound_sq",
    "solve_v2",
    "recurse_coefficients",
    "check_autonomous",
    "build_polynomial_solution",
    "equivariance_check",
    "quasihomogeneity_check",
    "norm_bound_check",
    "tk_inverse_norm_bound_check",
    "eval_series",
    "NORM_SQ_BOUNDS",
]

DEFAULT_ORDER = 32

# squared Frobenius thresholds for V0, V1, V2 (i.e. (1/4)^2, (1/8)^2, (1/16)^2)
NORM_SQ_BOUNDS = (Fraction(1, 16), Fraction(1, 64), Fraction(1, 256))


@dataclass(frozen=True)
class Check:
    """Outcome of a verification; ``first_failure`` locates the first violation."""

    ok: bool
    first_failure: int | None = None

    def __bool__(self):
        return self.ok


def canonical_residue(n: int, m: int) -> MatC:
    return MatC.diag([-2] * m + [0] * (n - m))


@dataclass(frozen=True)
class ResidueForm:
    m: int
    similarity: MatC
    canonical: MatC
    similarity_inv: MatC

    @property
    def dim(self) -> int:
        return self.canonical.n_rows

    def to_canonical(self, a: MatC) -> MatC:
        return self.similarity_inv @ a @ self.similarity

    def from_canonical(self, a: MatC) -> MatC:
        return self.similarity @ a @ self.similarity_inv


def normalize_residue(vm1: MatC) -> ResidueForm:
    """Bring a residue with R(R + 2I) = 0 to diag(-2 I_m, 0).

    The relation makes R diagonalizable with spectrum in {-2, 0}, so the
    similarity is assembled from kernel bases of R + 2I and R.
    """
    if not vm1.is_square():
        raise QuadraticRelationViolated("residue is not square")
    n = vm1.n_rows
    shifted = vm1 + MatC.scalar(n, 2)
    if not (vm1 @ shifted).is_zero():
        raise QuadraticRelationViolated("V_{-1}(V_{-1} + 2I) != 0")
    minus_two = shifted.kernel_basis()
    zero = vm1.kernel_basis()
    cols = minus_two + zero
    if len(cols) != n:  # cannot happen once the relation holds
        raise QuadraticRelationViolated("residue is not diagonalizable")
    s = MatC.from_blocks([cols]) if n else MatC.zeros(0)
    m = len(minus_two)
    return ResidueForm(m, s, canonical_residue(n, m), s.inverse())


@dataclass(frozen=True)
class SeedData:
    """Free data of a solution, all in the canonical residue basis.

    ``V212`` is the m x (N-m) block of V_2 left undetermined by T_2; it is
    None when m = 0 or m = N and defaults to zero otherwise.
    """

    residue_form: ResidueForm
    V0: MatC
    V1: MatC
    V212: MatC | None = None

    @property
    def dim(self) -> int:
        return self.residue_form.dim

    @property
    def m(self) -> int:
        return self.residue_form.m

    def free_block(self) -> MatC | None:
        m, n = self.m, self.dim
        if m == 0 or m == n:
            return None
        return self.V212 if self.V212 is not None else MatC.zeros(m, n - m)

    def validate(self) -> None:
        m, n = self.m, self.dim
        for name, v in (("V0", self.V0), ("V1", self.V1)):
            if v.shape != (n, n):
                raise SeedInconsistent(f"{name} has shape {v.shape}, expected {(n, n)}")
        for name, v in (("V0", self.V0), ("V1", self.V1)):
            for i in range(m):
                if any(v.rows[i]):
                    raise SeedInconsistent(f"V_{{-1}}{name} != 0 (row {i} of {name} in the canonical basis)")
        # order 1 reads V1 V_{-1} = V_{-1} V1, so the lower-left block of V1 vanishes too
        for i in range(m, n):
            for j in range(m):
                if self.V1[i, j]:
                    raise SeedInconsistent(f"V1 V_{{-1}} != 0 (entry {i},{j} of V1 in the canonical basis)")
        if self.V212 is not None and (m == 0 or m == n):
            if self.V212.n_rows * self.V212.n_cols:
                raise SeedInconsistent("V212 must be empty when m = 0 or m = N")
        elif self.V212 is not None and self.V212.shape != (m, n - m):
            raise SeedInconsistent(f"V212 has shape {self.V212.shape}, expected {(m, n - m)}")

    def with_values(self, V0: MatC, V1: MatC, V212: MatC | None) -> "SeedData":
        return SeedData(self.residue_form, V0, V1, V212)


def canonical_seed(n: int, m: int, V0: MatC | None = None, V1: MatC | None = None,
                   V212: MatC | None = None) -> SeedData:
    """Seed whose data is already expressed in the canonical basis."""
    ident = MatC.identity(n)
    form = ResidueForm(m, ident, canonical_residue(n, m), ident)
    seed = SeedData(
        form,
        V0 if V0 is not None else MatC.zeros(n),
        V1 if V1 is not None else MatC.zeros(n),
        V212,
    )
    seed.validate()
    return seed


def make_seed(residue: MatC, V0: MatC, V1: MatC, V212: MatC | None = None) -> SeedData:
    """Seed from data in an arbitrary basis; V212 is read in the canonical basis."""
    if not (residue @ V0).is_zero():
        raise SeedInconsistent("V_{-1}V0 != 0")
    if not (residue @ V1).is_zero():
        raise SeedInconsistent("V_{-1}V1 != 0")
    if not (V1 @ residue).is_zero():
        raise SeedInconsistent("V1 V_{-1} != 0")
    form = normalize_residue(residue)
    seed = SeedData(form, form.to_canonical(V0), form.to_canonical(V1), V212)
    seed.validate()
    return seed


# ----------------------------------------------------------------------------
# T_k and the recursion


def tk_apply(k: int, a: MatC, vm1: MatC) -> MatC:
    return a.scale(k * (k - 1)) + vm1 @ a - (a @ vm1).scale(k)


def _tk_factors(k: int) -> tuple[int, int, int, int]:
    return (k - 1) * (k + 2), (k - 2) * (k + 1), k * (k + 1), k * (k - 1)


def tk_inverse(k: int, b: MatC, m: int) -> MatC:
    """Unique a with T_k(a) = b, with b in the canonical basis and k >= 3."""
    if k < 3:
        raise KNotInvertible(f"T_{k} is not invertible (k must be >= 3)")
    f11, f12, f21, f22 = (Fraction(1, f) for f in _tk_factors(k))
    rows = []
    for i, row in enumerate(b.rows):
        top = i < m
        out = []
        for j, v in enumerate(row):
            if not v:
                out.append(v)
                continue
            left = j < m
            f = (f11 if left else f12) if top else (f21 if left else f22)
            out.append(v * f)
        rows.append(out)
    return MatC(rows, b.n_cols)


def solve_v2(seed: SeedData) -> MatC:
    """V_2 from T_2(V_2) = V_1 V_0, with the T_2-kernel block set to V212."""
    m, n = seed.m, seed.dim
    p = seed.V1 @ seed.V0
    free = seed.free_block()
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            if i < m and j < m:
                row.append(p[i, j] * Fraction(1, 4))
            elif i < m:
                if p[i, j]:
                    raise SeedInconsistent("V1 V0 has a nonzero (1,2) block")
                row.append(free[i, j - m])
            elif j < m:
                row.append(p[i, j] * Fraction(1, 6))
            else:
                row.append(p[i, j] * Fraction(1, 2))
        rows.append(row)
    return MatC(rows, n)


def recurse_coefficients(seed: SeedData, K: int = DEFAULT_ORDER) -> MatLaurent:
    """Truncated solution V_{-1}, V_0, ..., V_K in the canonical basis."""
    if K < 2:
        raise ValueError("truncation order must be at least 2")
    seed.validate()
    m = seed.m
    vs = [seed.V0, seed.V1, solve_v2(seed)]
    for k in range(3, K + 1):
        acc = MatC.zeros(seed.dim)
        for j in range(1, k):
            left, right = vs[j], vs[k - 1 - j]
            if left.is_zero() or right.is_zero():
                continue
            acc = acc + (left @ right).scale(j)
        vs.append(tk_inverse(k, acc, m))
    return MatLaurent(seed.residue_form.canonical, vs[: K + 1], K)


def check_autonomous(v: MatLaurent | MatPoly, K: int | None = None) -> Check:
    """Check V'' = V'V, reporting the first failing order k.

    Order k is the coefficient of x^(k-2). Polynomial input is checked as an
    exact identity; Laurent input order by order through K (or through the
    last order that can be nonzero, for exact Laurent polynomials).
    """
    if isinstance(v, MatPoly):
        diff = v.derivative().derivative() - v.derivative() * v
        if diff.is_zero():
            return Check(True)
        order = next(d for d, c in enumerate(diff.coeffs) if not c.is_zero()) + 2
        if K is not None and order > K:
            return Check(True)
        return Check(False, order)
    top = v.top
    limit = 2 * max(top, 0) + 1 if v.is_exact else top
    if K is not None:
        limit = min(K, limit) if not v.is_exact else K
    for k in range(-1, limit + 1):
        lhs = v.coeff(k).scale(k * (k - 1))
        rhs = MatC.zeros(v.dim)
        for j in range(-1, k + 1):
            if j == 0:
                continue
            a, b = v.coeff(j), v.coeff(k - 1 - j)
            if a.is_zero() or b.is_zero():
                continue
            rhs = rhs + (a @ b).scale(j)
        if lhs != rhs:
            return Check(False, k)
    return Check(True)


def _is_nilpotent(a: MatC) -> bool:
    n, p, e = a.n_rows, a, 1
    while e < n:
        p = p @ p
        e *= 2
    return p.is_zero()


def build_polynomial_solution(V1: MatC, max_order: int | None = None) -> MatPoly:
    """Polynomial solution grown from the seed (V_{-1}, V_0, V_1) = (0, 0, V1).

    V_{2j+1} is a rational multiple of V1^{j+1} and even coefficients vanish,
    so nilpotency of V1 makes the series terminate by degree 2N - 3.
    """
    n = V1.n_rows
    if not _is_nilpotent(V1):
        raise NotNilpotent("V1^N != 0")
    K = max_order if max_order is not None else 2 * n + 1
    seed = canonical_seed(n, 0, MatC.zeros(n), V1)
    series = recurse_coefficients(seed, max(K, 2))
    poly = series.polynomial_part()
    if not check_autonomous(poly):
        raise ValueError(f"series has not terminated by order {K}; raise max_order")
    return poly


# ----------------------------------------------------------------------------
# symmetry checks


def _blocks(a: MatC, m: int):
    n = a.n_rows
    return (a.block(0, m, 0, m), a.block(0, m, m, n), a.block(m, n, 0, m), a.block(m, n, m, n))


def equivariance_check(seed: SeedData, A: MatC, K: int) -> Check:
    """Compare V_k(A V0, A^2 V1, A^3 V2) with A^{k+1} V_k and V_k A^{k+1}.

    Raises HypothesisViolated listing every failed precondition on A.
    """
    m = seed.m
    v2 = solve_v2(seed)
    a11, a12, a21, a22 = _blocks(A, m)
    failures = []
    if not a12.is_zero() or not a21.is_zero():
        failures.append("[A, V_{-1}] != 0 (A is not block diagonal)")
    for j, vj in enumerate((seed.V0, seed.V1, v2)):
        _, _, v21, _ = _blocks(vj, m)
        if a22 @ v21 != v21 @ a11:
            failures.append(f"A22 V{j}_21 != V{j}_21 A11")
    _, v2_12, _, _ = _blocks(v2, m)
    if a11 @ v2_12 != v2_12 @ a22:
        failures.append("A11 V2_12 != V2_12 A22")
    for j, vj in enumerate((seed.V0, seed.V1)):
        if a22.commutator(_blocks(vj, m)[3]) != MatC.zeros(a22.n_rows):
            failures.append(f"[A22, V{j}_22] != 0")
    if failures:
        raise HypothesisViolated(failures)

    free = seed.free_block()
    new_free = (a11 @ a11 @ a11) @ free if free is not None else None
    moved = seed.with_values(A @ seed.V0, A @ A @ seed.V1, new_free)
    base = recurse_coefficients(seed, max(K, 2))
    other = recurse_coefficients(moved, max(K, 2))
    power = A
    for k in range(0, K + 1):
        vk = base.coeff(k)
        if other.coeff(k) != power @ vk or other.coeff(k) != vk @ power:
            return Check(False, k)
        power = power @ A
    return Check(True)


def quasihomogeneity_check(seed: SeedData, lam, K: int) -> Check:
    """V_k(lam V0, lam^2 V1, lam^3 V2) == lam^{k+1} V_k(V0, V1, V2) for k <= K."""
    lam = GaussianRational.coerce(lam)
    free = seed.free_block()
    moved = seed.with_values(
        seed.V0.scale(lam),
        seed.V1.scale(lam ** 2),
        free.scale(lam ** 3) if free is not None else None,
    )
    base = recurse_coefficients(seed, max(K, 2))
    other = recurse_coefficients(moved, max(K, 2))
    for k in range(-1, K + 1):
        if other.coeff(k) != base.coeff(k).scale(lam ** (k + 1)):
            return Check(False, k)
    return Check(True)


# ----------------------------------------------------------------------------
# convergence estimates


def _check_seed_norms(v0: MatC, v1: MatC, v2: MatC) -> list[str]:
    failures = []
    for name, v, bound in zip(("V0", "V1", "V2"), (v0, v1, v2), NORM_SQ_BOUNDS):
        if v.frobenius_norm_sq() > bound:
            failures.append(f"||{name}||_F^2 = {v.frobenius_norm_sq()} exceeds {bound}")
    return failures


def norm_bound_check(seed: SeedData, K: int) -> Check:
    """Verify ||V_k||_F^2 <= 4^{-(k+2)} for 3 <= k <= K."""
    failures = _check_seed_norms(seed.V0, seed.V1, solve_v2(seed))
    if failures:
        raise HypothesisViolated(failures)
    series = recurse_coefficients(seed, max(K, 2))
    for k in range(3, K + 1):
        if series.coeff(k).frobenius_norm_sq() > Fraction(1, 4 ** (k + 2)):
            return Check(False, k)
    return Check(True)


def tk_inverse_bound_sq(k: int) -> Fraction:
    """Square of the operator-norm bound 4(k^2-3) / ((k-2)(k-1)(k+1)(k+2))."""
    c = Fraction(4 * (k * k - 3), (k - 2) * (k - 1) * (k + 1) * (k + 2))
    return c * c


def tk_inverse_norm_bound_check(k: int, samples: Iterable[MatC], m: int = 0) -> bool:
    if k < 3:
        raise KNotInvertible(f"T_{k} is not invertible (k must be >= 3)")
    bound = tk_inverse_bound_sq(k)
    for a in samples:
        if tk_inverse(k, a, m).frobenius_norm_sq() > bound * a.frobenius_norm_sq():
            return False
    return True


@dataclass(frozen=True)
class SeriesValue:
    value: MatC
    tail_bound: Fraction | None


def _abs_upper(x: GaussianRational, scale_bits: int = 40) -> Fraction:
    """Rational upper bound on |x|, exact when x is real."""
    if not x.im:
        return abs(x.re)
    q = x.abs2()
    s = 1 << scale_bits
    target = math.ceil(q * s * s)
    r = math.isqrt(target)
    if r * r < target:
        r += 1
    return Fraction(r, s)


def _is_canonical_residue(r: MatC) -> bool:
    n = r.n_rows
    seen_zero = False
    for i in range(n):
        for j in range(n):
            v = r[i, j]
            if i != j and v:
                return False
        d = r[i, i]
        if d == 0:
            seen_zero = True
        elif d == -2:
            if seen_zero:
                return False
        else:
            return False
    return True


def eval_series(v: MatLaurent, x, K: int | None = None) -> SeriesValue:
    """Partial sum sum_{k=-1}^{K} V_k x^k with a rigorous tail estimate.

    The tail bound sum_{k>K} 2^{-(k+2)} r^k = 2^{-(K+3)} r^{K+1} / (1 - r/2),
    with r >= |x| rational, bounds the Frobenius norm of the remainder. It is
    only reported when |x| <= 1, the residue is canonical and the squared
    norms of V0, V1, V2 meet the convergence hypotheses; otherwise None.
    """
    x = GaussianRational.coerce(x)
    if not x:
        raise EvalAtPole("series has a pole at x = 0")
    K = v.top if K is None else K
    if not v.is_exact and K > v.truncation_order:
        raise ValueError(f"K = {K} exceeds the truncation order {v.truncation_order}")
    acc = v.residue.scale(x.inverse())
    power = ONE
    for k in range(0, K + 1):
        c = v.coeff(k)
        if not c.is_zero():
            acc = acc + c.scale(power)
        power = power * x
    tail = None
    if v.is_exact and K >= v.top:
        tail = Fraction(0)
    elif (
        K >= 2
        and x.abs2() <= 1
        and _is_canonical_residue(v.residue)
        and not _check_seed_norms(v.coeff(0), v.coeff(1), v.coeff(2))
    ):
        r = min(_abs_upper(x), Fraction(1))
        tail = Fraction(1, 2 ** (K + 3)) * r ** (K + 1) / (1 - r / 2)
    return SeriesValue(acc, tail)
