"""The bispectral algebra of L = -d^2/dx^2 + V'(x) with psi = (Iz + V/2) e^{xz}.

For a matrix polynomial theta(x) = sum_j a_j x^j of degree m, an operator
B = sum_j d^j/dz^j . b_j(z) with psi B = theta psi exists iff theta passes a
finite list of linear conditions built from the functionals

    P_k(theta) = k a_k - 1/2 sum_{j=0}^{k} [a_j, V_{k-1-j}]

and the block matrices A1 (lower block Hessenberg, size (m+1)N) and A2.
When it does, b_j = a_j + c_j where (A1 + z) c(z) = -(P_1, ..., P_{m+1}).
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .algebra import DiffOpZ, MatC, MatLaurent, MatPoly, RatMatZ, resolvent_solve
from .algebra.polynomials import polyx_commutator
from .autonomous import Check, check_autonomous
from .errors import DimensionMismatch, NotAMember, PotentialNotAutonomous, SignConventionFailure

__all__ = [
    "PVector",
    "BlockMatrix",
    "MembershipCertificate",
    "Monomial12",
    "NilpotencyResult",
    "as_potential",
    "p_k",
    "p_vector",
    "p_operator_form",
    "p_operator_form_check",
    "product_formula_check",
    "build_A1",
    "build_A2",
    "membership",
    "commutator_degree_check",
    "candidate_B",
    "synthesize_B",
    "lambda_residual",
    "check_physical",
    "nilpotency_conditions",
    "subindex_invariant_check",
]

log = logging.getLogger(__name__)

HALF = Fraction(1, 2)

Potential = MatPoly | MatLaurent


def as_potential(v: Potential) -> MatLaurent:
    """Exact Laurent view of a potential (a truncated tail is read as zero)."""
    if isinstance(v, MatPoly):
        return MatLaurent.from_poly(v)
    return v if v.is_exact else v.as_exact()


def _poly_degree(v: MatLaurent) -> int:
    d = v.degree
    return 0 if d == float("-inf") else d


def _theta_degree(theta: MatPoly) -> int:
    d = theta.degree
    return 0 if d == float("-inf") else d


# ----------------------------------------------------------------------------
# the P_k family


def p_k(theta: MatPoly, V: Potential, k: int) -> MatC:
    """P_k(theta); for k = 0 the derivative term is dropped (1/(-1)! = 0)."""
    if k < 0:
        raise ValueError("P_k is defined for k >= 0")
    if theta.dim != V.dim:
        raise DimensionMismatch(f"theta has dim {theta.dim}, V has dim {V.dim}")
    n = theta.dim
    comm = MatC.zeros(n)
    for j in range(0, k + 1):
        a = theta.coeff(j)
        if a.is_zero():
            continue
        w = V.coeff(k - 1 - j)
        if not w.is_zero():
            comm = comm + (a @ w - w @ a)
    out = comm.scale(-HALF)
    if k >= 1:
        out = out + theta.coeff(k).scale(k)
    return out


def p_operator_form(theta: MatPoly, V: Potential, k: int) -> MatC:
    """P_k via k a_k + 1/2 [x^k] (x [V(x), theta(x)]), with xV a polynomial."""
    top = V.top if isinstance(V, MatLaurent) else len(V.coeffs) - 1
    xv = MatPoly([V.coeff(j - 1) for j in range(0, max(top, -1) + 2)], V.dim)
    ad = polyx_commutator(xv, theta)
    out = ad.coeff(k).scale(HALF)
    return out + theta.coeff(k).scale(k)


def p_operator_form_check(theta: MatPoly, V: Potential, k: int) -> bool:
    return p_k(theta, V, k) == p_operator_form(theta, V, k)


def product_formula_check(theta1: MatPoly, theta2: MatPoly, V: Potential, k: int) -> bool:
    """P_k(t1 t2) == sum_s P_{k-s}(t1) t2_s + t1_s P_{k-s}(t2)."""
    lhs = p_k(theta1 * theta2, V, k)
    rhs = MatC.zeros(theta1.dim)
    for s in range(0, k + 1):
        rhs = rhs + p_k(theta1, V, k - s) @ theta2.coeff(s) + theta1.coeff(s) @ p_k(theta2, V, k - s)
    return lhs == rhs


@dataclass(frozen=True)
class PVector:
    entries: tuple[MatC, ...]
    k_lo: int
    k_hi: int

    def __post_init__(self):
        if len(self.entries) != self.k_hi - self.k_lo + 1:
            raise ValueError("entry count does not match the index range")

    def is_zero(self) -> bool:
        return all(e.is_zero() for e in self.entries)


def p_vector(theta: MatPoly, V: Potential, k_lo: int, k_hi: int) -> PVector:
    return PVector(tuple(p_k(theta, V, k) for k in range(k_lo, k_hi + 1)), k_lo, k_hi)


# ----------------------------------------------------------------------------
# block matrices


@dataclass(frozen=True)
class BlockMatrix:
    blocks: tuple[tuple[MatC, ...], ...]
    block_dim: int
    block_cols: int

    @property
    def block_rows(self) -> int:
        return len(self.blocks)

    def block(self, r: int, c: int) -> MatC:
        return self.blocks[r][c]

    def apply(self, vec: Sequence[MatC]) -> list[MatC]:
        if len(vec) != self.block_cols:
            raise DimensionMismatch("block vector length differs from block column count")
        out = []
        for row in self.blocks:
            acc = MatC.zeros(self.block_dim)
            for b, v in zip(row, vec):
                if not b.is_zero() and not v.is_zero():
                    acc = acc + b @ v
            out.append(acc)
        return out

    def __matmul__(self, other: "BlockMatrix") -> "BlockMatrix":
        if self.block_cols != other.block_rows:
            raise DimensionMismatch("block shapes do not chain")
        rows = []
        for r in range(self.block_rows):
            row = []
            for c in range(other.block_cols):
                acc = MatC.zeros(self.block_dim)
                for k in range(self.block_cols):
                    a, b = self.blocks[r][k], other.blocks[k][c]
                    if not a.is_zero() and not b.is_zero():
                        acc = acc + a @ b
                row.append(acc)
            rows.append(tuple(row))
        return BlockMatrix(tuple(rows), self.block_dim, other.block_cols)

    def power(self, k: int) -> "BlockMatrix":
        n = self.block_rows
        ident = MatC.identity(self.block_dim)
        zero = MatC.zeros(self.block_dim)
        result = BlockMatrix(
            tuple(tuple(ident if i == j else zero for j in range(n)) for i in range(n)),
            self.block_dim,
            n,
        )
        for _ in range(k):
            result = result @ self
        return result

    def is_zero(self) -> bool:
        return all(b.is_zero() for row in self.blocks for b in row)

    def to_matc(self) -> MatC:
        if not self.blocks:
            return MatC.zeros(0, self.block_cols * self.block_dim)
        return MatC.from_blocks(self.blocks)


def build_A1(V: Potential, m: int) -> BlockMatrix:
    """(m+1) x (m+1) blocks: V_{r-c}/2 on and below the diagonal,
    V_{-1}/2 + (r+1) I on the superdiagonal (0-based block row r)."""
    n = V.dim
    zero = MatC.zeros(n)
    half_res = V.coeff(-1).scale(HALF)
    rows = []
    for r in range(m + 1):
        row = []
        for c in range(m + 1):
            if c <= r:
                row.append(V.coeff(r - c).scale(HALF))
            elif c == r + 1:
                row.append(half_res + MatC.scalar(n, r + 1))
            else:
                row.append(zero)
        rows.append(tuple(row))
    return BlockMatrix(tuple(rows), n, m + 1)


def build_A2(V: Potential, m: int) -> BlockMatrix:
    """deg(V) block rows; block (r, c) = V_{m+r+1-c} (0-based r, c)."""
    pot = as_potential(V)
    n_rows = _poly_degree(pot) if pot.coeffs else 0
    rows = []
    for r in range(n_rows):
        rows.append(tuple(pot.coeff(m + r + 1 - c) for c in range(m + 1)))
    return BlockMatrix(tuple(rows), V.dim, m + 1)


# ----------------------------------------------------------------------------
# membership


@dataclass(frozen=True)
class MembershipCertificate:
    theta: MatPoly
    verdict: bool
    failed_condition: str | None = None
    k: int | None = None
    witness: MatC | None = None

    def __post_init__(self):
        if self.verdict != (self.failed_condition is None):
            raise ValueError("a negative verdict needs a failed condition and vice versa")
        if not self.verdict and (self.witness is None or self.witness.is_zero()):
            raise ValueError("a negative verdict needs a nonzero witness")

    def __bool__(self):
        return self.verdict


def _chain(theta: MatPoly, V: MatLaurent, m: int, steps: int) -> list[list[MatC]]:
    a1 = build_A1(V, m)
    w = list(p_vector(theta, V, 1, m + 1).entries)
    out = [w]
    for _ in range(steps - 1):
        w = a1.apply(w)
        out.append(w)
    return out


def _commutator_witness(theta: MatPoly, V: MatLaurent) -> MatC | None:
    m = _theta_degree(theta)
    xv = MatPoly([V.coeff(j - 1) for j in range(0, len(V.coeffs) + 1)], V.dim)
    xad = polyx_commutator(theta, xv)  # x [theta, V]
    if not xad.coeff(0).is_zero():
        return xad.coeff(0)
    if xad.degree > m + 1:
        return xad.coeffs[-1]
    return None


def commutator_degree_check(theta: MatPoly, V: Potential) -> bool:
    """[theta, V] is a polynomial of degree <= deg(theta)."""
    return _commutator_witness(theta, as_potential(V)) is None


def membership(theta: MatPoly, V: Potential, prefilter: bool = False) -> MembershipCertificate:
    """Decide whether theta lies in the bispectral algebra of V.

    Checks, in order: P_0 = 0; V_{-1} (A1^k P)_0 = 0 and A2 A1^k P = 0 for
    0 <= k < (m+1)N; P_k = 0 on the finite window m+2 <= k <= m+n+1. With
    ``prefilter`` the commutator-degree test runs first.
    """
    pot = as_potential(V)
    if theta.dim != pot.dim:
        raise DimensionMismatch(f"theta has dim {theta.dim}, V has dim {pot.dim}")
    premise = check_autonomous(pot)
    if not premise:
        raise PotentialNotAutonomous(premise.first_failure)
    m = _theta_degree(theta)
    n = _poly_degree(pot)
    dim = pot.dim

    if prefilter:
        w = _commutator_witness(theta, pot)
        if w is not None:
            return MembershipCertificate(theta, False, "CommutatorDegree", None, w)

    p0 = p_k(theta, pot, 0)
    if not p0.is_zero():
        return MembershipCertificate(theta, False, "P0", 0, p0)

    steps = (m + 1) * dim
    chain = _chain(theta, pot, m, steps)
    res = pot.residue
    if not res.is_zero():
        for k, w in enumerate(chain):
            row = res @ w[0]
            if not row.is_zero():
                return MembershipCertificate(theta, False, "ResidueRow", k, row)
    a2 = build_A2(pot, m)
    if a2.block_rows:
        for k, w in enumerate(chain):
            for blk in a2.apply(w):
                if not blk.is_zero():
                    return MembershipCertificate(theta, False, "A2Chain", k, blk)
    for k in range(m + 2, m + n + 2):
        pk = p_k(theta, pot, k)
        if not pk.is_zero():
            return MembershipCertificate(theta, False, "PTail", k, pk)
    return MembershipCertificate(theta, True)


# ----------------------------------------------------------------------------
# the spectral operator


def candidate_B(theta: MatPoly, V: Potential, sign: int = 1) -> DiffOpZ:
    """b_j = a_j + sign * c_j with (A1 + z) c = -P_1^{m+1}; no membership check."""
    pot = as_potential(V)
    m = _theta_degree(theta)
    a1 = build_A1(pot, m).to_matc()
    rhs = [-p for p in p_vector(theta, pot, 1, m + 1).entries]
    c = resolvent_solve(a1, rhs)
    bs = []
    for j in range(m + 1):
        cj = c[j] if sign > 0 else -c[j]
        bs.append(RatMatZ.constant(theta.coeff(j)) + cj)
    return DiffOpZ(bs)


def _all_zero(residual) -> bool:
    return all(r.is_zero() for _, r in residual)


def synthesize_B(theta: MatPoly, V: Potential) -> DiffOpZ:
    """The unique B of order deg(theta) with psi B = theta psi.

    The result is checked against lambda_residual before it is returned.
    """
    cert = membership(theta, V)
    if not cert:
        raise NotAMember(cert)
    op = candidate_B(theta, V, +1)
    if _all_zero(lambda_residual(theta, op, V)):
        return op
    flipped = candidate_B(theta, V, -1)
    if _all_zero(lambda_residual(theta, flipped, V)):
        log.warning("spectral operator needed b_j = a_j - c_j; check the sign convention")
        return flipped
    raise SignConventionFailure("neither sign of c(z) annihilates the residual")


def lambda_residual(theta: MatPoly, B: DiffOpZ, V: Potential) -> list[tuple[int, RatMatZ]]:
    """x-coefficients of e^{-xz}(psi B - theta psi), as (power s, value) pairs.

    With b_j = a_j = 0 outside 0..m, the coefficient of x^s (s >= -1) is

        (b_s - a_s) z + (s+1) b_{s+1} + 1/2 sum_{j=0}^{s+1} (V_{s-j} b_j - a_j V_{s-j}).

    For s = -1 this is (V_{-1} b_0 - a_0 V_{-1})/2, for s = m the b_{s+1}
    terms drop out, and for s > m only the V-sum survives.
    """
    pot = as_potential(V)
    if theta.dim != pot.dim or B.dim != pot.dim:
        raise DimensionMismatch("theta, B and V must share a dimension")
    m = max(_theta_degree(theta), B.order)
    n = _poly_degree(pot)
    b = [B.coeff(j) for j in range(m + 2)]
    a = [theta.coeff(j) for j in range(m + 2)]
    out = []
    for s in range(-1, m + n + 1):
        acc = RatMatZ.zero(pot.dim)
        if 0 <= s <= m:
            acc = acc + (b[s] - RatMatZ.constant(a[s])).times_z()
        if 0 <= s + 1 <= m:
            acc = acc + b[s + 1].scale(s + 1)
        for j in range(0, min(s + 1, m) + 1):
            vj = pot.coeff(s - j)
            if vj.is_zero():
                continue
            acc = acc + (b[j].left_mul(vj) - RatMatZ.constant(a[j] @ vj)).scale(HALF)
        out.append((s, acc))
    return out


# ----------------------------------------------------------------------------
# the physical equation


def check_physical(V: Potential, K: int | None = None) -> Check:
    """Check (L psi)(x, z) = -z^2 psi(x, z) by expanding psi e^{-xz}.

    psi e^{-xz} = Iz + V(x)/2 is held as a map (x-power, z-power) -> matrix;
    d/dx acts on f e^{xz} as f -> f_x + z f. Every coefficient up to x-power
    K - 2 must vanish (all of them for exact input). The first failing
    order is reported as x-power + 2.
    """
    dim = V.dim
    if isinstance(V, MatPoly):
        lo, hi, exact = 0, len(V.coeffs) - 1, True
    else:
        lo, hi, exact = -1, V.top, V.is_exact
    f: dict[tuple[int, int], MatC] = {}
    for s in range(lo, hi + 1):
        c = V.coeff(s)
        if not c.is_zero():
            f[(s, 0)] = c.scale(HALF)
    f[(0, 1)] = MatC.identity(dim)

    def dx(g):
        out: dict[tuple[int, int], MatC] = {}
        for (s, t), c in g.items():
            if s:
                _acc(out, (s - 1, t), c.scale(s))
            _acc(out, (s, t + 1), c)
        return out

    vprime = {s - 1: V.coeff(s).scale(s) for s in range(lo, hi + 1) if s and not V.coeff(s).is_zero()}
    total: dict[tuple[int, int], MatC] = {}
    for key, c in dx(dx(f)).items():
        _acc(total, key, -c)
    for (s, t), c in f.items():
        for p, w in vprime.items():
            _acc(total, (s + p, t), w @ c)
        _acc(total, (s, t + 2), c)
    limit = None if exact else (K if K is not None else hi) - 2
    if K is not None and exact:
        limit = K - 2
    bad = sorted(s for (s, t), c in total.items() if not c.is_zero() and (limit is None or s <= limit))
    if bad:
        return Check(False, bad[0] + 2)
    return Check(True)


def _acc(d: dict, key, value: MatC) -> None:
    if key in d:
        d[key] = d[key] + value
    else:
        d[key] = value


# ----------------------------------------------------------------------------
# nilpotency conditions on (V0, V1)


@dataclass(frozen=True)
class Monomial12:
    """V1^{i1} V0^{i2} V1^{i3} ... given by its run exponents (i1 >= 1)."""

    exponents: tuple[int, ...]

    def __post_init__(self):
        if not self.exponents or self.exponents[0] < 1:
            raise ValueError("a monomial must start with a positive power of V1")

    @classmethod
    def from_word(cls, word: str) -> "Monomial12":
        runs = [len(list(g)) for _, g in itertools.groupby(word)]
        return cls(tuple(runs))

    @property
    def word(self) -> str:
        return "".join(("1" if i % 2 == 0 else "0") * e for i, e in enumerate(self.exponents))

    @property
    def deg12(self) -> int:
        return 2 * sum(self.exponents[0::2]) + sum(self.exponents[1::2])

    @property
    def length(self) -> int:
        return sum(self.exponents)

    def evaluate(self, V0: MatC, V1: MatC) -> MatC:
        out = MatC.identity(V0.n_rows)
        for ch in self.word:
            out = out @ (V1 if ch == "1" else V0)
        return out

    def __str__(self):
        parts = []
        for i, e in enumerate(self.exponents):
            if e:
                name = "V1" if i % 2 == 0 else "V0"
                parts.append(name if e == 1 else f"{name}^{e}")
        return " ".join(parts)


@dataclass(frozen=True)
class NilpotencyResult:
    ok: bool
    failing: Monomial12 | None = None
    witness: MatC | None = None

    def __bool__(self):
        return self.ok


def monomial_conditions(n: int) -> list[Monomial12]:
    """All distinct words starting with V1 of length <= n+1 and deg12 >= n+2."""
    out = []
    for length in range(1, n + 2):
        for tail in itertools.product("10", repeat=length - 1):
            word = "1" + "".join(tail)
            mono = Monomial12.from_word(word)
            if mono.deg12 >= n + 2:
                out.append(mono)
    return out


def nilpotency_conditions(V0: MatC, V1: MatC, n: int) -> NilpotencyResult:
    if n < 1:
        raise ValueError("n must be at least 1")
    cache: dict[str, MatC] = {"": MatC.identity(V0.n_rows)}
    for mono in monomial_conditions(n):
        word = mono.word
        prod = cache.get(word[:-1])
        if prod is None:
            prod = mono.evaluate(V0, V1)
        else:
            prod = prod @ (V1 if word[-1] == "1" else V0)
        cache[word] = prod
        if not prod.is_zero():
            return NilpotencyResult(False, mono, prod)
    return NilpotencyResult(True)


def subindex_invariant_check(V: MatPoly, K: int | None = None) -> Check:
    """A2^[n] A1^[n]^k P_1^{n+1}(V) = 0 for 0 <= k <= K (default (n+1)N - 1)."""
    n = _theta_degree(V)
    pot = as_potential(V)
    steps = (n + 1) * V.dim if K is None else K + 1
    a2 = build_A2(pot, n)
    for k, w in enumerate(_chain(V, pot, n, steps)):
        if any(not blk.is_zero() for blk in a2.apply(w)):
            return Check(False, k)
    return Check(True)
