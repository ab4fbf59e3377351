"""Exact solution of ``(A + zI) c(z) = rhs`` over the field Q(i)(z).

The characteristic polynomial p(z) = det(zI + A) comes from a Hessenberg
reduction (O(n^3) field operations). The adjugate is never formed: with
M = -A and p(z) = sum_k c_k z^(n-k), adj(zI - M) = sum_k B_k z^(n-1-k) where
B_0 = I and B_k = M B_{k-1} + c_k I, so adj(zI - M) r is accumulated from
the vectors w_k = B_k r by matrix-vector products.
"""

from __future__ import annotations

from typing import Sequence

from ..errors import DimensionMismatch
from .matrix import MatC
from .polynomials import MatPoly
from .rational import RatMatZ, ScalarPolyZ
from .scalars import ONE, ZERO

__all__ = ["charpoly", "resolvent_solve", "hessenberg"]


def hessenberg(a: MatC) -> list[list]:
    """Upper Hessenberg matrix similar to ``a`` (as nested lists)."""
    n = a.n_rows
    h = [list(r) for r in a.rows]
    for j in range(n - 2):
        piv = next((i for i in range(j + 1, n) if h[i][j]), None)
        if piv is None:
            continue
        if piv != j + 1:
            h[piv], h[j + 1] = h[j + 1], h[piv]
            for row in h:
                row[piv], row[j + 1] = row[j + 1], row[piv]
        inv = h[j + 1][j].inverse()
        for i in range(j + 2, n):
            f = h[i][j] * inv
            if not f:
                continue
            # row_i -= f row_{j+1}; then col_{j+1} += f col_i keeps similarity
            hi, hp = h[i], h[j + 1]
            for c in range(n):
                if hp[c]:
                    hi[c] = hi[c] - f * hp[c]
            for row in h:
                if row[i]:
                    row[j + 1] = row[j + 1] + f * row[i]
    return h


def charpoly(a: MatC) -> ScalarPolyZ:
    """det(zI - a) as a monic polynomial in z."""
    if not a.is_square():
        raise DimensionMismatch("characteristic polynomial of a non-square matrix")
    n = a.n_rows
    h = hessenberg(a)
    # p[k] = charpoly of the leading k x k block
    p = [ScalarPolyZ([ONE])]
    z = ScalarPolyZ([ZERO, ONE])
    for k in range(1, n + 1):
        kk = k - 1
        acc = (z - ScalarPolyZ([h[kk][kk]])) * p[k - 1]
        prod = ONE
        for i in range(k - 1, 0, -1):
            prod = prod * h[i][i - 1]
            if not prod:
                break
            coef = h[i - 1][kk] * prod
            if coef:
                acc = acc - p[i - 1] * coef
        p.append(acc)
    return p[n]


def resolvent_solve(a: MatC, rhs: Sequence[MatC]) -> list[RatMatZ]:
    """Blocks of c(z) with (a + zI) c(z) = rhs stacked, each reduced.

    ``a`` has size (m+1)N and ``rhs`` holds m+1 blocks of size N x N.
    """
    if not a.is_square():
        raise DimensionMismatch("resolvent of a non-square matrix")
    if not rhs:
        raise ValueError("empty right-hand side")
    nb = rhs[0].n_rows
    if any(b.shape != (nb, nb) for b in rhs) or nb * len(rhs) != a.n_rows:
        raise DimensionMismatch("right-hand side blocks do not tile the matrix")
    n = a.n_rows
    m_mat = -a
    p = charpoly(m_mat)
    r = MatC.from_blocks([[b] for b in rhs])
    if r.is_zero():
        return [RatMatZ.zero(nb) for _ in rhs]
    # w_k for k = 0..n-1; numerator = sum_k w_k z^(n-1-k)
    w = r
    ws = [w]
    for k in range(1, n):
        w = m_mat @ w + r.scale(p.coeff(n - k))
        ws.append(w)
    num_coeffs = list(reversed(ws))  # index = power of z
    out = []
    for b in range(len(rhs)):
        blocks = [c.block(b * nb, (b + 1) * nb, 0, nb) for c in num_coeffs]
        out.append(RatMatZ(MatPoly(blocks, nb), p))
    return out
