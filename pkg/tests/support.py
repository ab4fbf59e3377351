"""Shared generators for the test suite."""

from __future__ import annotations

import random
from fractions import Fraction

from matbispec.algebra import GaussianRational, MatC, MatPoly
from matbispec.bispectral import as_potential, build_A1, build_A2, p_k, p_vector


def rand_frac(rng: random.Random, span: int = 9, den: int = 5) -> Fraction:
    return Fraction(rng.randint(-span, span), rng.randint(1, den))


def rand_gr(rng: random.Random, complex_prob: float = 0.3) -> GaussianRational:
    im = rand_frac(rng) if rng.random() < complex_prob else 0
    return GaussianRational(rand_frac(rng), im)


def rand_mat(rng: random.Random, n: int, density: float = 1.0, cols: int | None = None) -> MatC:
    cols = n if cols is None else cols
    return MatC([[rand_gr(rng) if rng.random() < density else 0 for _ in range(cols)] for _ in range(n)], cols)


def rand_poly(rng: random.Random, n: int, degree: int) -> MatPoly:
    return MatPoly([rand_mat(rng, n) for _ in range(degree + 1)], n)


def _condition_values(theta: MatPoly, V, m: int) -> list:
    """Every scalar the membership test requires to vanish, for degree bound m."""
    pot = as_potential(V)
    n = pot.dim
    vals = []
    mats = [p_k(theta, pot, 0)]
    a1, a2 = build_A1(pot, m), build_A2(pot, m)
    w = list(p_vector(theta, pot, 1, m + 1).entries)
    for _ in range((m + 1) * n):
        mats.append(pot.residue @ w[0])
        mats.extend(a2.apply(w))
        w = a1.apply(w)
    deg = pot.degree if pot.coeffs else 0
    deg = 0 if deg == float("-inf") else deg
    for k in range(m + 2, m + deg + 2):
        mats.append(p_k(theta, pot, k))
    for mat in mats:
        vals.extend(v for row in mat.rows for v in row)
    return vals


def member_space_basis(V, m: int) -> list[MatPoly]:
    """Basis of {theta : deg theta <= m, all degree-m conditions vanish}."""
    n = V.dim
    basis = []
    for l in range(m + 1):
        for p in range(n):
            for q in range(n):
                basis.append(MatPoly.monomial(MatC.unit(n, p, q), l))
    columns = [_condition_values(t, V, m) for t in basis]
    matrix = MatC([list(r) for r in zip(*columns)], len(basis))
    out = []
    for vec in matrix.kernel_basis():
        theta = MatPoly.zero(n)
        for i, t in enumerate(basis):
            c = vec[i, 0]
            if c:
                theta = theta + t.scale(c)
        out.append(theta)
    return out


def random_member(rng: random.Random, basis: list[MatPoly]) -> MatPoly:
    theta = basis[0].scale(0)
    for b in basis:
        theta = theta + b.scale(rand_frac(rng, 4, 3))
    return theta
