import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from matbispec.algebra import (
    NEG_INF,
    GaussianRational,
    MatC,
    MatLaurent,
    MatPoly,
    RatMatZ,
    ScalarPolyZ,
    charpoly,
    polyx_commutator,
    polyx_mul,
    resolvent_solve,
)
from matbispec.errors import DimensionMismatch
from support import rand_mat

fractions = st.builds(Fraction, st.integers(-50, 50), st.integers(1, 12))
gaussians = st.builds(GaussianRational, fractions, fractions)


def mats(n):
    return st.lists(st.lists(gaussians, min_size=n, max_size=n), min_size=n, max_size=n).map(lambda r: MatC(r, n))


# ---------------------------------------------------------------- scalars


@given(gaussians, gaussians, gaussians)
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a and a * b == b * a
    assert a - a == GaussianRational(0)
    if a:
        assert a * a.inverse() == GaussianRational(1)
        assert (b / a) * a == b


def test_imaginary_unit_and_parsing():
    i = GaussianRational(0, 1)
    assert i * i == GaussianRational(-1)
    assert GaussianRational.parse("3/4", "-1/2") == GaussianRational(Fraction(3, 4), Fraction(-1, 2))
    assert str(GaussianRational(Fraction(1, 2))) == "1/2"


def test_floats_rejected():
    with pytest.raises(TypeError):
        GaussianRational(0.5)
    with pytest.raises(TypeError):
        GaussianRational.coerce(1j)


def test_zero_has_no_inverse():
    with pytest.raises(ZeroDivisionError):
        GaussianRational(0).inverse()


def test_hash_consistent_with_int():
    assert GaussianRational(3) == 3
    assert hash(GaussianRational(3)) == hash(GaussianRational(Fraction(6, 2)))


# ---------------------------------------------------------------- matrices


@settings(max_examples=40)
@given(mats(3), mats(3))
def test_submultiplicative_squared_norm(a, b):
    assert (a @ b).frobenius_norm_sq() <= a.frobenius_norm_sq() * b.frobenius_norm_sq()


@settings(max_examples=30)
@given(mats(3))
def test_inverse_roundtrip(a):
    if a.rank() < 3:
        with pytest.raises(ZeroDivisionError):
            a.inverse()
    else:
        assert a @ a.inverse() == MatC.identity(3)


def test_kernel_and_solve():
    a = MatC([[1, 2, 3], [2, 4, 6], [0, 1, 1]])
    ker = a.kernel_basis()
    assert len(ker) == 1 and (a @ ker[0]).is_zero()
    rhs = MatC([[1], [2], [1]])
    x = a.solve(rhs)
    assert a @ x == rhs
    assert a.solve(MatC([[1], [0], [0]])) is None


def test_from_blocks_and_block():
    a, b = MatC([[1]]), MatC([[2]])
    m = MatC.from_blocks([[a, b], [b, a]])
    assert m == MatC([[1, 2], [2, 1]])
    assert m.block(0, 1, 1, 2) == b


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        MatC.identity(2) + MatC.identity(3)
    with pytest.raises(DimensionMismatch):
        MatC.identity(2) @ MatC.identity(3)


# ---------------------------------------------------------------- polynomials


def test_zero_polynomial_degree_is_sentinel():
    z = MatPoly.zero(2)
    assert z.degree == NEG_INF and z.degree != -1
    assert MatPoly([MatC.zeros(2), MatC.zeros(2)]).is_zero()


@settings(max_examples=25)
@given(st.lists(mats(2), min_size=1, max_size=3), st.lists(mats(2), min_size=1, max_size=3))
def test_commutator_identity(p, q):
    p, q = MatPoly(p, 2), MatPoly(q, 2)
    assert polyx_commutator(p, q) == polyx_mul(p, q) - polyx_mul(q, p)


@settings(max_examples=25)
@given(st.lists(mats(2), min_size=1, max_size=3), st.lists(mats(2), min_size=1, max_size=3), gaussians)
def test_product_evaluates_pointwise(p, q, t):
    p, q = MatPoly(p, 2), MatPoly(q, 2)
    assert (p * q)(t) == p(t) @ q(t)


def test_derivative():
    a, b = MatC([[1, 2], [3, 4]]), MatC([[0, 1], [1, 0]])
    p = MatPoly([a, a, b])
    assert p.derivative() == MatPoly([a, b.scale(2)])


def test_laurent_coefficients():
    r = MatC.scalar(2, -2)
    v = MatLaurent(r, [MatC.identity(2)], 3)
    assert v.coeff(-1) == r and v.coeff(0) == MatC.identity(2)
    assert v.coeff(2).is_zero()
    with pytest.raises(IndexError):
        v.coeff(4)
    exact = MatLaurent.exact(r)
    assert exact.coeff(100).is_zero()


# ---------------------------------------------------------------- rational functions


def test_scalar_poly_division_and_gcd():
    from matbispec.algebra import poly_gcd

    a = ScalarPolyZ([1, 0, -1])  # 1 - z^2
    b = ScalarPolyZ([1, 1])  # 1 + z
    q, r = a.divmod(b)
    assert r.is_zero() and q == ScalarPolyZ([1, -1])
    assert poly_gcd(a, ScalarPolyZ([-1, 1])) == ScalarPolyZ([-1, 1])


def test_ratmat_normal_form():
    num = MatPoly([MatC([[0, 0], [0, 0]]), MatC.identity(2)])  # z I
    r = RatMatZ(num, ScalarPolyZ([0, 0, 2]))  # z / (2 z^2)
    assert r.denominator == ScalarPolyZ([0, 1])
    assert r.numerator == MatPoly([MatC.scalar(2, Fraction(1, 2))])
    half = RatMatZ(MatPoly([MatC.identity(2)]), ScalarPolyZ([2]))
    assert half == RatMatZ.constant(MatC.scalar(2, Fraction(1, 2)))


def test_ratmat_addition_common_denominator():
    i2 = MatPoly([MatC.identity(2)])
    a = RatMatZ(i2, ScalarPolyZ([1, 1]))
    b = RatMatZ(i2, ScalarPolyZ([-1, 1]))
    s = a + b  # 2z / (z^2 - 1)
    assert s.denominator == ScalarPolyZ([-1, 0, 1])
    assert (s - a - b).is_zero()
    assert s(2) == MatC.scalar(2, Fraction(4, 3))


def test_limit_at_infinity():
    num = MatPoly([MatC.identity(2), MatC.scalar(2, 3)])
    r = RatMatZ(num, ScalarPolyZ([5, 1]))
    assert r.limit_at_infinity() == MatC.scalar(2, 3)
    assert not RatMatZ(num).has_limit_at_infinity()


def test_charpoly_companion():
    # companion matrix of z^3 - 2 z + 5
    c = MatC([[0, 0, -5], [1, 0, 2], [0, 1, 0]])
    assert charpoly(c) == ScalarPolyZ([5, -2, 0, 1])


def _multiply_back(a: MatC, blocks, nb):
    out = []
    for r in range(len(blocks)):
        acc = blocks[r].times_z()
        for c in range(len(blocks)):
            acc = acc + blocks[c].left_mul(a.block(r * nb, (r + 1) * nb, c * nb, (c + 1) * nb))
        out.append(acc)
    return out


@pytest.mark.parametrize("seed", range(12))
def test_resolvent_multiply_back(seed):
    rng = random.Random(seed)
    nb, nblocks = rng.choice([(1, 3), (2, 2), (2, 3), (3, 2)])
    a = rand_mat(rng, nb * nblocks, density=0.7)
    rhs = [rand_mat(rng, nb, density=0.8) for _ in range(nblocks)]
    c = resolvent_solve(a, rhs)
    back = _multiply_back(a, c, nb)
    assert back == [RatMatZ.constant(r) for r in rhs]


def test_resolvent_of_zero_matrix():
    p = MatC([[1, 2], [3, 4]])
    (c,) = resolvent_solve(MatC.zeros(2), [p])
    assert c == RatMatZ(MatPoly([p]), ScalarPolyZ([0, 1]))


def test_resolvent_nilpotent_denominator_is_power_of_z():
    a = MatC([[0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [0, 0, 0, 0]])
    c = resolvent_solve(a, [MatC([[1, 0], [0, 1]]), MatC([[2, 0], [1, 1]])])
    for blk in c:
        d = blk.denominator
        assert all(not x for x in d.coeffs[:-1])
