import logging
import random
from fractions import Fraction

import pytest

from matbispec.algebra import MatC, MatLaurent, MatPoly, RatMatZ
from matbispec.bispectral import (
    Monomial12,
    as_potential,
    build_A1,
    build_A2,
    candidate_B,
    check_physical,
    commutator_degree_check,
    lambda_residual,
    membership,
    monomial_conditions,
    nilpotency_conditions,
    p_k,
    p_operator_form_check,
    product_formula_check,
    subindex_invariant_check,
    synthesize_B,
)
from matbispec.errors import DimensionMismatch, NotAMember, PotentialNotAutonomous
from matbispec.fixtures import fixture_potentials, n1_potential, n2_potential, residue_potential
from support import member_space_basis, rand_mat, rand_poly, random_member

F = Fraction
I2 = MatC.identity(2)


def all_zero(residual):
    return all(r.is_zero() for _, r in residual)


# ---------------------------------------------------------------- P_k


def test_p_k_scalar_theta_vanishes():
    V = n2_potential()
    theta = MatPoly([MatC.scalar(4, 3)])
    assert all(p_k(theta, V, k).is_zero() for k in range(8))


def test_p_k_zero_potential_is_derivative():
    rng = random.Random(0)
    theta = rand_poly(rng, 2, 4)
    V = MatPoly.zero(2)
    for k in range(6):
        assert p_k(theta, V, k) == theta.coeff(k).scale(k)


def test_p_0_is_half_residue_commutator():
    rng = random.Random(1)
    theta = rand_poly(rng, 2, 2)
    r = MatC.diag([-2, 0])
    V = MatLaurent.exact(r)
    a0 = theta.coeff(0)
    assert p_k(theta, V, 0) == (r @ a0 - a0 @ r).scale(F(1, 2))


@pytest.mark.parametrize("name", ["n1", "n2", "n3_constrained", "residue_full"])
def test_two_route_p_k(name):
    V = fixture_potentials()[name]
    rng = random.Random(hash(name) % 1000)
    for d in range(4):
        theta = rand_poly(rng, V.dim, d)
        for k in range(0, 7):
            assert p_operator_form_check(theta, V, k)


def test_p_k_of_v_is_k_v_k():
    for name in ("n1", "n2", "n3_constrained"):
        V = fixture_potentials()[name]
        for k in range(0, V.degree + 2):
            assert p_k(V, V, k) == V.coeff(k).scale(k)


def test_product_formula_zero_potential_and_identity():
    rng = random.Random(2)
    t1, t2 = rand_poly(rng, 2, 3), rand_poly(rng, 2, 2)
    ident = MatPoly([I2])
    for k in range(6):
        assert product_formula_check(t1, t2, MatPoly.zero(2), k)
        assert product_formula_check(t1, ident, n1_potential(), k)


# ---------------------------------------------------------------- block matrices


def test_build_A1_residue_case():
    a1 = build_A1(residue_potential(2), 3)
    zero = MatC.zeros(2)
    for r in range(4):
        for c in range(4):
            expected = MatC.scalar(2, r) if c == r + 1 else zero
            assert a1.block(r, c) == expected


def test_build_A1_layout():
    v0 = MatC([[1, 2], [3, 4]])
    a1 = build_A1(MatPoly([v0]), 1)
    assert a1.block(0, 0) == v0.scale(F(1, 2)) and a1.block(1, 1) == v0.scale(F(1, 2))
    assert a1.block(0, 1) == I2 and a1.block(1, 0).is_zero()
    assert build_A1(MatPoly.zero(2), 1).to_matc() == MatC([[0, 0, 1, 0], [0, 0, 0, 1], [0, 0, 0, 0], [0, 0, 0, 0]])


def test_build_A2_shapes():
    assert build_A2(residue_potential(2), 3).block_rows == 0
    assert build_A2(MatPoly([I2]), 2).block_rows == 0
    v0, v1 = MatC([[1, 0], [0, 0]]), MatC([[0, 1], [0, 0]])
    a2 = build_A2(MatPoly([v0, v1]), 1)
    assert a2.block_rows == 1
    assert a2.block(0, 0).is_zero() and a2.block(0, 1) == v1


# ---------------------------------------------------------------- membership


def test_identity_is_always_member():
    for V in fixture_potentials().values():
        assert membership(MatPoly([MatC.identity(V.dim)]), V).verdict


def test_residue_case_first_derivative_criterion():
    V = residue_potential(2)
    cert = membership(MatPoly([MatC.zeros(2), I2]), V)
    assert not cert.verdict and cert.failed_condition == "ResidueRow" and cert.k == 0
    assert membership(MatPoly([I2, MatC.zeros(2), I2]), V).verdict


def test_certificate_invariants():
    with pytest.raises(ValueError):
        from matbispec.bispectral import MembershipCertificate

        MembershipCertificate(MatPoly([I2]), False, "P0", 0, MatC.zeros(2))


def test_membership_requires_autonomous_potential():
    bad = MatPoly([MatC.zeros(2), I2])
    with pytest.raises(PotentialNotAutonomous) as info:
        membership(MatPoly([I2]), bad)
    assert info.value.order == 3


def test_membership_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        membership(MatPoly([MatC.identity(3)]), n1_potential())


def test_p0_failure_reported_first():
    V = MatLaurent.exact(MatC.diag([-2, 0]))
    theta = MatPoly([MatC([[0, 1], [0, 0]])])
    cert = membership(theta, V)
    assert cert.failed_condition == "P0" and not cert.witness.is_zero()


def test_commutator_prefilter():
    V = n2_potential()
    theta = MatPoly([MatC.zeros(4), MatC.diag([1, 2, 3, 4])])
    assert not commutator_degree_check(theta, V)
    cert = membership(theta, V, prefilter=True)
    assert cert.failed_condition == "CommutatorDegree"
    assert commutator_degree_check(V, V)
    assert commutator_degree_check(MatPoly([MatC.scalar(4, 2)]), V)


@pytest.mark.parametrize("name", ["n1", "n2", "n3_constrained", "residue_full"])
def test_prefilter_agrees_with_conditions(name):
    V = fixture_potentials()[name]
    rng = random.Random(7)
    for d in range(3):
        theta = rand_poly(rng, V.dim, d)
        full = membership(theta, V)
        pre = membership(theta, V, prefilter=True)
        assert full.verdict == pre.verdict
        if commutator_degree_check(theta, V) is False:
            assert not full.verdict


@pytest.mark.parametrize("name", ["n1", "n2", "residue_full"])
def test_membership_matches_residual_oracle(name):
    """verdict == (the candidate operator annihilates the residual)."""
    V = fixture_potentials()[name]
    rng = random.Random(3)
    basis = member_space_basis(V, 2)
    cases = [rand_poly(rng, V.dim, d) for d in (0, 1, 2, 3, 4)]
    cases += [random_member(rng, basis) for _ in range(3)]
    for theta in cases:
        verdict = membership(theta, V).verdict
        assert verdict == all_zero(lambda_residual(theta, candidate_B(theta, V), V))


# ---------------------------------------------------------------- synthesis


def test_synthesize_identity():
    op = synthesize_B(MatPoly([I2]), n1_potential())
    assert op.order == 0 and op.coeff(0) == RatMatZ.constant(I2)


def test_synthesize_non_member_raises():
    with pytest.raises(NotAMember) as info:
        synthesize_B(MatPoly([MatC.zeros(2), I2]), residue_potential(2))
    assert info.value.certificate.failed_condition == "ResidueRow"


def test_synthesize_uses_plus_sign_without_warning(caplog):
    V = n2_potential()
    with caplog.at_level(logging.WARNING):
        op = synthesize_B(V, V)
    assert not caplog.records
    assert all_zero(lambda_residual(V, op, V))
    assert not all_zero(lambda_residual(V, candidate_B(V, V, -1), V))


@pytest.mark.parametrize("name", ["n1", "n2", "n3_constrained", "residue_full"])
def test_limits_at_infinity(name):
    V = fixture_potentials()[name]
    rng = random.Random(4)
    basis = member_space_basis(V, 2)
    for _ in range(2):
        theta = random_member(rng, basis)
        op = synthesize_B(theta, V)
        for j in range(op.order + 1):
            assert op.coeff(j).limit_at_infinity() == theta.coeff(j)


def test_lambda_residual_trivial_case():
    a0 = MatC([[1, 2], [3, 4]])
    from matbispec.algebra import DiffOpZ

    op = DiffOpZ([RatMatZ.constant(a0)])
    assert all_zero(lambda_residual(MatPoly([a0]), op, MatPoly.zero(2)))


def test_lambda_residual_detects_perturbation():
    V = n1_potential()
    op = synthesize_B(V, V)
    bumped = op.replace(0, op.coeff(0) + RatMatZ.constant(I2))
    residual = lambda_residual(V, bumped, V)
    assert not all_zero(residual)


# ---------------------------------------------------------------- physical equation


def test_check_physical_examples():
    assert check_physical(residue_potential(3))
    from matbispec.autonomous import build_polynomial_solution

    j = MatC([[0, 1, 0], [0, 0, 1], [0, 0, 0]])
    assert check_physical(build_polynomial_solution(j))
    bad = check_physical(MatPoly([MatC.zeros(2), I2]))
    assert not bad and bad.first_failure == 3


def test_check_physical_truncated_series():
    from matbispec.autonomous import canonical_seed, recurse_coefficients

    rng = random.Random(5)
    seed = canonical_seed(2, 1, MatC([[0, 0], [1, 2]]), MatC([[0, 0], [0, 3]]), MatC([[F(1, 2)]]))
    v = recurse_coefficients(seed, 10)
    assert check_physical(v, 10)


# ---------------------------------------------------------------- monomial conditions


def test_monomial_conditions_n1_n2():
    assert {m.word for m in monomial_conditions(1)} == {"11", "10"}
    words = {m.word for m in monomial_conditions(2)}
    assert {"101", "100", "11"} <= words
    assert all(Monomial12.from_word(w).deg12 >= 4 for w in words)


def test_monomial12_grading():
    m = Monomial12((2, 1, 1))
    assert m.word == "1101" and m.deg12 == 7 and str(m) == "V1^2 V0 V1"
    with pytest.raises(ValueError):
        Monomial12((0, 1))


def test_nilpotency_examples():
    V = n1_potential()
    assert nilpotency_conditions(V.coeff(0), V.coeff(1), 1)
    rng = random.Random(6)
    assert nilpotency_conditions(rand_mat(rng, 3), MatC.zeros(3), 2)
    bad = nilpotency_conditions(MatC.zeros(2), MatC([[0, 1], [1, 0]]), 1)
    assert not bad and bad.failing.word == "11"


def test_subindex_chain():
    assert subindex_invariant_check(n1_potential())
    assert subindex_invariant_check(n2_potential())


def test_subindex_chain_negative_control():
    # V1 V0 != 0 breaks both the monomial conditions and the chain
    v0, v1 = MatC([[0, 0], [1, 0]]), MatC([[0, 1], [0, 0]])
    assert not nilpotency_conditions(v0, v1, 1)
    check = subindex_invariant_check(MatPoly([v0, v1]))
    assert not check and check.first_failure is not None


def test_nilpotency_degree_too_small():
    V = n2_potential()
    res = nilpotency_conditions(V.coeff(0), V.coeff(1), 1)
    assert not res and res.failing.word == "10"
