from fractions import Fraction as F

import pytest

from askeycg.algebras import first_block_mismatch, identity_operator, phi
from askeycg.coproduct import (CoproductCoeffs, algebraic_form, build_delta,
                               check_algebraic_form, check_homomorphism,
                               check_twist_qracah_specialization,
                               coproduct_coeffs, krawtchouk_coassoc,
                               tensor_module)
from askeycg.exactmath import InvalidParameterError
from askeycg.families import FamilyKind, algebra_for, contiguity, labels, make_instance
from askeycg.linalg import nullspace

from test_families import ALL_KINDS, sample_instance


# -- coefficient functions ----------------------------------------------------

def test_hahn_x_matches_contiguity_coefficient():
    inst = sample_instance(FamilyKind.HAHN)
    cf = coproduct_coeffs(inst)
    a, b = inst.alpha, inst.beta
    for N in range(5):
        for n in range(N + 2):
            assert cf.x(n, N + 1 - n) == (n + a + b + 1) / (2 * n + a + b - N)


def test_krawtchouk_coefficients_are_constant():
    inst = sample_instance(FamilyKind.KRAWTCHOUK)
    cf = coproduct_coeffs(inst)
    for n in range(4):
        for m in range(4):
            assert cf.x(n, m + 1) == 1 and cf.y(n, m + 1) == 1
            assert cf.xp(n, m) == inst.p and cf.yp(n, m) == 1 - inst.p


def test_dual_hahn_xp_example():
    # alpha = lambda1 - 1 collapses x' to 1
    inst = make_instance(FamilyKind.DUAL_HAHN, lambda1=F(2), lambda2=F(3),
                         alpha=F(1), n_max=5)
    cf = coproduct_coeffs(inst)
    for n in range(4):
        for m in range(4):
            assert cf.xp(n, m) == 1


def test_dual_hahn_standard_specialization_all_ones():
    inst = make_instance(FamilyKind.DUAL_HAHN, lambda1=F(5, 2), lambda2=F(7, 3),
                         alpha=F(3, 2), n_max=6)
    assert inst.alpha == inst.lambda1 - 1 and inst.beta == inst.lambda2 - 1
    cf = coproduct_coeffs(inst)
    for n in range(5):
        for m in range(5):
            assert cf.xp(n, m) == 1 and cf.yp(n, m) == 1
            assert cf.x(n, m + 1) == 1 and cf.y(n, m + 1) == 1


def test_coefficients_reproduce_contiguity_data():
    for kind in ALL_KINDS:
        inst = sample_instance(kind)
        cf = coproduct_coeffs(inst)
        data = contiguity(inst)
        alg = algebra_for(inst)
        l1, l2 = labels(inst)
        for N in range(5):
            for n in range(N + 1):
                assert cf.x(n, N + 1 - n) == data.alpha1(n, N)
                assert cf.y(n, N + 1 - n) == data.alpha2(n, N)
                if n <= N - 1:
                    assert cf.xp(n, N - 1 - n) * phi(alg, l1, n + 1) == data.beta1(n, N)
                    assert cf.yp(n, N - 1 - n) * phi(alg, l2, N - n) == data.beta2(n, N)


# -- operator construction -----------------------------------------------------

def test_weight_diagonal_eigenvalues():
    inst = sample_instance(FamilyKind.RACAH)
    tm = tensor_module(inst)
    delta = build_delta(inst, tm)
    for N in range(tm.n_max + 1):
        blk = delta.hk.blocks[N]
        want = inst.lambda1 + inst.lambda2 + 2 * N
        assert all(blk.entry(i, i) == want for i in range(N + 1))


def test_krawtchouk_block0_raising():
    inst = sample_instance(FamilyKind.KRAWTCHOUK)
    delta = build_delta(inst, tensor_module(inst))
    blk = delta.e.blocks[0]
    assert blk.to_lists() == [[F(1)], [F(1)]]


def test_hahn_lowering_kernel_on_block_one():
    inst = sample_instance(FamilyKind.HAHN)  # alph=1, beta=1/2
    delta = build_delta(inst, tensor_module(inst))
    basis = nullspace(delta.f.blocks[1])
    assert len(basis) == 1
    v = basis[0]
    v = tuple(x / v[0] for x in v)
    assert v == (F(1), F(-1, 4))
    assert v[1] == -inst.beta / (inst.alpha + 1)


def test_two_construction_routes_agree():
    # straight from contiguity data vs through the coefficient quotients
    for kind in ALL_KINDS:
        inst = sample_instance(kind)
        tm = tensor_module(inst)
        direct = build_delta(inst, tm)
        via_coeffs = build_delta(inst, tm, coproduct_coeffs(inst))
        nm = tm.n_max
        assert first_block_mismatch(direct.e, via_coeffs.e, range(nm)) is None
        assert first_block_mismatch(direct.f, via_coeffs.f, range(nm + 1)) is None


# -- homomorphism ---------------------------------------------------------------

@pytest.mark.parametrize("kind", ALL_KINDS)
def test_homomorphism(kind):
    inst = sample_instance(kind)
    assert check_homomorphism(inst, tensor_module(inst)).passed


def test_hahn_delta_commutator_is_identity():
    inst = sample_instance(FamilyKind.HAHN)
    tm = tensor_module(inst)
    delta = build_delta(inst, tm)
    comm = delta.e @ delta.f - delta.f @ delta.e
    assert first_block_mismatch(comm, identity_operator(comm.dims),
                                range(tm.n_max)) is None


def test_corrupted_y_fails_homomorphism():
    inst = sample_instance(FamilyKind.HAHN)
    cf = coproduct_coeffs(inst)
    bad = CoproductCoeffs(x=cf.x, y=lambda n, m: F(1), xp=cf.xp, yp=cf.yp)
    rep = check_homomorphism(inst, tensor_module(inst), bad)
    fail = rep.first_failure()
    assert fail is not None and fail.witness is not None


# -- closed operator expressions ------------------------------------------------

@pytest.mark.parametrize("kind", ALL_KINDS)
def test_algebraic_form_agreement(kind):
    inst = sample_instance(kind)
    assert check_algebraic_form(inst, tensor_module(inst)).passed


def test_hahn_localization_denominator():
    inst = sample_instance(FamilyKind.HAHN)
    form = algebraic_form(inst)
    a, b = inst.alpha, inst.beta
    for n in range(4):
        for m in range(4):
            dd = 2 * (n - m) + 2 * a + 2 * b + 2
            assert form.x(n, m) == (2 * n + 2 * a + 2 * b + 2) / dd


def test_racah_raising_second_slot_coefficient():
    inst = sample_instance(FamilyKind.RACAH)
    form = algebraic_form(inst)
    a, b = inst.alpha, inst.beta
    for n in range(4):
        for m in range(4):
            dd = 2 * (n - m) + 2 * a + 2 * b + 2
            assert form.y(n, m) == (2 * a + 2 * b + 2 - 2 * m) / dd


def test_q_hahn_casimir_cartan_product_eigenvalue():
    inst = sample_instance(FamilyKind.Q_HAHN)
    q, a, b = inst.q, inst.alpha, inst.beta
    form = algebraic_form(inst)
    for n in range(4):
        for m in range(4):
            dd = 1 - a * b * q ** (n - m + 1)
            assert form.x(n, m) == (1 - a * b * q ** (n + 1)) / dd


def test_algebraic_form_negative_control():
    inst = sample_instance(FamilyKind.RACAH)
    cf = coproduct_coeffs(inst)
    bad = CoproductCoeffs(x=cf.x, y=cf.y,
                          xp=lambda n, m: cf.xp(n, m) + 1, yp=cf.yp)
    rep = check_algebraic_form(inst, tensor_module(inst), derived=bad)
    fail = rep.first_failure()
    assert fail is not None and fail.name == "xp-agreement"


# -- q-Racah specialization and twist --------------------------------------------

def test_twist_specialization_passes():
    rep = check_twist_qracah_specialization(F(1, 4), F(2), F(3), n_max=6)
    assert rep.passed
    rep = check_twist_qracah_specialization(F(1, 4), F(1, 2), F(1, 3), n_max=6)
    assert rep.passed


def test_twist_block_zero_to_one_coefficients():
    q, k1, k2 = F(1, 4), F(1, 2), F(1, 3)
    inst = make_instance(FamilyKind.Q_RACAH, q=q, kappa1=k1, kappa2=k2,
                         alpha=k1 ** 2 / q, beta=F(0), n_max=4)
    delta = build_delta(inst, tensor_module(inst))
    # raising block 0 -> 1: column (0,0) has entries (E x I, kappa1^{-1} K x E)
    blk = delta.e.blocks[0]
    assert blk.to_lists() == [[F(1)], [q ** 0]]


def test_beta_zero_collapses_yp():
    q, k1, k2 = F(1, 4), F(1, 2), F(1, 3)
    inst = make_instance(FamilyKind.Q_RACAH, q=q, kappa1=k1, kappa2=k2,
                         alpha=k1 ** 2 / q, beta=F(0), n_max=4)
    cf = coproduct_coeffs(inst)
    for n in range(3):
        for m in range(3):
            assert cf.xp(n, m) == 1
            assert cf.yp(n, m) == k1 ** 2 * q ** n


# -- Krawtchouk coassociativity ---------------------------------------------------

def test_coassoc_central_charge_quadruple():
    res = krawtchouk_coassoc(F(1, 2), F(1, 3), F(1, 6), F(2, 5), n_max=4)
    assert res.constraint_holds and res.lhs_equals_rhs


def test_coassoc_all_half_fails_both():
    res = krawtchouk_coassoc(F(1, 2), F(1, 2), F(1, 2), F(1, 2), n_max=4)
    assert not res.constraint_holds and not res.lhs_equals_rhs
    assert res.witness is not None


def test_coassoc_partial_constraint_not_enough():
    # p2 = p q holds but the second condition fails
    res = krawtchouk_coassoc(F(1, 2), F(1, 3), F(1, 6), F(1, 2), n_max=4)
    assert not res.constraint_holds and not res.lhs_equals_rhs


def test_coassoc_rejects_degenerate_probabilities():
    with pytest.raises(InvalidParameterError):
        krawtchouk_coassoc(F(1, 2), F(1), F(1, 2), F(1, 2))
