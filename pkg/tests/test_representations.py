import math

import numpy as np
import pytest
from scipy import special

from ilmf.errors import InputError, NoConvergence
from ilmf.linalg import make_commuting_family, matrix_power_base, rel_frobenius
from ilmf.matrix_special import gamma_matrix_inverse, inc_gamma_matrix
from ilmf.quadrature import QuadSpec, inc_1g1_eigen, laguerre_rule, pfq_eigen, semi_infinite_quad
from ilmf.representations import (
    rep_corollaries_A,
    rep_corollaries_C,
    rep_corollaries_D,
    rep_gamma_A,
    rep_gamma_A_multi,
    rep_gamma_C,
    rep_gamma_C_double,
    rep_gamma_D,
    rep_gamma_D_multi,
    rep_gamma_D_via_1g1,
    representations,
)
from ilmf.series import IlmfParams, ilmf, inc_gauss_2f1


def M(v):
    return np.array([[v]], dtype=complex)


def seeded_params(seed, family, n, r=2, x=1.0, zs=None):
    nb = 1 if family == "C" else n
    nc = 1 if family == "D" else n
    mats = make_commuting_family(seed, 1 + nb + nc, r).matrices()
    if zs is None:
        rng = np.random.default_rng(seed)
        lim = {"A": 0.2 / n, "D": 0.2, "C": (0.5 / n) ** 2}[family]
        zs = lim * rng.uniform(0.2, 1, n) * np.exp(2j * np.pi * rng.uniform(0, 1, n))
    return IlmfParams(family, "upper", mats[0], x, tuple(mats[1: 1 + nb]), tuple(mats[1 + nb:]), tuple(zs))


def upper_at_zero(p):
    return inc_gamma_matrix("upper", p.A, p.x) @ gamma_matrix_inverse(p.A)


# -- quadrature ----------------------------------------------------------------

def test_quad_closed_forms():
    assert abs(semi_infinite_quad(lambda t: np.exp(-t), 0.0) - 1) < 1e-12
    assert abs(semi_infinite_quad(lambda t: t * np.exp(-t), 0.5) - 1.5 * math.exp(-0.5)) < 1e-12


def test_quad_matrix_integrand():
    A = make_commuting_family(5, 1, 2).matrix("M0")
    eye = np.eye(2)
    got = semi_infinite_quad(lambda t: np.stack([np.exp(-tk) * matrix_power_base(tk, A - eye) for tk in t]), 1.0)
    assert rel_frobenius(got, inc_gamma_matrix("upper", A, 1.0)) < 1e-8


def test_quad_scalar_callable():
    got = semi_infinite_quad(lambda t: np.exp(-t) * t**2, 0.0, vectorized=False)
    assert abs(got - 2.0) < 1e-11


def test_quad_spec_validation():
    with pytest.raises(InputError):
        QuadSpec(rel_tol=0)
    with pytest.raises(InputError):
        QuadSpec(abs_tol=1e-18)
    with pytest.raises(InputError):
        semi_infinite_quad(lambda t: np.exp(-t), -1.0)


def test_quad_subdivision_cap():
    f = lambda t: np.exp(-t) * np.sin(200 * t)  # noqa: E731
    with pytest.raises(NoConvergence):
        semi_infinite_quad(f, 0.0, QuadSpec(max_subdivisions=1))


def test_laguerre_rule_integrates_moments():
    b = np.array([0.7, 1.5])
    r, w = laguerre_rule(b)
    assert np.allclose(np.sum(w * r**2, axis=1), special.gamma(b + 2), rtol=1e-12)
    # a complex exponent is folded into the weights and is only resolved approximately
    r, w = laguerre_rule(np.array([1.5 + 0.4j]))
    assert np.allclose(np.sum(w * r**2, axis=1), special.gamma(3.5 + 0.4j), rtol=1e-6)


def test_kernels():
    assert abs(pfq_eigen([1.0], [2.0], 1.0) - (math.e - 1)) < 1e-14
    assert abs(pfq_eigen([], [1.0], -0.25) - special.j0(1.0)) < 1e-15
    w = np.array([[0.4]])
    assert abs(inc_1g1_eigen([1.1], 0.9, [1.6], w)[0, 0] - 0.71805881238150095145) < 1e-13


# -- family A --------------------------------------------------------------------

def test_rep_a_at_zero():
    p = seeded_params(9, "A", 2, zs=(0.0, 0.0))
    assert rel_frobenius(rep_gamma_A(p), upper_at_zero(p)) < 1e-9
    assert rel_frobenius(rep_gamma_A_multi(p), upper_at_zero(p)) < 1e-7


def test_rep_a_closed_form():
    p = IlmfParams("A", "upper", M(1), 0.5, (M(1),), (M(1),), (0.2,))
    assert abs(rep_gamma_A(p)[0, 0] - math.exp(-0.4) / 0.8) < 1e-10


def test_rep_a_matches_series():
    p = seeded_params(9, "A", 2, zs=(0.1, 0.15))
    series = ilmf(p).value
    assert rel_frobenius(rep_gamma_A(p), series) < 1e-6
    assert rel_frobenius(rep_gamma_A_multi(p), series) < 1e-4


def test_rep_a_multi_single_variable():
    p = seeded_params(4, "A", 1, r=1)
    assert rel_frobenius(rep_gamma_A_multi(p), rep_gamma_A(p)) < 1e-6
    q = IlmfParams("A", "upper", M(1.3), 0.7, (M(0.9), M(1.6)), (M(1.8), M(2.4)), (0.05, 0.1))
    assert rel_frobenius(rep_gamma_A_multi(q), ilmf(q).value) < 1e-4


def test_rep_a_rejects_other_kinds():
    p = seeded_params(9, "A", 1)
    with pytest.raises(InputError):
        rep_gamma_A(p.replace(kind="lower"))


def test_corollary_laguerre_degree_zero():
    p = seeded_params(3, "A", 1)
    q = p.replace(B_list=(0 * np.eye(2),))
    assert rel_frobenius(rep_corollaries_A("laguerre", q), upper_at_zero(p)) < 1e-9
    assert rel_frobenius(ilmf(q).value, upper_at_zero(p)) < 1e-13


def test_corollary_laguerre_degree_two():
    p = seeded_params(3, "A", 2)
    q = p.replace(B_list=(-2 * np.eye(2), -1 * np.eye(2)))
    assert rel_frobenius(rep_corollaries_A("laguerre", q), ilmf(q).value) < 1e-6


def test_corollary_lower_gamma_scalar():
    q = IlmfParams("A", "upper", M(1.5), 0.8, (M(1.0),), (M(2.0),), (-0.3,))
    assert rel_frobenius(rep_corollaries_A("lower_gamma", q), ilmf(q).value) < 1e-4


@pytest.mark.parametrize("variant, z", [("bessel_J", -0.15), ("bessel_I", 0.15)])
def test_corollary_bessel_a(variant, z):
    p = seeded_params(8, "A", 1, zs=(z,))
    q = p.replace(C_list=tuple(c + np.eye(2) for c in p.C_list))
    assert rel_frobenius(rep_corollaries_A(variant, q), ilmf(q).value) < 1e-4


def test_corollary_bessel_rejects_wrong_sign():
    p = seeded_params(8, "A", 1, zs=(0.15,))
    with pytest.raises(InputError):
        rep_corollaries_A("bessel_J", p)


# -- family C --------------------------------------------------------------------

def test_rep_c_at_zero():
    p = seeded_params(2, "C", 2, zs=(0.0, 0.0))
    assert rel_frobenius(rep_gamma_C(p), upper_at_zero(p)) < 1e-9


def test_rep_c_two_forms_agree_n1():
    p = seeded_params(6, "C", 1, r=1)
    assert rel_frobenius(rep_gamma_C(p), rep_gamma_C_double(p)) < 1e-6


def test_rep_c_matches_series():
    p = seeded_params(6, "C", 2)
    assert rel_frobenius(rep_gamma_C(p), ilmf(p).value) < 1e-6
    assert rel_frobenius(rep_gamma_C_double(p), ilmf(p).value) < 1e-4


@pytest.mark.parametrize("variant, z", [("bessel_J", -0.1), ("bessel_I", 0.1)])
def test_corollary_bessel_c(variant, z):
    p = seeded_params(14, "C", 1, zs=(z,))
    q = p.replace(C_list=tuple(c + np.eye(2) for c in p.C_list))
    assert rel_frobenius(rep_corollaries_C(variant, q), ilmf(q).value) < 1e-4


# -- family D --------------------------------------------------------------------

def test_rep_d_at_zero():
    p = seeded_params(7, "D", 2, zs=(0.0, 0.0))
    expected = upper_at_zero(p)
    assert rel_frobenius(rep_gamma_D(p), expected) < 1e-9
    assert rel_frobenius(rep_gamma_D_multi(p), expected) < 1e-7


def test_rep_d_single_variable_is_gauss():
    p = seeded_params(7, "D", 1)
    ref = inc_gauss_2f1("upper", p.A, p.x, p.B_list[0], p.C_list[0], p.z_list[0]).value
    for rep in (rep_gamma_D, rep_gamma_D_via_1g1, rep_gamma_D_multi):
        assert rel_frobenius(rep(p), ref) < 1e-6


def test_rep_d_three_forms_agree():
    p = IlmfParams("D", "upper", M(1.2), 0.9, (M(0.8), M(1.7)), (M(2.1),), (0.15, -0.1))
    values = [rep_gamma_D(p), rep_gamma_D_via_1g1(p), rep_gamma_D_multi(p), ilmf(p).value]
    for i in range(4):
        for j in range(i + 1, 4):
            assert rel_frobenius(values[i], values[j]) < 1e-6


@pytest.mark.parametrize("variant, z", [("bessel_J", -0.1), ("bessel_I", 0.1)])
def test_corollary_bessel_d(variant, z):
    p = seeded_params(15, "D", 1, zs=(z,))
    q = p.replace(C_list=tuple(c + np.eye(2) for c in p.C_list))
    assert rel_frobenius(rep_corollaries_D(variant, q), ilmf(q).value) < 1e-4


def test_representations_listing():
    assert set(representations(seeded_params(1, "A", 2))) == {"single_integral", "multi_integral"}
    assert set(representations(seeded_params(1, "C", 2))) == {"single_integral", "double_integral"}
    assert set(representations(seeded_params(1, "D", 2))) == {"single_integral", "confluent_1g1_integral",
                                                              "multi_integral"}
