import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ilmf.errors import DomainError, NotPositiveStable
from ilmf.linalg import make_commuting_family, matrix_power_base, rel_frobenius
from ilmf.matrix_special import (
    bessel_matrix,
    gamma_matrix,
    gamma_matrix_inverse,
    inc_gamma_matrix,
    laguerre_matrix,
    pochhammer,
    pochhammer_product,
)
from ilmf.quadrature import semi_infinite_quad
from ilmf.series import hyp1f1

GAMMA_1_3 = 0.89747069630627718175
GAMMA_2_1 = 1.0464858468535605471


def _seeded(seed, r=2, lo=0.6, hi=2.4):
    return make_commuting_family(seed, 1, r, spectrum_range=(lo, hi)).matrix("M0")


def test_gamma_closed_forms():
    assert np.allclose(gamma_matrix([[2.0]]), [[1.0]])
    assert np.allclose(gamma_matrix(np.diag([0.5, 2.0])), np.diag([math.sqrt(math.pi), 1.0]))


def test_gamma_matrix_against_quadrature():
    rng = np.random.default_rng(4)
    P = np.eye(2) + 0.3 * rng.standard_normal((2, 2))
    Pinv = np.linalg.inv(P)
    A = P @ np.diag([1.3, 2.1]) @ Pinv
    expected = P @ np.diag([GAMMA_1_3, GAMMA_2_1]) @ Pinv
    assert rel_frobenius(gamma_matrix(A), expected) < 1e-13
    quad = semi_infinite_quad(lambda t: np.stack([np.exp(-tk) * matrix_power_base(tk, A - np.eye(2)) for tk in t]),
                              1e-300)
    assert rel_frobenius(quad, expected) < 1e-8


def test_gamma_requires_positive_stable():
    with pytest.raises(NotPositiveStable):
        gamma_matrix([[-0.5]])


def test_gamma_inverse():
    assert np.allclose(gamma_matrix_inverse([[1.0]]), [[1.0]])
    assert np.allclose(gamma_matrix_inverse([[3.0]]), [[0.5]])
    assert np.allclose(gamma_matrix_inverse([[-2.0]]), [[0.0]])


def test_gamma_inverse_shift_identity():
    A = _seeded(21)
    eye = np.eye(2)
    lhs = gamma_matrix_inverse(A)
    rhs = pochhammer(A, 2) @ gamma_matrix_inverse(A + 2 * eye)
    assert rel_frobenius(lhs, rhs) < 1e-11


def test_inc_gamma_scalar_values():
    assert abs(inc_gamma_matrix("lower", [[1.0]], 0.5)[0, 0] - (1 - math.exp(-0.5))) < 1e-15
    assert abs(inc_gamma_matrix("upper", [[1.0]], 0.5)[0, 0] - math.exp(-0.5)) < 1e-15


def test_inc_gamma_upper_against_quadrature():
    A = make_commuting_family(11, 1, 2).matrix("M0")
    quad = semi_infinite_quad(lambda t: np.stack([np.exp(-tk) * matrix_power_base(tk, A - np.eye(2)) for tk in t]),
                              1.0)
    assert rel_frobenius(inc_gamma_matrix("upper", A, 1.0), quad) < 1e-8


def test_inc_gamma_domain():
    with pytest.raises(DomainError):
        inc_gamma_matrix("lower", [[1.0]], 0.0)


def test_pochhammer_values():
    assert np.allclose(pochhammer([[1.0]], 3), [[6.0]])
    got = pochhammer([[1.0]], 1, "lower", 0.5)[0, 0]
    assert abs(got - (1 - 1.5 * math.exp(-0.5))) < 1e-15


def test_pochhammer_decomposes():
    A = make_commuting_family(3, 1, 2).matrix("M0")
    total = pochhammer(A, 2, "lower", 0.8) + pochhammer(A, 2, "upper", 0.8)
    assert rel_frobenius(total, pochhammer(A, 2)) < 1e-12


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 10_000), n=st.integers(0, 12), r=st.integers(1, 3))
def test_pochhammer_matches_product(seed, n, r):
    A = _seeded(seed, r)
    assert rel_frobenius(pochhammer(A, n), pochhammer_product(A, n)) < 1e-12


def test_pochhammer_at_negative_integer_terminates():
    # (-2)_3 = (-2)(-1)(0) = 0 and (-2)_2 = 2
    assert abs(pochhammer([[-2.0]], 3)[0, 0]) < 1e-15
    assert abs(pochhammer([[-2.0]], 2)[0, 0] - 2.0) < 1e-15


def test_bessel_matrix_scalars():
    assert abs(bessel_matrix("J", [[0.0]], 1.0)[0, 0] - 0.76519768655796655) < 1e-14
    assert abs(bessel_matrix("J", [[1.0]], 1.0)[0, 0] - 0.44005058574493352) < 1e-14


def test_bessel_i_forms_agree():
    A = np.diag([0.5, 1.5])
    left = bessel_matrix("I_left", A, 2.0)
    right = bessel_matrix("I_right", A, 2.0)
    assert rel_frobenius(left, right) < 1e-10
    from scipy import special
    assert np.allclose(np.diag(left).real, special.iv([0.5, 1.5], 2.0), rtol=1e-12)


def test_laguerre_small_degrees():
    A = _seeded(8)
    assert np.allclose(laguerre_matrix(A, 1.3, 0, 0.4), np.eye(2))
    assert np.allclose(laguerre_matrix([[1.0]], 1.0, 1, 0.5), [[1.5]])


def test_laguerre_against_confluent_form():
    A = np.diag([0.5, 2.0])
    eye = np.eye(2)
    n, z = 3, 0.7
    expected = pochhammer(A + eye, n) / math.factorial(n) @ hyp1f1(-n * eye, A + eye, z).value
    assert rel_frobenius(laguerre_matrix(A, 1.0, n, z), expected) < 1e-12
