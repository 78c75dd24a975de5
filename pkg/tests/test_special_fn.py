import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hyperinv.special_fn import (ConvergenceError, DomainError, PochhammerZeroError,
                                 PoleError, as_cx, confluent_phi, d_closed, d_sum,
                                 digamma, gamma, hyp2f1, hyp_poly, hyp_poly_coeffs,
                                 identity_suite, loggamma, pochhammer, rgamma)

reals = st.floats(-8, 8, allow_nan=False)


def rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


@pytest.mark.parametrize("z, expected", [(1, 1.0), (5, 24.0), (0.5, math.sqrt(math.pi)),
                                         (-0.5, -2 * math.sqrt(math.pi)), (10, 362880.0)])
def test_gamma_values(z, expected):
    g = gamma(z)
    assert not g.at_pole
    assert rel(g.value, expected) < 1e-14


@pytest.mark.parametrize("z", [0, -1, -7, -30])
def test_gamma_pole_flag(z):
    g = gamma(z)
    assert g.at_pole and g.value is None and g.log_form is None
    assert rgamma(z) == 0
    with pytest.raises(PoleError):
        loggamma(z)


def test_gamma_against_mpmath_on_disk():
    rng = np.random.default_rng(1)
    worst = 0.0
    for _ in range(2000):
        z = 50 * math.sqrt(rng.uniform()) * np.exp(2j * math.pi * rng.uniform())
        if abs(z.real) < 1e-9 and abs(z.imag) < 1e-9:
            continue
        ref = complex(mpmath.gamma(mpmath.mpc(z.real, z.imag)))
        worst = max(worst, rel(gamma(z).value, ref))
    assert worst <= 1e-13


@given(reals, st.floats(-8, 8, allow_nan=False))
def test_loggamma_is_principal(a, b):
    z = complex(a, b)
    if abs(b) < 1e-3 and a <= 0 and abs(a - round(a)) < 1e-3:
        return
    ref = complex(mpmath.loggamma(mpmath.mpc(a, b)))
    assert abs(loggamma(z) - ref) < 1e-11 * max(1.0, abs(ref))


@given(reals, st.floats(-8, 8, allow_nan=False))
def test_recurrence(a, b):
    z = complex(a, b)
    if abs(b) < 0.05 and a <= 0.05 and abs(a - round(a)) < 0.05:
        return
    g0, g1 = gamma(z).value, gamma(z + 1).value
    assert abs(g1 - z * g0) <= 1e-12 * max(1.0, abs(g1))


@pytest.mark.parametrize("z", [1, 2, 0.5, -0.5, 3 + 4j, -2.5 + 0.1j, 20 - 7j])
def test_digamma_against_mpmath(z):
    ref = complex(mpmath.digamma(mpmath.mpmathify(z)))
    assert abs(digamma(z) - ref) < 1e-13 * max(1.0, abs(ref))


def test_as_cx_rejects_non_finite():
    with pytest.raises(DomainError):
        as_cx(float("nan"))
    with pytest.raises(DomainError):
        as_cx(complex(0, float("inf")))


@pytest.mark.parametrize("c, m, expected", [(1, 5, 120), (-3, 4, 0), (0.5, 2, 0.75),
                                            (-2, 2, 2), (3, 0, 1)])
def test_pochhammer(c, m, expected):
    assert pochhammer(c, m) == pytest.approx(expected)


def test_pochhammer_integer_is_exact():
    assert pochhammer(10, 20) == math.factorial(29) // math.factorial(9)


@pytest.mark.parametrize("m, beta, gam, x", [(3, 1.5, 2.5, 0.3), (5, -2 + 1j, 0.7, -1.2),
                                             (4, 2.0, -6.0, 0.5), (0, 3.0, 1.0, 9.0)])
def test_hyp_poly_against_mpmath(m, beta, gam, x):
    ref = complex(mpmath.hyp2f1(-m, beta, gam, x))
    assert rel(hyp_poly(m, beta, gam, x), ref) < 1e-13


def test_hyp_poly_negative_gamma_terminating():
    # F(-2, b; -3; x) is fine because (-3)_j != 0 for j <= 2
    assert hyp_poly(2, 1.0, -3.0, 1.0) == pytest.approx(1 + (-2) * 1 / -3 + 2 * 2 / (-3 * -2 * 2))
    with pytest.raises(PochhammerZeroError):
        hyp_poly_coeffs(3, 1.0, -2.0)


def test_hyp_poly_vectorised():
    xs = np.linspace(-1, 1, 7)
    vals = hyp_poly(4, 0.3, 1.7, xs)
    assert np.allclose(vals, [hyp_poly(4, 0.3, 1.7, x) for x in xs], rtol=1e-15)


@pytest.mark.parametrize("a, b, c, z", [(0.3, 1.2, 2.5, 0.4), (1 + 1j, -0.5, 3.0, -0.7 + 0.2j),
                                        (-3, 2.0, 4.0, 5.0)])
def test_hyp2f1_against_mpmath(a, b, c, z):
    ref = complex(mpmath.hyp2f1(a, b, c, z))
    assert rel(hyp2f1(a, b, c, z), ref) < 1e-12


def test_hyp2f1_outside_disk():
    with pytest.raises(DomainError):
        hyp2f1(0.5, 0.5, 1.5, 1.2)


@pytest.mark.parametrize("a, b, z", [(-1.0, 2.0, 0.7), (1.5, 2.5, -3.0), (0.3 + 1j, 1.2, 4 - 2j),
                                     (2.0, 3.0, -25.0), (-4.0, 0.5, -30.0)])
def test_confluent_phi_against_mpmath(a, b, z):
    ref = complex(mpmath.hyp1f1(a, b, z))
    assert rel(confluent_phi(a, b, z), ref) < 1e-11


def test_confluent_phi_equal_params_is_exp():
    for z in (-2.0, 0.5, 1 + 1j):
        assert rel(confluent_phi(3.3, 3.3, z), np.exp(z)) < 1e-14


def test_confluent_phi_pole():
    with pytest.raises(PochhammerZeroError):
        confluent_phi(1.0, -2.0, 0.1)


def test_confluent_phi_term_cap():
    with pytest.raises(ConvergenceError):
        confluent_phi(0.5, 1.5, 200.0, max_terms=20)


@pytest.mark.parametrize("N, lam, mu", [(3, 0.3, 1.7), (5, -1.2 + 0.4j, 0.9), (1, 2.5, -0.5),
                                        (6, 0.7, 0.7), (4, 2.0, 2.0), (4, 5.0, 5.0), (3, -2.0, -2.0)])
def test_d_closed_matches_sum(N, lam, mu):
    assert abs(d_closed(N, lam, mu) - d_sum(N, lam, mu)) < 1e-12


@given(st.integers(1, 8), st.integers(-4, 10))
def test_d_closed_integer_lambda_limit(N, m):
    assert abs(d_closed(N, m, m) - d_sum(N, m, m)) < 1e-12


def test_d_closed_diagonal_is_limit():
    # the mu = lambda formula is the limit of the off-diagonal one
    lam = 0.37 + 0.2j
    assert abs(d_closed(5, lam, lam) - d_closed(5, lam, lam + 1e-7)) < 1e-6


def test_identity_suite_passes():
    out = identity_suite(seed=3, trials=20)
    assert out["pass"], out
    assert set(out["identities"]) == {"contiguous", "euler_transform", "derivative",
                                      "terminating_one_minus_x", "chu_vandermonde",
                                      "euler_integral"}
    assert out["max_residual"] < 1e-10
