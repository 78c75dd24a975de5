import json
import time
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hyperinv.exact_poly import (BiPoly, TriMatrixExact, build_a_exact, build_b_exact,
                                 criterion_coefficient, eval_bipoly, identity_exact,
                                 mul_tri)
from hyperinv.inversion import build_a, build_b
from hyperinv.special_fn import PochhammerZeroError

X, NU = BiPoly.x(), BiPoly.nu()

fractions = st.fractions(min_value=-5, max_value=5, max_denominator=7)


@st.composite
def bipolys(draw):
    n = draw(st.integers(0, 4))
    terms = {(draw(st.integers(0, 3)), draw(st.integers(0, 3))): draw(fractions)
             for _ in range(n)}
    return BiPoly(terms)


def test_zero_terms_are_dropped():
    p = BiPoly({(0, 0): 0, (1, 2): Fraction(3, 6)})
    assert p.terms == {(1, 2): Fraction(1, 2)}
    assert (X - X).is_zero()
    assert BiPoly().degree() == (-1, -1)


def test_rejects_float_coefficients():
    with pytest.raises(TypeError):
        BiPoly({(0, 0): 0.5})


@given(bipolys(), bipolys(), bipolys())
def test_ring_axioms(p, q, r):
    assert (p + q) + r == p + (q + r)
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert p * q == q * p
    assert p - p == BiPoly()


@given(bipolys(), fractions, fractions)
def test_eval_is_ring_homomorphism(p, x, nu):
    q = p * p + X * p
    assert eval_bipoly(q, x, nu) == pytest.approx(
        eval_bipoly(p, x, nu) ** 2 + complex(x) * eval_bipoly(p, x, nu), rel=1e-12, abs=1e-12)


@given(bipolys())
def test_json_round_trip(p):
    assert BiPoly.from_json(json.loads(json.dumps(p.to_json()))) == p


@pytest.mark.parametrize("p, expected", [(BiPoly.const(-1), -1), (BiPoly(), 0)])
def test_eval_trivial(p, expected):
    assert eval_bipoly(p, 0.3, -2) == expected


def test_entry_a21():
    a = build_a_exact(3)
    assert a[2, 1] == -2 * (1 - NU * X)
    assert eval_bipoly(a[2, 1], Fraction(1, 2), -2) == -4


def test_entry_b31():
    b = build_b_exact(3)
    half = Fraction(1, 2)
    assert b[3, 1] == -3 * (1 - 2 * NU * X + NU * (NU + 1) * X * X * half)
    assert b[2, 1] == -2 * (1 - NU * X)


@pytest.mark.parametrize("builder", [build_a_exact, build_b_exact])
def test_diagonal_signs(builder):
    m = builder(6)
    for k in range(1, 7):
        assert m[k, k] == (-1) ** k
    assert m[2, 5] == BiPoly()


def test_product_diagonal_and_identity():
    a, b = build_a_exact(3), build_b_exact(3)
    assert mul_tri(a, b).is_identity()
    assert mul_tri(TriMatrixExact.identity(3), a) == a


def test_inversion_pair_up_to_ten():
    t0 = time.perf_counter()
    assert all(identity_exact(n) for n in range(1, 11))
    assert time.perf_counter() - t0 < 60


def test_order_mismatch():
    with pytest.raises(ValueError):
        mul_tri(build_a_exact(2), build_b_exact(3))


def test_matrix_json_round_trip():
    a = build_a_exact(4)
    assert TriMatrixExact.from_json(json.loads(a.dumps())) == a


@pytest.mark.parametrize("n", range(2, 9))
def test_criterion_coefficient_vanishes(n):
    for k in range(1, n):
        assert criterion_coefficient(n, k, n - k).is_zero()
    assert criterion_coefficient(n, n, 0) == 1


def test_criterion_coefficient_small_orders():
    assert criterion_coefficient(3, 1, 0) == 1
    assert criterion_coefficient(3, 1, 2) == BiPoly()
    u = criterion_coefficient(4, 1, 2)
    assert all(dx == 0 for dx, _ in u.terms)  # depends on nu only


def test_criterion_coefficient_beyond_order():
    with pytest.raises(PochhammerZeroError):
        criterion_coefficient(3, 1, 4)
    with pytest.raises(ValueError):
        criterion_coefficient(3, 4, 0)


def test_exact_matches_numeric_builders():
    rng = np.random.default_rng(5)
    a, b = build_a_exact(6), build_b_exact(6)
    worst = 0.0
    for _ in range(50):
        x = complex(rng.uniform(-1.5, 1.5), rng.uniform(-1, 1))
        nu = complex(rng.uniform(-3, 1), rng.uniform(-1, 1))
        an, bn = build_a((x, nu, 6)), build_b((x, nu, 6))
        for r in range(1, 7):
            for k in range(1, r + 1):
                for ex, num in ((a, an), (b, bn)):
                    ref = num[r, k]
                    worst = max(worst, abs(eval_bipoly(ex[r, k], x, nu) - ref)
                                / max(1.0, abs(ref)))
    assert worst <= 1e-12
