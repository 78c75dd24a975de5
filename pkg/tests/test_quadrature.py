import math

import numpy as np
import pytest

from hyperinv.quadrature import (QuadratureError, adaptive_gk, gauss_legendre_doubling,
                                 graded_edges, graded_gauss_legendre, legendre_rule)


@pytest.mark.parametrize("f, a, b, exact", [
    (np.exp, 0.0, 1.0, math.e - 1),
    (np.sin, 0.0, math.pi, 2.0),
    (lambda t: np.sqrt(t), 0.0, 1.0, 2 / 3),
    (lambda t: np.exp(1j * t), 0.0, math.pi, 2j),
])
def test_adaptive_gk(f, a, b, exact):
    assert abs(adaptive_gk(f, a, b) - exact) < 1e-12


def test_adaptive_gk_full_output():
    val, err = adaptive_gk(lambda t: t ** -0.5, 0.0, 1.0, full_output=True)
    assert abs(val - 2.0) < 1e-10
    assert 0 <= err < 1e-10


def test_adaptive_gk_gives_up():
    with pytest.raises(QuadratureError):
        adaptive_gk(lambda t: np.sin(1 / np.maximum(t, 1e-300)), 0.0, 1.0,
                    max_intervals=10)


def test_legendre_rule_integrates_polynomials():
    t, w = legendre_rule(8)
    assert abs(np.sum(w * t ** 14) - 2 / 15) < 1e-15


def test_doubling_periodic():
    val = gauss_legendre_doubling(lambda p: np.exp(np.cos(p)), 0.0, 2 * math.pi)
    assert abs(val - 2 * math.pi * 1.2660658777520082) < 1e-12


@pytest.mark.parametrize("toward", ["a", "b"])
def test_graded_mesh(toward):
    e = graded_edges(0.0, 1.0, 10, toward)
    assert e[0] == 0.0 and e[-1] == 1.0 and np.all(np.diff(e) > 0)
    widths = np.diff(e)
    assert (widths[0] < widths[-1]) == (toward == "a")


def test_graded_endpoint_singularity():
    val = graded_gauss_legendre(lambda t: (1 - t) ** 0.5 * np.exp(t), 0.0, 1.0,
                                toward="b", tol=1e-11)
    assert abs(val - 1.0300784692787024) < 1e-13
    val = graded_gauss_legendre(lambda t: np.log(t), 0.0, 1.0, toward="a", tol=1e-11)
    assert abs(val + 1.0) < 1e-10


def test_graded_blow_up_at_unit_endpoint():
    # the innermost panel is limited by the spacing of floats next to 1
    val = graded_gauss_legendre(lambda t: (1 - t) ** -0.5, 0.0, 1.0, toward="b", tol=1e-6)
    assert abs(val - 2.0) < 1e-6
