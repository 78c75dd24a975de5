"""Acceptance criteria, one test per criterion.

Every test prints ``criterion N: PASS|FAIL <detail>``; the lines are also
collected into a section of the pytest terminal summary.
"""
import math
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from hyperinv import exact_poly, genfun, inversion, operators, special_fn
from hyperinv.operators import H0Series, OperatorParams
from hyperinv.verify import l_of_z_exp


def report(num, ok, detail):
    line = f"criterion {num}: {'PASS' if ok else 'FAIL'} {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


def random_disk(rng, radius):
    return complex(radius * math.sqrt(rng.uniform()) * np.exp(2j * math.pi * rng.uniform()))


def test_criterion_01_exact_inversion():
    t0 = time.perf_counter()
    ok = all(exact_poly.identity_exact(n) for n in range(1, 11))
    dt = time.perf_counter() - t0
    assert report(1, ok and dt < 60, f"A B = Id = B A exactly for n <= 10 in {dt:.1f} s")


def test_criterion_02_numeric_inversion():
    rng = np.random.default_rng(2024)
    pts = [(random_disk(rng, 2.0), random_disk(rng, 3.0)) for _ in range(20)]
    t0 = time.perf_counter()
    worst = 0.0
    for x, nu in pts:
        p = inversion.MatrixParams(x, nu, 30)
        worst = max(worst, inversion.inversion_defect(p, order="both"))
    dt = time.perf_counter() - t0
    # complex128 alone cannot reach the target here; shown for reference
    f64 = max(inversion.inversion_defect(inversion.MatrixParams(x, nu, 30), dps=None)
              for x, nu in pts)
    ok = worst <= 1e-10 and dt < 10
    assert report(2, ok, f"max defect {worst:.2e} in {dt:.1f} s "
                         f"(complex128 defect would be {f64:.1e})")


def test_criterion_03_criterion_coefficients():
    bad = []
    for n in range(1, 9):
        for k in range(1, n + 1):
            u = exact_poly.criterion_coefficient(n, k, n - k)
            if u != (1 if k == n else 0):
                bad.append((n, k))
    assert report(3, not bad, f"U(n,k,n-k) = [k == n] for n <= 8, failures {bad}")


def test_criterion_04_finite_gamma_sum():
    rng = np.random.default_rng(4)
    res = []
    # 100 generic (lambda, mu), 50 complex lambda = mu, 50 integer lambda = mu
    for i in range(200):
        big_n = int(rng.integers(1, 9))
        if i < 100:
            lam = complex(rng.uniform(-3, 3), rng.uniform(-1, 1))
            mu = complex(rng.uniform(-3, 3), rng.uniform(-1, 1))
        elif i < 150:
            lam = mu = complex(rng.uniform(-3, 3), rng.uniform(-1, 1))
        else:
            lam = mu = complex(int(rng.integers(-4, 10)))
        res.append(abs(special_fn.d_closed(big_n, lam, mu) - special_fn.d_sum(big_n, lam, mu)))
    worst = max(res)
    assert report(4, worst <= 1e-11, f"max |d_closed - d_sum| {worst:.2e} over 200 points")


def test_criterion_05_sigma():
    res = []
    for nu in (-2.0, -1.0, -0.5, 0.3 + 0.1j):
        r = genfun.radius_r(nu)
        for frac in (0.05, 0.2, 0.35, 0.5 - 1e-9):
            for ang in np.linspace(0, 2 * np.pi, 7, endpoint=False):
                w = frac * r * np.exp(1j * ang)
                res.append(abs(genfun.sigma_series(w, nu) - genfun.sigma_closed(w, nu)))
    spot = genfun.sigma_closed(0.1, -1.0)
    rad = genfun.radius_r(-1.0)
    ok = max(res) <= 1e-10 and abs(spot - 0.1454972) <= 1e-6 and abs(rad - 0.25) <= 1e-12
    assert report(5, ok, f"series vs closed {max(res):.2e}, Sigma(0.1) = {spot.real:.7f}, "
                         f"R(-1) = {rad:.15g}")


def test_criterion_06_ode():
    res = []
    for nu in (-2.0, -1.0, -0.5, 0.3 + 0.1j):
        r = genfun.radius_r(nu)
        for frac in (0.05, 0.25, 0.45):
            for ang in np.linspace(0, 2 * np.pi, 6, endpoint=False):
                res.append(genfun.ode_residual(frac * r * np.exp(1j * ang), nu))
    assert report(6, max(res) <= 1e-6, f"max ODE residual {max(res):.2e}")


def test_criterion_07_inverse_map():
    rng = np.random.default_rng(7)
    res = []
    for x, nu in ((0.5, -1.0), (0.5, -2.0), (0.3 + 0.1j, -1.2)):
        p = genfun.GfParams(x, nu)
        zs = [random_disk(rng, 0.1) for _ in range(25)] + [0.1, -0.1, 0.1j]
        res += [abs(genfun.omega(genfun.xi(z, p), p) - z) for z in zs]
    hand = genfun.omega(0.2, genfun.GfParams(0.5, -1.0))
    ok = max(res) <= 1e-9 and abs(hand + 0.2909944) <= 1e-6
    assert report(7, ok, f"max |Omega(Xi(z)) - z| {max(res):.2e}, Omega(0.2) = {hand.real:.7f}")


def test_criterion_08_ogf_egf():
    rng = np.random.default_rng(8)
    ogf, egf = [], []
    for x, nu in ((0.4, -1.3), (0.5, -2.0), (0.3 + 0.2j, -0.7 + 0.4j), (0.7, 0.6)):
        p = genfun.GfParams(x, nu)
        t = rng.standard_normal(12) + 1j * rng.standard_normal(12)
        ogf.append(genfun.ogf_relation_residual(t, p))
        for _ in range(3):
            z = random_disk(rng, 0.8)
            egf.append(rel(genfun.egf_s(z, t, p), genfun.egf_direct(z, t, p)))
    ok = max(ogf) <= 1e-8 and max(egf) <= 1e-8
    assert report(8, ok, f"OGF residual {max(ogf):.2e}, EGF relative {max(egf):.2e}")


def test_criterion_09_reduction():
    rng = np.random.default_rng(9)
    res = []
    for x, nu in ((0.5, -2.0), (0.6, -0.8), (0.5 + 0.2j, -1.0 + 0.3j)):
        k = rng.standard_normal(20) + 1j * rng.standard_normal(20)
        e0 = inversion.solve_e0(k, x, nu)
        direct = inversion.solve_tri(inversion.t0_matrix(x, nu, 20), k)
        res.append(np.abs(e0 - direct).max() / np.abs(direct).max())
    q = [rel(inversion.q_via_m(b, ell, x, nu), inversion.q_coeff(b, ell, x, nu))
         for b, ell in ((1, 1), (2, 1), (3, 2), (4, 4), (5, 2))
         for x, nu in ((0.5, -2.0), (0.3, -0.7))]
    ok = max(res) <= 1e-10 and max(q) <= 1e-8
    assert report(9, ok, f"solve_e0 vs solve_tri {max(res):.2e}, q_coeff vs q_via_m {max(q):.2e}")


X, NU = 0.5, -2.0
P = OperatorParams(X, NU)
F1 = (lambda w: w * np.exp((1 - X) * w))
DF1 = (lambda w: (1 + (1 - X) * w) * np.exp((1 - X) * w))
F2 = H0Series.from_taylor(np.r_[1.0, 0.0, 1 / 6, np.zeros(21)])
ZS = (0.5, 1.0, 1 + 0.5j)


def test_criterion_10_factorization():
    res = [operators.factorization_residual(F1, z, P, DF1) for z in ZS]
    res += [operators.factorization_residual(F2, z, P) for z in ZS]
    assert report(10, max(res) <= 1e-7, f"max relative residual {max(res):.2e}")


@pytest.mark.xfail(strict=True, reason="the stated closed form is not the value of L on "
                   "z e^{(1-x)z}; see test_criterion_11_corrected_closed_form")
def test_criterion_11_closed_form():
    res = [abs(operators.apply_l_quad(F1, z, P, DF1) - (-z * np.exp(-z) / (1 - X)))
           for z in ZS]
    ok = report(11, max(res) <= 1e-8,
                f"stated -z e^(-z)/(1-x) misses by {max(res):.2e} "
                f"(L at z=1 is {operators.apply_l_quad(F1, 1.0, P, DF1).real:.10f})")
    assert ok


def test_criterion_11_corrected_closed_form():
    res = [rel(operators.apply_l_quad(F1, z, P, DF1), l_of_z_exp(z, X, NU)) for z in ZS]
    # other x: only the 1/(1-x) prefactor changes
    for x in (0.2, 0.8):
        p = OperatorParams(x, NU)
        f = lambda w, x=x: w * np.exp((1 - x) * w)
        res.append(rel(operators.apply_l_quad(f, 1.0, p) * (1 - x) / (1 - X),
                       l_of_z_exp(1.0, X, NU)))
    assert max(res) <= 1e-8
    print(f"criterion 11 (corrected): -z/(1-x) Phi(1-1/nu; 2-1/nu; -z) matches to {max(res):.2e}")


def test_criterion_12_contour_inverse():
    t0 = time.perf_counter()
    k2 = operators.apply_l_series(F2, P)
    pts = [r * np.exp(1j * a) for r in (0.25, 0.6, 1.0)
           for a in np.linspace(0, 2 * np.pi, 5, endpoint=False)]
    rt = max(rel(operators.linv_contour(k2, z, P), F2(z)) for z in pts)
    # alpha = 2 nu with nu = -1/2 is where the real integral diverges
    phi = max(rel(operators.contour_phi(-1.0, 2.0, z), special_fn.confluent_phi(-1.0, 2.0, z))
              for z in (0.7, -0.4 + 0.3j))
    alt = max(rel(operators.linv_contour_alt(k2, z, P), operators.linv_contour(k2, z, P))
              for z in (0.7, 0.4 + 0.2j))
    dt = time.perf_counter() - t0
    ok = rt <= 1e-6 and phi <= 1e-8 and alt <= 1e-8 and dt < 30
    assert report(12, ok, f"round trip {rt:.2e}, Phi {phi:.2e}, two contour forms {alt:.2e}, "
                          f"{dt:.1f} s")


def test_criterion_13_volterra():
    k1 = operators.k1_from_k(operators.apply_l_series(F2, P), P)
    res = [rel(operators.volterra_lhs(F2, z, P), z / X * k1(z)) for z in (0.5, 1.0, 0.7 + 0.3j)]
    alpha = operators.kernel_singularity_exponent(P)
    ok = max(res) <= 1e-6 and abs(alpha + 0.5) <= 0.02
    assert report(13, ok, f"Volterra relative {max(res):.2e}, kernel exponent {alpha:.4f}")


def test_criterion_14_identities():
    out = special_fn.identity_suite(seed=14, trials=50, tol=1e-8)
    worst = {k: v["max_residual"] for k, v in out["identities"].items()}
    ok = out["pass"] and len(worst) == 6 and max(worst.values()) <= 1e-8
    assert report(14, ok, "max residuals " + ", ".join(f"{k} {v:.1e}" for k, v in worst.items()))
