"""Verification suites: every identity of the package as a tolerance check.

Each suite returns a JSON-ready report::

    {"suite": name, "cases": int, "max_residual": float, "pass": bool,
     "checks": {check: {"cases", "max_residual", "tol", "pass"}}}

``max_residual`` is the largest raw residual over all checks of the suite;
each check is judged against its own tolerance.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import exact_poly, genfun, inversion, operators, special_fn
from .operators import H0Series, OperatorParams

__all__ = ["SUITES", "run_suite", "run_all", "thread_cap"]


def thread_cap(default=1):
    """Worker count from ``HYPERINV_THREADS`` (at least 1)."""
    raw = os.environ.get("HYPERINV_THREADS")
    if not raw:
        return default
    try:
        return max(1, int(raw))
    except ValueError:
        return default


def _map(fn, items, threads):
    items = list(items)
    if threads <= 1 or len(items) < 2:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


class _Report:
    def __init__(self, suite):
        self.suite = suite
        self.checks = {}

    def add(self, name, residuals, tol):
        res = [float(r) for r in np.atleast_1d(residuals)]
        worst = max(res) if res else 0.0
        ok = bool(res) and all(math.isfinite(r) and r <= tol for r in res)
        self.checks[name] = {"cases": len(res), "max_residual": worst,
                             "tol": tol, "pass": ok}

    def as_dict(self):
        checks = self.checks.values()
        return {
            "suite": self.suite,
            "cases": sum(c["cases"] for c in checks),
            "max_residual": max((c["max_residual"] for c in checks), default=0.0),
            "pass": all(c["pass"] for c in checks),
            "checks": self.checks,
        }


def _rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


def _random_cx(rng, radius):
    return complex(radius * math.sqrt(rng.uniform())
                   * np.exp(2j * math.pi * rng.uniform()))


# -- suites --------------------------------------------------------------------

def suite_exact(n=8, seed=0, threads=1):
    """Exact ``A B = Id = B A`` and the criterion coefficients."""
    rep = _Report("exact")
    ok = _map(exact_poly.identity_exact, range(1, n + 1), threads)
    rep.add("inversion_pair", [0.0 if v else 1.0 for v in ok], 0.0)
    crit = []
    for m in range(1, n + 1):
        for k in range(1, m + 1):
            u = exact_poly.criterion_coefficient(m, k, m - k)
            crit.append(0.0 if u == (1 if k == m else 0) else 1.0)
    rep.add("criterion_coefficient", crit, 0.0)
    return rep.as_dict()


def suite_numeric(n=30, seed=0, threads=1, samples=20):
    """``max |A B - Id|`` at random complex ``|x| <= 2``, ``|nu| <= 3``."""
    rep = _Report("numeric")
    rng = np.random.default_rng(seed)
    pts = [(_random_cx(rng, 2.0), _random_cx(rng, 3.0)) for _ in range(samples)]

    def defect(pt):
        p = inversion.MatrixParams(pt[0], pt[1], n)
        return inversion.inversion_defect(p, order="both")

    rep.add("inversion_defect", _map(defect, pts, threads), 1e-10)
    return rep.as_dict()


def suite_gamma_sum(n=8, seed=0, threads=1, points=200):
    """Closed form of the finite reciprocal-Gamma sum on a mixed grid.

    Half the grid has ``mu != lambda``, the other half ``mu = lambda`` with
    every second ``lambda`` an integer.
    """
    rep = _Report("gamma_sum")
    rng = np.random.default_rng(seed)
    res = []
    for i in range(points):
        big_n = int(rng.integers(1, n + 1))
        if i < points // 2:
            lam = complex(rng.uniform(-3, 3), rng.uniform(-1, 1))
            mu = complex(rng.uniform(-3, 3), rng.uniform(-1, 1))
        else:
            lam = (complex(int(rng.integers(-4, n + 2))) if i % 2
                   else complex(rng.uniform(-3, 3), rng.uniform(-1, 1)))
            mu = lam
        res.append(abs(special_fn.d_closed(big_n, lam, mu)
                       - special_fn.d_sum(big_n, lam, mu)))
    rep.add("d_closed_vs_sum", res, 1e-11)
    return rep.as_dict()


def suite_genfun(n=12, seed=0, threads=1):
    """Sigma, the ODE, the inverse map and the OGF/EGF relations."""
    rep = _Report("genfun")
    rng = np.random.default_rng(seed)

    res = []
    for nu in (-2.0, -1.0, -0.5, 0.3 + 0.1j):
        r = genfun.radius_r(nu)
        for frac in (0.1, 0.25, 0.4, 0.5):
            for ang in (0.0, 1.3, 2.9, 4.4):
                w = frac * r * np.exp(1j * ang)
                res.append(abs(genfun.sigma_series(w, nu) - genfun.sigma_closed(w, nu)))
    rep.add("sigma_series_vs_closed", res, 1e-10)
    rep.add("sigma_spot", [abs(genfun.sigma_closed(0.1, -1.0) - 0.1454972243679)], 1e-6)
    rep.add("radius", [abs(genfun.radius_r(-1.0) - 0.25)], 1e-12)

    res = []
    for nu in (-2.0, -1.0, -0.5, 0.3 + 0.1j):
        r = genfun.radius_r(nu)
        for frac in (0.1, 0.3, 0.5):
            for ang in (0.0, 2.0, 4.0):
                res.append(genfun.ode_residual(frac * r * np.exp(1j * ang), nu))
    rep.add("ode", res, 1e-6)

    res = []
    for x, nu in ((0.5, -1.0), (0.5, -2.0), (0.3 + 0.1j, -1.2)):
        p = genfun.GfParams(x, nu)
        for _ in range(20):
            z = _random_cx(rng, 0.1)
            res.append(abs(genfun.omega(genfun.xi(z, p), p) - z))
    rep.add("omega_xi", res, 1e-9)
    p = genfun.GfParams(0.5, -1.0)
    rep.add("omega_spot", [abs(genfun.omega(0.2, p) + 0.2909944487)], 1e-6)

    ogf, ogf_inv, egf = [], [], []
    for x, nu in ((0.4, -1.3), (0.5, -2.0), (0.3 + 0.2j, -0.7 + 0.4j)):
        p = genfun.GfParams(x, nu)
        t = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        ogf.append(genfun.ogf_relation_residual(t, p))
        ogf_inv.append(genfun.ogf_inverse_residual(t, p))
        for _ in range(3):
            z = 0.5 * np.exp(2j * math.pi * rng.uniform())
            egf.append(_rel(genfun.egf_s(z, t, p), genfun.egf_direct(z, t, p)))
    rep.add("ogf_relation", ogf, 1e-8)
    rep.add("ogf_inverse_relation", ogf_inv, 1e-8)
    rep.add("egf", egf, 1e-8)
    return rep.as_dict()


def suite_reduction(n=20, seed=0, threads=1):
    """Closed-form solution against elimination, and Q against its integral form."""
    rep = _Report("reduction")
    rng = np.random.default_rng(seed)
    res = []
    # forward substitution loses digits with the condition number of the
    # system (~1e13 here); parameters are kept where that stays below 1e-10
    for x, nu in ((0.5, -2.0), (0.6, -0.8), (0.5 + 0.2j, -1.0 + 0.3j)):
        k = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        e0 = inversion.solve_e0(k, x, nu)
        ktil = inversion.reduced_rhs(k, x, nu)
        direct = inversion.solve_tri(inversion.t0_matrix(x, nu, n), k)
        via_a = inversion.solve_tri(inversion.build_a((x, nu, n)), ktil)
        scale = np.abs(direct).max()
        res.append(np.abs(e0 - direct).max() / scale)
        res.append(np.abs(via_a - direct).max() / scale)
    rep.add("solve_e0_vs_solve_tri", res, 1e-10)

    pairs = [(1, 1), (2, 1), (2, 2), (3, 1), (3, 2), (3, 3), (4, 2), (5, 3)]
    cases = [(b, ell, x, nu) for b, ell in pairs
             for x, nu in ((0.5, -2.0), (0.3, -0.7), (0.8, -1.5))]

    def q_res(c):
        b, ell, x, nu = c
        return _rel(inversion.q_via_m(b, ell, x, nu), inversion.q_coeff(b, ell, x, nu))

    rep.add("q_coeff_vs_q_via_m", _map(q_res, cases, threads), 1e-8)
    return rep.as_dict()


def l_of_z_exp(z, x, nu):
    """``L`` applied to ``z e^{(1-x) z}``: ``-z/(1-x) Phi(1 - 1/nu; 2 - 1/nu; -z)``."""
    return -z / (1 - x) * special_fn.confluent_phi(1 - 1 / nu, 2 - 1 / nu, -z)


def suite_operators(n=24, seed=0, threads=1):
    """Factorization, series/quadrature, contour inverse and Volterra checks."""
    rep = _Report("operators")
    x, nu = 0.5, -2.0
    p = OperatorParams(x, nu)
    f1 = lambda w: w * np.exp((1 - x) * w)
    df1 = lambda w: (1 + (1 - x) * w) * np.exp((1 - x) * w)
    f2 = H0Series.from_taylor(np.r_[1.0, 0.0, 1 / 6, np.zeros(n - 3)])
    zs = (0.5, 1.0, 1 + 0.5j)

    res = [operators.factorization_residual(f1, z, p, df1) for z in zs]
    res += [operators.factorization_residual(f2, z, p) for z in zs]
    rep.add("factorization", res, 1e-7)

    rep.add("l_closed_form", [_rel(operators.apply_l_quad(f1, z, p, df1),
                                   l_of_z_exp(z, x, nu)) for z in zs], 1e-8)

    f1s = H0Series(np.arange(1, n + 1) * (1 - x) ** np.arange(0, n))
    k1s = operators.apply_l_series(f1s, p)
    pts = [0.9 * np.exp(2j * math.pi * j / 10) * (0.5 + 0.05 * j) for j in range(10)]
    rep.add("series_vs_quad",
            [_rel(k1s(z), operators.apply_l_quad(f1s, z, p)) for z in pts], 1e-8)

    k2 = operators.apply_l_series(f2, p)
    pts = [np.exp(2j * math.pi * j / 8) * (0.3 + 0.1 * j) for j in range(8)]
    rep.add("contour_round_trip",
            _map(lambda z: _rel(operators.linv_contour(k2, z, p), f2(z)), pts, threads),
            1e-6)
    rep.add("contour_phi", [_rel(operators.contour_phi(2 * -0.5, 2, 0.7),
                                 special_fn.confluent_phi(2 * -0.5, 2, 0.7))], 1e-8)
    rep.add("contour_alt", [_rel(operators.linv_contour_alt(k2, 0.7, p),
                                 operators.linv_contour(k2, 0.7, p))], 1e-8)

    k2_1 = operators.k1_from_k(k2, p)
    res = [_rel(operators.volterra_lhs(f2, z, p), z / x * k2_1(z)) for z in (0.5, 1.0)]
    rep.add("volterra", res, 1e-6)
    alpha = operators.kernel_singularity_exponent(p)
    rep.add("kernel_exponent", [abs(alpha + 0.5)], 0.02)
    return rep.as_dict()


def suite_identities(n=50, seed=0, threads=1):
    """Six classical Gauss-function identities over random parameters."""
    rep = _Report("identities")
    out = special_fn.identity_suite(seed=seed, trials=n)
    for name, r in out["identities"].items():
        rep.checks[name] = {"cases": r["cases"], "max_residual": r["max_residual"],
                            "tol": 1e-8, "pass": r["pass"]}
    return rep.as_dict()


SUITES = {
    "exact": (suite_exact, 8),
    "numeric": (suite_numeric, 30),
    "gamma_sum": (suite_gamma_sum, 8),
    "genfun": (suite_genfun, 12),
    "reduction": (suite_reduction, 20),
    "operators": (suite_operators, 24),
    "identities": (suite_identities, 50),
}


def run_suite(name, n=None, seed=0, threads=None):
    """Run one suite; ``n`` defaults to the suite's own order or sample count."""
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    fn, default_n = SUITES[name]
    threads = thread_cap() if threads is None else threads
    return fn(n=default_n if n is None else n, seed=seed, threads=threads)


def run_all(seed=0, threads=None):
    return [run_suite(name, seed=seed, threads=threads) for name in SUITES]
