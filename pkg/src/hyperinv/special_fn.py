"""Complex special functions used throughout the package.

Gamma and digamma are evaluated natively (shifted Stirling and asymptotic
series) so that pole structure is visible to the callers; the hypergeometric helpers only cover the cases needed here: the
terminating Gauss polynomial, the convergent Gauss series for ``|z| < 1`` and
the confluent series.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

__all__ = [
    "ConvergenceError",
    "DomainError",
    "GammaEval",
    "PochhammerZeroError",
    "PoleError",
    "as_cx",
    "confluent_phi",
    "d_closed",
    "d_sum",
    "digamma",
    "gamma",
    "hyp2f1",
    "hyp_poly",
    "hyp_poly_coeffs",
    "identity_suite",
    "is_nonpositive_integer",
    "loggamma",
    "pochhammer",
    "rgamma",
]


class DomainError(ValueError):
    """An argument lies outside the domain where an operation is defined."""


class PoleError(DomainError):
    """A function was evaluated at one of its poles."""


class PochhammerZeroError(DomainError):
    """A denominator Pochhammer symbol vanishes."""


class ConvergenceError(RuntimeError):
    """A series or iteration failed to converge within its budget."""


def as_cx(z, name="z"):
    """Coerce ``z`` to ``complex`` and reject NaN/inf components."""
    w = complex(z)
    if not (math.isfinite(w.real) and math.isfinite(w.imag)):
        raise DomainError(f"{name} must be finite, got {z!r}")
    return w


def is_nonpositive_integer(z):
    w = complex(z)
    return w.imag == 0.0 and w.real <= 0.0 and w.real == math.floor(w.real)


def _sinpi(z):
    # sin(pi z) with the real part reduced first, exact zeros at integers
    n = round(z.real)
    s = cmath.sin(math.pi * (z - n))
    return -s if n % 2 else s


def _cospi(z):
    n = round(z.real)
    c = cmath.cos(math.pi * (z - n))
    return -c if n % 2 else c


_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)
# B_2k / (2k (2k - 1)) for the Stirling series of log-Gamma
_STIRLING = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
)
_STIRLING_MIN = 15.0


def _loggamma_right(z):
    # principal log Gamma(z) for Re(z) >= 1/2: shift right until |z| is large,
    # then the Stirling series
    shift = 0j
    while abs(z) < _STIRLING_MIN:
        shift += cmath.log(z)
        z += 1.0
    inv = 1.0 / z
    inv2 = inv * inv
    series = 0j
    p = inv
    for coef in _STIRLING:
        series += coef * p
        p *= inv2
    return (z - 0.5) * cmath.log(z) - z + _HALF_LOG_2PI + series - shift


@dataclass(frozen=True)
class GammaEval:
    """Result of :func:`gamma`.

    ``value`` and ``log_form`` are ``None`` exactly when ``at_pole`` is set.
    ``log_form`` is the principal branch of log-Gamma (cut along the negative
    real axis), so ``exp(log_form) == value``.
    """

    value: complex | None
    log_form: complex | None
    at_pole: bool


def loggamma(z):
    """Principal log-Gamma. Raises :class:`PoleError` on ``z`` in -N."""
    z = as_cx(z)
    if is_nonpositive_integer(z):
        raise PoleError(f"log-Gamma pole at {z}")
    if z.real >= 0.5:
        return _loggamma_right(z)
    # upward recurrence keeps the principal branch off the real axis
    n = math.ceil(0.5 - z.real)
    acc = 0j
    for k in range(n):
        acc += cmath.log(z + k)
    return _loggamma_right(z + n) - acc


def gamma(z):
    """Gamma function with explicit pole reporting (never raises at poles)."""
    z = as_cx(z)
    if is_nonpositive_integer(z):
        return GammaEval(None, None, True)
    if z.real >= 0.5:
        lg = _loggamma_right(z)
        return GammaEval(cmath.exp(lg), lg, False)
    # reflection for the value; log via recurrence for the principal branch
    value = math.pi / (_sinpi(z) * cmath.exp(_loggamma_right(1.0 - z)))
    return GammaEval(value, loggamma(z), False)


def rgamma(z):
    """Reciprocal Gamma ``1/Gamma(z)``; entire, exactly zero on -N."""
    z = as_cx(z)
    if is_nonpositive_integer(z):
        return 0j
    if z.real >= 0.5:
        return cmath.exp(-_loggamma_right(z))
    return _sinpi(z) * cmath.exp(_loggamma_right(1.0 - z)) / math.pi


# Bernoulli numbers B_2k / (2k) for the digamma asymptotic expansion
_DIGAMMA_ASYM = (
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
)


def digamma(z):
    """Digamma function psi = Gamma'/Gamma.

    Raises :class:`PoleError` at the non-positive integers.
    """
    z = as_cx(z)
    if is_nonpositive_integer(z):
        raise PoleError(f"digamma pole at {z}")
    if z.real < 0.5:
        # psi(z) = psi(1 - z) - pi cot(pi z)
        return digamma(1.0 - z) - math.pi * _cospi(z) / _sinpi(z)
    acc = 0j
    while abs(z) < 12.0:
        acc -= 1.0 / z
        z += 1.0
    inv2 = 1.0 / (z * z)
    series = 0j
    p = inv2
    for coef in _DIGAMMA_ASYM:
        series += coef * p
        p *= inv2
    return acc + cmath.log(z) - 0.5 / z - series


def pochhammer(c, m):
    """Rising factorial ``(c)_m`` as a plain product.

    Integer ``c`` gives an exact Python ``int``; anything else is multiplied
    in its own arithmetic (complex, mpmath, ...).
    """
    if m < 0:
        raise ValueError("pochhammer order must be non-negative")
    if isinstance(c, (int, np.integer)):
        out = 1
        for j in range(m):
            out *= int(c) + j
        return out
    out = 1
    for j in range(m):
        out = out * (c + j)
    return out


def hyp_poly_coeffs(m, beta, gamma_):
    """Coefficients of ``F(-m, beta; gamma_; x)`` in increasing powers of x.

    Works in whatever arithmetic ``beta``/``gamma_`` carry, so it serves
    complex floats and mpmath numbers alike.
    """
    coeffs = [1]
    term = 1
    for j in range(m):
        den = gamma_ + j
        if den == 0:
            raise PochhammerZeroError(
                f"(gamma)_{j + 1} vanishes for gamma = {gamma_} (m = {m})"
            )
        term = term * (j - m) * (beta + j) / (den * (j + 1))
        coeffs.append(term)
    return coeffs


def _horner(coeffs, x):
    acc = coeffs[-1]
    for c in reversed(coeffs[:-1]):
        acc = acc * x + c
    return acc


def hyp_poly(m, beta, gamma_, x):
    """Terminating Gauss series ``F(-m, beta; gamma_; x)``.

    Running Pochhammer products are used instead of Gamma ratios, so
    ``gamma_`` may be a negative integer as long as ``(gamma_)_j != 0`` for
    ``j <= m``. ``x`` may be a scalar or a numpy array.
    """
    if m < 0:
        raise ValueError("degree m must be non-negative")
    beta = as_cx(beta, "beta")
    gamma_ = as_cx(gamma_, "gamma_")
    coeffs = hyp_poly_coeffs(m, beta, gamma_)
    if np.ndim(x) == 0:
        return complex(_horner(coeffs, as_cx(x, "x")))
    return _horner(coeffs, np.asarray(x, dtype=complex))


def hyp2f1(a, b, c, z, max_terms=20000):
    """Gauss series ``F(a, b; c; z)``.

    Terminating when ``a`` or ``b`` is a non-positive integer; otherwise the
    plain series is summed, which requires ``|z| < 1``.
    """
    a, b, c, z = (as_cx(v) for v in (a, b, c, z))
    for p in (a, b):
        if is_nonpositive_integer(p):
            m = int(round(-p.real))
            other = b if p is a else a
            return hyp_poly(m, other, c, z)
    if is_nonpositive_integer(c):
        raise PochhammerZeroError(f"F(a, b; c; z) undefined for c = {c}")
    if abs(z) >= 1.0:
        raise DomainError("hyp2f1 series needs |z| < 1 for non-terminating F")
    total = 1 + 0j
    term = 1 + 0j
    small = 0
    for n in range(max_terms):
        term *= (a + n) * (b + n) / ((c + n) * (n + 1)) * z
        total += term
        if abs(term) <= 1e-17 * abs(total):
            small += 1
            if small >= 3:
                return total
        else:
            small = 0
    raise ConvergenceError(f"hyp2f1 series did not converge in {max_terms} terms")


def confluent_phi(alpha, beta, z, max_terms=10000):
    """Kummer's confluent function ``Phi(alpha; beta; z) = 1F1``.

    Summed as a power series; for ``Re(z) < -10`` Kummer's transformation
    ``e**z Phi(beta - alpha; beta; -z)`` is applied first to avoid
    cancellation.
    """
    alpha, beta, z = as_cx(alpha), as_cx(beta), as_cx(z)
    if is_nonpositive_integer(beta):
        raise PochhammerZeroError(f"Phi undefined for beta = {beta}")
    if z.real < -10.0:
        return cmath.exp(z) * confluent_phi(beta - alpha, beta, -z, max_terms)
    total = 1 + 0j
    term = 1 + 0j
    for m in range(max_terms):
        term *= (alpha + m) / ((beta + m) * (m + 1)) * z
        total += term
        if term == 0:
            return total
        if m > abs(z) and abs(term) <= 1e-17 * abs(total):
            return total
    raise ConvergenceError(f"Phi series did not converge in {max_terms} terms")


def d_sum(N, lam, mu):
    """Finite sum ``sum_{r<N} (-1)^r / (Gamma(1+r-lam) Gamma(1-r+mu))``."""
    if N < 1:
        raise ValueError("N must be a positive integer")
    lam, mu = as_cx(lam, "lambda"), as_cx(mu, "mu")
    total = 0j
    for r in range(N):
        total += (-1) ** r * rgamma(1 + r - lam) * rgamma(1 - r + mu)
    return total


def d_closed(N, lam, mu):
    """Closed form of :func:`d_sum`.

    For ``mu != lam`` the two-term reciprocal-Gamma expression is used; for
    ``mu == lam`` the digamma difference, where an integer ``lam`` is
    resolved through the reflection limit ``sin(pi lam) psi(-lam)/pi ->
    (-1)^lam`` rather than by numerical limiting.
    """
    if N < 1:
        raise ValueError("N must be a positive integer")
    lam, mu = as_cx(lam, "lambda"), as_cx(mu, "mu")
    if mu != lam:
        first = rgamma(-lam) * rgamma(1 + mu)
        second = (-1) ** N * rgamma(N - lam) * rgamma(1 - N + mu)
        return (first - second) / (mu - lam)
    if lam.imag == 0.0 and lam.real == math.floor(lam.real):
        m = int(lam.real)
        if m < 0:
            # psi(-lam) and psi(N - lam) both finite, sin(pi lam) = 0
            return 0j
        # sin(pi lam) psi(-lam)/pi -> (-1)^m; the psi(N - lam) term tends to
        # 0 when N - m >= 1 and to (-1)^m when it also sits on a pole
        return complex((-1) ** m) if m < N else 0j
    return _sinpi(lam) / math.pi * (digamma(-lam) - digamma(N - lam))


# -- classical identity regression ------------------------------------------

def _rel(lhs, rhs):
    return abs(lhs - rhs) / max(1.0, abs(lhs), abs(rhs))


def _gratio(num, den):
    # prod Gamma(num) / prod Gamma(den) through log-Gamma
    lg = sum(loggamma(v) for v in num) - sum(loggamma(v) for v in den)
    return cmath.exp(lg)


def _check_contiguous(a, b, c, z):
    lhs = b * hyp2f1(a, b + 1, c + 1, z)
    rhs = c * hyp2f1(a, b, c, z) - (c - b) * hyp2f1(a, b, c + 1, z)
    return _rel(lhs, rhs)


def _check_euler_transform(a, b, c, z):
    lhs = hyp2f1(a, b, c, z)
    rhs = (1 - z) ** (c - a - b) * hyp2f1(c - a, c - b, c, z)
    return _rel(lhs, rhs)


def _check_derivative(a, b, c, z):
    # complex-step derivative of the real-parameter series
    h = 1e-20
    lhs = hyp2f1(a, b, c, complex(z, h)).imag / h
    rhs = a * b / c * hyp2f1(a + 1, b + 1, c + 1, z).real
    return _rel(lhs, rhs)


def _check_terminating_one_minus_x(m, b, c, x):
    lhs = hyp_poly(m, b, c, 1 - x)
    pref = _gratio((c, c - b + m), (c - b, c + m))
    rhs = pref * hyp_poly(m, b, b + 1 - m - c, x)
    return _rel(lhs, rhs)


def _check_chu_vandermonde(m, b, c):
    lhs = hyp_poly(m, b, c, 1.0)
    rhs = _gratio((c, c + m - b), (c + m, c - b))
    return _rel(lhs, rhs)


def _check_euler_integral(a, b, c, z):
    integrand = lambda t: (1 - z * t) ** (-a)
    val, _ = integrate.quad(integrand, 0.0, 1.0, weight="alg",
                            wvar=(b - 1, c - b - 1), epsabs=0.0, epsrel=1e-13,
                            limit=200)
    lhs = hyp2f1(a, b, c, z).real
    rhs = _gratio((c,), (b, c - b)).real * val
    return _rel(lhs, rhs)


IDENTITY_NAMES = ("contiguous", "euler_transform", "derivative", "terminating_one_minus_x", "chu_vandermonde", "euler_integral")


def _draw(rng, name):
    u = rng.uniform
    if name == "contiguous":
        b = u(0.3, 3.0)
        return (u(-3.0, 3.0), b, b + u(0.3, 3.0), u(-0.6, 0.6))
    if name == "euler_transform":
        a = -float(rng.integers(1, 7)) if rng.random() < 0.5 else u(-3.0, 3.0)
        b = u(0.3, 3.0)
        return (a, b, b + u(0.3, 3.0), u(-0.6, 0.6))
    if name == "derivative":
        return (u(-3.0, 3.0), u(-3.0, 3.0), u(0.5, 4.0), u(-0.5, 0.5))
    if name == "terminating_one_minus_x":
        b = u(-3.0, 3.0)
        return (int(rng.integers(0, 9)), b, b + u(0.2, 4.0), u(-1.0, 2.0))
    if name == "chu_vandermonde":
        b = u(-3.0, 3.0)
        return (int(rng.integers(0, 9)), b, b + u(0.2, 4.0))
    if name == "euler_integral":
        b = u(0.2, 3.0)
        return (u(-3.0, 3.0), b, b + u(0.2, 3.0), u(-0.9, 0.9))
    raise KeyError(name)


_CHECKS = {
    "contiguous": _check_contiguous,
    "euler_transform": _check_euler_transform,
    "derivative": _check_derivative,
    "terminating_one_minus_x": _check_terminating_one_minus_x,
    "chu_vandermonde": _check_chu_vandermonde,
    "euler_integral": _check_euler_integral,
}


def identity_suite(seed=0, trials=50, tol=1e-8):
    """Evaluate both sides of six classical Gauss-function identities.

    Parameters are drawn at random (reproducibly from ``seed``) inside the
    region where each identity holds. Failures are reported, never raised.

    * ``contiguous``: ``b F(a,b+1;c+1) = c F(a,b;c) - (c-b) F(a,b;c+1)``
    * ``euler_transform``: ``F(a,b;c;z) = (1-z)^(c-a-b) F(c-a,c-b;c;z)``
    * ``derivative``: ``F'(a,b;c;z) = (ab/c) F(a+1,b+1;c+1;z)``
    * ``terminating_one_minus_x``: ``F(-m,b;c;1-x)`` as a multiple of
      ``F(-m,b;b+1-m-c;x)``
    * ``chu_vandermonde``: ``F(-m,b;c;1) = (c-b)_m/(c)_m``
    * ``euler_integral``: the Euler integral of ``F``, by scipy quadrature

    Returns
    -------
    dict
        ``{"identities": {name: {"cases", "max_residual", "failures",
        "pass"}}, "max_residual": float, "pass": bool}``
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    report = {}
    for name in IDENTITY_NAMES:
        worst = 0.0
        failures = []
        for _ in range(trials):
            params = _draw(rng, name)
            try:
                res = _CHECKS[name](*params)
            except (ArithmeticError, ValueError, RuntimeError) as exc:
                failures.append({"params": list(params), "error": str(exc)})
                continue
            if not math.isfinite(res) or res > tol:
                failures.append({"params": list(params), "residual": res})
            if math.isfinite(res):
                worst = max(worst, res)
        report[name] = {
            "cases": trials,
            "max_residual": worst,
            "failures": failures,
            "pass": not failures,
        }
    return {
        "identities": report,
        "max_residual": max(r["max_residual"] for r in report.values()),
        "pass": all(r["pass"] for r in report.values()),
    }
