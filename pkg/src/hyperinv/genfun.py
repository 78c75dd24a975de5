"""Generating-function layer: the map Xi, its inverse Omega, Theta, Sigma and
the ordinary/exponential generating-function identities of the inversion pair.

Power series are truncated at an explicit order and stored as complex arrays
``coeffs[j]`` = coefficient of ``z**j``.
"""
from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .inversion import apply_tri, build_b
from .special_fn import (ConvergenceError, DomainError, PoleError, as_cx,
                         confluent_phi, loggamma)

__all__ = [
    "BranchCutWarning",
    "GfParams",
    "PowerSeries",
    "RadiusError",
    "egf_direct",
    "egf_s",
    "log_series",
    "ode_residual",
    "ogf_inverse_residual",
    "ogf_prefactor",
    "ogf_relation_residual",
    "omega",
    "omega_series",
    "prefactor_zero",
    "radius_r",
    "sigma_closed",
    "sigma_coeffs",
    "sigma_series",
    "theta",
    "xi",
    "xi_series",
]


class RadiusError(DomainError):
    """Argument outside the disk where a series or implicit branch is valid."""


class BranchCutWarning(UserWarning):
    """A principal-branch power was evaluated within 1e-8 of its cut."""


_CUT_EPS = 1e-8


@dataclass(frozen=True)
class GfParams:
    x: complex
    nu: complex
    order: int = 24

    def __post_init__(self):
        object.__setattr__(self, "x", as_cx(self.x, "x"))
        object.__setattr__(self, "nu", as_cx(self.nu, "nu"))
        if self.order < 1:
            raise ValueError("order must be >= 1")


class PowerSeries:
    """Truncated power series ``sum_{j <= order} coeffs[j] z**j``."""

    def __init__(self, coeffs, order=None):
        c = np.asarray(coeffs, dtype=complex).ravel()
        if order is None:
            order = len(c) - 1
        if order < 0:
            raise ValueError("order must be >= 0")
        out = np.zeros(order + 1, dtype=complex)
        m = min(len(c), order + 1)
        out[:m] = c[:m]
        self.coeffs = out
        self.order = order

    def __repr__(self):
        return f"PowerSeries(order={self.order}, coeffs={self.coeffs!r})"

    def __call__(self, z):
        acc = 0j
        for c in self.coeffs[::-1]:
            acc = acc * z + c
        return acc

    def __add__(self, other):
        n = min(self.order, other.order)
        return PowerSeries(self.coeffs[:n + 1] + other.coeffs[:n + 1], n)

    def __sub__(self, other):
        n = min(self.order, other.order)
        return PowerSeries(self.coeffs[:n + 1] - other.coeffs[:n + 1], n)

    def __mul__(self, other):
        if isinstance(other, PowerSeries):
            n = min(self.order, other.order)
            prod = np.convolve(self.coeffs[:n + 1], other.coeffs[:n + 1])
            return PowerSeries(prod[:n + 1], n)
        return PowerSeries(self.coeffs * other, self.order)

    __rmul__ = __mul__

    def compose(self, inner):
        """``self(inner(z))`` truncated; ``inner`` must have zero constant term."""
        if inner.coeffs[0] != 0:
            raise ValueError("inner series must vanish at 0")
        n = min(self.order, inner.order)
        acc = PowerSeries([self.coeffs[-1]], n)
        for c in self.coeffs[-2::-1]:
            acc = acc * inner
            acc.coeffs[0] += c
        return PowerSeries(acc.coeffs, n)

    def reciprocal(self):
        """``1/self`` as a series; needs a non-zero constant term."""
        a = self.coeffs
        if a[0] == 0:
            raise ZeroDivisionError("series with zero constant term has no reciprocal")
        out = np.zeros_like(a)
        out[0] = 1 / a[0]
        for j in range(1, self.order + 1):
            out[j] = -np.dot(a[1:j + 1], out[j - 1::-1]) / a[0]
        return PowerSeries(out, self.order)

    def to_json(self):
        from .io import cx_to_json
        return {"order": self.order, "coeffs": [cx_to_json(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, data):
        from .io import cx_from_json
        return cls([cx_from_json(c) for c in data["coeffs"]], int(data["order"]))


def _near_cut(w):
    return w.real < 0 and abs(w.imag) <= _CUT_EPS * max(1.0, abs(w))


# -- Xi and its series ---------------------------------------------------------

def xi(z, p):
    """``z/(z-1) ((1-z)/(1-z(1-x)))**nu`` with the principal power."""
    z = as_cx(z)
    x, nu = p.x, p.nu
    den = 1 - z * (1 - x)
    if z == 1 or den == 0:
        raise PoleError(f"Xi is singular at z = {z}")
    ratio = (1 - z) / den
    if _near_cut(ratio):
        warnings.warn(f"Xi: power base {ratio} lies on the branch cut",
                      BranchCutWarning, stacklevel=2)
    return z / (z - 1) * cmath.exp(nu * cmath.log(ratio))


def log_series(a, order):
    """Series of ``log(1 - a z)``."""
    c = np.zeros(order + 1, dtype=complex)
    j = np.arange(1, order + 1)
    c[1:] = -np.power(complex(a), j) / j
    return PowerSeries(c, order)


def _exp_series(s):
    # exp of a series with zero constant term: e' = s' e
    n = s.order
    e = np.zeros(n + 1, dtype=complex)
    e[0] = 1
    ds = s.coeffs * np.arange(n + 1)
    for j in range(1, n + 1):
        e[j] = np.dot(ds[1:j + 1], e[j - 1::-1]) / j
    return PowerSeries(e, n)


def xi_series(p, order=None):
    """Taylor coefficients of ``Xi`` at 0 up to ``order``."""
    n = p.order if order is None else order
    power = _exp_series((log_series(1, n) - log_series(1 - p.x, n)) * p.nu)
    geom = PowerSeries(np.r_[0, -np.ones(n)], n)  # z/(z-1)
    return geom * power


def ogf_prefactor(z, p):
    """``(1-nu)/(1-z) + nu/(1-z(1-x))``."""
    return (1 - p.nu) / (1 - z) + p.nu / (1 - z * (1 - p.x))


def prefactor_zero(p):
    """The single zero ``1/(1 - x + nu x)`` of :func:`ogf_prefactor`, or ``None``.

    The inverse relation divides by the prefactor; near this point it is not
    usable and callers are expected to flag it.
    """
    d = 1 - p.x + p.nu * p.x
    return None if d == 0 else 1 / d


def _prefactor_series(p, n):
    j = np.arange(n + 1)
    return PowerSeries((1 - p.nu) + p.nu * np.power(1 - p.x, j), n)


def _seq_series(seq, n):
    # sum_{k>=1} seq_k z^k, truncated at n
    c = np.zeros(n + 1, dtype=complex)
    m = min(len(seq), n)
    c[1:m + 1] = np.asarray(seq, dtype=complex)[:m]
    return PowerSeries(c, n)


def _s_from_t(t_seq, p, n):
    t = np.zeros(n, dtype=complex)
    m = min(len(t_seq), n)
    t[:m] = np.asarray(t_seq, dtype=complex)[:m]
    return apply_tri(build_b((p.x, p.nu, n)), t)


def ogf_relation_residual(t_seq, p, order=None):
    """Max coefficient mismatch of ``G_S(z) = P(z) G_T(Xi(z))``.

    ``S = B T``; both sides are expanded to ``order`` (default
    ``len(t_seq)``, where every coefficient of ``G_S`` is complete).
    """
    n = len(t_seq) if order is None else order
    s = _s_from_t(t_seq, p, n)
    lhs = _seq_series(s, n)
    rhs = _prefactor_series(p, n) * _seq_series(t_seq, n).compose(xi_series(p, n))
    return float(np.abs(lhs.coeffs - rhs.coeffs).max())


def omega_series(p, order=None):
    """Series reversion of :func:`xi_series` (``Xi'(0) = -1``)."""
    n = p.order if order is None else order
    xs = xi_series(p, n)
    d1 = xs.coeffs[1]
    w = PowerSeries(np.r_[0, 1 / d1, np.zeros(n - 1)], n)
    ident = PowerSeries(np.r_[0, 1, np.zeros(n - 1)], n)
    # each pass fixes one more coefficient
    for _ in range(n):
        err = xs.compose(w) - ident
        w = w - err * (1 / d1)
    return w


def ogf_inverse_residual(t_seq, p, order=None):
    """Max coefficient mismatch of ``G_T(xi) = G_S(Omega(xi)) / P(Omega(xi))``.

    Read as formal series at 0, where ``P(0) = 1``; the zero reported by
    :func:`prefactor_zero` only limits the disk of convergence. The
    recovery cancels the coefficients of ``S`` down to those of ``T``, so
    the mismatch is divided by ``max(1, max |S_n|)``.
    """
    n = len(t_seq) if order is None else order
    s = _s_from_t(t_seq, p, n)
    om = omega_series(p, n)
    rhs = _seq_series(s, n).compose(om) * _prefactor_series(p, n).compose(om).reciprocal()
    lhs = _seq_series(t_seq, n)
    scale = max(1.0, float(np.abs(s).max()))
    return float(np.abs(lhs.coeffs - rhs.coeffs).max()) / scale


# -- R(nu), Theta, Sigma ----------------------------------------------------------

def _xlogx(a):
    return 0.0 if a == 0 else a * cmath.log(a)


def radius_r(nu):
    """Radius ``R(nu) = |exp(-psi(nu))|`` of the Sigma series.

    ``psi`` has three branches: ``nu`` off ``[0, inf)``, real ``0 <= nu < 1``
    and real ``nu >= 1``; ``0 log 0`` is read as 0.
    """
    nu = as_cx(nu, "nu")
    if nu.imag == 0 and nu.real >= 1:
        v = nu.real
        psi = -_xlogx(v - 1) + v * math.log(v)
    elif nu.imag == 0 and nu.real >= 0:
        v = nu.real
        psi = _xlogx(1 - v) + _xlogx(v)
    else:
        psi = _xlogx(1 - nu) + nu * cmath.log(-nu)
    return math.exp(-complex(psi).real)


def _check_radius(w, nu, frac, what):
    r = radius_r(nu)
    if abs(w) >= frac * r:
        raise RadiusError(f"{what}: |w| = {abs(w):.6g} not below "
                          f"{frac:g} R(nu) = {frac * r:.6g}")
    return r


def theta(w, nu, steps=32, tol=1e-12):
    """Root of ``1 - T + w T**(1-nu) = 0`` on the branch with ``T(0) = 1``.

    Newton's method on ``L = log T`` is continued along the ray ``0 -> w``,
    which follows the analytic branch without crossing a cut.

    Raises
    ------
    RadiusError
        If ``|w| >= 0.95 R(nu)``.
    ConvergenceError
        If Newton stalls or the continuation jumps.
    """
    w, nu = as_cx(w, "w"), as_cx(nu, "nu")
    if w == 0:
        return 1 + 0j
    _check_radius(w, nu, 0.95, "theta")
    a = 1 - nu
    L = 0j
    prev = 1 + 0j
    for s in range(1, steps + 1):
        ws = w * s / steps
        for _ in range(60):
            t = cmath.exp(L)
            ta = cmath.exp(a * L)
            g = 1 - t + ws * ta
            dg = -t + a * ws * ta
            step = g / dg
            L -= step
            if abs(step) <= 2e-15 * max(1.0, abs(L)):
                break
        cur = cmath.exp(L)
        if abs(cur - prev) > 0.2:
            raise ConvergenceError(f"theta: continuation jumped at w = {ws}")
        prev = cur
    t = cmath.exp(L)
    res = abs(1 - t + w * cmath.exp(a * L))
    if res > tol * max(1.0, abs(t)):
        raise ConvergenceError(f"theta: residual {res:.3e} above {tol:g}")
    return t


def _is_pole(v):
    return v.imag == 0 and v.real <= 0 and v.real == math.floor(v.real)


def _log_sigma(nu, b):
    # log sigma_b, or None when sigma_b = 0
    num, den = b * (1 - nu), 1 - b * nu
    if _is_pole(num):
        if not _is_pole(den):
            raise PoleError(f"sigma_{b}: Gamma({num}) is infinite")
        # both arguments move together with nu: the ratio of the two poles
        # Gamma(-m)/Gamma(-k) tends to (-1)^(m-k) k!/m!
        m, k = int(-num.real), int(-den.real)
        sign = 0j if (m - k) % 2 == 0 else 1j * math.pi
        return sign + math.lgamma(k + 1) - math.lgamma(m + 1) - math.lgamma(b)
    if _is_pole(den):
        return None
    return loggamma(num) - loggamma(b) - loggamma(den)


def sigma_coeffs(nu, terms):
    """``sigma_b = Gamma(b(1-nu))/(Gamma(b) Gamma(1-b nu))`` for ``b = 1..terms``.

    Coefficients beyond the double-precision range come back as ``inf``/0;
    :func:`sigma_series` works in log space instead.
    """
    nu = as_cx(nu, "nu")
    out = np.zeros(terms, dtype=complex)
    for b in range(1, terms + 1):
        lg = _log_sigma(nu, b)
        if lg is None:
            continue
        try:
            out[b - 1] = cmath.exp(lg)
        except OverflowError:
            out[b - 1] = complex(math.inf, 0)
    return out


def _sigma_terms(w, nu, n):
    logw = cmath.log(w)
    out = np.zeros(n, dtype=complex)
    for b in range(1, n + 1):
        lg = _log_sigma(nu, b)
        if lg is not None:
            out[b - 1] = cmath.exp(lg + b * logw)
    return out


def sigma_series(w, nu, terms=None, full_output=False):
    """Partial sum of ``sum_b sigma_b w**b``.

    The tail is estimated geometrically with ratio ``|w|/R(nu)`` from the
    last non-zero term. With ``terms=None`` the number of terms doubles
    until that estimate drops below ``1e-17 |sum|``. ``full_output=True``
    returns ``(value, tail_estimate)``.

    Raises
    ------
    RadiusError
        If ``|w| > 0.8 R(nu)``.
    """
    w, nu = as_cx(w, "w"), as_cx(nu, "nu")
    r = _check_radius(w, nu, 0.8 + 1e-12, "sigma_series")
    if w == 0:
        return (0j, 0.0) if full_output else 0j
    q = abs(w) / r
    n = 32 if terms is None else int(terms)
    while True:
        tv = _sigma_terms(w, nu, n)
        value = complex(np.sum(tv[::-1]))
        nz = np.flatnonzero(tv)
        tail = abs(tv[nz[-1]]) * q / (1 - q) if nz.size else 0.0
        if terms is not None or tail <= 1e-17 * abs(value) or n >= 8192:
            break
        n *= 2
    return (value, tail) if full_output else value


def sigma_closed(w, nu):
    """``(Theta(w) - 1)/(nu Theta(w) + 1 - nu)``."""
    nu = as_cx(nu, "nu")
    t = theta(w, nu)
    return (t - 1) / (nu * t + 1 - nu)


def ode_residual(w, nu):
    """``|w Sigma'(w) - Sigma (1 - nu Sigma)(1 + (1-nu) Sigma)|``.

    ``Sigma'`` by a fourth-order central difference of :func:`sigma_closed`
    with step ``1e-4 R(nu)``.
    """
    w, nu = as_cx(w, "w"), as_cx(nu, "nu")
    h = 1e-4 * radius_r(nu)
    f = lambda v: sigma_closed(v, nu)
    d = (f(w - 2 * h) - 8 * f(w - h) + 8 * f(w + h) - f(w + 2 * h)) / (12 * h)
    s = f(w)
    return abs(w * d - s * (1 - nu * s) * (1 + (1 - nu) * s))


def omega(xi_val, p):
    """Inverse of :func:`xi` near 0: ``S/((1 - x(1-nu)) S - x)`` with ``S = Sigma(x xi)``."""
    xi_val = as_cx(xi_val, "xi")
    if p.x == 0:
        raise DomainError("omega needs x != 0")
    s = sigma_closed(p.x * xi_val, p.nu)
    den = (1 - p.x * (1 - p.nu)) * s - p.x
    if den == 0:
        raise PoleError(f"omega: zero denominator at xi = {xi_val}")
    return s / den


# -- exponential generating function ---------------------------------------------

def egf_s(z, t_seq, p):
    """``e**z sum_k (-1)^k T_k z^k/k! Phi(k nu; k; -x z)``."""
    z = as_cx(z)
    total = 0j
    fact = 1.0
    zk = 1 + 0j
    for k, tk in enumerate(np.asarray(t_seq, dtype=complex), start=1):
        fact *= k
        zk *= z
        if tk == 0:
            continue
        total += (-1) ** k * tk * zk / fact * confluent_phi(k * p.nu, k, -p.x * z)
    return cmath.exp(z) * total


def egf_direct(z, t_seq, p, terms=60):
    """``sum_{n <= terms} S_n z^n/n!`` with ``S = B T`` (``T`` zero-padded)."""
    z = as_cx(z)
    s = _s_from_t(t_seq, p, terms)
    total = 0j
    term = 1 + 0j
    for n in range(1, terms + 1):
        term *= z / n
        total += s[n - 1] * term
    return total
