"""The integro-differential operator L, its factor M, the Volterra kernel and
the contour-integral inverse.

Functions in the space H0 (entire, vanishing at 0) are represented by
:class:`H0Series`, which stores plain exponential coefficients
``f(z) = sum_{l >= 1} c_l z**l / l!``. The sequences ``E_l`` and ``K_b`` of the
reduced triangular system relate to these by ``E_l = c_l(f)`` for the unknown
and ``K_b = (-1)**b c_b(K)`` for the right-hand side; the conversion lives in
:meth:`H0Series.from_signed` / :meth:`H0Series.to_signed` only.

Callables are accepted wherever an :class:`H0Series` is; they must be
vectorised over complex numpy arrays.
"""
from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field
from math import comb, factorial

import numpy as np

from .inversion import check_operator_domain, q_coeff, r_factor as _r_factor
from .quadrature import (adaptive_gk, gauss_legendre_doubling,
                         graded_gauss_legendre)
from .special_fn import DomainError, as_cx, rgamma

__all__ = [
    "ContourSpec",
    "EndpointDivergenceWarning",
    "H0Series",
    "OperatorParams",
    "QuadSettings",
    "TruncationWarning",
    "VolterraGeometry",
    "apply_l_quad",
    "apply_l_series",
    "apply_m_quad",
    "contour_phi",
    "delta_fd",
    "eval_h0",
    "factorization_residual",
    "k1_from_k",
    "kernel_singularity_exponent",
    "linv_contour",
    "linv_contour_alt",
    "psi_kernel",
    "r_factor",
    "taylor_refit",
    "theta_pm",
    "volterra_lhs",
]


class TruncationWarning(UserWarning):
    """A truncated series was evaluated where its tail is not negligible."""


class EndpointDivergenceWarning(UserWarning):
    """The contour integrand does not vanish at t = 1 (Re(nu) >= 0)."""


@dataclass(frozen=True)
class QuadSettings:
    """Tolerances for the real-line quadratures of L and M."""

    rtol: float = 1e-13
    atol: float = 1e-15
    max_intervals: int = 4000
    fd_step: float = 1e-5


@dataclass(frozen=True)
class ContourSpec:
    """Loop from t = 1 around t = 0 and back.

    ``rho`` is the radius of the circle about 0; ``circle_nodes`` and
    ``leg_nodes`` are the starting Gauss-Legendre counts (doubled until two
    estimates agree to ``tol``).
    """

    rho: float = 0.5
    circle_nodes: int = 64
    leg_nodes: int = 8
    tol: float = 1e-9
    leg_levels: int = 36

    def __post_init__(self):
        if not 0.0 < self.rho < 1.0:
            raise ValueError(f"rho must lie in (0, 1), got {self.rho}")
        for name in ("circle_nodes", "leg_nodes"):
            v = getattr(self, name)
            if v < 2 or v & (v - 1):
                raise ValueError(f"{name} must be a power of two >= 2, got {v}")


@dataclass(frozen=True)
class OperatorParams:
    """``(x, nu)`` of the operator with the derived constants.

    By default ``x`` must avoid ``(-inf, 0] U {1}`` and ``Re(nu) < 0``.
    ``extended=True`` admits ``Re(nu) < 1`` for the contour representation
    only; the operators themselves still refuse such ``nu``.
    """

    x: complex
    nu: complex
    quad: QuadSettings = field(default_factory=QuadSettings)
    contour: ContourSpec = field(default_factory=ContourSpec)
    extended: bool = False

    def __post_init__(self):
        x, nu = as_cx(self.x, "x"), as_cx(self.nu, "nu")
        if self.extended:
            if nu.real >= 1.0:
                raise DomainError(f"Re(nu) must be < 1, got nu = {nu}")
            check_operator_domain(x, -1.0)
        else:
            check_operator_domain(x, nu)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "nu", nu)

    @property
    def c(self):
        return (1 - self.nu * self.x) / (1 - self.x)

    @property
    def c0(self):
        """``x nu (1 - nu) / (1 - x)``, the constant of ``M^-1`` with its upper limit set to 1."""
        return self.x * self.nu * (1 - self.nu) / (1 - self.x)

    def require_operator_domain(self):
        check_operator_domain(self.x, self.nu)


# -- H0 series -----------------------------------------------------------------

class H0Series:
    """Truncated ``f(z) = sum_{l=1}^{N} c_l z**l / l!`` (so ``f(0) = 0``).

    ``coeffs[l - 1]`` holds ``c_l``.
    """

    def __init__(self, coeffs):
        c = np.asarray(coeffs, dtype=complex).ravel()
        if c.size < 1:
            raise ValueError("an H0 series needs at least one coefficient")
        self.coeffs = c
        self.order = c.size
        self._taylor = c / np.array([float(factorial(l))
                                     for l in range(1, c.size + 1)])

    def __repr__(self):
        return f"H0Series(order={self.order}, coeffs={self.coeffs!r})"

    def coef(self, ell):
        """``c_ell`` (1-based); zero beyond the truncation order."""
        if ell < 1:
            raise IndexError("H0 coefficients start at l = 1")
        return self.coeffs[ell - 1] if ell <= self.order else 0j

    def tail(self, z):
        """Size of the last retained term, ``|c_N| |z|^N / N!``."""
        return float(abs(self._taylor[-1]) * np.abs(z) ** self.order)

    def eval(self, z, warn=True, tol=1e-10):
        """Horner evaluation; warns when the tail exceeds ``tol`` (relative)."""
        z = np.asarray(z, dtype=complex)
        acc = np.zeros_like(z)
        for a in self._taylor[::-1]:
            acc = (acc + a) * z
        if warn:
            tail = np.abs(self._taylor[-1]) * np.abs(z) ** self.order
            if np.any(tail > tol * np.maximum(1.0, np.abs(acc))):
                warnings.warn(f"H0Series of order {self.order}: truncation tail "
                              f"{float(np.max(tail)):.2e} is not negligible",
                              TruncationWarning, stacklevel=2)
        return acc[()] if acc.ndim == 0 else acc

    def __call__(self, z):
        return self.eval(z, warn=False)

    def derivative(self, z):
        """``f'(z) = sum c_l z**(l-1) / (l-1)!``."""
        z = np.asarray(z, dtype=complex)
        acc = np.zeros_like(z)
        d = self.coeffs / np.array([float(factorial(l - 1))
                                    for l in range(1, self.order + 1)])
        for a in d[:0:-1]:
            acc = (acc + a) * z
        acc = acc + d[0]
        return acc[()] if acc.ndim == 0 else acc

    def padded(self, order):
        """Copy with zero coefficients appended up to ``order`` (never truncates)."""
        c = np.zeros(max(order, self.order), dtype=complex)
        c[:self.order] = self.coeffs
        return H0Series(c)

    def delta(self):
        """``z f'(z)`` as a series: coefficients ``l c_l``."""
        return H0Series(self.coeffs * np.arange(1, self.order + 1))

    def __add__(self, other):
        n = max(self.order, other.order)
        a = np.zeros(n, dtype=complex)
        a[:self.order] += self.coeffs
        a[:other.order] += other.coeffs
        return H0Series(a)

    def __mul__(self, s):
        return H0Series(self.coeffs * s)

    __rmul__ = __mul__

    @classmethod
    def from_signed(cls, k_seq):
        """From signed coefficients ``K_b`` with ``K(z) = sum (-1)^b K_b z^b/b!``."""
        k = np.asarray(k_seq, dtype=complex)
        return cls(k * (-1.0) ** np.arange(1, k.size + 1))

    def to_signed(self):
        return self.coeffs * (-1.0) ** np.arange(1, self.order + 1)

    @classmethod
    def from_taylor(cls, taylor):
        """From ordinary Taylor coefficients ``a_1, a_2, ...`` (``a_0`` omitted)."""
        a = np.asarray(taylor, dtype=complex)
        return cls(a * np.array([float(factorial(l)) for l in range(1, a.size + 1)]))

    def to_json(self):
        from .io import cx_to_json
        return {"order": self.order, "coeffs": [cx_to_json(c) for c in self.coeffs],
                "convention": "exponential"}

    @classmethod
    def from_json(cls, data):
        from .io import cx_from_json
        conv = data.get("convention", "exponential")
        coeffs = [cx_from_json(c) for c in data["coeffs"]]
        if conv == "exponential":
            out = cls(coeffs)
        elif conv == "signed":
            out = cls.from_signed(coeffs)
        else:
            raise ValueError(f"unknown coefficient convention {conv!r}")
        if "order" in data and int(data["order"]) != out.order:
            raise ValueError("order does not match the number of coefficients")
        return out


def eval_h0(f, z, tol=1e-10):
    """Value of an :class:`H0Series` at ``z`` (Horner on ``c_l / l!``).

    Emits :class:`TruncationWarning` when the tail estimate exceeds ``tol``.
    """
    return f.eval(z, tol=tol)


def _fn_and_deriv(f, fprime=None):
    if isinstance(f, H0Series):
        return f, f.derivative
    if fprime is not None:
        return f, fprime

    def num_deriv(w, h=1e-3):
        # fourth-order central difference along the real direction
        return (f(w - 2 * h) - 8 * f(w - h) + 8 * f(w + h) - f(w + 2 * h)) / (12 * h)

    return f, num_deriv


# -- L and M by quadrature -------------------------------------------------------

def r_factor(zeta, p):
    """``(1 - zeta)**(-nu) (1 - (1-x) zeta)**(nu - 1)``, vectorised over ``zeta``."""
    out = _r_factor(zeta, p.x, p.nu)
    return out[()] if np.ndim(out) == 0 else out


def _integrate(f, p, a=0.0, b=1.0):
    q = p.quad
    return complex(adaptive_gk(f, a, b, rtol=q.rtol, atol=q.atol,
                               max_intervals=q.max_intervals))


def apply_l_quad(f, z, p, fprime=None):
    """``L f(z)`` by quadrature over ``zeta in [0, 1]``.

    The integrand is ``[(1 + z r) f(zeta r z) - c z r f'(zeta r z)] e^{-r z}``
    with ``r = r(zeta)``.
    """
    p.require_operator_domain()
    z = as_cx(z)
    f, df = _fn_and_deriv(f, fprime)
    c = p.c

    def integrand(zeta):
        r = _r_factor(zeta, p.x, p.nu)
        w = zeta * r * z
        return ((1 + z * r) * f(w) - c * z * r * df(w)) * np.exp(-r * z)

    return _integrate(integrand, p)


def apply_m_quad(f, z, p):
    """``M f(z) = int_0^1 exp(-(z/x) t^-nu (1-(1-x)t)) f((z/x) t^-nu (1-t)) dt/t``."""
    p.require_operator_domain()
    z = as_cx(z)
    if z == 0:
        return 0j
    x, nu = p.x, p.nu
    zx = z / x

    def integrand(t):
        tp = np.exp(-nu * np.log(t))
        return np.exp(-zx * tp * (1 - (1 - x) * t)) * f(zx * tp * (1 - t)) / t

    return _integrate(integrand, p)


def apply_l_series(f, p):
    """``L f`` as a series, through the reduced triangular system.

    ``K_b = sum_l (-1)^l C(b,l) Q_{b,l} E_l`` with ``E_l = c_l(f)``, returned
    in plain coefficients ``c_b(K) = (-1)^b K_b``.
    """
    p.require_operator_domain()
    n = f.order
    e = f.coeffs
    k = np.zeros(n, dtype=complex)
    for b in range(1, n + 1):
        acc = 0j
        for ell in range(1, b + 1):
            if e[ell - 1] != 0:
                acc += (-1) ** ell * comb(b, ell) * q_coeff(b, ell, p.x, p.nu) * e[ell - 1]
        k[b - 1] = acc
    return H0Series.from_signed(k)


def delta_fd(g, z, step=1e-5):
    """``z g'(z)`` by a central difference with step ``step * max(1, |z|)``."""
    z = as_cx(z)
    h = step * max(1.0, abs(z))
    return z * (g(z + h) - g(z - h)) / (2 * h)


def factorization_residual(f, z, p, fprime=None):
    """``|L f(z) - c0 delta(M f)(z)| / max(1, |L f(z)|)``.

    ``L f`` by :func:`apply_l_quad`; ``delta`` by :func:`delta_fd` on
    :func:`apply_m_quad`.
    """
    lf = apply_l_quad(f, z, p, fprime)
    mf = lambda w: apply_m_quad(f, w, p)
    rhs = p.c0 * delta_fd(mf, z, p.quad.fd_step)
    return abs(lf - rhs) / max(1.0, abs(lf))


def k1_from_k(k, p):
    """``K1(z) = (1-x)/(nu (1-nu) x) int_0^z K(s)/s ds``: coefficient ``b`` divided by ``b``."""
    factor = (1 - p.x) / (p.nu * (1 - p.nu) * p.x)
    return H0Series(factor * k.coeffs / np.arange(1, k.order + 1))


# -- Volterra kernel ---------------------------------------------------------------

@dataclass(frozen=True)
class VolterraGeometry:
    """Maximum of ``tau(t) = t^-nu (1 - t)`` on ``[0, 1]`` for real ``nu < 0``."""

    nu: float
    t_hat: float = field(init=False)
    tau_hat: float = field(init=False)

    def __post_init__(self):
        nu = complex(self.nu)
        if nu.imag != 0 or not nu.real < 0:
            raise DomainError(f"the Volterra form needs real nu < 0, got {self.nu}")
        nu = nu.real
        object.__setattr__(self, "nu", nu)
        t_hat = nu / (nu - 1)
        object.__setattr__(self, "t_hat", t_hat)
        object.__setattr__(self, "tau_hat", t_hat ** (-nu) * (1 - t_hat))


def _log1pmx(u):
    # log(1 + u) - u, accurate for small |u|
    u = np.asarray(u, dtype=float)
    out = np.empty_like(u)
    small = np.abs(u) < 0.1
    us = u[small]
    acc = np.zeros_like(us)
    for k in range(20, 1, -1):
        acc = acc * (-us) + 1.0 / k
    out[small] = -us * us * acc
    big = ~small
    out[big] = np.log1p(u[big]) - u[big]
    return out


def _phi(a, nu):
    # log(tau_hat / tau) at t = t_hat (1 + a)
    return nu * _log1pmx(a) - _log1pmx(nu * a)


def _branch_point(logratio, branch, geo):
    """Solve ``t^-nu (1-t) = tau_hat e^{-logratio}`` on one branch.

    Returns ``(theta, a)`` with ``a = theta/t_hat - 1`` carried separately:
    ``a`` keeps full relative accuracy near the maximum, ``theta`` near 0.
    Near ``t_hat`` the monotone ``phi(a) = logratio`` is bracketed, bisected
    and Newton-polished; the far half of the minus branch is solved by
    Newton's method in ``log theta``; the extreme plus tail (theta within
    1e-12 of 1) is a fixed-point iteration.
    """
    L = np.atleast_1d(np.asarray(logratio, dtype=float))
    nu = geo.nu
    th = np.empty_like(L)
    a = np.empty_like(L)
    if branch == "minus":
        lo = np.full(L.shape, -0.5)
        hi = np.zeros(L.shape)
        far = L >= _phi(np.array(-0.5), nu)
    elif branch == "plus":
        lo = np.zeros(L.shape)
        hi = np.full(L.shape, (-1.0 + 1e-12) / nu)
        far = L >= _phi(hi[:1], nu)[0] if L.size else np.zeros(0, bool)
    else:
        raise ValueError(f"branch must be 'minus' or 'plus', got {branch!r}")
    near = ~far
    if np.any(near):
        lo_i, hi_i, Li = lo[near], hi[near], L[near]
        sgn = -1.0 if branch == "minus" else 1.0  # phi decreasing / increasing
        for _ in range(60):
            mid = 0.5 * (lo_i + hi_i)
            above = sgn * (_phi(mid, nu) - Li) > 0
            hi_i = np.where(above, mid, hi_i)
            lo_i = np.where(above, lo_i, mid)
        ai = 0.5 * (lo_i + hi_i)
        for _ in range(2):
            d = -nu * ai * (1 - nu) / ((1 + ai) * (1 + nu * ai))
            ok = d != 0
            ai = np.where(ok, ai - (_phi(ai, nu) - Li) / np.where(ok, d, 1.0), ai)
        a[near] = ai
        th[near] = geo.t_hat * (1 + ai)
    if np.any(far):
        log_tau = math.log(geo.tau_hat) - L[far]
        if branch == "minus":
            # g(l) = -nu l + log(1 - e^l) - log tau, increasing for theta < t_hat
            ell = log_tau / (-nu)
            for _ in range(50):
                t = np.exp(ell)
                g = -nu * ell + np.log1p(-t) - log_tau
                step = g / (-nu - t / (1 - t))
                ell = ell - step
                if np.all(np.abs(step) <= 4e-16 * np.maximum(1.0, np.abs(ell))):
                    break
            tf = np.exp(ell)
        else:
            tf = np.ones_like(log_tau)
            for _ in range(60):
                tf = 1.0 - np.exp(log_tau + nu * np.log(tf))
        th[far] = tf
        a[far] = tf / geo.t_hat - 1.0
    return th, a


def theta_pm(tau, branch, nu):
    """Inverse branches of ``tau = t^-nu (1 - t)`` on ``[0, t_hat]`` / ``[t_hat, 1]``.

    Parameters
    ----------
    tau : float or array in ``[0, tau_hat]``
    branch : {"minus", "plus"}
    nu : real, negative
    """
    geo = nu if isinstance(nu, VolterraGeometry) else VolterraGeometry(nu)
    tau_arr = np.atleast_1d(np.asarray(tau, dtype=float))
    if np.any(tau_arr < 0) or np.any(tau_arr > geo.tau_hat * (1 + 1e-15)):
        raise DomainError(f"tau must lie in [0, {geo.tau_hat}]")
    if branch not in ("minus", "plus"):
        raise ValueError(f"branch must be 'minus' or 'plus', got {branch!r}")
    out = np.empty_like(tau_arr)
    zero = tau_arr == 0
    out[zero] = 0.0 if branch == "minus" else 1.0
    pos = ~zero
    if np.any(pos):
        L = np.maximum(np.log(geo.tau_hat) - np.log(tau_arr[pos]), 0.0)
        out[pos] = _branch_point(L, branch, geo)[0]
    return out[0] if np.ndim(tau) == 0 else out


def _psi_at(z, th, a, p, geo):
    nu, x = geo.nu, p.x
    tp = th ** (-nu)
    # -nu + (nu-1) theta = (nu-1)(theta - t_hat) = (nu-1) t_hat a
    den = tp * (nu - 1) * geo.t_hat * a
    return np.exp(-(z / x) * tp * (1 - (1 - x) * th)) / den


def _kernel_difference(z, L, p, geo):
    psi_m = _psi_at(z, *_branch_point(L, "minus", geo), p, geo)
    psi_p = _psi_at(z, *_branch_point(L, "plus", geo), p, geo)
    return psi_m - psi_p


def _require_real_volterra(p):
    p.require_operator_domain()
    if p.x.imag != 0 or not 0 < p.x.real < 1:
        raise DomainError("the Volterra form needs real x in (0, 1)")
    return VolterraGeometry(p.nu)


def psi_kernel(z, tau, branch, p):
    """``Psi(z, tau) = exp(-(z/x) th^-nu (1-(1-x) th)) / (th^-nu (-nu + (nu-1) th))``.

    ``th = theta_pm(tau, branch)``; rejects ``tau`` outside ``(0, tau_hat)``.
    """
    geo = _require_real_volterra(p)
    tau_arr = np.atleast_1d(np.asarray(tau, dtype=float))
    if np.any(tau_arr <= 0) or np.any(tau_arr >= geo.tau_hat):
        raise DomainError(f"tau must lie strictly inside (0, {geo.tau_hat})")
    L = np.log(geo.tau_hat) - np.log(tau_arr)
    out = _psi_at(as_cx(z), *_branch_point(L, branch, geo), p, geo)
    return out[0] if np.ndim(tau) == 0 else out


def volterra_lhs(e_star, z, p, tol=1e-10):
    """Left side of the Volterra form, ``(z/x) int_0^tau_hat [Psi- - Psi+] E*((z/x) tau) dtau``.

    The interval is split at ``tau_hat/2``: graded Gauss-Legendre towards 0 on
    the left (the kernel expands in powers of ``tau**(-1/nu)`` there); on the
    right ``tau = tau_hat (1 - u^2)`` turns the inverse-square-root
    singularity into a bounded integrand.
    """
    geo = _require_real_volterra(p)
    z = as_cx(z)
    if z == 0:
        return 0j
    zx = z / p.x
    th = geo.tau_hat

    def left(tau):
        ker = _kernel_difference(z, np.log(th) - np.log(tau), p, geo)
        return ker * e_star(zx * tau)

    def right(u):
        ker = _kernel_difference(z, -np.log1p(-u * u), p, geo)
        return ker * e_star(zx * th * (1 - u * u)) * 2 * th * u

    lhs = graded_gauss_legendre(left, 0.0, 0.5 * th, toward="a", tol=tol,
                                nodes=8, levels=40)
    rhs = gauss_legendre_doubling(right, 0.0, math.sqrt(0.5), tol=tol,
                                  nodes=16, panels=2)
    return zx * (lhs + rhs)


def kernel_singularity_exponent(p, z=0.0, kernel="difference", lo=0.9,
                                hi=0.999, points=40, corrections=2):
    """Exponent ``alpha`` of the blow-up ``|Psi| ~ (tau_hat - tau)**alpha``.

    Least-squares fit of ``log|Psi|`` against ``log(delta)``,
    ``delta = tau_hat - tau`` log-spaced over ``[1-hi, 1-lo] tau_hat``.
    Near ``tau_hat`` the kernel is ``delta**alpha`` times an analytic
    function of ``sqrt(delta)``, so ``corrections`` extra regressors
    ``delta**(j/2)``, ``j = 1..corrections``, absorb the leading analytic
    terms; ``corrections=0`` is the plain two-parameter fit, which is biased
    on a window reaching ``delta = 0.1 tau_hat``.

    ``kernel`` selects ``Psi- - Psi+`` (``"difference"``), ``"minus"`` or
    ``"plus"``.
    """
    geo = _require_real_volterra(p)
    delta = geo.tau_hat * np.logspace(math.log10(1 - lo), math.log10(1 - hi),
                                      points)
    tau = geo.tau_hat - delta
    if kernel == "difference":
        psi = psi_kernel(z, tau, "minus", p) - psi_kernel(z, tau, "plus", p)
    elif kernel in ("minus", "plus"):
        psi = psi_kernel(z, tau, kernel, p)
    else:
        raise ValueError(f"unknown kernel {kernel!r}")
    cols = [np.log(delta), np.ones_like(delta)]
    cols += [delta ** (0.5 * j) for j in range(1, corrections + 1)]
    coef = np.linalg.lstsq(np.stack(cols, axis=1), np.log(np.abs(psi)),
                           rcond=None)[0]
    return float(coef[0])


# -- contour integrals ----------------------------------------------------------------

def _loop_integral(g, spec):
    """Integral of ``g(t, arg)`` over the loop 1 -> rho, around |t| = rho, rho -> 1.

    ``g`` receives nodes ``t`` and the continuous branch of ``arg(-t)``:
    ``-pi`` on the inbound upper edge, ``phi - pi`` on the circle
    ``t = rho e^{i phi}``, ``+pi`` on the outbound lower edge.
    """
    rho, tol = spec.rho, spec.tol

    def inbound(s):
        return -g(s.astype(complex), np.full(s.shape, -math.pi))

    def outbound(s):
        return g(s.astype(complex), np.full(s.shape, math.pi))

    def circle(phi):
        t = rho * np.exp(1j * phi)
        return g(t, phi - math.pi) * 1j * t

    legs = (graded_gauss_legendre(inbound, rho, 1.0, toward="b", tol=tol,
                                  nodes=spec.leg_nodes, levels=spec.leg_levels)
            + graded_gauss_legendre(outbound, rho, 1.0, toward="b", tol=tol,
                                    nodes=spec.leg_nodes, levels=spec.leg_levels))
    ring = gauss_legendre_doubling(circle, 0.0, 2 * math.pi, tol=tol,
                                   nodes=spec.circle_nodes, panels=1)
    return legs + ring


def _mt_power(t, arg, alpha):
    # (-t)**alpha with arg(-t) given
    return np.exp(alpha * (np.log(np.abs(t)) + 1j * arg))


def contour_phi(alpha, beta, Z, spec=None):
    """Kummer's ``Phi(alpha; beta; Z)`` through the loop integral.

    ``-(1/2 pi i) Gamma(1-alpha) Gamma(beta)/Gamma(beta-alpha)
    int e^{Z t} (-t)^(alpha-1) (1-t)^(beta-alpha-1) dt`` over the loop of
    :func:`linv_contour`; needs ``Re(beta - alpha) > 0``.
    """
    spec = ContourSpec() if spec is None else spec
    alpha, beta, Z = as_cx(alpha), as_cx(beta), as_cx(Z)
    if (beta - alpha).real <= 0:
        raise DomainError("the loop representation needs Re(beta - alpha) > 0")

    def g(t, arg):
        return (np.exp(Z * t) * _mt_power(t, arg, alpha - 1)
                * np.exp((beta - alpha - 1) * np.log(1 - t)))

    integral = _loop_integral(g, spec)
    from .special_fn import gamma
    pref = gamma(1 - alpha).value * gamma(beta).value * rgamma(beta - alpha)
    return -pref * integral / (2j * math.pi)


def _validity(p):
    if p.nu.real >= 1:
        raise DomainError("the contour representation needs Re(nu) < 1")
    if p.nu.real >= 0:
        warnings.warn("Re(nu) >= 0: the integrand does not vanish at t = 1 and "
                      "the result has no operator round trip to check against",
                      EndpointDivergenceWarning, stacklevel=3)


def linv_contour(k, z, p):
    """Inverse ``L^{-1} K (z)`` through the loop around ``t = 0``.

    ``(1-x)/(2 pi i x) e^z int e^{-x t z}/(t (t-1)) K(x z (-t)^nu (1-t)^(1-nu)) dt``
    with the loop of :func:`_loop_integral` (starting and ending at 1,
    counter-clockwise about 0).
    """
    _validity(p)
    z = as_cx(z)
    if z == 0:
        return 0j
    x, nu = p.x, p.nu

    def g(t, arg):
        w = x * z * _mt_power(t, arg, nu) * np.exp((1 - nu) * np.log(1 - t))
        return np.exp(-x * t * z) / (t * (t - 1)) * k(w)

    integral = _loop_integral(g, p.contour)
    return (1 - x) / (2j * math.pi * x) * cmath.exp(z) * integral


def linv_contour_alt(k, z, p):
    """Same inverse through the mirrored loop around ``t = 1``.

    ``(x-1)/(2 pi i x) e^{(1-x) z} int e^{x t z}/(t (t-1)) K(x z t^(1-nu) (t-1)^nu) dt``,
    the loop leaving 0 below the real axis, circling 1 counter-clockwise
    and returning above; ``arg(t - 1)`` runs from ``-pi`` to ``+pi``.
    """
    p.require_operator_domain()
    z = as_cx(z)
    if z == 0:
        return 0j
    x, nu, spec = p.x, p.nu, p.contour
    rho = spec.rho

    def g(t, arg):
        # arg = arg(t - 1); |t - 1| from the node itself
        pw = np.exp(nu * (np.log(np.abs(t - 1)) + 1j * arg))
        w = x * z * np.exp((1 - nu) * np.log(t)) * pw
        return np.exp(x * t * z) / (t * (t - 1)) * k(w)

    def outbound(s):  # 0 -> 1 - rho below the axis
        return g(s.astype(complex), np.full(s.shape, -math.pi))

    def inbound(s):  # 1 - rho -> 0 above the axis
        return -g(s.astype(complex), np.full(s.shape, math.pi))

    def circle(phi):
        t = 1 + rho * np.exp(1j * phi)
        return g(t, phi - 2 * math.pi) * 1j * rho * np.exp(1j * phi)

    tol = spec.tol
    legs = (graded_gauss_legendre(outbound, 0.0, 1 - rho, toward="a", tol=tol,
                                  nodes=spec.leg_nodes, levels=spec.leg_levels)
            + graded_gauss_legendre(inbound, 0.0, 1 - rho, toward="a", tol=tol,
                                    nodes=spec.leg_nodes, levels=spec.leg_levels))
    # circle starts at t = 1 - rho, i.e. phi = pi, and runs to 3 pi
    ring = gauss_legendre_doubling(circle, math.pi, 3 * math.pi, tol=tol,
                                   nodes=spec.circle_nodes, panels=1)
    return (x - 1) / (2j * math.pi * x) * cmath.exp((1 - x) * z) * (legs + ring)


def taylor_refit(g, order, radius=1.0, samples=64):
    """Exponential coefficients ``c_1..c_order`` of ``g`` from samples on a circle.

    The discrete Fourier transform of ``g(radius e^{2 pi i j / samples})``
    gives the Taylor coefficients up to aliasing from order ``samples``.
    """
    if order >= samples:
        raise ValueError("need more samples than the requested order")
    pts = radius * np.exp(2j * math.pi * np.arange(samples) / samples)
    vals = np.array([g(complex(w)) for w in pts])
    taylor = np.fft.fft(vals) / samples
    a = taylor[1:order + 1] / radius ** np.arange(1, order + 1)
    return H0Series.from_taylor(a)
