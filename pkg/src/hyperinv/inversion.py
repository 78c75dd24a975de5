"""Numeric inversion pair A(x, nu), B(x, nu) and the reduced triangular system.

Sequences are numpy arrays whose position ``i`` holds the entry with
mathematical index ``i + 1``; :func:`entry` reads them 1-based.

The entries of ``A`` and ``B`` grow like binomials times powers of ``|x nu|``,
and the products ``A B`` cancel down to the identity. In double precision the
cancellation error scales with ``max|A| max|B|``, so every builder accepts a
``dps`` argument that switches to mpmath at that many decimal digits;
:func:`required_dps` picks a sufficient value.
"""
from __future__ import annotations

import cmath
import contextlib
import math
from dataclasses import dataclass
from math import comb

import mpmath
import numpy as np
from scipy.linalg import solve_triangular

from .quadrature import adaptive_gk
from .special_fn import DomainError, as_cx, hyp_poly, hyp_poly_coeffs, loggamma

__all__ = [
    "MatrixParams",
    "TriMatrixNum",
    "ZeroDiagonalError",
    "apply_tri",
    "build_a",
    "build_b",
    "check_operator_domain",
    "entry",
    "inversion_defect",
    "m_integral",
    "q_coeff",
    "q_via_m",
    "reduced_rhs",
    "required_dps",
    "solve_e0",
    "solve_tri",
    "t0_matrix",
]


class ZeroDiagonalError(DomainError):
    """A triangular solve met a zero pivot."""


def check_operator_domain(x, nu):
    """Reject ``x`` on ``(-inf, 0] U {1}`` and ``Re(nu) >= 0``."""
    x, nu = as_cx(x, "x"), as_cx(nu, "nu")
    if x.imag == 0.0 and (x.real <= 0.0 or x.real == 1.0):
        raise DomainError(f"x = {x} lies on the excluded set (-inf, 0] U {{1}}")
    if nu.real >= 0.0:
        raise DomainError(f"Re(nu) must be negative, got nu = {nu}")
    return x, nu


@dataclass(frozen=True)
class MatrixParams:
    """Parameters of the numeric matrices.

    Plain ``A``/``B`` accept any complex ``(x, nu)``; :meth:`operator_domain`
    enforces the stricter domain needed for ``Q``, the reduced right-hand
    side and the closed-form solution.
    """

    x: complex
    nu: complex
    n: int

    def __post_init__(self):
        object.__setattr__(self, "x", as_cx(self.x, "x"))
        object.__setattr__(self, "nu", as_cx(self.nu, "nu"))
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"order n must be a positive integer, got {self.n}")
        object.__setattr__(self, "n", int(self.n))

    def operator_domain(self):
        check_operator_domain(self.x, self.nu)
        return self


class TriMatrixNum:
    """Lower-triangular numeric matrix, addressed 1-based as ``m[row, col]``.

    ``values`` is an ``(n, n)`` array: complex for double precision, object
    (``mpmath.mpc``) when built at extended precision, in which case ``dps``
    records the working precision used by :func:`apply_tri` and
    :func:`solve_tri`.
    """

    def __init__(self, values, dps=None):
        values = np.asarray(values)
        if values.ndim != 2 or values.shape[0] != values.shape[1]:
            raise ValueError("square matrix expected")
        self.values = values
        self.n = values.shape[0]
        self.dps = dps

    def __getitem__(self, idx):
        r, k = idx
        if not (1 <= r <= self.n and 1 <= k <= self.n):
            raise IndexError(f"index {idx} out of range for order {self.n}")
        return self.values[r - 1, k - 1]

    @property
    def is_exact_precision(self):
        return self.values.dtype == object

    def to_complex(self):
        if self.values.dtype == object:
            return np.array([[complex(v) for v in row] for row in self.values])
        return self.values


def entry(seq, i):
    """1-based read of a sequence stored 0-offset."""
    if i < 1:
        raise IndexError("sequence indices start at 1")
    return seq[i - 1]


def _builder(x, nu, n, numer, denom, dps):
    if dps is None:
        out = np.zeros((n, n), dtype=complex)
        for r in range(1, n + 1):
            for k in range(1, r + 1):
                out[r - 1, k - 1] = (-1) ** k * comb(r, k) * hyp_poly(
                    r - k, numer(r, k, nu), denom(r, k), x)
            out[r - 1, r - 1] = (-1) ** r
        return TriMatrixNum(out)
    with mpmath.workdps(dps):
        xm, num = mpmath.mpc(x), mpmath.mpc(nu)
        out = np.empty((n, n), dtype=object)
        out[:] = mpmath.mpc(0)
        for r in range(1, n + 1):
            for k in range(1, r + 1):
                coeffs = hyp_poly_coeffs(r - k, numer(r, k, num),
                                         mpmath.mpf(denom(r, k)))
                acc = coeffs[-1]
                for c in reversed(coeffs[:-1]):
                    acc = acc * xm + c
                out[r - 1, k - 1] = (-1) ** k * comb(r, k) * acc
            out[r - 1, r - 1] = mpmath.mpc((-1) ** r)
        return TriMatrixNum(out, dps)


def _unpack(p):
    if not isinstance(p, MatrixParams):
        p = MatrixParams(*p)
    return p


def build_a(p, dps=None):
    """``A_{r,k} = (-1)^k C(r,k) F(k-r, -r nu; -r; x)``.

    Parameters
    ----------
    p : MatrixParams or (x, nu, n)
    dps : int, optional
        Decimal digits for an mpmath build; ``None`` builds in complex128.
    """
    p = _unpack(p)
    return _builder(p.x, p.nu, p.n, lambda r, k, nu: -r * nu,
                    lambda r, k: -r, dps)


def build_b(p, dps=None):
    """``B_{r,k} = (-1)^k C(r,k) F(k-r, k nu; k; x)``; see :func:`build_a`."""
    p = _unpack(p)
    return _builder(p.x, p.nu, p.n, lambda r, k, nu: k * nu,
                    lambda r, k: k, dps)


def required_dps(p, target=1e-10, guard=6):
    """Decimal digits that make ``A B`` accurate to ``target``.

    The rounding error of the product is bounded by
    ``n max|A| max|B| 10**-dps``; a double-precision build estimates the
    magnitudes.
    """
    p = _unpack(p)
    a = np.abs(build_a(p).values).max()
    b = np.abs(build_b(p).values).max()
    scale = math.log10(max(1.0, p.n * a * b))
    return max(17, int(math.ceil(scale - math.log10(target))) + guard)


def inversion_defect(p, dps="auto", order="ab"):
    """``max |A B - Id|`` (``order="ab"``), ``max |B A - Id|`` (``"ba"``) or
    the larger of the two (``"both"``, one build shared by both products).

    ``dps="auto"`` evaluates at :func:`required_dps`; ``None`` forces
    complex128.
    """
    p = _unpack(p)
    if order not in ("ab", "ba", "both"):
        raise ValueError(f"order must be 'ab', 'ba' or 'both', not {order!r}")
    if dps == "auto":
        dps = required_dps(p)
    a, b = build_a(p, dps), build_b(p, dps)
    pairs = {"ab": [(a, b)], "ba": [(b, a)], "both": [(a, b), (b, a)]}[order]
    if dps is None:
        eye = np.eye(p.n)
        return max(float(np.abs(np.tril(l.values) @ np.tril(r.values) - eye).max())
                   for l, r in pairs)
    with mpmath.workdps(dps):
        worst = mpmath.mpf(0)
        for left, right in pairs:
            lv, rv = left.values, right.values
            for r in range(p.n):
                for k in range(r + 1):
                    acc = mpmath.fsum(lv[r, j] * rv[j, k] for j in range(k, r + 1))
                    if r == k:
                        acc -= 1
                    worst = max(worst, abs(acc))
        return float(worst)


def _values(m):
    return m.values if isinstance(m, TriMatrixNum) else np.asarray(m)


def _precision(m):
    dps = getattr(m, "dps", None)
    return mpmath.workdps(dps) if dps else contextlib.nullcontext()


def apply_tri(m, s):
    """``T_r = sum_{k <= r} M_{r,k} S_k``."""
    mv = _values(m)
    s = np.asarray(s)
    if mv.shape[0] != s.shape[0]:
        raise ValueError(f"dimension mismatch: order {mv.shape[0]}, "
                         f"sequence length {s.shape[0]}")
    if mv.dtype == object or s.dtype == object:
        n = mv.shape[0]
        with _precision(m):
            return np.array([mpmath.fsum(mv[r, k] * s[k] for k in range(r + 1))
                             for r in range(n)], dtype=object)
    return np.tril(mv) @ s


def solve_tri(m, rhs):
    """Forward substitution for ``M sol = rhs``.

    Raises
    ------
    ZeroDiagonalError
        If a diagonal entry is zero.
    """
    mv = _values(m)
    rhs = np.asarray(rhs)
    n = mv.shape[0]
    if rhs.shape[0] != n:
        raise ValueError(f"dimension mismatch: order {n}, rhs length {rhs.shape[0]}")
    diag = [mv[i, i] for i in range(n)]
    if any(d == 0 for d in diag):
        raise ZeroDiagonalError("triangular matrix has a zero diagonal entry")
    if mv.dtype == object or rhs.dtype == object:
        sol = np.empty(n, dtype=object)
        with _precision(m):
            for r in range(n):
                acc = rhs[r] - mpmath.fsum(mv[r, k] * sol[k] for k in range(r))
                sol[r] = acc / mv[r, r]
        return sol
    return solve_triangular(np.tril(mv).astype(complex), rhs.astype(complex),
                            lower=True)


# -- reduced system -----------------------------------------------------------

def _gamma_ratio(b, nu):
    # Gamma(b) Gamma(1 - b nu) / Gamma(b - b nu), all arguments in Re > 0
    return cmath.exp(loggamma(b) + loggamma(1 - b * nu) - loggamma(b - b * nu))


def q_coeff(b, ell, x, nu):
    """``Q_{b,ell} = -G_b x^{1-b}/(1-x) F(ell-b, -b nu; -b; x)``.

    ``G_b = Gamma(b) Gamma(1 - b nu)/Gamma(b - b nu)``, evaluated in log
    space.
    """
    x, nu = check_operator_domain(x, nu)
    if not 1 <= ell <= b:
        raise DomainError(f"need 1 <= ell <= b, got b={b}, ell={ell}")
    pref = -_gamma_ratio(b, nu) * cmath.exp((1 - b) * cmath.log(x)) / (1 - x)
    return pref * hyp_poly(b - ell, -b * nu, -b, x)


def t0_matrix(x, nu, n):
    """Matrix of the system ``sum_l (-1)^l C(b,l) Q_{b,l} E_l = K_b``."""
    check_operator_domain(x, nu)
    out = np.zeros((n, n), dtype=complex)
    for b in range(1, n + 1):
        for ell in range(1, b + 1):
            out[b - 1, ell - 1] = (-1) ** ell * comb(b, ell) * q_coeff(b, ell, x, nu)
    return TriMatrixNum(out)


def r_factor(zeta, x, nu):
    """``(1 - zeta)^(-nu) (1 - (1-x) zeta)^(nu-1)`` with principal powers.

    Vectorised over ``zeta``.
    """
    zeta = np.asarray(zeta, dtype=float)
    one_m = 1.0 - zeta
    with np.errstate(divide="ignore", invalid="ignore"):
        first = np.where(one_m > 0.0,
                         np.exp(-nu * np.log(np.where(one_m > 0.0, one_m, 1.0))),
                         0.0)
    second = np.exp((nu - 1) * np.log(1.0 - (1.0 - x) * zeta + 0j))
    return first * second


def m_integral(b, ell, x, nu, method="quad", rtol=1e-13):
    """``M_{b,ell} = int_0^1 zeta^ell r(zeta)^b d zeta``.

    ``method="quad"`` integrates numerically (adaptive Gauss-Kronrod);
    ``method="closed"`` uses the Beta-times-Gauss closed form evaluated by
    mpmath, valid wherever mpmath continues ``F`` analytically.
    """
    x, nu = check_operator_domain(x, nu)
    if ell < 0 or b < 1:
        raise DomainError(f"need b >= 1, ell >= 0, got b={b}, ell={ell}")
    if method == "quad":
        f = lambda z: z ** ell * r_factor(z, x, nu) ** b
        return complex(adaptive_gk(f, 0.0, 1.0, rtol=rtol, atol=1e-15))
    if method == "closed":
        with mpmath.workdps(30):
            beta = mpmath.beta(ell + 1, 1 - b * nu)
            f = mpmath.hyp2f1(b * (1 - nu), ell + 1, ell + 2 - b * nu, 1 - x)
            return complex(beta * f)
    raise ValueError(f"unknown method {method!r}")


def q_via_m(b, ell, x, nu, method="quad"):
    """``(ell + 1 - b) M_{b,ell} - ell c M_{b,ell-1}`` with ``c = (1-nu x)/(1-x)``."""
    x, nu = check_operator_domain(x, nu)
    if not 1 <= ell <= b:
        raise DomainError(f"need 1 <= ell <= b, got b={b}, ell={ell}")
    c = (1 - nu * x) / (1 - x)
    return ((ell + 1 - b) * m_integral(b, ell, x, nu, method)
            - ell * c * m_integral(b, ell - 1, x, nu, method))


def reduced_rhs(k, x, nu):
    """``K~_b = -(1-x) x^{b-1} K_b / G_b`` with ``G_b`` as in :func:`q_coeff`."""
    x, nu = check_operator_domain(x, nu)
    k = np.asarray(k, dtype=complex)
    out = np.empty_like(k)
    logx = cmath.log(x)
    for i, kb in enumerate(k):
        b = i + 1
        out[i] = -(1 - x) * cmath.exp((b - 1) * logx) / _gamma_ratio(b, nu) * kb
    return out


def solve_e0(k, x, nu):
    """Closed-form solution ``E`` of the reduced system.

    ``E_b = (1-x) sum_l (-1)^(l-1) C(b,l) F(l-b, l nu; l; x) x^(l-1) K_l / G_l``.
    """
    x, nu = check_operator_domain(x, nu)
    k = np.asarray(k, dtype=complex)
    n = k.shape[0]
    logx = cmath.log(x)
    weights = np.array([cmath.exp((ell - 1) * logx) / _gamma_ratio(ell, nu)
                        for ell in range(1, n + 1)])
    wk = weights * k
    out = np.zeros(n, dtype=complex)
    for b in range(1, n + 1):
        acc = 0j
        for ell in range(1, b + 1):
            acc += ((-1) ** (ell - 1) * comb(b, ell)
                    * hyp_poly(b - ell, ell * nu, ell, x) * wk[ell - 1])
        out[b - 1] = (1 - x) * acc
    return out
