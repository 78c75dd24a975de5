"""Hypergeometric triangular inversion pair and the integro-differential
operator it diagonalises, at finite truncation order.

Submodules
----------
special_fn
    Complex Gamma, digamma, Pochhammer, terminating and confluent
    hypergeometric series, classical identity checks.
exact_poly
    Exact rational polynomials in ``(x, nu)`` and the symbolic matrices.
inversion
    Numeric ``A``, ``B``, the reduced triangular system and its solution.
genfun
    Generating-function maps ``Xi``, ``Omega``, ``Theta``, ``Sigma``.
operators
    ``L``, ``M``, the Volterra kernel and the contour-integral inverse.
verify
    Tolerance-checked verification suites.
"""
from . import exact_poly, genfun, inversion, io, operators, quadrature, special_fn, verify
from .exact_poly import BiPoly, TriMatrixExact, build_a_exact, build_b_exact
from .genfun import GfParams, PowerSeries, RadiusError
from .inversion import MatrixParams, TriMatrixNum, build_a, build_b, solve_e0
from .operators import ContourSpec, H0Series, OperatorParams
from .special_fn import ConvergenceError, DomainError, PochhammerZeroError, PoleError

__version__ = "0.1.0"

__all__ = [
    "BiPoly",
    "ContourSpec",
    "ConvergenceError",
    "DomainError",
    "GfParams",
    "H0Series",
    "MatrixParams",
    "OperatorParams",
    "PochhammerZeroError",
    "PoleError",
    "PowerSeries",
    "RadiusError",
    "TriMatrixExact",
    "TriMatrixNum",
    "build_a",
    "build_a_exact",
    "build_b",
    "build_b_exact",
    "exact_poly",
    "genfun",
    "inversion",
    "io",
    "operators",
    "quadrature",
    "solve_e0",
    "special_fn",
    "verify",
]
