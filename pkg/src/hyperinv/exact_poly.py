"""Exact bivariate polynomials in (x, nu) and the symbolic inversion pair.

Coefficients are :class:`fractions.Fraction`, so every identity checked here
holds with zero tolerance: two polynomials are equal exactly when their
canonical term maps are equal.
"""
from __future__ import annotations

import json
from fractions import Fraction
from math import comb

from .special_fn import PochhammerZeroError

__all__ = [
    "BiPoly",
    "TriMatrixExact",
    "build_a_exact",
    "build_b_exact",
    "criterion_coefficient",
    "eval_bipoly",
    "identity_exact",
    "mul_tri",
]


def _as_fraction(c):
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"exact coefficient expected, got {type(c).__name__}")


class BiPoly:
    """Sparse polynomial ``sum c[i, j] x**i nu**j`` with rational ``c``.

    Zero coefficients are never stored, so the term map is canonical and
    ``==`` is structural equality.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for key, c in terms.items():
                dx, dn = key
                if dx < 0 or dn < 0:
                    raise ValueError(f"negative degree in term {key}")
                c = _as_fraction(c)
                if c:
                    clean[(int(dx), int(dn))] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms):
        # trusted constructor: terms already canonical
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def const(cls, c):
        return cls({(0, 0): c})

    @classmethod
    def x(cls):
        return cls({(1, 0): 1})

    @classmethod
    def nu(cls):
        return cls({(0, 1): 1})

    @property
    def terms(self):
        """Copy of the term map ``{(deg_x, deg_nu): Fraction}``."""
        return dict(self._terms)

    def is_zero(self):
        return not self._terms

    def is_constant(self):
        return all(k == (0, 0) for k in self._terms)

    def constant_term(self):
        return self._terms.get((0, 0), Fraction(0))

    def degree(self):
        """``(max deg_x, max deg_nu)``; ``(-1, -1)`` for the zero polynomial."""
        if not self._terms:
            return (-1, -1)
        return (max(k[0] for k in self._terms), max(k[1] for k in self._terms))

    def _coerce(self, other):
        if isinstance(other, BiPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return BiPoly.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for k, c in other._terms.items():
            s = out.get(k, 0) + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return BiPoly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return BiPoly._raw({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return BiPoly()
            return BiPoly._raw({k: c * other for k, c in self._terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = {}
        for (a1, b1), c1 in self._terms.items():
            for (a2, b2), c2 in other._terms.items():
                k = (a1 + a2, b1 + b2)
                out[k] = out.get(k, 0) + c1 * c2
        return BiPoly._raw({k: c for k, c in out.items() if c})

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = BiPoly.const(other)
        if not isinstance(other, BiPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __repr__(self):
        if not self._terms:
            return "BiPoly(0)"
        parts = []
        for (dx, dn), c in sorted(self._terms.items()):
            mono = "*".join(
                s for s in (
                    f"x^{dx}" if dx > 1 else ("x" if dx == 1 else ""),
                    f"nu^{dn}" if dn > 1 else ("nu" if dn == 1 else ""),
                ) if s
            )
            parts.append(f"({c})" + (f"*{mono}" if mono else ""))
        return "BiPoly(" + " + ".join(parts) + ")"

    def to_json(self):
        """Sorted list of ``[deg_x, deg_nu, "p/q"]`` triples."""
        return [[dx, dn, f"{c.numerator}/{c.denominator}"]
                for (dx, dn), c in sorted(self._terms.items())]

    @classmethod
    def from_json(cls, triples):
        return cls({(int(dx), int(dn)): Fraction(c) for dx, dn, c in triples})


def eval_bipoly(p, x, nu):
    """Evaluate ``p`` at ``(x, nu)`` by nested Horner schemes.

    Integer or ``Fraction`` arguments are evaluated exactly and converted to
    ``complex`` only at the end; anything else is evaluated in complex
    floating point.
    """
    exact = all(isinstance(v, (int, Fraction)) for v in (x, nu))
    if not exact:
        x, nu = complex(x), complex(nu)
    if p.is_zero():
        return 0j
    dx_max, dn_max = p.degree()
    rows = [[0] * (dn_max + 1) for _ in range(dx_max + 1)]
    for (dx, dn), c in p._terms.items():
        rows[dx][dn] = c if exact else float(c)
    acc = 0
    for row in reversed(rows):
        inner = 0
        for c in reversed(row):
            inner = inner * nu + c
        acc = acc * x + inner
    return complex(acc)


def _poch_poly(a, b, m):
    # (a + b*nu)_m as a polynomial in nu
    out = BiPoly.const(1)
    for j in range(m):
        out = out * BiPoly({(0, 0): a + j, (0, 1): b})
    return out


class TriMatrixExact:
    """Lower-triangular ``n x n`` matrix of :class:`BiPoly` entries.

    Entries are addressed 1-based as ``m[row, col]`` with ``col <= row``;
    positions above the diagonal read as zero.
    """

    def __init__(self, n, rows):
        if n < 1:
            raise ValueError("order n must be >= 1")
        if len(rows) != n or any(len(r) != i + 1 for i, r in enumerate(rows)):
            raise ValueError("rows must have lengths 1, 2, ..., n")
        self.n = n
        self._rows = [list(r) for r in rows]

    def __getitem__(self, idx):
        r, k = idx
        if not (1 <= r <= self.n and 1 <= k <= self.n):
            raise IndexError(f"index {idx} out of range for order {self.n}")
        if k > r:
            return BiPoly()
        return self._rows[r - 1][k - 1]

    def __eq__(self, other):
        if not isinstance(other, TriMatrixExact):
            return NotImplemented
        return self.n == other.n and self._rows == other._rows

    def is_identity(self):
        one = BiPoly.const(1)
        return all(
            self._rows[r][k] == (one if r == k else BiPoly())
            for r in range(self.n) for k in range(r + 1)
        )

    def to_json(self):
        return {
            "n": self.n,
            "entries": [
                {"row": r + 1, "col": k + 1, "terms": self._rows[r][k].to_json()}
                for r in range(self.n) for k in range(r + 1)
            ],
        }

    def dumps(self, **kw):
        return json.dumps(self.to_json(), **kw)

    @classmethod
    def from_json(cls, data):
        n = int(data["n"])
        rows = [[BiPoly() for _ in range(r + 1)] for r in range(n)]
        for e in data["entries"]:
            rows[e["row"] - 1][e["col"] - 1] = BiPoly.from_json(e["terms"])
        return cls(n, rows)

    @classmethod
    def identity(cls, n):
        rows = [[BiPoly.const(1) if k == r else BiPoly() for k in range(r + 1)]
                for r in range(n)]
        return cls(n, rows)


def _entry(r, k, numer_a, numer_b, den_c):
    # (-1)^k C(r,k) sum_m (k-r)_m (numer_a + numer_b nu)_m / ((den_c)_m m!) x^m
    terms = {}
    poch_nu = BiPoly.const(1)
    scal = Fraction(1)
    sign = (-1) ** k * comb(r, k)
    for m in range(r - k + 1):
        if m:
            poch_nu = poch_nu * BiPoly({(0, 0): numer_a + m - 1, (0, 1): numer_b})
            scal *= Fraction(k - r + m - 1, (den_c + m - 1) * m)
        for (_, dn), c in poch_nu._terms.items():
            v = sign * scal * c
            if v:
                terms[(m, dn)] = v
    return BiPoly._raw(terms)


def build_a_exact(n):
    """Exact ``A`` of order ``n``: entries ``(-1)^k C(r,k) F(k-r, -r nu; -r; x)``."""
    if n < 1:
        raise ValueError("order n must be >= 1")
    rows = [[_entry(r, k, 0, -r, -r) for k in range(1, r + 1)]
            for r in range(1, n + 1)]
    return TriMatrixExact(n, rows)


def build_b_exact(n):
    """Exact ``B`` of order ``n``: entries ``(-1)^k C(r,k) F(k-r, k nu; k; x)``."""
    if n < 1:
        raise ValueError("order n must be >= 1")
    rows = [[_entry(r, k, 0, k, k) for k in range(1, r + 1)]
            for r in range(1, n + 1)]
    return TriMatrixExact(n, rows)


def mul_tri(p, q):
    """Exact product of two lower-triangular matrices of the same order."""
    if p.n != q.n:
        raise ValueError(f"order mismatch: {p.n} vs {q.n}")
    n = p.n
    rows = []
    for r in range(n):
        row = []
        for k in range(r + 1):
            acc = BiPoly()
            for j in range(k, r + 1):
                acc = acc + p._rows[r][j] * q._rows[j][k]
            row.append(acc)
        rows.append(row)
    return TriMatrixExact(n, rows)


def identity_exact(n):
    """Check ``A B = Id = B A`` exactly at order ``n``."""
    a, b = build_a_exact(n), build_b_exact(n)
    return mul_tri(a, b).is_identity() and mul_tri(b, a).is_identity()


def criterion_coefficient(n, k, ell):
    """Convolution coefficient ``U_ell`` of the inversion criterion.

    ``sum_m (-1)^m a_m b_{ell-m} / (m! (ell-m)!)`` with
    ``a_m = (-n nu)_m / (-n)_m`` and ``b_m = (k nu)_m / (k)_m``. The
    denominators are non-zero integers, so the result is a polynomial in
    ``nu`` with rational coefficients (no ``x`` dependence).

    Raises
    ------
    PochhammerZeroError
        If ``ell > n``, where ``(-n)_m`` vanishes for some ``m <= ell``.
    """
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    if ell < 0:
        raise ValueError("ell must be non-negative")
    if ell > n:
        raise PochhammerZeroError(f"(-n)_m vanishes for m = {n + 1} <= ell")
    total = BiPoly()
    for m in range(ell + 1):
        j = ell - m
        den = Fraction((-1) ** m, 1)
        den /= _int_poch(-n, m) * _int_poch(1, m)
        den /= _int_poch(k, j) * _int_poch(1, j)
        total = total + _poch_poly(0, -n, m) * _poch_poly(0, k, j) * den
    return total


def _int_poch(c, m):
    out = 1
    for j in range(m):
        out *= c + j
    return out
