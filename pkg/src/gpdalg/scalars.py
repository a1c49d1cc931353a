"""Exact complex scalars: elements of cyclotomic fields Q(zeta_N).

Gaussian rationals are the N = 4 case and are the default coefficient
field.  Twisting by an order-n cocycle promotes scalars to Q(zeta_L) with
L = lcm(4, n), so all roots of unity that occur are represented exactly.

A scalar is stored as a coefficient vector over the power basis
1, zeta, ..., zeta^(d-1) with d = deg Phi_N; vectors are always reduced
modulo the cyclotomic polynomial Phi_N, so representations are canonical
and equality is coefficient-wise.
"""

from __future__ import annotations

import cmath
from fractions import Fraction
from functools import lru_cache
from math import gcd

_F0 = Fraction(0)
_F1 = Fraction(1)


def _poly_divexact(num, den):
    """Exact division of integer polynomials (low-to-high coefficients)."""
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for k in range(len(out) - 1, -1, -1):
        c = num[k + len(den) - 1]
        assert c % den[-1] == 0
        q = c // den[-1]
        out[k] = q
        for i, d in enumerate(den):
            num[k + i] -= q * d
    assert all(c == 0 for c in num)
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n):
    """Integer coefficients of Phi_n, low to high."""
    if n == 1:
        return (-1, 1)
    poly = [0] * n + [1]
    poly[0] = -1  # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            poly = _poly_divexact(poly, cyclotomic_polynomial(d))
    return tuple(poly)


@lru_cache(maxsize=None)
def _power_table(n):
    """zeta_n^k as a basis vector, for every k in range(n)."""
    phi = cyclotomic_polynomial(n)
    d = len(phi) - 1
    table = []
    for k in range(d):
        vec = [_F0] * d
        vec[k] = _F1
        table.append(tuple(vec))
    for k in range(d, n):
        prev = table[k - 1]
        # multiply by zeta: shift, then reduce the overflow via
        # zeta^d = -phi[0] - phi[1] zeta - ... - phi[d-1] zeta^(d-1)
        shifted = [_F0] + list(prev[:-1])
        top = prev[-1]
        if top:
            for i in range(d):
                shifted[i] -= top * phi[i]
        table.append(tuple(shifted))
    return tuple(table)


@lru_cache(maxsize=None)
def _complex_roots(n):
    return tuple(cmath.exp(2j * cmath.pi * k / n) for k in range(n))


class Cyc:
    """An element of Q(zeta_n), n fixed per instance and divisible by 4."""

    __slots__ = ("n", "c")
    __hash__ = None

    def __init__(self, n, coeffs):
        self.n = n
        self.c = tuple(coeffs)

    # ------------------------------------------------------------ builders

    @staticmethod
    def zero(n=4):
        d = len(cyclotomic_polynomial(n)) - 1
        return Cyc(n, (_F0,) * d)

    @staticmethod
    def one(n=4):
        return Cyc.rational(1, n)

    @staticmethod
    def rational(q, n=4):
        d = len(cyclotomic_polynomial(n)) - 1
        vec = [_F0] * d
        vec[0] = Fraction(q)
        return Cyc(n, vec)

    @staticmethod
    def gaussian(re, im, n=4):
        """re + im*i with rational re, im; requires 4 | n."""
        assert n % 4 == 0
        d = len(cyclotomic_polynomial(n)) - 1
        vec = [_F0] * d
        vec[0] = Fraction(re)
        im = Fraction(im)
        if im:
            k = n // 4  # i = zeta_n^(n/4), always below the basis degree
            for j, t in enumerate(_power_table(n)[k]):
                vec[j] += im * t
        return Cyc(n, vec)

    @staticmethod
    def root_of_unity(order, exponent):
        """zeta_order^exponent inside Q(zeta_lcm(4, order))."""
        n = 4 * order // gcd(4, order)
        k = (exponent * (n // order)) % n
        return Cyc(n, _power_table(n)[k])

    # ----------------------------------------------------------- promotion

    def promote(self, n):
        if n == self.n:
            return self
        assert n % self.n == 0
        step = n // self.n
        d = len(cyclotomic_polynomial(n)) - 1
        vec = [_F0] * d
        table = _power_table(n)
        for k, a in enumerate(self.c):
            if a:
                for j, t in enumerate(table[(k * step) % n]):
                    vec[j] += a * t
        return Cyc(n, vec)

    def _pair(self, other):
        if not isinstance(other, Cyc):
            other = Cyc.rational(other, self.n)
        if self.n == other.n:
            return self, other
        n = self.n * other.n // gcd(self.n, other.n)
        return self.promote(n), other.promote(n)

    # ---------------------------------------------------------- arithmetic

    def __add__(self, other):
        a, b = self._pair(other)
        return Cyc(a.n, tuple(x + y for x, y in zip(a.c, b.c)))

    __radd__ = __add__

    def __neg__(self):
        return Cyc(self.n, tuple(-x for x in self.c))

    def __sub__(self, other):
        a, b = self._pair(other)
        return Cyc(a.n, tuple(x - y for x, y in zip(a.c, b.c)))

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return Cyc.zero(self.n)
            q = Fraction(other)
            return Cyc(self.n, tuple(x * q for x in self.c))
        a, b = self._pair(other)
        n, d = a.n, len(a.c)
        if n == 4:
            a0, a1 = a.c
            b0, b1 = b.c
            return Cyc(4, (a0 * b0 - a1 * b1, a0 * b1 + a1 * b0))
        acc = [_F0] * n
        for i, x in enumerate(a.c):
            if x:
                for j, y in enumerate(b.c):
                    if y:
                        acc[(i + j) % n] += x * y
        vec = list(acc[:d])
        table = _power_table(n)
        for k in range(d, n):
            if acc[k]:
                for j, t in enumerate(table[k]):
                    vec[j] += acc[k] * t
        return Cyc(n, vec)

    __rmul__ = __mul__

    def inverse(self):
        if not self:
            raise ZeroDivisionError("inverse of zero cyclotomic")
        d = len(self.c)
        # columns of the multiplication-by-self matrix, solved against e0
        basis = [Cyc(self.n, _power_table(self.n)[k]) for k in range(d)]
        cols = [self * e for e in basis]
        rows = [[cols[j].c[i] for j in range(d)] + [_F1 if i == 0 else _F0]
                for i in range(d)]
        sol = _solve_fraction(rows, d)
        return Cyc(self.n, sol)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (_F1 / Fraction(other))
        a, b = self._pair(other)
        return a * b.inverse()

    def __rtruediv__(self, other):
        return Cyc.rational(other, self.n) / self

    # --------------------------------------------------------- involutions

    def conjugate(self):
        n, d = self.n, len(self.c)
        vec = [_F0] * d
        table = _power_table(n)
        for k, a in enumerate(self.c):
            if a:
                for j, t in enumerate(table[(n - k) % n]):
                    vec[j] += a * t
        return Cyc(n, vec)

    def abs2(self):
        return self * self.conjugate()

    # -------------------------------------------------------------- status

    def __bool__(self):
        return any(self.c)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Cyc.rational(other, self.n)
        if not isinstance(other, Cyc):
            return NotImplemented
        a, b = self._pair(other)
        return a.c == b.c

    def is_rational(self):
        return not any(self.c[1:])

    def as_rational(self):
        if not self.is_rational():
            raise ValueError(f"{self!r} is not rational")
        return self.c[0]

    def gaussian_parts(self):
        """(re, im) as Fractions; raises if not a Gaussian rational."""
        k = self.n // 4
        for j, a in enumerate(self.c):
            if a and j not in (0, k):
                raise ValueError("not a Gaussian rational")
        return self.c[0], (self.c[k] if k < len(self.c) else _F0)

    def is_real(self):
        return self == self.conjugate()

    def is_positive_real(self):
        if not self:
            return False
        if not self.is_real():
            return False
        if self.is_rational():
            return self.c[0] > 0
        value = self.to_complex().real
        if abs(value) < 1e-9:
            raise ValueError(f"cannot certify sign of {self!r}")
        return value > 0

    def to_complex(self):
        if self.n == 4:
            return complex(self.c[0], self.c[1])
        roots = _complex_roots(self.n)
        return sum(float(a) * roots[k] for k, a in enumerate(self.c) if a) + 0j

    def __repr__(self):
        try:
            re, im = self.gaussian_parts()
        except ValueError:
            return f"Cyc(n={self.n}, {self.c})"
        if not im:
            return f"Cyc({re})"
        return f"Cyc({re}{'+' if im > 0 else ''}{im}i)"


def _solve_fraction(rows, ncols):
    """Gaussian elimination on an augmented Fraction matrix; unique solution."""
    m = len(rows)
    rows = [list(r) for r in rows]
    piv = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, m) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = _F1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(m):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        piv.append(c)
        r += 1
        if r == m:
            break
    sol = [_F0] * ncols
    for i, c in enumerate(piv):
        sol[c] = rows[i][-1]
    return sol


# --------------------------------------------------------------- coercions

def as_scalar(value, n=4):
    """Coerce ints, Fractions, 2-tuples (re, im) and Cyc to a Cyc."""
    if isinstance(value, Cyc):
        if value.n == n:
            return value
        return value.promote(value.n * n // gcd(value.n, n))
    if isinstance(value, tuple):
        return Cyc.gaussian(value[0], value[1], n)
    return Cyc.rational(value, n)


def conj_scalar(value):
    """Conjugate for either exact (Cyc) or float (complex) coefficients."""
    if isinstance(value, Cyc):
        return value.conjugate()
    return value.conjugate() if isinstance(value, complex) else complex(value).conjugate()


def scalar_is_zero(value):
    if isinstance(value, Cyc):
        return not value
    return value == 0


def to_complex(value):
    if isinstance(value, Cyc):
        return value.to_complex()
    return complex(value)


def phase_exponent(value, order):
    """Exponent e with value = rho * zeta_order^e, rho > 0; None if no such e.

    Works entirely inside the field: tests positivity of value * zeta^(-e)
    instead of extracting the (possibly irrational) modulus.
    """
    if scalar_is_zero(value):
        return None
    if not isinstance(value, Cyc):
        return None
    for e in range(order):
        candidate = value * Cyc.root_of_unity(order, -e)
        if candidate.is_real() and candidate.is_positive_real():
            return e
    return None
