"""Exact cyclotomic arithmetic."""

import cmath
import random
from fractions import Fraction

import pytest

from gpdalg.scalars import (Cyc, as_scalar, cyclotomic_polynomial,
                            phase_exponent, to_complex)


def test_cyclotomic_polynomials():
    assert cyclotomic_polynomial(1) == (-1, 1)
    assert cyclotomic_polynomial(2) == (1, 1)
    assert cyclotomic_polynomial(3) == (1, 1, 1)
    assert cyclotomic_polynomial(4) == (1, 0, 1)
    assert cyclotomic_polynomial(12) == (1, 0, -1, 0, 1)


def test_gaussian_arithmetic_matches_complex():
    rng = random.Random(7)
    for _ in range(100):
        a = Cyc.gaussian(Fraction(rng.randint(-5, 5), rng.randint(1, 4)),
                         Fraction(rng.randint(-5, 5), rng.randint(1, 4)))
        b = Cyc.gaussian(rng.randint(-5, 5), rng.randint(-5, 5))
        for op in ("__add__", "__sub__", "__mul__"):
            exact = getattr(a, op)(b).to_complex()
            approx = getattr(a.to_complex(), op)(b.to_complex())
            assert abs(exact - approx) < 1e-9


def test_roots_of_unity():
    for n in (1, 2, 3, 4, 6, 8, 12):
        for k in range(n):
            z = Cyc.root_of_unity(n, k)
            assert abs(z.to_complex() - cmath.exp(2j * cmath.pi * k / n)) < 1e-12
            assert z.abs2() == 1
    zeta3 = Cyc.root_of_unity(3, 1)
    assert zeta3 * zeta3 * zeta3 == 1
    assert zeta3 * zeta3 + zeta3 + 1 == 0


def test_promotion_and_mixed_field_ops():
    i = Cyc.gaussian(0, 1)
    zeta3 = Cyc.root_of_unity(3, 1)
    w = i * zeta3
    assert w.n == 12
    assert abs(w.to_complex() - 1j * cmath.exp(2j * cmath.pi / 3)) < 1e-12
    assert (w * w.conjugate()) == 1


def test_inverse_and_division():
    rng = random.Random(3)
    for n in (4, 12):
        for _ in range(25):
            d = len(cyclotomic_polynomial(n)) - 1
            coeffs = [Fraction(rng.randint(-3, 3)) for _ in range(d)]
            x = Cyc(n, coeffs)
            if not x:
                continue
            assert x * x.inverse() == 1
            assert (x / x) == 1


def test_conjugate_is_complex_conjugate():
    z = Cyc.root_of_unity(12, 5) * Cyc.gaussian(2, Fraction(1, 3))
    assert abs(z.conjugate().to_complex() - z.to_complex().conjugate()) < 1e-12
    assert z.abs2().is_rational()


def test_gaussian_parts_roundtrip():
    z = Cyc.gaussian(Fraction(3, 4), Fraction(-2, 5))
    re, im = z.promote(12).gaussian_parts()
    assert (re, im) == (Fraction(3, 4), Fraction(-2, 5))
    with pytest.raises(ValueError):
        Cyc.root_of_unity(3, 1).gaussian_parts()


def test_positive_real():
    assert Cyc.rational(Fraction(1, 7)).is_positive_real()
    assert not Cyc.rational(-2).is_positive_real()
    assert not Cyc.gaussian(0, 1).is_positive_real()
    assert not Cyc.zero().is_positive_real()
    # 2 + zeta + zeta^-1 = 2 + 2cos(pi/6) = 2 + sqrt(3): irrational positive
    zeta = Cyc.root_of_unity(12, 1)
    x = zeta + zeta.conjugate() + 2
    assert x.is_positive_real()


def test_phase_exponent():
    for n in (2, 3, 4):
        for e in range(n):
            c = Cyc.root_of_unity(n, e) * Fraction(7, 3)
            assert phase_exponent(c, n) == e
    # a non-root-of-unity phase is rejected
    assert phase_exponent(Cyc.gaussian(1, 1), 4) is None
    assert phase_exponent(Cyc.zero(), 4) is None


def test_as_scalar_coercions():
    assert as_scalar(3) == Cyc.rational(3)
    assert as_scalar((1, 2)) == Cyc.gaussian(1, 2)
    assert to_complex(as_scalar((1, 2))) == 1 + 2j
