"""Convolution algebra: products, involution, norms, representations,
expectation, block decomposition."""

import itertools
import random
from fractions import Fraction

import numpy as np
import pytest

from gpdalg.algebra import (AlgebraElement, block_decompose, convolve,
                            expectation, involute, j_map, norms,
                            operator_norm, regular_representation,
                            translation_unitary)
from gpdalg.errors import GroupoidMismatch, NotAUnit
from gpdalg.groupoid import disjoint_union, is_bisection
from gpdalg.scalars import Cyc
from helpers import (brute_convolve, partition_groupoid, r_n, random_element,
                     swap_transformation_groupoid, z2_groupoid)


def test_matrix_units():
    g = r_n(4)
    for i, j, k, l in itertools.product(range(1, 5), repeat=4):
        a = AlgebraElement.indicator(g, [f"({i},{j})"])
        b = AlgebraElement.indicator(g, [f"({k},{l})"])
        prod = convolve(a, b)
        if j == k:
            assert prod == AlgebraElement.indicator(g, [f"({i},{l})"])
        else:
            assert not prod


def test_unit_indicator_is_identity():
    g = swap_transformation_groupoid()
    rng = random.Random(0)
    one = AlgebraElement.unit_indicator(g)
    for _ in range(10):
        f = random_element(g, rng)
        assert convolve(one, f) == f
        assert convolve(f, one) == f


def test_convolve_against_brute_force():
    g = swap_transformation_groupoid()
    rng = random.Random(1)
    for _ in range(25):
        f, h = random_element(g, rng), random_element(g, rng)
        assert convolve(f, h) == brute_convolve(f, h)


def test_convolve_associative_and_star_identity():
    g = swap_transformation_groupoid()
    rng = random.Random(2)
    for _ in range(15):
        f, h, k = (random_element(g, rng) for _ in range(3))
        assert convolve(convolve(f, h), k) == convolve(f, convolve(h, k))
        assert involute(convolve(f, h)) == convolve(involute(h), involute(f))


def test_support_of_product_inside_product_of_supports():
    g = r_n(3)
    rng = random.Random(3)
    for _ in range(20):
        f, h = random_element(g, rng, density=0.4), random_element(g, rng, density=0.4)
        prod_support = set(convolve(f, h).support())
        allowed = {g.product(a, b)
                   for a in f.support() for b in h.support()
                   if g.composable(a, b)}
        assert prod_support <= allowed


def test_involute():
    g = r_n(3)
    assert involute(AlgebraElement.indicator(g, ["(1,2)"])) == \
        AlgebraElement.indicator(g, ["(2,1)"])
    f = AlgebraElement(g, {"(1,2)": Cyc.gaussian(2, 1)})
    assert involute(f).coeffs["(2,1)"] == Cyc.gaussian(2, -1)
    real_units = AlgebraElement(g, {"(1,1)": Cyc.rational(Fraction(2, 3))})
    assert involute(real_units) == real_units
    rng = random.Random(4)
    for _ in range(10):
        f = random_element(g, rng)
        assert involute(involute(f)) == f


def test_bisection_conv_rule():
    g = r_n(4)
    # f, h supported on bisections: (f*h)(ab) = f(a) h(b)
    f = AlgebraElement(g, {"(1,2)": Cyc.gaussian(1, 1), "(2,3)": Cyc.rational(3)})
    h = AlgebraElement(g, {"(2,4)": Cyc.gaussian(0, 2), "(3,1)": Cyc.rational(5)})
    assert is_bisection(g, f.support()) and is_bisection(g, h.support())
    prod = convolve(f, h)
    assert prod.coeffs["(1,4)"] == Cyc.gaussian(1, 1) * Cyc.gaussian(0, 2)
    assert prod.coeffs["(2,1)"] == Cyc.rational(15)
    # f* * f is supported on source units with |f|^2 values
    ff = convolve(involute(f), f)
    assert ff.coeffs["(2,2)"] == Cyc.gaussian(1, 1).abs2()
    assert ff.coeffs["(3,3)"] == Cyc.rational(9)
    assert set(ff.support()) == {"(2,2)", "(3,3)"}


def test_groupoid_mismatch():
    f = AlgebraElement.unit_indicator(r_n(2))
    h = AlgebraElement.unit_indicator(r_n(3))
    with pytest.raises(GroupoidMismatch):
        convolve(f, h)


def test_regular_representation_matrix_units():
    g = r_n(3)
    for x in g.units:
        mat, basis = regular_representation(
            g, x, AlgebraElement.indicator(g, ["(1,2)"]))
        expected = np.zeros((3, 3))
        i = basis.index(f"(1,{x[1]})")  # row: target (1, j); col: (2, j)
        j = basis.index(f"(2,{x[1]})")
        expected[i, j] = 1
        assert np.allclose(mat, expected)


def test_regular_representation_identity_and_homomorphism():
    g = swap_transformation_groupoid()
    rng = random.Random(5)
    x = g.units[0]
    one = AlgebraElement.unit_indicator(g)
    mat, _ = regular_representation(g, x, one)
    assert np.allclose(mat, np.eye(mat.shape[0]))
    for _ in range(10):
        f, h = random_element(g, rng), random_element(g, rng)
        mf, _ = regular_representation(g, x, f)
        mh, _ = regular_representation(g, x, h)
        mfh, _ = regular_representation(g, x, convolve(f, h))
        assert np.allclose(mf @ mh, mfh, atol=1e-9)
        mstar, _ = regular_representation(g, x, involute(f))
        assert np.allclose(mstar, mf.conj().T, atol=1e-9)


def test_regular_representation_unitary_equivalence():
    g = partition_groupoid(("a", "b", "c"))
    rng = random.Random(6)
    f = random_element(g, rng)
    for eta in g.elements:
        u, src, dst = translation_unitary(g, eta)
        m_src, basis_src = regular_representation(g, g.s(eta), f)
        m_dst, basis_dst = regular_representation(g, g.r(eta), f)
        assert basis_src == src and basis_dst == dst
        assert np.allclose(m_dst, u @ m_src @ u.conj().T, atol=1e-9)


def test_not_a_unit():
    g = r_n(2)
    with pytest.raises(NotAUnit):
        regular_representation(g, "(1,2)", AlgebraElement.unit_indicator(g))


def test_norms_matrix_units_and_bisections():
    g = r_n(4)
    e = AlgebraElement.indicator(g, ["(1,2)"])
    rep = norms(e)
    assert abs(rep.reduced_norm - 1.0) < 1e-9
    assert rep.sup_norm == 1.0
    assert rep.full_norm == rep.reduced_norm
    f = AlgebraElement(g, {"(1,2)": Cyc.gaussian(3, 4), "(2,3)": Cyc.rational(2)})
    rep = norms(f)
    assert abs(rep.reduced_norm - 5.0) < 1e-9  # sup over the bisection
    assert abs(rep.sup_norm - 5.0) < 1e-12


def test_norm_sandwich_random():
    rng = random.Random(7)
    for g in (r_n(3), swap_transformation_groupoid(), z2_groupoid()):
        for _ in range(30):
            f = random_element(g, rng)
            rep = norms(f)
            assert rep.sup_norm <= rep.reduced_norm + 1e-9
            assert rep.reduced_norm <= rep.i_norm + 1e-9


def test_reduced_norm_matches_dense_matrix_norm():
    g = r_n(5)
    rng = random.Random(8)
    for _ in range(20):
        f = random_element(g, rng)
        mat = np.zeros((5, 5), dtype=complex)
        for (i, j) in itertools.product(range(1, 6), repeat=2):
            v = f.coeffs.get(f"({i},{j})")
            if v is not None:
                mat[i - 1, j - 1] = v.to_complex()
        expected = np.linalg.norm(mat, 2)
        got = norms(f).reduced_norm
        assert abs(got - expected) <= 1e-9 * max(1.0, expected)


def test_c_star_identity_numerically():
    g = swap_transformation_groupoid()
    rng = random.Random(9)
    for _ in range(10):
        f = random_element(g, rng)
        lhs = norms(convolve(involute(f), f)).reduced_norm
        rhs = norms(f).reduced_norm ** 2
        assert abs(lhs - rhs) <= 1e-9 * max(1.0, rhs)


def test_operator_norm_power_iteration_agrees_with_dense():
    rng = np.random.default_rng(10)
    for _ in range(20):
        n = int(rng.integers(1, 9))
        m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        assert abs(operator_norm(m) - np.linalg.norm(m, 2)) < 1e-8


def test_expectation_properties():
    g = r_n(3)
    assert expectation(AlgebraElement.indicator(g, ["(1,2)"])) == \
        AlgebraElement.zero(g)
    assert expectation(AlgebraElement.indicator(g, ["(1,1)"])) == \
        AlgebraElement.indicator(g, ["(1,1)"])
    rng = random.Random(11)
    for _ in range(20):
        f = random_element(g, rng)
        phi = expectation(f)
        assert expectation(phi) == phi
        h = AlgebraElement(g, {"(1,1)": Cyc.gaussian(1, 2),
                               "(2,2)": Cyc.rational(3)})
        k = AlgebraElement(g, {"(3,3)": Cyc.gaussian(0, 1),
                               "(1,1)": Cyc.rational(2)})
        assert expectation(convolve(convolve(h, f), k)) == \
            convolve(convolve(h, phi), k)


def test_expectation_faithful_exactly():
    g = swap_transformation_groupoid()
    rng = random.Random(12)
    for _ in range(30):
        f = random_element(g, rng, density=0.5)
        phi = expectation(convolve(involute(f), f))
        if f:
            assert phi
            # diagonal entries are sums of |f|^2 over source fibers
            for x, v in phi.coeffs.items():
                assert v.is_rational() and v.as_rational() > 0
        else:
            assert not phi
    tiny = AlgebraElement(g, {g.elements[0]: Cyc.gaussian(
        Fraction(1, 10 ** 12), Fraction(-1, 10 ** 15))})
    assert expectation(convolve(involute(tiny), tiny))


def test_j_map_is_identity():
    rng = random.Random(13)
    for g in (r_n(4), z2_groupoid(), swap_transformation_groupoid()):
        for _ in range(15):
            f = random_element(g, rng)
            assert j_map(f) == f


def test_block_decompose_matrix_groupoid():
    g = r_n(4)
    decomp = block_decompose(g)
    assert len(decomp.blocks) == 1
    blk = decomp.blocks[0]
    assert blk.size == 4 and len(blk.isotropy_elements) == 1
    assert decomp.total_dimension() == 16


def test_block_decompose_z2_fourier_split():
    g = z2_groupoid()
    decomp = block_decompose(g)
    blk = decomp.blocks[0]
    assert blk.size == 1 and len(blk.isotropy_elements) == 2
    # Fourier transform over Z2: p+ = (e + u)/2 and p- = (e - u)/2 are
    # orthogonal central idempotents splitting C[Z2] into two lines.
    e, u = sorted(g.elements)
    half = Fraction(1, 2)
    p_plus = AlgebraElement(g, {e: Cyc.rational(half), u: Cyc.rational(half)})
    p_minus = AlgebraElement(g, {e: Cyc.rational(half), u: Cyc.rational(-half)})
    assert convolve(p_plus, p_plus) == p_plus
    assert convolve(p_minus, p_minus) == p_minus
    assert not convolve(p_plus, p_minus)
    assert p_plus + p_minus == AlgebraElement.unit_indicator(g)


def test_block_decompose_disjoint_union():
    g = disjoint_union(r_n(2), r_n(3))
    decomp = block_decompose(g)
    assert sorted(b.size for b in decomp.blocks) == [2, 3]
    assert decomp.total_dimension() == 13


def test_bisection_span_singletons():
    g = r_n(3)
    rng = random.Random(14)
    f = random_element(g, rng)
    total = AlgebraElement.zero(g)
    for e, v in f.coeffs.items():
        assert is_bisection(g, [e])
        total = total + AlgebraElement(g, {e: v})
    assert total == f
