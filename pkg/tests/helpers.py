"""Shared test utilities: random elements, small groupoids, brute oracles."""

import random
from fractions import Fraction

from gpdalg.algebra import AlgebraElement
from gpdalg.groupoid import (construct_standard, cyclic_table, group_spec,
                             matrix_spec, partition_spec, product_table,
                             transformation_spec)
from gpdalg.scalars import Cyc


def random_gaussian(rng, span=4):
    return Cyc.gaussian(Fraction(rng.randint(-span, span), rng.randint(1, 3)),
                        Fraction(rng.randint(-span, span), rng.randint(1, 3)))


def random_element(gpd, rng, density=0.7, span=4):
    coeffs = {}
    for e in gpd.elements:
        if rng.random() < density:
            coeffs[e] = random_gaussian(rng, span)
    return AlgebraElement(gpd, coeffs)


def brute_convolve(f, g):
    """Independent double loop over all element pairs."""
    gpd = f.groupoid
    out = {}
    for a in gpd.elements:
        for b in gpd.elements:
            if gpd.composable(a, b):
                fa = f.coeffs.get(a)
                gb = g.coeffs.get(b)
                if fa is not None and gb is not None:
                    c = gpd.product(a, b)
                    term = fa * gb
                    out[c] = out[c] + term if c in out else term
    return AlgebraElement(gpd, out)


def swap_transformation_groupoid():
    elements, table = cyclic_table(2)
    action = {("0", "p"): "p", ("0", "q"): "q",
              ("1", "p"): "q", ("1", "q"): "p"}
    return construct_standard(
        transformation_spec(elements, table, ("p", "q"), action))


def z2_groupoid():
    return construct_standard(group_spec(*cyclic_table(2)))


def klein_groupoid():
    return construct_standard(
        group_spec(*product_table(cyclic_table(2, "a"), cyclic_table(2, "b"))))


def r_n(n):
    return construct_standard(matrix_spec(n))


def partition_groupoid(*blocks):
    return construct_standard(partition_spec(blocks))
