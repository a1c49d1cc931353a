"""Cartan presentations, normalizers, alpha maps, Weyl reconstruction."""

import itertools
import random
from fractions import Fraction

import pytest

from gpdalg.cartan import (CartanPresentation, alpha_map, char_value,
                           is_normalizer, roundtrip_check,
                           twisted_presentation, unique_expectation,
                           validate_presentation, vec_mul, vec_star,
                           weyl_groupoid)
from gpdalg.errors import (DiagonalNotSplit, NotMaximalAbelian, NotPrincipal,
                           NotRegular, NotStarAlgebra, NotStarPositive)
from gpdalg.groupoid import find_isomorphism
from gpdalg.scalars import Cyc
from gpdalg.twists import coboundary, cohomologous, trivial_cocycle
from helpers import partition_groupoid, r_n, z2_groupoid
from tests_cartan_helpers import matrix_presentation


def two_point_commutative_presentation():
    """C^2 presented with the non-idempotent basis {1, u}, u^2 = 1."""
    one = Cyc.one()
    basis = ("one", "u")
    product = {("one", "one"): {"one": one}, ("one", "u"): {"u": one},
               ("u", "one"): {"u": one}, ("u", "u"): {"one": one}}
    star = {"one": {"one": one}, "u": {"u": one}}
    return CartanPresentation(basis, product, star, basis, ())


def test_matrix_presentation_validates():
    data = validate_presentation(matrix_presentation(2))
    assert len(data.characters) == 2
    assert data.corner_nonzero == {(0, 0), (0, 1), (1, 0), (1, 1)}


def test_normalizer_checks():
    p = matrix_presentation(3)
    assert is_normalizer(p, {"e11": Cyc.one()})
    assert is_normalizer(p, {"e12": Cyc.one()})
    assert is_normalizer(p, {"e11": Cyc.rational(2), "e22": Cyc.gaussian(0, 1)})
    assert not is_normalizer(p, {"e12": Cyc.one(), "e13": Cyc.one()})


def test_alpha_map_matrix_units():
    p = matrix_presentation(2)
    data = validate_presentation(p)
    # n = e12: domain is the character at position 2, mapped to position 1
    mapping = alpha_map(p, {"e12": Cyc.one()}, data)
    assert mapping == {1: 0}
    mapping = alpha_map(p, {"e21": Cyc.one()}, data)
    assert mapping == {0: 1}
    # diagonal, invertible on its support: identity on the domain
    mapping = alpha_map(p, {"e11": Cyc.rational(3)}, data)
    assert mapping == {0: 0}


def test_alpha_of_adjoint_inverts():
    p = matrix_presentation(3)
    data = validate_presentation(p)
    rng = random.Random(0)
    for _ in range(50):
        i, j = rng.randint(1, 3), rng.randint(1, 3)
        scale = Cyc.gaussian(rng.randint(1, 3), rng.randint(-2, 2))
        vec = {f"e{i}{j}": scale}
        fwd = alpha_map(p, vec, data)
        bwd = alpha_map(p, vec_star(p, vec), data)
        assert {v: k for k, v in fwd.items()} == bwd


def test_alpha_composes():
    p = matrix_presentation(3)
    data = validate_presentation(p)
    m, n = {"e12": Cyc.one()}, {"e23": Cyc.one()}
    comp = alpha_map(p, vec_mul(p, m, n), data)
    am, an = alpha_map(p, m, data), alpha_map(p, n, data)
    chained = {k: am[v] for k, v in an.items() if v in am}
    assert comp == chained


def test_char_value():
    p = matrix_presentation(2)
    data = validate_presentation(p)
    for i, char in enumerate(data.characters):
        val = char_value(p, char, {"e11": Cyc.one()})
        assert val == (Cyc.one() if char.get("e11") else Cyc.zero())


def test_weyl_of_matrix_algebra_is_full_relation():
    out = weyl_groupoid(matrix_presentation(2))
    assert len(out.groupoid) == 4
    assert out.groupoid.is_principal()
    assert find_isomorphism(out.groupoid, r_n(2)) is not None
    assert all(v == 0 for v in out.cocycle.values.values())


def test_weyl_of_commutative_algebra_is_units_only():
    out = weyl_groupoid(two_point_commutative_presentation())
    assert len(out.groupoid) == 2
    assert set(out.groupoid.units) == set(out.groupoid.elements)


def test_general_diagonal_split():
    data = validate_presentation(two_point_commutative_presentation())
    half = Cyc.rational(Fraction(1, 2))
    expected = [{"one": half, "u": half}, {"one": half, "u": -half}]
    for want in expected:
        assert any(set(c) == set(want)
                   and all(c[k] == want[k] for k in want)
                   for c in data.characters)
    assert len(data.characters) == 2


def test_not_regular_detected():
    p = matrix_presentation(3, normalizer_pairs=[(1, 2), (2, 1)])
    with pytest.raises(NotRegular):
        validate_presentation(p)


def test_not_maximal_abelian_detected():
    # B = C 1 inside C^2: commutant is everything
    one = Cyc.one()
    basis = ("one", "u")
    product = {("one", "one"): {"one": one}, ("one", "u"): {"u": one},
               ("u", "one"): {"u": one}, ("u", "u"): {"one": one}}
    star = {"one": {"one": one}, "u": {"u": one}}
    p = CartanPresentation(basis, product, star, ("one",), ())
    with pytest.raises((NotMaximalAbelian, DiagonalNotSplit)):
        validate_presentation(p)


def test_bad_star_detected():
    p = matrix_presentation(2)
    star = dict(p.star)
    star["e12"] = {"e12": Cyc.one()}  # e12* = e12 breaks anti-multiplicativity
    with pytest.raises(NotStarAlgebra):
        validate_presentation(CartanPresentation(
            p.basis, p.product, star, p.diagonal, p.normalizers))


def test_positivity_detected():
    # flip a sign: e12* = -e21 makes tr((e12)* e12) negative
    p = matrix_presentation(2)
    star = dict(p.star)
    star["e12"] = {"e21": Cyc.rational(-1)}
    star["e21"] = {"e12": Cyc.rational(-1)}
    with pytest.raises((NotStarPositive, NotStarAlgebra)):
        validate_presentation(CartanPresentation(
            p.basis, p.product, star, p.diagonal, p.normalizers))


def test_unique_expectation_matrix():
    p = matrix_presentation(3)
    result = unique_expectation(p)
    assert result["unique"] and result["solutions_found"] == 1
    table = result["solution"]
    assert table["e11"] == {"e11": Cyc.one()}
    assert table["e12"] == {}


def test_roundtrip_trivial_cocycle():
    for n in (2, 3, 4):
        g = r_n(n)
        report = roundtrip_check(g, trivial_cocycle(g, 2))
        assert report.cocycle_class_matches
        assert report.expectation_unique


def test_roundtrip_multi_orbit_with_cocycle():
    g = partition_groupoid(("a", "b"), ("c", "d"))
    rng = random.Random(1)
    non_units = [e for e in g.elements if e not in set(g.units)]
    # a Z2 cocycle supported on one orbit
    b = {e: (1 if e.startswith("(a") or e.startswith("(b") else 0)
         for e in non_units}
    sigma = coboundary(g, b, 2)
    report = roundtrip_check(g, sigma)
    assert report.cocycle_class_matches


def test_roundtrip_orders_2_3_4():
    g = partition_groupoid(("a", "b", "c"))
    rng = random.Random(2)
    non_units = [e for e in g.elements if e not in set(g.units)]
    for order in (2, 3, 4):
        b = {e: rng.randrange(order) for e in non_units}
        sigma = coboundary(g, b, order)
        report = roundtrip_check(g, sigma)
        assert report.cocycle_class_matches
        assert report.extracted_order in {1, order} or \
            order % report.extracted_order == 0


def test_roundtrip_section_independence():
    g = partition_groupoid(("a", "b", "c"))
    non_units = [e for e in g.elements if e not in set(g.units)]
    b = {e: i % 4 for i, e in enumerate(non_units)}
    sigma = coboundary(g, b, 4)
    presentation = twisted_presentation(g, sigma)
    out1 = weyl_groupoid(presentation)
    out2 = weyl_groupoid(presentation, reverse_sections=True)
    assert out1.groupoid == out2.groupoid
    lifted1 = _lift(out1.cocycle, 4)
    lifted2 = _lift(out2.cocycle, 4)
    assert cohomologous(lifted1, lifted2)


def _lift(sigma, order):
    from gpdalg.twists import validate_cocycle
    step = order // sigma.order
    return validate_cocycle(sigma.groupoid,
                            {k: v * step for k, v in sigma.values.items()},
                            order)


def test_roundtrip_rejects_non_principal():
    g = z2_groupoid()
    with pytest.raises(NotPrincipal):
        roundtrip_check(g, trivial_cocycle(g, 2))


def test_weyl_extracts_the_input_cocycle_on_the_nose():
    g = r_n(3)
    non_units = [e for e in g.elements if e not in set(g.units)]
    b = {e: i % 3 for i, e in enumerate(non_units)}
    sigma = coboundary(g, b, 3)
    out = weyl_groupoid(twisted_presentation(g, sigma))
    hom = find_isomorphism(g, out.groupoid)
    pulled = {(a, c): out.cocycle.values[(hom(a), hom(c))]
              for (a, c) in g.compose}
    lifted = _lift(out.cocycle, 3) if out.cocycle.order != 3 else out.cocycle
    step = 3 // out.cocycle.order
    assert {k: (v * step) % 3 for k, v in pulled.items()} == sigma.values
