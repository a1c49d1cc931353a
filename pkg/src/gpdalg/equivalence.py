"""Groupoid equivalence bimodules, the linking groupoid, and corner checks.

An equivalence between finite groupoids G and H is a finite set X with
anchor maps r: X -> G units and s: X -> H units, a free left G-action, a
free right H-action, commuting actions, and quotient bijections
X/H -> G units and G\\X -> H units.  Properness is automatic on finite
sets and is recorded in the validation report rather than checked.

The linking groupoid glues G, X, a formal adjoint copy X*, and H into one
finite groupoid whose corners over the two unit blocks recover G and H;
corner_check verifies that at the level of convolution structure
constants, along with fullness of both corner projections.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .algebra import AlgebraElement, convolve
from .errors import (ActionAxiomFails, ActionsDontCommute,
                     InternalInconsistency, NotComposablePair, NotFree,
                     QuotientNotBijective)
from .groupoid import validate_table


@dataclass(frozen=True, eq=False)
class EquivalenceBimodule:
    left: object            # FiniteGroupoid G
    right: object           # FiniteGroupoid H
    points: tuple           # X
    r_map: dict             # X -> G units
    s_map: dict             # X -> H units
    left_action: dict       # (gamma, xi) -> xi', defined iff s(gamma) = r(xi)
    right_action: dict      # (xi, eta) -> xi', defined iff s(xi) = r(eta)


def validate_bimodule(bim):
    """Exhaustive check of the action axioms, freeness, commutation and the
    two quotient bijections.  Returns a report on success."""
    g, h = bim.left, bim.right
    points = tuple(sorted(bim.points))
    if set(bim.r_map) != set(points) or set(bim.s_map) != set(points):
        raise ActionAxiomFails(None, "anchor maps must be total on X")
    for xi in points:
        if bim.r_map[xi] not in set(g.units):
            raise ActionAxiomFails(xi, "r map must land in left units")
        if bim.s_map[xi] not in set(h.units):
            raise ActionAxiomFails(xi, "s map must land in right units")

    expected_left = {(gamma, xi) for gamma in g.elements for xi in points
                     if g.s(gamma) == bim.r_map[xi]}
    if set(bim.left_action) != expected_left:
        raise ActionAxiomFails(None, "left action domain mismatch")
    expected_right = {(xi, eta) for xi in points for eta in h.elements
                      if bim.s_map[xi] == h.r(eta)}
    if set(bim.right_action) != expected_right:
        raise ActionAxiomFails(None, "right action domain mismatch")

    for (gamma, xi), out in bim.left_action.items():
        if out not in set(points):
            raise ActionAxiomFails((gamma, xi), "left action leaves X")
        if bim.r_map[out] != g.r(gamma):
            raise ActionAxiomFails((gamma, xi), "r(gamma.xi) != r(gamma)")
        if bim.s_map[out] != bim.s_map[xi]:
            raise ActionAxiomFails((gamma, xi), "left action moved s(xi)")
    for (xi, eta), out in bim.right_action.items():
        if out not in set(points):
            raise ActionAxiomFails((xi, eta), "right action leaves X")
        if bim.s_map[out] != h.s(eta):
            raise ActionAxiomFails((xi, eta), "s(xi.eta) != s(eta)")
        if bim.r_map[out] != bim.r_map[xi]:
            raise ActionAxiomFails((xi, eta), "right action moved r(xi)")

    for xi in points:
        if bim.left_action[(bim.r_map[xi], xi)] != xi:
            raise ActionAxiomFails(xi, "unit acts nontrivially on the left")
        if bim.right_action[(xi, bim.s_map[xi])] != xi:
            raise ActionAxiomFails(xi, "unit acts nontrivially on the right")

    for (alpha, beta), ab in g.compose.items():
        for xi in points:
            if (beta, xi) in bim.left_action:
                lhs = bim.left_action[(alpha, bim.left_action[(beta, xi)])]
                rhs = bim.left_action[(ab, xi)]
                if lhs != rhs:
                    raise ActionAxiomFails((alpha, beta, xi),
                                           "left action not associative")
    for (alpha, beta), ab in h.compose.items():
        for xi in points:
            if (xi, alpha) in bim.right_action:
                lhs = bim.right_action[(bim.right_action[(xi, alpha)], beta)]
                rhs = bim.right_action[(xi, ab)]
                if lhs != rhs:
                    raise ActionAxiomFails((xi, alpha, beta),
                                           "right action not associative")

    for (gamma, xi), out in bim.left_action.items():
        if out == xi and gamma != bim.r_map[xi]:
            raise NotFree((gamma, xi))
    for (xi, eta), out in bim.right_action.items():
        if out == xi and eta != bim.s_map[xi]:
            raise NotFree((xi, eta))

    for (gamma, xi) in bim.left_action:
        for eta in h.elements:
            if (xi, eta) in bim.right_action:
                lhs = bim.right_action[(bim.left_action[(gamma, xi)], eta)]
                rhs = bim.left_action[(gamma, bim.right_action[(xi, eta)])]
                if lhs != rhs:
                    raise ActionsDontCommute((gamma, xi, eta))

    # quotient bijections: X/H <-> G units via r, G\X <-> H units via s
    h_orbits = _orbits(points, {(xi, bim.right_action[(xi, eta)])
                                for (xi, eta) in bim.right_action})
    if len(h_orbits) != len(g.units) or \
            {bim.r_map[next(iter(o))] for o in h_orbits} != set(g.units) or \
            any(len({bim.r_map[x] for x in o}) != 1 for o in h_orbits):
        raise QuotientNotBijective("left")
    g_orbits = _orbits(points, {(xi, bim.left_action[(gamma, xi)])
                                for (gamma, xi) in bim.left_action})
    if len(g_orbits) != len(h.units) or \
            {bim.s_map[next(iter(o))] for o in g_orbits} != set(h.units) or \
            any(len({bim.s_map[x] for x in o}) != 1 for o in g_orbits):
        raise QuotientNotBijective("right")

    return {"valid": True, "points": len(points),
            "h_orbits": len(h_orbits), "g_orbits": len(g_orbits),
            "properness": "automatic on finite sets (not separately checked)"}


def _orbits(points, pairs):
    parent = {x: x for x in points}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in pairs:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
    out = {}
    for x in points:
        out.setdefault(find(x), set()).add(x)
    return list(out.values())


def h_pairing(bim, xi, eta):
    """[xi, eta]_H: the unique lam with xi . lam = eta; needs r(xi) = r(eta)."""
    if bim.r_map[xi] != bim.r_map[eta]:
        raise NotComposablePair(
            f"H-pairing needs matching ranges, got {xi!r}, {eta!r}")
    matches = [lam for (x, lam), out in bim.right_action.items()
               if x == xi and out == eta]
    if len(matches) != 1:
        raise InternalInconsistency(
            "H-pairing not unique on a validated bimodule",
            witness=(xi, eta, matches))
    return matches[0]


def g_pairing(bim, xi, eta):
    """_G[xi, eta]: the unique gamma with gamma . eta = xi; needs
    s(xi) = s(eta)."""
    if bim.s_map[xi] != bim.s_map[eta]:
        raise NotComposablePair(
            f"G-pairing needs matching sources, got {xi!r}, {eta!r}")
    matches = [gamma for (gamma, x), out in bim.left_action.items()
               if x == eta and out == xi]
    if len(matches) != 1:
        raise InternalInconsistency(
            "G-pairing not unique on a validated bimodule",
            witness=(xi, eta, matches))
    return matches[0]


@dataclass
class LinkingGroupoid:
    groupoid: object        # the assembled FiniteGroupoid
    tags: dict              # linking element -> ("G"|"X"|"X*"|"H", original)
    p_units: tuple          # unit names coming from G
    q_units: tuple          # unit names coming from H
    names: dict             # (tag, original) -> linking element


def build_linking(bim):
    """Assemble L = G | X | X* | H with the mixed products given by the
    actions and the two pairings, then validate the whole table."""
    validate_bimodule(bim)
    g, h = bim.left, bim.right
    name = {}
    tags = {}
    for a in g.elements:
        name[("G", a)] = f"G:{a}"
    for a in h.elements:
        name[("H", a)] = f"H:{a}"
    for x in bim.points:
        name[("X", x)] = f"X:{x}"
        name[("X*", x)] = f"X*:{x}"
    for key, val in name.items():
        tags[val] = key

    compose = {}
    inverse = {}
    for (a, b), c in g.compose.items():
        compose[(name[("G", a)], name[("G", b)])] = name[("G", c)]
    for (a, b), c in h.compose.items():
        compose[(name[("H", a)], name[("H", b)])] = name[("H", c)]
    for (gamma, xi), out in bim.left_action.items():
        compose[(name[("G", gamma)], name[("X", xi)])] = name[("X", out)]
        # adjoint: xi* gamma^-1 = (gamma xi)*  <=>  xi* gamma = (gamma^-1 xi)*
        compose[(name[("X*", out)], name[("G", gamma)])] = name[("X*", xi)]
    for (xi, eta), out in bim.right_action.items():
        compose[(name[("X", xi)], name[("H", eta)])] = name[("X", out)]
        compose[(name[("H", h.inv(eta))], name[("X*", xi)])] = name[("X*", out)]
    for xi, eta in itertools.product(bim.points, bim.points):
        if bim.r_map[xi] == bim.r_map[eta]:
            compose[(name[("X*", xi)], name[("X", eta)])] = \
                name[("H", h_pairing(bim, xi, eta))]
        if bim.s_map[xi] == bim.s_map[eta]:
            compose[(name[("X", xi)], name[("X*", eta)])] = \
                name[("G", g_pairing(bim, xi, eta))]

    for a in g.elements:
        inverse[name[("G", a)]] = name[("G", g.inv(a))]
    for a in h.elements:
        inverse[name[("H", a)]] = name[("H", h.inv(a))]
    for x in bim.points:
        inverse[name[("X", x)]] = name[("X*", x)]
        inverse[name[("X*", x)]] = name[("X", x)]

    linking = validate_table(name.values(), compose, inverse)
    p_units = tuple(sorted(name[("G", u)] for u in g.units))
    q_units = tuple(sorted(name[("H", u)] for u in h.units))
    if set(p_units) | set(q_units) != set(linking.units) or \
            set(p_units) & set(q_units):
        raise InternalInconsistency("corner units do not partition L units")
    return LinkingGroupoid(linking, tags, p_units, q_units, name)


def corner_check(link):
    """P and Q are complementary projections; compressing by them recovers
    the two input algebras exactly, and both projections are full."""
    l = link.groupoid
    p = AlgebraElement.indicator(l, link.p_units)
    q = AlgebraElement.indicator(l, link.q_units)
    if convolve(p, p) != p or convolve(q, q) != q:
        raise InternalInconsistency("corner indicators are not idempotent")
    if p + q != AlgebraElement.unit_indicator(l):
        raise InternalInconsistency("P + Q is not the identity")

    def corner_elements(units):
        units = set(units)
        return [e for e in l.elements if l.r(e) in units and l.s(e) in units]

    p_corner = corner_elements(link.p_units)
    q_corner = corner_elements(link.q_units)
    x_count = sum(1 for e in l.elements if link.tags[e][0] == "X")

    # compression by P: indicators of corner elements survive, others die
    for e in l.elements:
        compressed = convolve(p, convolve(AlgebraElement.indicator(l, [e]), p))
        expected = AlgebraElement.indicator(l, [e]) if e in set(p_corner) \
            else AlgebraElement.zero(l)
        if compressed != expected:
            raise InternalInconsistency("compression by P misbehaves",
                                        witness=e)

    # corner structure constants match the original groupoid algebras
    for corner, tag in ((p_corner, "G"), (q_corner, "H")):
        for a, b in itertools.product(corner, corner):
            product = convolve(AlgebraElement.indicator(l, [a]),
                               AlgebraElement.indicator(l, [b]))
            if l.composable(a, b):
                if product != AlgebraElement.indicator(l, [l.product(a, b)]):
                    raise InternalInconsistency("corner product mismatch",
                                                witness=(a, b))
                if link.tags[l.product(a, b)][0] != tag:
                    raise InternalInconsistency("corner not closed",
                                                witness=(a, b))
            elif product:
                raise InternalInconsistency("phantom corner product",
                                            witness=(a, b))

    # fullness: the invariant set generated by either unit block is all units
    def saturation(units):
        out = set(units)
        changed = True
        while changed:
            changed = False
            for x in list(out):
                for gamma in l.source_fiber(x):
                    if l.r(gamma) not in out:
                        out.add(l.r(gamma))
                        changed = True
        return out

    p_full = saturation(link.p_units) == set(l.units)
    q_full = saturation(link.q_units) == set(l.units)
    if not (p_full and q_full):
        raise InternalInconsistency("corner projection not full")

    return {
        "p_dimension": len(p_corner),
        "q_dimension": len(q_corner),
        "x_dimension": x_count,
        "total_dimension": len(l.elements),
        "dimension_identity":
            len(p_corner) + len(q_corner) + 2 * x_count == len(l.elements),
        "p_full": p_full,
        "q_full": q_full,
    }


def rectangle_bimodule(g, h):
    """The standard equivalence between two full relations R_N and R_M:
    X = units(G) x units(H) with coordinate actions."""
    points = tuple(f"{u}|{v}" for u in g.units for v in h.units)
    r_map = {f"{u}|{v}": u for u in g.units for v in h.units}
    s_map = {f"{u}|{v}": v for u in g.units for v in h.units}
    left_action = {}
    for gamma in g.elements:
        for v in h.units:
            left_action[(gamma, f"{g.s(gamma)}|{v}")] = f"{g.r(gamma)}|{v}"
    right_action = {}
    for eta in h.elements:
        for u in g.units:
            right_action[(f"{u}|{h.r(eta)}", eta)] = f"{u}|{h.s(eta)}"
    return EquivalenceBimodule(g, h, points, r_map, s_map,
                               left_action, right_action)


def identity_bimodule(g):
    """G as a G--G equivalence over itself by translation."""
    points = tuple(g.elements)
    r_map = {x: g.r(x) for x in points}
    s_map = {x: g.s(x) for x in points}
    left_action = {(gamma, x): g.product(gamma, x)
                   for gamma in g.elements for x in points
                   if g.composable(gamma, x)}
    right_action = {(x, eta): g.product(x, eta)
                    for x in points for eta in g.elements
                    if g.composable(x, eta)}
    return EquivalenceBimodule(g, g, points, r_map, s_map,
                               left_action, right_action)
