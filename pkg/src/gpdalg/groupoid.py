"""Finite groupoids as validated multiplication tables.

A groupoid is specified by its element set, the partial composition table
and the inverse map.  ``validate_table`` checks the three defining axioms
exhaustively, derives units, range and source, and cross-checks the
derived composability criterion s(a) = r(b) against the table, so a
FiniteGroupoid in hand is trustworthy everywhere downstream.

Finite Hausdorff spaces are discrete, so every topological condition in
this package is evaluated combinatorially and "etale" holds for free.
Element identifiers are opaque strings with their natural total order,
which makes iteration deterministic and serialization canonical.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import (AxiomViolation, BadSpec, InconsistentDomain,
                     InternalInconsistency, NotHomomorphism)


@dataclass(frozen=True, eq=False)
class FiniteGroupoid:
    elements: tuple
    compose: dict
    inverse: dict
    units: tuple
    range_map: dict
    source_map: dict
    by_source: dict = field(repr=False)
    by_range: dict = field(repr=False)

    def __eq__(self, other):
        if not isinstance(other, FiniteGroupoid):
            return NotImplemented
        return (self.elements == other.elements
                and self.compose == other.compose
                and self.inverse == other.inverse)

    def __len__(self):
        return len(self.elements)

    def composable(self, a, b):
        return (a, b) in self.compose

    def product(self, a, b):
        return self.compose[(a, b)]

    def inv(self, a):
        return self.inverse[a]

    def r(self, a):
        return self.range_map[a]

    def s(self, a):
        return self.source_map[a]

    def source_fiber(self, x):
        """G_x = all elements with source x."""
        return self.by_source.get(x, ())

    def range_fiber(self, x):
        """G^x = all elements with range x."""
        return self.by_range.get(x, ())

    def isotropy_elements(self):
        return tuple(g for g in self.elements
                     if self.range_map[g] == self.source_map[g])

    def orbit_of(self, x):
        return tuple(sorted({self.range_map[g] for g in self.source_fiber(x)}))

    def orbits(self):
        seen = set()
        out = []
        for x in self.units:
            if x not in seen:
                orbit = self.orbit_of(x)
                seen.update(orbit)
                out.append(orbit)
        return tuple(out)

    def is_principal(self):
        return len(self.isotropy_elements()) == len(self.units)


def validate_table(elements, compose, inverse):
    """Check the groupoid axioms exhaustively and build a FiniteGroupoid.

    Axiom ids follow the usual three-axiom presentation:
      1: double inverse,
      2: composability of triple products and associativity,
      3: (g, g^-1) composable, g^-1(g h) = h and (g h)h^-1 = g.
    A fourth check, reported as axiom "r-s", verifies that the table's
    composable pairs are exactly the pairs with s(a) = r(b).
    """
    elements = tuple(sorted(elements))
    elt_set = set(elements)
    if len(elements) != len(elt_set):
        raise InconsistentDomain("duplicate element identifiers")
    if not elements:
        raise InconsistentDomain("empty element set")

    for a, b in compose:
        if a not in elt_set or b not in elt_set:
            raise InconsistentDomain(f"compose key ({a!r}, {b!r}) unknown")
    for (a, b), c in compose.items():
        if c not in elt_set:
            raise InconsistentDomain(f"compose value {c!r} at ({a!r}, {b!r}) unknown")
    if set(inverse) != elt_set:
        raise InconsistentDomain("inverse map is not total on the element set")
    for a, b in inverse.items():
        if b not in elt_set:
            raise InconsistentDomain(f"inverse value {b!r} at {a!r} unknown")

    # axiom 1: (g^-1)^-1 = g
    for g in elements:
        if inverse[inverse[g]] != g:
            raise AxiomViolation(1, g, f"inverse(inverse({g!r})) != {g!r}")

    # axiom 3 first half: (g, g^-1) always composable
    for g in elements:
        if (g, inverse[g]) not in compose:
            raise AxiomViolation(3, g, f"({g!r}, inverse) not composable")

    # axiom 2: triple closure and associativity
    right_partners = {}
    for a, b in compose:
        right_partners.setdefault(a, []).append(b)
    for (a, b), ab in compose.items():
        for c in right_partners.get(b, ()):
            if (ab, c) not in compose:
                raise AxiomViolation(2, (a, b, c), "(ab, c) not composable")
            bc = compose[(b, c)]
            if (a, bc) not in compose:
                raise AxiomViolation(2, (a, b, c), "(a, bc) not composable")
            if compose[(ab, c)] != compose[(a, bc)]:
                raise AxiomViolation(2, (a, b, c), "(ab)c != a(bc)")

    # axiom 3 second half: g^-1(gh) = h, (gh)h^-1 = g
    for (g, h), gh in compose.items():
        if compose.get((inverse[g], gh)) != h:
            raise AxiomViolation(3, (g, h), "inverse(g)(gh) != h")
        if compose.get((gh, inverse[h])) != g:
            raise AxiomViolation(3, (g, h), "(gh)inverse(h) != g")

    range_map = {g: compose[(g, inverse[g])] for g in elements}
    source_map = {g: compose[(inverse[g], g)] for g in elements}
    units = tuple(sorted({source_map[g] for g in elements}))

    # derived composability criterion must match the table exactly
    for a, b in itertools.product(elements, elements):
        should = source_map[a] == range_map[b]
        if should != ((a, b) in compose):
            raise AxiomViolation(
                "r-s", (a, b),
                "composability disagrees with s(a) = r(b)")

    by_source = {}
    by_range = {}
    for g in elements:
        by_source.setdefault(source_map[g], []).append(g)
        by_range.setdefault(range_map[g], []).append(g)
    gpd = FiniteGroupoid(
        elements, dict(compose), dict(inverse), units, range_map, source_map,
        {k: tuple(v) for k, v in by_source.items()},
        {k: tuple(v) for k, v in by_range.items()})
    check_lemma_consequences(gpd)
    return gpd


def check_lemma_consequences(g):
    """Theorem-level consequences of the axioms, checked exhaustively.

    These cannot fail on a table that passed the axioms; a failure is a
    bug, hence InternalInconsistency rather than AxiomViolation.
    """
    report = {}

    # units are exactly the idempotents
    idem = {x for x in g.elements if g.composable(x, x) and g.product(x, x) == x}
    if idem != set(g.units):
        raise InternalInconsistency("units != idempotents", witness=sorted(idem))
    report["units_are_idempotents"] = True

    for x in g.units:
        if g.r(x) != x or g.s(x) != x:
            raise InternalInconsistency("r or s not identity on a unit", witness=x)
    report["units_fixed_by_r_s"] = True

    # cancellation: a*c = b*c forces a = b (and symmetrically)
    for c in g.elements:
        products = {}
        for a in g.by_source.get(g.r(c), ()):  # a with s(a) = r(c): (a, c) composable
            p = g.product(a, c)
            if p in products:
                raise InternalInconsistency(
                    "right cancellation fails", witness=(products[p], a, c))
            products[p] = a
    for c in g.elements:
        products = {}
        for b in g.by_range.get(g.s(c), ()):  # (c, b) composable
            p = g.product(c, b)
            if p in products:
                raise InternalInconsistency(
                    "left cancellation fails", witness=(products[p], b, c))
            products[p] = b
    report["cancellation"] = True

    # inverse uniqueness: g*h = r(g) only for h = g^-1
    for (a, b), ab in g.compose.items():
        if ab == g.r(a) and b != g.inv(a):
            raise InternalInconsistency("inverse not unique", witness=(a, b))
    report["inverse_uniqueness"] = True

    # (ab)^-1 = b^-1 a^-1
    for (a, b), ab in g.compose.items():
        if g.inv(ab) != g.product(g.inv(b), g.inv(a)):
            raise InternalInconsistency("(ab)^-1 != b^-1 a^-1", witness=(a, b))
    report["antihomomorphic_inverse"] = True

    # Ad_g : Iso(s(g)) -> Iso(r(g)) is a group isomorphism
    iso_at = {x: tuple(a for a in g.by_source.get(x, ()) if g.r(a) == x)
              for x in g.units}
    for gamma in g.elements:
        src, dst = iso_at[g.s(gamma)], iso_at[g.r(gamma)]
        image = {}
        for a in src:
            image[a] = g.product(g.product(gamma, a), g.inv(gamma))
        if sorted(image.values()) != sorted(dst):
            raise InternalInconsistency("Ad_g not bijective", witness=gamma)
        for a, b in itertools.product(src, src):
            if g.product(image[a], image[b]) != image[g.product(a, b)]:
                raise InternalInconsistency(
                    "Ad_g not multiplicative", witness=(gamma, a, b))
    report["ad_isomorphisms"] = True
    return report


# ------------------------------------------------------------ constructions

@dataclass(frozen=True)
class StandardSpec:
    kind: str
    params: dict


def matrix_spec(n):
    return StandardSpec("matrix", {"size": n})


def group_spec(elements, table):
    return StandardSpec("group", {"elements": tuple(elements), "table": dict(table)})


def group_bundle_spec(fibers):
    """fibers: map base point -> (elements, table) of a finite group."""
    return StandardSpec("group_bundle", {"fibers": dict(fibers)})


def partition_spec(blocks):
    return StandardSpec("partition_relation", {"blocks": tuple(map(tuple, blocks))})


def transformation_spec(group_elements, group_table, points, action):
    """action: map (g, x) -> g.x, a left action by bijections."""
    return StandardSpec("transformation", {
        "group_elements": tuple(group_elements),
        "group_table": dict(group_table),
        "points": tuple(points),
        "action": dict(action)})


def _check_group(elements, table):
    elements = tuple(elements)
    eset = set(elements)
    for a, b in itertools.product(elements, elements):
        if (a, b) not in table or table[(a, b)] not in eset:
            raise BadSpec(f"group table not total at ({a!r}, {b!r})")
    identity = None
    for e in elements:
        if all(table[(e, a)] == a and table[(a, e)] == a for a in elements):
            identity = e
            break
    if identity is None:
        raise BadSpec("group table has no identity")
    inverses = {}
    for a in elements:
        inv = next((b for b in elements
                    if table[(a, b)] == identity and table[(b, a)] == identity),
                   None)
        if inv is None:
            raise BadSpec(f"group element {a!r} has no inverse")
        inverses[a] = inv
    for a, b, c in itertools.product(elements, elements, elements):
        if table[(table[(a, b)], c)] != table[(a, table[(b, c)])]:
            raise BadSpec(f"group table not associative at ({a!r},{b!r},{c!r})")
    return identity, inverses


def construct_standard(spec):
    """Build one of the stock groupoids; the output always revalidates."""
    kind, params = spec.kind, spec.params
    if kind == "matrix":
        n = params["size"]
        if not isinstance(n, int) or n < 1:
            raise BadSpec("matrix size must be a positive integer")
        elements = {}
        compose = {}
        inverse = {}
        name = {(i, j): f"({i},{j})" for i in range(1, n + 1) for j in range(1, n + 1)}
        for (i, j), a in name.items():
            inverse[a] = name[(j, i)]
            for k in range(1, n + 1):
                compose[(a, name[(j, k)])] = name[(i, k)]
        return validate_table(name.values(), compose, inverse)

    if kind == "group":
        elements, table = params["elements"], params["table"]
        _, inverses = _check_group(elements, table)
        compose = {(a, b): table[(a, b)] for a in elements for b in elements}
        return validate_table(elements, compose, inverses)

    if kind == "group_bundle":
        compose = {}
        inverse = {}
        names = []
        for x, (gelts, gtable) in sorted(params["fibers"].items()):
            _, ginv = _check_group(gelts, gtable)
            local = {g: f"{x}:{g}" for g in gelts}
            names.extend(local.values())
            for g in gelts:
                inverse[local[g]] = local[ginv[g]]
                for h in gelts:
                    compose[(local[g], local[h])] = local[gtable[(g, h)]]
        return validate_table(names, compose, inverse)

    if kind == "partition_relation":
        blocks = params["blocks"]
        flat = [x for block in blocks for x in block]
        if len(flat) != len(set(flat)):
            raise BadSpec("partition blocks overlap")
        compose = {}
        inverse = {}
        names = []
        for block in blocks:
            for x, y in itertools.product(block, block):
                a = f"({x},{y})"
                names.append(a)
                inverse[a] = f"({y},{x})"
                for z in block:
                    compose[(a, f"({y},{z})")] = f"({x},{z})"
        return validate_table(names, compose, inverse)

    if kind == "transformation":
        gelts = params["group_elements"]
        gtable = params["group_table"]
        points = params["points"]
        action = params["action"]
        identity, ginv = _check_group(gelts, gtable)
        for g, x in itertools.product(gelts, points):
            if (g, x) not in action or action[(g, x)] not in set(points):
                raise BadSpec(f"action not total at ({g!r}, {x!r})")
        for x in points:
            if action[(identity, x)] != x:
                raise BadSpec("identity does not act trivially")
        for g, h in itertools.product(gelts, gelts):
            for x in points:
                if action[(g, action[(h, x)])] != action[(gtable[(g, h)], x)]:
                    raise BadSpec(f"not an action at ({g!r}, {h!r}, {x!r})")
        name = {(g, x): f"({g},{x})" for g in gelts for x in points}
        compose = {}
        inverse = {}
        for (g, x), a in name.items():
            inverse[a] = name[(ginv[g], action[(g, x)])]
        # (g, h.x)(h, x) = (gh, x): an element (g, y) composes on the right
        # with (h, x) exactly when y = h.x
        for (g, y), a in name.items():
            for h in gelts:
                x = action[(ginv[h], y)]
                compose[(a, name[(h, x)])] = name[(gtable[(g, h)], x)]
        return validate_table(name.values(), compose, inverse)

    raise BadSpec(f"unknown construction kind {kind!r}")


def cyclic_table(n, prefix=""):
    """(elements, table) of Z_n with elements '<prefix>0'..'<prefix>n-1'."""
    elements = tuple(f"{prefix}{i}" for i in range(n))
    table = {(f"{prefix}{i}", f"{prefix}{j}"): f"{prefix}{(i + j) % n}"
             for i in range(n) for j in range(n)}
    return elements, table


def product_table(g1, g2):
    """Direct product of two (elements, table) group presentations."""
    e1, t1 = g1
    e2, t2 = g2
    elements = tuple(f"{a}.{b}" for a in e1 for b in e2)
    table = {}
    for a1, b1 in itertools.product(e1, e2):
        for a2, b2 in itertools.product(e1, e2):
            table[(f"{a1}.{b1}", f"{a2}.{b2}")] = \
                f"{t1[(a1, a2)]}.{t2[(b1, b2)]}"
    return elements, table


def s3_table():
    """Symmetric group on 3 letters, elements named by one-line notation."""
    import itertools as it
    perms = list(it.permutations((0, 1, 2)))
    name = {p: "".join(map(str, p)) for p in perms}
    table = {}
    for p, q in it.product(perms, perms):
        comp = tuple(p[q[i]] for i in range(3))
        table[(name[p], name[q])] = name[comp]
    return tuple(name[p] for p in perms), table


def disjoint_union(g1, g2, tags=("A", "B")):
    """Disjoint union of two finite groupoids with tagged element names."""
    def rename(g, tag):
        return {e: f"{tag}.{e}" for e in g.elements}

    n1, n2 = rename(g1, tags[0]), rename(g2, tags[1])
    elements = list(n1.values()) + list(n2.values())
    compose = {}
    inverse = {}
    for g, names in ((g1, n1), (g2, n2)):
        for (a, b), c in g.compose.items():
            compose[(names[a], names[b])] = names[c]
        for a, b in g.inverse.items():
            inverse[names[a]] = names[b]
    return validate_table(elements, compose, inverse)


# ----------------------------------------------------- isotropy and orbits

@dataclass
class IsotropyOrbits:
    isotropy: FiniteGroupoid
    orbits: tuple
    groups: dict  # unit -> FiniteGroupoid (the isotropy group at that unit)


def isotropy_and_orbits(g):
    """Isotropy subgroupoid (a group bundle), the orbit partition, and each
    unit's isotropy group as a standalone groupoid."""
    iso = g.isotropy_elements()
    compose = {(a, b): g.product(a, b) for a in iso for b in iso
               if g.composable(a, b) and g.r(a) == g.s(a) == g.r(b)}
    # composable isotropy pairs share their common unit, so the above
    # restriction is exactly Iso(G)^(2)
    inverse = {a: g.inv(a) for a in iso}
    isotropy = validate_table(iso, compose, inverse)
    groups = {}
    for x in g.units:
        local = tuple(a for a in iso if g.r(a) == x)
        groups[x] = validate_table(
            local,
            {(a, b): g.product(a, b) for a in local for b in local},
            {a: g.inv(a) for a in local})
    return IsotropyOrbits(isotropy, g.orbits(), groups)


# ------------------------------------------------------------ homomorphisms

@dataclass
class GroupoidHom:
    source: FiniteGroupoid
    target: FiniteGroupoid
    mapping: dict

    def __call__(self, x):
        return self.mapping[x]


def check_homomorphism(hom):
    """Verify product preservation; derive and confirm the consequences.

    Raises NotHomomorphism with a witness pair when a product is not
    preserved; when it is, the derived facts (units, r, s, inverses map
    correctly) are theorems and are asserted.
    """
    g, h, f = hom.source, hom.target, hom.mapping
    if set(f) != set(g.elements):
        raise NotHomomorphism(None, "mapping is not total on the source")
    for v in f.values():
        if v not in set(h.elements):
            raise NotHomomorphism(None, f"image {v!r} not in target")
    for (a, b), ab in g.compose.items():
        if not h.composable(f[a], f[b]):
            raise NotHomomorphism((a, b), "image pair not composable")
        if h.product(f[a], f[b]) != f[ab]:
            raise NotHomomorphism((a, b), "product not preserved")
    report = {"is_homomorphism": True}
    for x in g.units:
        if f[x] not in set(h.units):
            raise InternalInconsistency("unit image not a unit", witness=x)
    for a in g.elements:
        if f[g.r(a)] != h.r(f[a]) or f[g.s(a)] != h.s(f[a]):
            raise InternalInconsistency("r/s not intertwined", witness=a)
        if f[g.inv(a)] != h.inv(f[a]):
            raise InternalInconsistency("inverse not preserved", witness=a)
    report["preserves_units"] = True
    report["preserves_range_source"] = True
    report["preserves_inverses"] = True
    report["injective"] = len(set(f.values())) == len(g.elements)
    report["surjective"] = set(f.values()) == set(h.elements)
    return report


@dataclass
class RelationResult:
    relation: FiniteGroupoid
    hom: GroupoidHom
    principal: bool


def relation_of(g):
    """The orbit equivalence relation R(G) on units, the canonical
    surjection onto it, and the principality verdict."""
    pair_name = {}
    for gamma in g.elements:
        pair_name[gamma] = f"({g.r(gamma)},{g.s(gamma)})"
    pairs = sorted(set(pair_name.values()))
    rs = {pair_name[gamma]: (g.r(gamma), g.s(gamma)) for gamma in g.elements}
    compose = {}
    inverse = {}
    for p in pairs:
        x, y = rs[p]
        inverse[p] = f"({y},{x})"
        for q in pairs:
            u, v = rs[q]
            if y == u:
                compose[(p, q)] = f"({x},{v})"
    relation = validate_table(pairs, compose, inverse)
    hom = GroupoidHom(g, relation, dict(pair_name))
    check_homomorphism(hom)
    principal = len(set(pair_name.values())) == len(g.elements)
    if principal != g.is_principal():
        raise InternalInconsistency(
            "principality disagrees with trivial isotropy")
    return RelationResult(relation, hom, principal)


def is_bisection(g, subset):
    """True when r and s are both injective on the subset (discrete
    topology: bisection = bi-injective set)."""
    subset = tuple(subset)
    rs = [g.r(a) for a in subset]
    ss = [g.s(a) for a in subset]
    return len(set(rs)) == len(subset) and len(set(ss)) == len(subset)


def find_isomorphism(g1, g2, node_cap=10 ** 6):
    """An isomorphism g1 -> g2 for principal groupoids, or None.

    Principal finite groupoids are disjoint unions of full relations, so
    matching orbits by size (fingerprint first, deterministic order) gives
    a complete search; node_cap bounds the matching work defensively.
    """
    if not (g1.is_principal() and g2.is_principal()):
        raise NotHomomorphism(
            None, "isomorphism search supports principal groupoids only")
    orbits1 = sorted(g1.orbits(), key=lambda o: (len(o), o))
    orbits2 = sorted(g2.orbits(), key=lambda o: (len(o), o))
    if [len(o) for o in orbits1] != [len(o) for o in orbits2]:
        return None
    if len(g1.elements) != len(g2.elements):
        return None
    unit_map = {}
    nodes = 0
    for o1, o2 in zip(orbits1, orbits2):
        for x, y in zip(o1, o2):
            nodes += 1
            if nodes > node_cap:
                from .errors import SearchCapExceeded
                raise SearchCapExceeded("isomorphism search cap exceeded")
            unit_map[x] = y
    by_pair2 = {(g2.r(a), g2.s(a)): a for a in g2.elements}
    mapping = {}
    for gamma in g1.elements:
        mapping[gamma] = by_pair2[(unit_map[g1.r(gamma)], unit_map[g1.s(gamma)])]
    hom = GroupoidHom(g1, g2, mapping)
    report = check_homomorphism(hom)
    if not (report["injective"] and report["surjective"]):
        raise InternalInconsistency("orbit matching produced a non-bijection")
    return hom
