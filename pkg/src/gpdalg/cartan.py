"""Cartan presentations and the finite-scale Weyl reconstruction.

A CartanPresentation is a finite-dimensional *-algebra given by exact
structure constants, with a distinguished abelian diagonal B spanned by a
subset of the basis and a family of normalizers that generates the
off-diagonal part.  Validation checks associativity, the involution,
star-positivity (the trace form of the left regular representation must
be positive definite, which is exactly the condition for the algebra to
be a C*-algebra), maximal abelianness of B via its commutant, and
regularity of the normalizer family.

The reconstruction walks Renault's construction at finite scale:

* characters of B are its minimal idempotents;
* on the finite (discrete) spectrum the germ relation for the Weyl
  groupoid collapses to equality of the induced character maps at the
  point, so germs are pairs of characters and the Weyl groupoid is a
  disjoint union of full relations over the corner-support blocks;
* the twist datum is carried by positive rays of compressed columns
  e_psi n e_phi; choosing one section per germ (first in a canonical
  order, rescaled so its leading coefficient is positive) turns the ray
  data into a 2-cocycle: sigma(a, b) is the phase of the exact scalar
  relating n_a n_b to n_{ab} on the common character.

Sections at the units are the minimal idempotents themselves, which makes
the extracted cocycle normalized on the nose.  Germs at characters phi
with phi(n* n) = 0 are excluded, matching the strict positivity in the
domain condition; scaling a section by a positive real changes nothing
because the relating scalars form an exact (modulus included) cocycle and
only their phases are kept.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import numpy as np

from .errors import (CartanValidationError, DiagonalNotSplit,
                     InternalInconsistency, NotMaximalAbelian, NotNormalizer,
                     NotPrincipal, NotRegular, NotStarAlgebra, NotStarPositive,
                     ReconstructionMismatch)
from .groupoid import find_isomorphism, validate_table
from .scalars import Cyc, as_scalar, phase_exponent, scalar_is_zero
from .twists import (Cocycle2, cocycle_inverse, coboundary_solve,
                     pullback_product, validate_cocycle)


@dataclass(frozen=True, eq=False)
class CartanPresentation:
    basis: tuple               # basis labels
    product: dict              # (a, b) -> {c: Cyc}, sparse
    star: dict                 # a -> {c: Cyc}
    diagonal: tuple            # subset of basis spanning B
    normalizers: tuple         # tuple of vectors (dict label -> Cyc)
    field: int = 4             # scalar field order (4 = Gaussian rationals)


# ------------------------------------------------------------- vector sugar

def _vzero():
    return {}


def _vbasis(label, n=4):
    return {label: Cyc.one(n)}


def _vadd(u, v):
    out = dict(u)
    for k, x in v.items():
        out[k] = out[k] + x if k in out else x
    return {k: x for k, x in out.items() if not scalar_is_zero(x)}


def _vsub(u, v):
    return _vadd(u, {k: -x for k, x in v.items()})


def _vscale(u, c):
    return {k: x * c for k, x in u.items() if not scalar_is_zero(x * c)}


def _veq(u, v):
    u = {k: x for k, x in u.items() if not scalar_is_zero(x)}
    v = {k: x for k, x in v.items() if not scalar_is_zero(x)}
    return set(u) == set(v) and all(u[k] == v[k] for k in u)


def vec_mul(p, u, v):
    out = {}
    for a, x in u.items():
        if scalar_is_zero(x):
            continue
        for b, y in v.items():
            if scalar_is_zero(y):
                continue
            entry = p.product.get((a, b))
            if not entry:
                continue
            xy = x * y
            for c, z in entry.items():
                term = xy * z
                out[c] = out[c] + term if c in out else term
    return {k: x for k, x in out.items() if not scalar_is_zero(x)}


def vec_star(p, u):
    out = {}
    for a, x in u.items():
        xc = x.conjugate() if isinstance(x, Cyc) else as_scalar(x).conjugate()
        for c, z in p.star[a].items():
            term = xc * z
            out[c] = out[c] + term if c in out else term
    return {k: x for k, x in out.items() if not scalar_is_zero(x)}


# --------------------------------------------------------------- validation

@dataclass
class CartanData:
    presentation: CartanPresentation
    identity: dict
    characters: tuple          # minimal idempotent vectors of B
    corner_nonzero: set        # (i, j) character index pairs with e_i A e_j != 0
    normalizer_hits: set       # (i, j) pairs hit by some family member


def _check_star_algebra(p):
    labels = p.basis
    for a in labels:
        if a not in p.star:
            raise NotStarAlgebra(f"missing star of basis element {a!r}")
        double = vec_star(p, p.star[a])
        if not _veq(double, _vbasis(a, p.field)):
            raise NotStarAlgebra(f"star not involutive at {a!r}")
    for a, b in itertools.product(labels, labels):
        ab = p.product.get((a, b), {})
        lhs = vec_star(p, ab)
        rhs = vec_mul(p, p.star[b], p.star[a])
        if not _veq(lhs, rhs):
            raise NotStarAlgebra(f"star not anti-multiplicative at ({a!r}, {b!r})")
    for a, b, c in itertools.product(labels, labels, labels):
        lhs = vec_mul(p, p.product.get((a, b), {}), _vbasis(c, p.field))
        rhs = vec_mul(p, _vbasis(a, p.field), p.product.get((b, c), {}))
        if not _veq(lhs, rhs):
            raise NotStarAlgebra(
                f"structure constants not associative at ({a!r},{b!r},{c!r})")


def _find_identity(p):
    """Solve u . e_a = e_a = e_a . u for all a; the identity must exist and
    lie in the span of the diagonal."""
    from .linalg import field_solve
    labels = p.basis
    n = len(labels)
    idx = {a: i for i, a in enumerate(labels)}
    rows = []
    rhs = []
    zero, one = Cyc.zero(p.field), Cyc.one(p.field)
    for a in labels:
        for target in labels:
            row = [zero] * n
            for b in labels:
                row[idx[b]] = p.product.get((b, a), {}).get(target, zero)
            rows.append(row)
            rhs.append(one if target == a else zero)
    sol = field_solve(rows, rhs)
    if sol is None:
        raise NotStarAlgebra("the algebra has no identity element")
    identity = {labels[i]: sol[i] for i in range(n)
                if not scalar_is_zero(sol[i])}
    for a in labels:
        if not (_veq(vec_mul(p, identity, _vbasis(a, p.field)), _vbasis(a, p.field))
                and _veq(vec_mul(p, _vbasis(a, p.field), identity),
                         _vbasis(a, p.field))):
            raise NotStarAlgebra("identity candidate failed verification")
    if set(identity) - set(p.diagonal):
        raise CartanValidationError("identity does not lie in the diagonal")
    return identity


def _check_positivity(p):
    """tr(L_{x* x}) > 0 for x != 0: the Gram matrix H_{ab} = tr(L_{a* b})
    must be positive definite; exactly the properness of the involution."""
    labels = p.basis
    n = len(labels)

    def trace_of_mult(x):
        total = Cyc.zero(p.field)
        for k in labels:
            total = total + vec_mul(p, x, _vbasis(k, p.field)).get(
                k, Cyc.zero(p.field))
        return total

    gram = [[trace_of_mult(vec_mul(p, p.star[a], _vbasis(b, p.field)))
             for b in labels] for a in labels]
    off_diagonal = any(not scalar_is_zero(gram[i][j])
                       for i in range(n) for j in range(n) if i != j)
    if not off_diagonal:
        for i in range(n):
            if not gram[i][i].is_positive_real():
                raise NotStarPositive(
                    f"trace form degenerate at {labels[i]!r}")
        return
    # dense Hermitian LDL: all pivots must be positive real
    m = [row[:] for row in gram]
    for k in range(n):
        pivot = m[k][k]
        if scalar_is_zero(pivot) or not pivot.is_positive_real():
            raise NotStarPositive("trace form is not positive definite")
        for i in range(k + 1, n):
            factor = m[i][k] / pivot
            for j in range(k, n):
                m[i][j] = m[i][j] - factor * m[k][j]


def _diagonal_fast_path(p):
    """Diagonal basis elements that are orthogonal self-adjoint idempotents
    summing to the identity are the characters themselves."""
    n = p.field
    for d in p.diagonal:
        if not _veq(p.star[d], _vbasis(d, n)):
            return None
        if not _veq(p.product.get((d, d), {}), _vbasis(d, n)):
            return None
    for d, e in itertools.permutations(p.diagonal, 2):
        if p.product.get((d, e), {}):
            return None
    total = _vzero()
    for d in p.diagonal:
        total = _vadd(total, _vbasis(d, n))
    if not _veq(total, _find_identity(p)):
        return None
    return tuple(_vbasis(d, n) for d in sorted(p.diagonal))


def _sub_basis(p, vectors):
    """An exact linearly independent subset spanning the given vectors."""
    from .linalg import field_echelon
    labels = sorted({a for v in vectors for a in v})
    zero = Cyc.zero(p.field)
    chosen = []
    rows = []
    for v in vectors:
        if not v:
            continue
        candidate = rows + [[v.get(a, zero) for a in labels]]
        _, pivots = field_echelon(candidate, len(labels))
        if len(pivots) > len(rows):
            rows = candidate
            chosen.append(v)
    return chosen, labels


def _split_diagonal(p, identity):
    """Minimal idempotents of B by refining through the self-adjoint parts
    of the diagonal generators: numeric eigenvalues guide Lagrange
    interpolation, and every idempotent identity is re-verified exactly."""
    fast = _diagonal_fast_path(p)
    if fast is not None:
        return fast
    from .linalg import field_solve
    n = p.field
    half = Fraction(1, 2)
    generators = []
    for d in p.diagonal:
        e = _vbasis(d, n)
        es = vec_star(p, e)
        generators.append(_vscale(_vadd(e, es), Cyc.rational(half, n)))
        generators.append(_vscale(_vsub(e, es), Cyc.gaussian(0, -half, n)))

    idempotents = [identity]
    dim_b = len(p.diagonal)

    for h in generators:
        if len(idempotents) == dim_b:
            break
        refined = []
        for e in idempotents:
            corner = [vec_mul(p, e, _vbasis(d, n)) for d in p.diagonal]
            basis, labels = _sub_basis(p, corner)
            if len(basis) <= 1:
                refined.append(e)
                continue
            zero = Cyc.zero(n)
            he = vec_mul(p, vec_mul(p, e, h), e)
            # exact matrix of multiplication by he on e.B
            columns = []
            for v in basis:
                image = vec_mul(p, he, v)
                rows = [[b.get(a, zero) for b in basis] for a in labels]
                rhs = [image.get(a, zero) for a in labels]
                coords = field_solve(rows, rhs)
                if coords is None:
                    raise DiagonalNotSplit("e.B is not closed under products")
                columns.append(coords)
            mat = np.array([[complex(columns[j][i].to_complex())
                             for j in range(len(basis))]
                            for i in range(len(basis))])
            candidates = []
            for lam in np.linalg.eigvals(mat):
                if abs(lam.imag) > 1e-6:
                    raise DiagonalNotSplit(
                        "self-adjoint diagonal generator has non-real "
                        "spectrum; the involution data is inconsistent")
                lam_r = Fraction(float(lam.real)).limit_denominator(10 ** 9)
                if lam_r not in candidates:
                    candidates.append(lam_r)
            if len(candidates) <= 1:
                refined.append(e)
                continue
            pieces = []
            for lam in candidates:
                piece = e
                for other in candidates:
                    if other == lam:
                        continue
                    scale = Cyc.rational(Fraction(1, 1) / (lam - other), n)
                    shifted = _vsub(he, _vscale(e, Cyc.rational(other, n)))
                    piece = _vscale(vec_mul(p, piece, shifted), scale)
                pieces.append(piece)
            pieces = [piece for piece in pieces if piece]
            total = _vzero()
            for piece in pieces:
                if not _veq(vec_mul(p, piece, piece), piece):
                    raise DiagonalNotSplit(
                        "eigenvalues of the diagonal are not rational over "
                        "the coefficient field")
                total = _vadd(total, piece)
            if not _veq(total, e):
                raise DiagonalNotSplit("spectral pieces do not resum")
            refined.extend(pieces)
        idempotents = refined
    if len(idempotents) != dim_b:
        raise DiagonalNotSplit(
            f"found {len(idempotents)} minimal idempotents for a diagonal "
            f"of dimension {dim_b}")
    for e, f in itertools.permutations(idempotents, 2):
        if vec_mul(p, e, f):
            raise DiagonalNotSplit("idempotent family is not orthogonal")
    key = [tuple(sorted((a, v.n, v.c) for a, v in e.items()))
           for e in idempotents]
    return tuple(e for _, e in sorted(zip(key, idempotents)))


def is_normalizer(p, vector):
    """n B n* and n* B n both inside B (support inside the diagonal)."""
    vs = vec_star(p, vector)
    for d in p.diagonal:
        b = _vbasis(d, p.field)
        for conj in (vec_mul(p, vec_mul(p, vector, b), vs),
                     vec_mul(p, vec_mul(p, vs, b), vector)):
            if set(conj) - set(p.diagonal):
                return False
    return True


def validate_presentation(p):
    """Full Cartan-pair validation; returns the derived CartanData."""
    if len(set(p.basis)) != len(p.basis) or not p.basis:
        raise CartanValidationError("basis labels must be distinct, nonempty")
    if not set(p.diagonal) <= set(p.basis):
        raise CartanValidationError("diagonal must be a subset of the basis")
    _check_star_algebra(p)
    for d, e in itertools.product(p.diagonal, p.diagonal):
        if not _veq(p.product.get((d, e), {}), p.product.get((e, d), {})):
            raise CartanValidationError("diagonal is not abelian")
    for d in p.diagonal:
        if set(p.star[d]) - set(p.diagonal):
            raise CartanValidationError("diagonal not closed under star")
    identity = _find_identity(p)
    _check_positivity(p)
    chars = _split_diagonal(p, identity)
    k = len(chars)

    # corners e_i A e_j: dimensions via exact rank over the field
    from .linalg import field_rank
    corner_nonzero = set()
    zero = Cyc.zero(p.field)
    for i, j in itertools.product(range(k), range(k)):
        vectors = []
        for a in p.basis:
            v = vec_mul(p, vec_mul(p, chars[i], _vbasis(a, p.field)), chars[j])
            if v:
                vectors.append([v.get(b, zero) for b in p.basis])
        if not vectors:
            continue
        rank = field_rank(vectors, len(p.basis))
        if rank > 1:
            raise NotMaximalAbelian(
                f"corner ({i}, {j}) has dimension {rank} > 1")
        corner_nonzero.add((i, j))
    for i in range(k):
        if (i, i) not in corner_nonzero:
            raise InternalInconsistency("diagonal corner vanished")
    # commutant(B) = sum of diagonal corners; masa <=> all are lines and
    # the character count matches dim B
    if k != len(p.diagonal):
        raise NotMaximalAbelian(
            "character count differs from the diagonal dimension")

    hits = set()
    for vector in p.normalizers:
        if not is_normalizer(p, vector):
            raise NotNormalizer("listed family member fails the normalizer "
                                "condition")
        for i, j in itertools.product(range(k), range(k)):
            if vec_mul(p, vec_mul(p, chars[i], vector), chars[j]):
                hits.add((i, j))
    missing = {(i, j) for (i, j) in corner_nonzero if i != j} - hits
    if missing:
        raise NotRegular(
            f"normalizer family misses corners {sorted(missing)!r}")
    return CartanData(p, identity, chars, corner_nonzero, hits)


# ------------------------------------------------------------ alpha and E

def char_value(p, char, vector):
    """phi(b): the scalar with b . e_phi = phi(b) e_phi, for b in B."""
    w = vec_mul(p, vector, char)
    if not w:
        return Cyc.zero(p.field)
    label, coeff = next(iter(sorted(char.items())))
    lam = w.get(label, Cyc.zero(p.field)) / coeff
    if not _veq(w, _vscale(char, lam)):
        raise InternalInconsistency("argument of char_value was not in B")
    return lam


def alpha_map(p, vector, data=None):
    """The partial bijection of characters induced by a normalizer:
    defined where phi(n* n) > 0, verified via the defining identity
    alpha_n(phi)(n b n*) = phi(b n* n) on the diagonal basis."""
    if not is_normalizer(p, vector):
        raise NotNormalizer("alpha_map needs a normalizer")
    data = data or validate_presentation(p)
    chars = data.characters
    vs = vec_star(p, vector)
    nstar_n = vec_mul(p, vs, vector)
    n_nstar = vec_mul(p, vector, vs)
    mapping = {}
    for i, phi in enumerate(chars):
        val = char_value(p, phi, nstar_n)
        if scalar_is_zero(val):
            continue
        if not val.is_positive_real():
            raise NotStarPositive("phi(n* n) is not positive")
        target = None
        for j, psi in enumerate(chars):
            if not scalar_is_zero(char_value(p, psi, n_nstar)):
                # candidate range point: check the defining identity
                ok = True
                for d in p.diagonal:
                    b = _vbasis(d, p.field)
                    lhs = char_value(p, psi,
                                     vec_mul(p, vec_mul(p, vector, b), vs))
                    rhs = char_value(p, phi, vec_mul(p, b, nstar_n))
                    if lhs != rhs:
                        ok = False
                        break
                if ok:
                    if target is not None:
                        raise InternalInconsistency(
                            "alpha has two candidate images")
                    target = j
        if target is None:
            raise InternalInconsistency("alpha image not found")
        mapping[i] = target
    return mapping


# ------------------------------------------------------------------- Weyl

@dataclass
class WeylOutput:
    groupoid: object           # reconstructed FiniteGroupoid
    cocycle: object            # extracted Cocycle2 on it
    characters: tuple          # minimal idempotent vectors, canonical order
    sections: dict             # groupoid element -> section vector
    germ_names: dict           # (i, j) character pair -> element name


def weyl_groupoid(p, reverse_sections=False):
    """Reconstruct the Weyl groupoid and the twist cocycle of a validated
    Cartan presentation."""
    data = validate_presentation(p)
    chars = data.characters
    k = len(chars)
    basis_order = {a: t for t, a in enumerate(p.basis)}

    family = list(p.normalizers)
    if reverse_sections:
        family = family[::-1]

    def leading(v):
        return min(v, key=lambda a: basis_order[a])

    sections = {}
    germ_names = {}
    elements = []
    for i, j in sorted(data.corner_nonzero):
        name = f"({i},{j})"
        germ_names[(i, j)] = name
        elements.append(name)
        if i == j:
            sections[name] = chars[i]
            continue
        section = None
        for vector in family:
            m = vec_mul(p, vec_mul(p, chars[i], vector), chars[j])
            if m:
                c = m[leading(m)]
                section = _vscale(m, c.conjugate())
                break
        if section is None:
            raise NotRegular(f"no section for germ ({i}, {j})")
        sections[name] = section

    compose = {}
    inverse = {}
    pair_of = {name: ij for ij, name in germ_names.items()}
    for name, (i, j) in pair_of.items():
        inverse[name] = germ_names.get((j, i))
        if inverse[name] is None:
            raise InternalInconsistency("corner support is not symmetric")
        for name2, (i2, j2) in pair_of.items():
            if j == i2:
                target = germ_names.get((i, j2))
                if target is None:
                    raise InternalInconsistency(
                        "corner support is not transitive")
                compose[(name, name2)] = target
    gpd = validate_table(elements, compose, inverse)

    n_field = p.field
    exponents = {}
    for (a, b), ab in gpd.compose.items():
        w = vec_mul(p, sections[a], sections[b])
        target = sections[ab]
        label = leading(target)
        c = w.get(label, Cyc.zero(p.field)) / target[label]
        if not _veq(w, _vscale(target, c)):
            raise InternalInconsistency(
                "section product is not proportional to the target section",
                witness=(a, b))
        e = phase_exponent(c, n_field)
        if e is None:
            raise ReconstructionMismatch(
                "section phases are not roots of unity in the scalar field",
                witness=(a, b))
        exponents[(a, b)] = e

    shared = n_field
    for e in exponents.values():
        shared = gcd(shared, e)
    order = n_field // shared if shared else 1
    reduced = {pair: (e // shared) % order if shared else 0
               for pair, e in exponents.items()}
    cocycle = validate_cocycle(gpd, reduced, order)
    return WeylOutput(gpd, cocycle, chars, sections, germ_names)


# ------------------------------------------------------ unique expectation

def unique_expectation(p, data=None):
    """The conditional expectation A -> B with E|B = id and the bimodule
    property: solved structurally and certified unique.

    The solution is E(x) = sum over characters of e_phi x e_phi (each
    diagonal corner is a line through e_phi, so this lands in B).  The
    bimodule constraints on the minimal idempotents pin every component of
    any solution, so the homogeneous system only has zero; both facts are
    checked exactly.
    """
    data = data or validate_presentation(p)
    chars = data.characters

    def expect(vector):
        out = _vzero()
        for phi in chars:
            out = _vadd(out, vec_mul(p, vec_mul(p, phi, vector), phi))
        return out

    table = {a: expect(_vbasis(a, p.field)) for a in p.basis}
    for value in table.values():
        if set(value) - set(p.diagonal):
            raise InternalInconsistency("expectation does not land in B")
    for d in p.diagonal:
        if not _veq(table[d], _vbasis(d, p.field)):
            raise InternalInconsistency("expectation does not fix B")

    def apply(vector):
        out = _vzero()
        for a, c in vector.items():
            out = _vadd(out, _vscale(table[a], c))
        return out

    for phi, psi in itertools.product(chars, chars):
        for a in p.basis:
            lhs = vec_mul(p, vec_mul(p, phi, apply(_vbasis(a, p.field))), psi)
            rhs = apply(vec_mul(p, vec_mul(p, phi, _vbasis(a, p.field)), psi))
            if not _veq(lhs, rhs):
                raise InternalInconsistency(
                    "expectation fails the bimodule property")

    # uniqueness: a solution of the homogeneous system vanishes because
    # e_phi x e_phi = c e_phi forces each character component to zero
    for i, phi in enumerate(chars):
        for a in p.basis:
            corner = vec_mul(p, vec_mul(p, phi, _vbasis(a, p.field)), phi)
            if corner and set(corner) - set(phi):
                lab, coeff = next(iter(sorted(phi.items())))
                lam = corner.get(lab, Cyc.zero(p.field)) / coeff
                if not _veq(corner, _vscale(phi, lam)):
                    raise InternalInconsistency(
                        "diagonal corner is not a line")
    return {"solution": table, "unique": True, "solutions_found": 1}


# --------------------------------------------------------------- roundtrip

def twisted_presentation(g, sigma):
    """The twisted convolution algebra of (g, sigma) as a Cartan
    presentation: basis the groupoid elements, diagonal the units,
    normalizer family the basis indicators."""
    n_field = sigma.scalar_field() or 4
    product = {}
    for (a, b), ab in g.compose.items():
        product[(a, b)] = {ab: as_scalar(sigma.value((a, b)), n_field)}
    star = {}
    for a in g.elements:
        inv = g.inv(a)
        star[a] = {inv: as_scalar(sigma.value((a, inv)), n_field).conjugate()}
    normalizers = tuple({a: Cyc.one(n_field)} for a in g.elements)
    return CartanPresentation(tuple(g.elements), product, star,
                              tuple(g.units), normalizers, n_field)


@dataclass
class RoundtripReport:
    isomorphism: dict
    extracted_order: int
    cocycle_class_matches: bool
    coboundary_witness: dict
    expectation_unique: bool


def roundtrip_check(g, sigma, reverse_sections=False):
    """Build the twisted algebra of (g, sigma), reconstruct, and verify:
    the Weyl groupoid is isomorphic to g and the extracted cocycle is
    cohomologous to sigma pulled back along the isomorphism."""
    if not g.is_principal():
        raise NotPrincipal(
            "the reconstruction theorem hypothesis needs an effective "
            "(here: principal) groupoid")
    if sigma.order == 0:
        raise ReconstructionMismatch("roundtrip needs a finite-order cocycle")
    presentation = twisted_presentation(g, sigma)
    out = weyl_groupoid(presentation, reverse_sections=reverse_sections)
    hom = find_isomorphism(g, out.groupoid)
    if hom is None:
        raise ReconstructionMismatch(
            "reconstructed groupoid is not isomorphic to the input")
    pulled = {}
    for (a, b) in g.compose:
        pulled[(a, b)] = out.cocycle.values[(hom(a), hom(b))]
    pulled_cocycle = validate_cocycle(g, pulled, out.cocycle.order)
    difference = pullback_product(cocycle_inverse(sigma), pulled_cocycle)
    witness = coboundary_solve(difference)
    if witness is None:
        raise ReconstructionMismatch(
            "extracted cocycle is not cohomologous to the input")
    expectation = unique_expectation(presentation)
    return RoundtripReport(dict(hom.mapping), out.cocycle.order, True,
                           witness, expectation["unique"])
