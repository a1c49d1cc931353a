"""Invariant sets, ideal structure, effectiveness and simplicity.

On a finite discrete groupoid the interior of the isotropy is the whole
isotropy, so effectiveness degenerates to principality; every report
carries that fact, plus the standing convention that finite groupoids are
amenable (orbits are finite), so the full and reduced algebras coincide
and the ideal/simplicity correspondences apply verbatim.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .algebra import block_decompose
from .errors import (InternalInconsistency, NonabelianIsotropyUnsupported,
                     NotInvariant, SearchCapExceeded)
from .groupoid import FiniteGroupoid, validate_table
from .linalg import field_rank

AMENABILITY_NOTE = ("finite groupoids are amenable (all orbits are finite), "
                    "so full and reduced C*-algebras coincide and the ideal "
                    "and simplicity correspondences apply")
EFFECTIVENESS_NOTE = ("finite discrete topology: interior of the isotropy is "
                      "the isotropy itself, so effective == principal")


def invariant_open_sets(g):
    """All invariant subsets of the unit space: exactly the unions of
    orbits, enumerated canonically (every subset is open here)."""
    orbits = g.orbits()
    out = []
    for k in range(len(orbits) + 1):
        for combo in itertools.combinations(range(len(orbits)), k):
            units = tuple(sorted(x for i in combo for x in orbits[i]))
            out.append(units)
    return sorted(out, key=lambda u: (len(u), u))


def is_invariant(g, units):
    units = set(units)
    if not units <= set(g.units):
        return False
    return all(g.r(gamma) in units
               for x in units for gamma in g.source_fiber(x))


def restrict_to_units(g, units):
    """The subgroupoid G U of everything with source (= range) in U."""
    units = set(units)
    if not units:
        return None
    keep = [e for e in g.elements if g.s(e) in units and g.r(e) in units]
    compose = {(a, b): c for (a, b), c in g.compose.items()
               if a in set(keep) and b in set(keep)}
    inverse = {a: g.inv(a) for a in keep}
    return validate_table(keep, compose, inverse)


@dataclass
class ExactSequenceReport:
    invariant_units: tuple
    ideal_dimension: int
    quotient_dimension: int
    total_dimension: int
    inclusion_injective: bool
    restriction_surjective: bool
    composite_zero: bool
    middle_exact: bool
    notes: tuple = (AMENABILITY_NOTE,)

    def holds(self):
        return (self.inclusion_injective and self.restriction_surjective
                and self.composite_zero and self.middle_exact)


def exact_sequence_check(g, units):
    """Build G U and G W (W the complement), the inclusion and restriction
    as linear maps, and verify exactness by exact rank computations."""
    if not is_invariant(g, units):
        raise NotInvariant(f"{sorted(units)!r} is not an invariant unit set")
    units = set(units)
    complement = [x for x in g.units if x not in units]
    inner = [e for e in g.elements if g.s(e) in units]
    outer = [e for e in g.elements if g.s(e) not in units]

    one, zero = Fraction(1), Fraction(0)
    n = len(g.elements)
    index = {e: i for i, e in enumerate(g.elements)}
    # inclusion C(G U) -> C(G): basis vectors of the inner part
    inclusion = [[one if index[e] == j else zero for j in range(n)]
                 for e in inner]
    inclusion_cols = [[row[j] for row in inclusion] for j in range(n)]
    # restriction C(G) -> C(G W): coordinate projection
    restriction = [[one if index[e] == j else zero for j in range(n)]
                   for e in outer]

    rank_i = field_rank(inclusion, n) if inner else 0
    rank_p = field_rank(restriction, n) if outer else 0
    composite_zero = all(
        sum(restriction[i][j] * inclusion_cols[j][k] for j in range(n)) == 0
        for i in range(len(outer)) for k in range(len(inner))) \
        if inner and outer else True
    kernel_dim = n - rank_p
    report = ExactSequenceReport(
        invariant_units=tuple(sorted(units)),
        ideal_dimension=len(inner),
        quotient_dimension=len(outer),
        total_dimension=n,
        inclusion_injective=rank_i == len(inner),
        restriction_surjective=rank_p == len(outer),
        composite_zero=composite_zero,
        middle_exact=kernel_dim == rank_i)
    if not report.holds():
        raise InternalInconsistency(
            "exact sequence failed on an invariant set",
            units=sorted(units))
    if complement:
        restrict_to_units(g, complement)  # must itself validate
    return report


def is_effective(g):
    """Effective == principal for finite discrete groupoids."""
    return g.is_principal()


def is_strongly_effective(g):
    """G W effective for every closed invariant W, computed directly."""
    for units in invariant_open_sets(g):
        complement = [x for x in g.units if x not in set(units)]
        if not complement:
            continue
        sub = restrict_to_units(g, complement)
        if not sub.is_principal():
            return False
    return True


def is_minimal(g):
    """A single (automatically dense) orbit; cross-checked against the
    invariant-set count."""
    single_orbit = len(g.orbits()) == 1
    two_sets = len(invariant_open_sets(g)) == 2
    if single_orbit != two_sets:
        raise InternalInconsistency("orbit count disagrees with invariant sets")
    return single_orbit


def _abelian(group):
    return all(group.product(a, b) == group.product(b, a)
               for a, b in itertools.product(group.elements, group.elements))


def _simple_summand_count(g, decomp):
    """Number of simple blocks after splitting each orbit's group algebra
    into characters; abelian isotropy only."""
    total = 0
    for blk in decomp.blocks:
        iso = blk.isotropy_elements
        table = {(a, b): g.product(a, b) for a in iso for b in iso}
        group = validate_table(iso, table, {a: g.inv(a) for a in iso})
        if not _abelian(group):
            raise NonabelianIsotropyUnsupported(
                "ideal counting for nonabelian isotropy is not implemented",
                orbit=blk.orbit)
        total += len(iso)
    return total


@dataclass
class SimplicityReport:
    simple: bool
    effective: bool
    minimal: bool
    block_count: int
    single_trivial_block: bool
    notes: tuple = (AMENABILITY_NOTE, EFFECTIVENESS_NOTE)


def simplicity_verdict(g):
    """simple == effective and minimal; cross-validated against the block
    decomposition (exactly one block with trivial isotropy)."""
    effective = is_effective(g)
    minimal = is_minimal(g)
    verdict = effective and minimal
    decomp = block_decompose(g)
    single = (len(decomp.blocks) == 1
              and len(decomp.blocks[0].isotropy_elements) == 1)
    if single != verdict:
        raise InternalInconsistency(
            "simplicity verdict disagrees with the block decomposition",
            verdict=verdict, blocks=len(decomp.blocks))
    return SimplicityReport(verdict, effective, minimal, len(decomp.blocks),
                            single)


@dataclass
class IdealLatticeReport:
    invariant_sets: tuple          # unit tuples
    ideal_dimensions: dict         # units -> dim I_U
    quotient_dimensions: dict      # units -> dim C(G W)
    invariant_set_count: int
    ideal_count: int
    simple_summands: int
    bijective: bool
    strongly_effective: bool
    principal: bool
    notes: tuple = (AMENABILITY_NOTE,)


def ideal_lattice(g):
    """Pair each invariant open set U with its ideal I_U; count all ideals
    of the block-decomposed algebra; assert the bijectivity criterion."""
    decomp = block_decompose(g)
    sets = invariant_open_sets(g)
    ideal_dims = {}
    quotient_dims = {}
    supports = set()
    for units in sets:
        uset = set(units)
        inner = [e for e in g.elements if g.s(e) in uset]
        ideal_dims[units] = len(inner)
        quotient_dims[units] = len(g.elements) - len(inner)
        support = tuple(sorted(inner))
        if support in supports:
            raise InternalInconsistency(
                "two invariant sets induced the same ideal", units=units)
        supports.add(support)
    simple_summands = _simple_summand_count(g, decomp)
    ideal_count = 2 ** simple_summands
    strongly_effective = is_strongly_effective(g)
    principal = g.is_principal()
    bijective = len(sets) == ideal_count
    if bijective != strongly_effective or strongly_effective != principal:
        raise InternalInconsistency(
            "ideal bijectivity, strong effectiveness and principality must "
            "agree on finite groupoids",
            bijective=bijective, strongly_effective=strongly_effective,
            principal=principal)
    return IdealLatticeReport(
        invariant_sets=tuple(sets),
        ideal_dimensions=ideal_dims,
        quotient_dimensions=quotient_dims,
        invariant_set_count=len(sets),
        ideal_count=ideal_count,
        simple_summands=simple_summands,
        bijective=bijective,
        strongly_effective=strongly_effective,
        principal=principal)


def locally_contracting_witness(g, node_cap=10 ** 6):
    """Search for (W, U) with W a nonempty unit set, U a bisection with
    W inside s(U) and r(U W) strictly contained in W.

    No finite groupoid admits one: U restricted to sources in W is a
    bijection of W onto its image, so |r(U W)| = |W| and strict
    containment is impossible.  The search enumerates r-injective sections
    over W by backtracking anyway and returns the witness it never finds;
    node_cap bounds the enumeration defensively.
    """
    units = list(g.units)
    nodes = 0
    for size in range(1, len(units) + 1):
        for w_tuple in itertools.combinations(units, size):
            w = set(w_tuple)
            fibers = [tuple(gamma for gamma in g.source_fiber(x)) for x in w_tuple]

            def backtrack(i, used_ranges, chosen):
                nonlocal nodes
                nodes += 1
                if nodes > node_cap:
                    raise SearchCapExceeded(
                        "locally-contracting search exceeded the node cap")
                if i == len(fibers):
                    image = {g.r(gamma) for gamma in chosen}
                    if image < w:
                        return tuple(chosen)
                    return None
                for gamma in fibers[i]:
                    rng = g.r(gamma)
                    if rng in used_ranges:
                        continue
                    if rng not in w:
                        # the image can only stay inside w if every range is
                        # in w; prune anything leaving w
                        continue
                    used_ranges.add(rng)
                    chosen.append(gamma)
                    hit = backtrack(i + 1, used_ranges, chosen)
                    if hit:
                        return hit
                    chosen.pop()
                    used_ranges.remove(rng)
                return None

            witness = backtrack(0, set(), [])
            if witness:
                return {"units": w_tuple, "bisection": witness}
    return None
