"""Exact computation with finite etale groupoids and their C*-algebras."""

from .algebra import (AlgebraElement, block_decompose, convolve, expectation,
                      involute, j_map, norms, operator_norm,
                      regular_representation)
from .cartan import (CartanPresentation, alpha_map, is_normalizer,
                     roundtrip_check, twisted_presentation,
                     unique_expectation, validate_presentation, weyl_groupoid)
from .config import RunConfig
from .corpus import corpus_generate, corpus_groupoids
from .equivalence import (EquivalenceBimodule, build_linking, corner_check,
                          g_pairing, h_pairing, identity_bimodule,
                          rectangle_bimodule, validate_bimodule)
from .graphs import (DirectedGraph, SymbolicGraphElement, af_level, ck_check,
                     classify_pair, flow_invariants, graph_structure,
                     semantically_equal, symbolic_convolve, validate_graph)
from .groupoid import (FiniteGroupoid, GroupoidHom, StandardSpec,
                       check_homomorphism, check_lemma_consequences,
                       construct_standard, find_isomorphism, is_bisection,
                       isotropy_and_orbits, relation_of, validate_table)
from .scalars import Cyc
from .structure import (exact_sequence_check, ideal_lattice,
                        invariant_open_sets, is_effective, is_minimal,
                        is_strongly_effective, simplicity_verdict)
from .twists import (CechCocycle, Cocycle2, coboundary, coboundary_solve,
                     pullback_product, raeburn_taylor, trivial_cocycle,
                     twisted_convolve, twisted_involute, validate_cech,
                     validate_cocycle)

__version__ = "0.1.0"
