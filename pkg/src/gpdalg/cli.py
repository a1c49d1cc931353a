"""Batch command-line surface.

Every command reads documents, runs one library operation, and prints a
JSON report to standard output.  Exit codes: 0 success, 1 usage error,
2 domain error (the error report carries the witness verbatim).
"""

from __future__ import annotations

import argparse
import json
import sys

from . import documents as doc
from .algebra import AlgebraElement, convolve, expectation, j_map, norms
from .cartan import roundtrip_check, unique_expectation, weyl_groupoid
from .config import RunConfig
from .corpus import corpus_generate
from .equivalence import build_linking, corner_check, validate_bimodule
from .errors import GpdError
from .graphs import af_level, ck_check, classify_pair, flow_invariants, \
    graph_structure
from .groupoid import check_lemma_consequences, isotropy_and_orbits, \
    relation_of
from .structure import ideal_lattice, invariant_open_sets, simplicity_verdict
from .twists import coboundary_solve, raeburn_taylor, twisted_convolve


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _build_parser():
    parser = _Parser(prog="gpdalg", description=__doc__)
    parser.add_argument("--config", help="path to a run-config JSON file")
    parser.add_argument("--seed", type=int, default=0,
                        help="seed for randomized commands")
    parser.add_argument("--strict", action="store_true",
                        help="reject unknown document fields")
    parser.add_argument("--output", help="also write the report to a file")
    groups = parser.add_subparsers(dest="group", required=True)

    gpd = groups.add_parser("gpd").add_subparsers(dest="command", required=True)
    for name in ("validate", "analyze", "ideals", "simple"):
        sub = gpd.add_parser(name)
        sub.add_argument("groupoid")

    alg = groups.add_parser("alg").add_subparsers(dest="command", required=True)
    sub = alg.add_parser("norm")
    sub.add_argument("groupoid")
    sub.add_argument("element")
    sub = alg.add_parser("convolve")
    sub.add_argument("groupoid")
    sub.add_argument("left")
    sub.add_argument("right")
    sub = alg.add_parser("expect")
    sub.add_argument("groupoid")
    sub.add_argument("element")

    graph = groups.add_parser("graph").add_subparsers(dest="command",
                                                      required=True)
    sub = graph.add_parser("validate")
    sub.add_argument("graph")
    sub = graph.add_parser("af")
    sub.add_argument("graph")
    sub.add_argument("level", type=int)
    sub = graph.add_parser("ck")
    sub.add_argument("graph")
    sub = graph.add_parser("structure")
    sub.add_argument("graph")
    sub = graph.add_parser("flow")
    sub.add_argument("matrix_a")
    sub.add_argument("matrix_b", nargs="?")

    twist = groups.add_parser("twist").add_subparsers(dest="command",
                                                      required=True)
    sub = twist.add_parser("validate")
    sub.add_argument("groupoid")
    sub.add_argument("cocycle")
    sub = twist.add_parser("convolve")
    sub.add_argument("groupoid")
    sub.add_argument("cocycle")
    sub.add_argument("left")
    sub.add_argument("right")
    sub = twist.add_parser("coboundary")
    sub.add_argument("groupoid")
    sub.add_argument("cocycle")
    sub = twist.add_parser("raeburn-taylor")
    sub.add_argument("cech")

    equiv = groups.add_parser("equiv").add_subparsers(dest="command",
                                                      required=True)
    for name in ("validate", "link", "corners"):
        sub = equiv.add_parser(name)
        sub.add_argument("bimodule")

    cartan = groups.add_parser("cartan").add_subparsers(dest="command",
                                                        required=True)
    sub = cartan.add_parser("weyl")
    sub.add_argument("cartan")
    sub = cartan.add_parser("roundtrip")
    sub.add_argument("groupoid")
    sub.add_argument("cocycle")

    corpus = groups.add_parser("corpus").add_subparsers(dest="command",
                                                        required=True)
    sub = corpus.add_parser("generate")
    sub.add_argument("--count", type=int, default=10)
    sub.add_argument("--max-elements", type=int, default=32)
    sub.add_argument("--kind", action="append", dest="kinds",
                     choices=("groupoid", "graph"))
    return parser


def _load(args, path, kind):
    document = doc.load_path(path, strict=args.strict)
    if document.kind != kind:
        from .errors import SchemaError
        raise SchemaError("kind", f"expected a {kind} document, "
                                  f"got {document.kind}")
    return document


def _groupoid(args, path):
    return doc.groupoid_from_payload(_load(args, path, "groupoid").payload)


def _element(args, path, groupoid):
    payload = _load(args, path, "algebra-element").payload
    return doc.element_from_payload(payload, groupoid)


def _cocycle(args, path, groupoid):
    return doc.cocycle_from_payload(_load(args, path, "cocycle").payload,
                                    groupoid)


def _handle_gpd(args, config):
    g = _groupoid(args, args.groupoid)
    if args.command == "validate":
        return {"valid": True, "elements": len(g), "units": len(g.units)}
    if args.command == "analyze":
        info = isotropy_and_orbits(g)
        rel = relation_of(g)
        return {
            "elements": len(g),
            "units": len(g.units),
            "orbits": [list(o) for o in info.orbits],
            "orbit_count": len(info.orbits),
            "principal": rel.principal,
            "isotropy_orders": {x: len(grp) for x, grp in info.groups.items()},
            "lemma_checks": check_lemma_consequences(g),
            "invariant_open_sets": len(invariant_open_sets(g)),
        }
    if args.command == "ideals":
        rep = ideal_lattice(g)
        return {
            "invariant_sets": [list(u) for u in rep.invariant_sets],
            "ideal_dimensions": {",".join(u) or "(empty)":
                                 rep.ideal_dimensions[u]
                                 for u in rep.invariant_sets},
            "invariant_set_count": rep.invariant_set_count,
            "ideal_count": rep.ideal_count,
            "simple_summands": rep.simple_summands,
            "bijective": rep.bijective,
            "strongly_effective": rep.strongly_effective,
            "principal": rep.principal,
            "notes": list(rep.notes),
        }
    rep = simplicity_verdict(g)
    return {"simple": rep.simple, "effective": rep.effective,
            "minimal": rep.minimal, "block_count": rep.block_count,
            "notes": list(rep.notes)}


def _handle_alg(args, config):
    g = _groupoid(args, args.groupoid)
    if args.command == "norm":
        f = _element(args, args.element, g)
        return norms(f, tol=config.eigen_tol).as_dict()
    if args.command == "convolve":
        f = _element(args, args.left, g)
        h = _element(args, args.right, g)
        return doc.element_to_payload(convolve(f, h))
    f = _element(args, args.element, g)
    phi = expectation(f)
    return {"expectation": doc.element_to_payload(phi),
            "j_map_equals_input": j_map(f) == f}


def _handle_graph(args, config):
    if args.command == "flow":
        a = doc.matrix_from_payload(_load(args, args.matrix_a, "matrix").payload)
        if args.matrix_b is None:
            inv = flow_invariants(a)
            return _flow_dict(inv)
        b = doc.matrix_from_payload(_load(args, args.matrix_b, "matrix").payload)
        verdict = classify_pair(a, b)
        return {
            "a": _flow_dict(verdict["a"]),
            "b": _flow_dict(verdict["b"]),
            "cokernels_isomorphic": verdict["cokernels_isomorphic"],
            "determinant_signs_agree": verdict["determinant_signs_agree"],
            "flow_equivalent": verdict["flow_equivalent"],
            "stably_isomorphic_ck": verdict["stably_isomorphic_ck"],
        }
    graph = doc.graph_from_payload(_load(args, args.graph, "graph").payload)
    if args.command == "validate":
        return {"valid": True, "vertices": len(graph.vertices),
                "edges": len(graph.edges)}
    if args.command == "af":
        level = af_level(graph, args.level,
                         term_cap=config.symbolic_term_cap)
        return {"level": args.level, "dimension": level.dimension(),
                "blocks": {v: len(ps) for v, ps in level.by_source.items()},
                "embedding_multiplicities":
                    sorted({len(v) for v in level.embedding.values()})}
    if args.command == "ck":
        report = ck_check(graph)
        report["witnesses"] = [list(w) for w in report["witnesses"]]
        return report
    report = graph_structure(graph)
    report["entrance_free_cycles"] = [list(c) for c in
                                      report["entrance_free_cycles"]]
    return report


def _flow_dict(inv):
    return {"smith_diagonal": list(inv.smith_diagonal),
            "invariant_factors": list(inv.invariant_factors),
            "determinant": inv.determinant,
            "determinant_sign": inv.determinant_sign}


def _handle_twist(args, config):
    if args.command == "raeburn-taylor":
        cech = doc.cech_from_payload(_load(args, args.cech, "cech").payload)
        relation, sigma = raeburn_taylor(cech)
        return {"groupoid": doc.groupoid_to_payload(relation),
                "cocycle": doc.cocycle_to_payload(sigma),
                "principal": relation.is_principal()}
    g = _groupoid(args, args.groupoid)
    sigma = _cocycle(args, args.cocycle, g)
    if args.command == "validate":
        return {"valid": True, "order": sigma.order,
                "pairs": len(sigma.values)}
    if args.command == "convolve":
        f = _element(args, args.left, g)
        h = _element(args, args.right, g)
        return doc.element_to_payload(twisted_convolve(sigma, f, h))
    witness = coboundary_solve(sigma)
    if witness is None:
        return {"verdict": "NontrivialClass", "order": sigma.order}
    return {"verdict": "coboundary", "order": sigma.order,
            "cochain": {k: witness[k] for k in sorted(witness)}}


def _handle_equiv(args, config):
    bim = doc.bimodule_from_payload(_load(args, args.bimodule,
                                          "bimodule").payload)
    if args.command == "validate":
        return validate_bimodule(bim)
    link = build_linking(bim)
    if args.command == "link":
        return {"groupoid": doc.groupoid_to_payload(link.groupoid),
                "p_units": list(link.p_units),
                "q_units": list(link.q_units),
                "tags": {e: list(link.tags[e]) for e in sorted(link.tags)}}
    return corner_check(link)


def _handle_cartan(args, config):
    if args.command == "weyl":
        p = doc.cartan_from_payload(_load(args, args.cartan, "cartan").payload)
        out = weyl_groupoid(p)
        expect = unique_expectation(p)
        return {"groupoid": doc.groupoid_to_payload(out.groupoid),
                "cocycle": doc.cocycle_to_payload(out.cocycle),
                "characters": len(out.characters),
                "expectation_unique": expect["unique"]}
    g = _groupoid(args, args.groupoid)
    sigma = _cocycle(args, args.cocycle, g)
    report = roundtrip_check(g, sigma)
    return {"isomorphism": report.isomorphism,
            "extracted_order": report.extracted_order,
            "cocycle_class_matches": report.cocycle_class_matches,
            "coboundary_witness": {k: report.coboundary_witness[k]
                                   for k in sorted(report.coboundary_witness)},
            "expectation_unique": report.expectation_unique}


def _handle_corpus(args, config):
    kinds = tuple(args.kinds) if args.kinds else ("groupoid",)
    docs = corpus_generate(args.seed, count=args.count,
                           max_elements=args.max_elements, kinds=kinds)
    return {"count": len(docs),
            "documents": [{"kind": d.kind, "version": d.version,
                           "payload": d.payload} for d in docs]}


_HANDLERS = {"gpd": _handle_gpd, "alg": _handle_alg, "graph": _handle_graph,
             "twist": _handle_twist, "equiv": _handle_equiv,
             "cartan": _handle_cartan, "corpus": _handle_corpus}


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        print("command groups: gpd, alg, graph, twist, equiv, cartan, corpus",
              file=sys.stderr)
        return 1
    try:
        config = RunConfig.load(args.config) if args.config \
            else RunConfig.default()
    except (OSError, json.JSONDecodeError) as exc:
        print(f"usage error: cannot load config: {exc}", file=sys.stderr)
        return 1
    try:
        report = _HANDLERS[args.group](args, config)
    except GpdError as exc:
        text = json.dumps(exc.report(), sort_keys=True, indent=2,
                          default=str)
        print(text)
        if args.output:
            with open(args.output, "w", encoding="utf-8") as fh:
                fh.write(text + "\n")
        return 2
    except OSError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    text = json.dumps(report, sort_keys=True, indent=2, default=str)
    print(text)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
