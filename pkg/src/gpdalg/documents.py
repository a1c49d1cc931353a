"""Document serialization: canonical JSON for every object the CLI moves.

One structured-text format (JSON) with canonical key ordering; exact
complex numbers travel as [re, im] pairs of rational strings like "3/4",
so documents never pick up float drift in exact mode.  serialize(parse(x))
is byte-identical on canonical input.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .cartan import CartanPresentation
from .algebra import AlgebraElement
from .errors import ParseError, SchemaError
from .equivalence import EquivalenceBimodule
from .graphs import validate_graph
from .groupoid import validate_table
from .scalars import Cyc, to_complex
from .twists import validate_cech, validate_cocycle

KINDS = ("groupoid", "graph", "algebra-element", "cocycle", "cech",
         "bimodule", "cartan", "matrix")
VERSION = 1


@dataclass
class Document:
    kind: str
    version: int
    payload: dict


def parse_document(text, strict=True):
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.lineno, exc.msg) from exc
    if not isinstance(raw, dict):
        raise SchemaError("$", "document must be a JSON object")
    kind = raw.get("kind")
    if kind not in KINDS:
        raise SchemaError("kind", f"unknown kind {kind!r}")
    version = raw.get("version", VERSION)
    if version != VERSION:
        raise SchemaError("version", f"unsupported version {version!r}")
    payload = raw.get("payload")
    if not isinstance(payload, dict):
        raise SchemaError("payload", "missing payload object")
    if strict:
        extra = set(raw) - {"kind", "version", "payload"}
        if extra:
            raise SchemaError(sorted(extra)[0], "unknown top-level field")
    return Document(kind, version, payload)


def serialize(doc):
    body = {"kind": doc.kind, "version": doc.version, "payload": doc.payload}
    return json.dumps(body, sort_keys=True, indent=2) + "\n"


def load_path(path, strict=True):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_document(fh.read(), strict=strict)


# ----------------------------------------------------------------- scalars

def scalar_to_pair(value):
    if isinstance(value, Cyc):
        try:
            re, im = value.gaussian_parts()
            return [str(re), str(im)]
        except ValueError:
            z = value.to_complex()
            return [z.real, z.imag]
    z = complex(value)
    return [z.real, z.imag]


def scalar_from_pair(pair, path):
    if not isinstance(pair, (list, tuple)) or len(pair) != 2:
        raise SchemaError(path, "expected an [re, im] pair")
    parts = []
    exact = True
    for item in pair:
        if isinstance(item, str):
            try:
                parts.append(Fraction(item))
            except (ValueError, ZeroDivisionError):
                raise SchemaError(path, f"bad rational string {item!r}")
        elif isinstance(item, int):
            parts.append(Fraction(item))
        elif isinstance(item, float):
            parts.append(item)
            exact = False
        else:
            raise SchemaError(path, "entries must be numbers or strings")
    if exact:
        return Cyc.gaussian(parts[0], parts[1])
    return complex(float(parts[0]), float(parts[1]))


def _need(payload, field, typ, path):
    if field not in payload:
        raise SchemaError(f"{path}.{field}", "missing field")
    value = payload[field]
    if typ is not None and not isinstance(value, typ):
        raise SchemaError(f"{path}.{field}", f"expected {typ.__name__}")
    return value


# ---------------------------------------------------------------- groupoid

def groupoid_to_payload(g):
    return {
        "elements": sorted(g.elements),
        "inverse": {a: g.inv(a) for a in sorted(g.elements)},
        "compose": sorted([a, b, c] for (a, b), c in g.compose.items()),
    }


def groupoid_from_payload(payload, path="payload"):
    elements = _need(payload, "elements", list, path)
    inverse = _need(payload, "inverse", dict, path)
    compose_list = _need(payload, "compose", list, path)
    compose = {}
    for idx, triple in enumerate(compose_list):
        if not isinstance(triple, list) or len(triple) != 3:
            raise SchemaError(f"{path}.compose[{idx}]", "expected [a, b, ab]")
        a, b, c = triple
        if (a, b) in compose:
            raise SchemaError(f"{path}.compose[{idx}]", "duplicate pair")
        compose[(a, b)] = c
    for a in elements:
        if a not in inverse:
            raise SchemaError(f"{path}.inverse.{a}", "missing inverse entry")
    return validate_table(elements, compose, inverse)


def groupoid_document(g):
    return Document("groupoid", VERSION, groupoid_to_payload(g))


# ------------------------------------------------------------------- graph

def graph_to_payload(graph):
    return {
        "vertices": sorted(graph.vertices),
        "edges": [{"id": e, "range": graph.edges[e][0],
                   "source": graph.edges[e][1]} for e in sorted(graph.edges)],
    }


def graph_from_payload(payload, path="payload"):
    vertices = _need(payload, "vertices", list, path)
    edge_list = _need(payload, "edges", list, path)
    edges = {}
    for idx, item in enumerate(edge_list):
        if not isinstance(item, dict) or \
                set(item) != {"id", "range", "source"}:
            raise SchemaError(f"{path}.edges[{idx}]",
                              "expected {id, range, source}")
        if item["id"] in edges:
            raise SchemaError(f"{path}.edges[{idx}]", "duplicate edge id")
        edges[item["id"]] = (item["range"], item["source"])
    return validate_graph(vertices, edges)


def graph_document(graph):
    return Document("graph", VERSION, graph_to_payload(graph))


# --------------------------------------------------------- algebra element

def element_to_payload(f):
    coeffs = {k: scalar_to_pair(v) for k, v in sorted(f.coeffs.items())}
    mode = "exact" if all(isinstance(v, Cyc) for v in f.coeffs.values()) \
        else "float"
    return {"mode": mode, "coeffs": coeffs}


def element_from_payload(payload, groupoid, path="payload"):
    coeffs_raw = _need(payload, "coeffs", dict, path)
    known = set(groupoid.elements)
    coeffs = {}
    for key in sorted(coeffs_raw):
        if key not in known:
            raise SchemaError(f"{path}.coeffs.{key}", "unknown element id")
        coeffs[key] = scalar_from_pair(coeffs_raw[key], f"{path}.coeffs.{key}")
    return AlgebraElement(groupoid, coeffs)


def element_document(f):
    return Document("algebra-element", VERSION, element_to_payload(f))


# ----------------------------------------------------------------- cocycle

def cocycle_to_payload(sigma):
    values = []
    for (a, b) in sorted(sigma.values):
        if sigma.order:
            values.append({"pair": [a, b], "exp": sigma.values[(a, b)]})
        else:
            z = complex(sigma.values[(a, b)])
            values.append({"pair": [a, b], "value": [z.real, z.imag]})
    return {"order": sigma.order, "values": values}


def cocycle_from_payload(payload, groupoid, path="payload"):
    order = _need(payload, "order", int, path)
    raw = _need(payload, "values", list, path)
    values = {}
    for idx, item in enumerate(raw):
        here = f"{path}.values[{idx}]"
        if not isinstance(item, dict) or "pair" not in item:
            raise SchemaError(here, "expected {pair, exp|value}")
        pair = item["pair"]
        if not isinstance(pair, list) or len(pair) != 2:
            raise SchemaError(f"{here}.pair", "expected [a, b]")
        key = (pair[0], pair[1])
        if order:
            if "exp" not in item or not isinstance(item["exp"], int):
                raise SchemaError(here, "finite order needs integer exp")
            values[key] = item["exp"]
        else:
            if "value" not in item:
                raise SchemaError(here, "order 0 needs [re, im] value")
            values[key] = complex(item["value"][0], item["value"][1])
    return validate_cocycle(groupoid, values, order)


def cocycle_document(sigma):
    return Document("cocycle", VERSION, cocycle_to_payload(sigma))


# -------------------------------------------------------------------- cech

def cech_to_payload(cech):
    values = [{"triple": [i, j, k], "point": x, "exp": e}
              for (i, j, k, x), e in sorted(cech.values.items())]
    return {"base": list(cech.base),
            "cover": [sorted(u) for u in cech.cover],
            "order": cech.order,
            "values": values}


def cech_from_payload(payload, path="payload"):
    base = _need(payload, "base", list, path)
    cover = _need(payload, "cover", list, path)
    order = _need(payload, "order", int, path)
    raw = _need(payload, "values", list, path)
    values = {}
    for idx, item in enumerate(raw):
        here = f"{path}.values[{idx}]"
        if not isinstance(item, dict) or \
                set(item) != {"triple", "point", "exp"}:
            raise SchemaError(here, "expected {triple, point, exp}")
        i, j, k = item["triple"]
        values[(i, j, k, item["point"])] = item["exp"]
    return validate_cech(base, cover, values, order)


def cech_document(cech):
    return Document("cech", VERSION, cech_to_payload(cech))


# ---------------------------------------------------------------- bimodule

def bimodule_to_payload(bim):
    return {
        "left": groupoid_to_payload(bim.left),
        "right": groupoid_to_payload(bim.right),
        "points": sorted(bim.points),
        "r": {x: bim.r_map[x] for x in sorted(bim.points)},
        "s": {x: bim.s_map[x] for x in sorted(bim.points)},
        "left_action": sorted([g, x, out]
                              for (g, x), out in bim.left_action.items()),
        "right_action": sorted([x, h, out]
                               for (x, h), out in bim.right_action.items()),
    }


def bimodule_from_payload(payload, path="payload"):
    left = groupoid_from_payload(_need(payload, "left", dict, path),
                                 f"{path}.left")
    right = groupoid_from_payload(_need(payload, "right", dict, path),
                                  f"{path}.right")
    points = tuple(_need(payload, "points", list, path))
    r_map = dict(_need(payload, "r", dict, path))
    s_map = dict(_need(payload, "s", dict, path))
    left_action = {}
    for idx, triple in enumerate(_need(payload, "left_action", list, path)):
        if len(triple) != 3:
            raise SchemaError(f"{path}.left_action[{idx}]",
                              "expected [gamma, xi, out]")
        left_action[(triple[0], triple[1])] = triple[2]
    right_action = {}
    for idx, triple in enumerate(_need(payload, "right_action", list, path)):
        if len(triple) != 3:
            raise SchemaError(f"{path}.right_action[{idx}]",
                              "expected [xi, eta, out]")
        right_action[(triple[0], triple[1])] = triple[2]
    return EquivalenceBimodule(left, right, points, r_map, s_map,
                               left_action, right_action)


def bimodule_document(bim):
    return Document("bimodule", VERSION, bimodule_to_payload(bim))


# ------------------------------------------------------------------ cartan

def cartan_to_payload(p):
    product = []
    for (a, b) in sorted(p.product):
        for c in sorted(p.product[(a, b)]):
            re, im = scalar_to_pair(p.product[(a, b)][c])[:2]
            product.append({"left": a, "right": b, "result": c,
                            "re": re, "im": im})
    involution = []
    for a in sorted(p.star):
        for c in sorted(p.star[a]):
            re, im = scalar_to_pair(p.star[a][c])[:2]
            involution.append({"of": a, "result": c, "re": re, "im": im})
    normalizers = []
    for vec in p.normalizers:
        normalizers.append({a: scalar_to_pair(v) for a, v in sorted(vec.items())})
    return {"basis": list(p.basis), "product": product,
            "involution": involution, "diagonal": list(p.diagonal),
            "normalizers": normalizers}


def cartan_from_payload(payload, path="payload"):
    basis = tuple(_need(payload, "basis", list, path))
    product = {(a, b): {} for a in basis for b in basis}
    for idx, item in enumerate(_need(payload, "product", list, path)):
        here = f"{path}.product[{idx}]"
        try:
            key = (item["left"], item["right"])
            product.setdefault(key, {})[item["result"]] = \
                scalar_from_pair([item["re"], item["im"]], here)
        except (KeyError, TypeError):
            raise SchemaError(here, "expected {left, right, result, re, im}")
    star = {a: {} for a in basis}
    for idx, item in enumerate(_need(payload, "involution", list, path)):
        here = f"{path}.involution[{idx}]"
        try:
            star.setdefault(item["of"], {})[item["result"]] = \
                scalar_from_pair([item["re"], item["im"]], here)
        except (KeyError, TypeError):
            raise SchemaError(here, "expected {of, result, re, im}")
    diagonal = tuple(_need(payload, "diagonal", list, path))
    normalizers = []
    for idx, vec in enumerate(_need(payload, "normalizers", list, path)):
        here = f"{path}.normalizers[{idx}]"
        if not isinstance(vec, dict):
            raise SchemaError(here, "expected a coefficient map")
        normalizers.append({a: scalar_from_pair(pair, f"{here}.{a}")
                            for a, pair in vec.items()})
    return CartanPresentation(basis, product, star, diagonal,
                              tuple(normalizers))


def cartan_document(p):
    return Document("cartan", VERSION, cartan_to_payload(p))


# ------------------------------------------------------------------ matrix

def matrix_to_payload(rows):
    return {"rows": [list(map(int, row)) for row in rows]}


def matrix_from_payload(payload, path="payload"):
    rows = _need(payload, "rows", list, path)
    for idx, row in enumerate(rows):
        if not isinstance(row, list) or \
                any(not isinstance(x, int) for x in row):
            raise SchemaError(f"{path}.rows[{idx}]", "expected integer rows")
    return [list(row) for row in rows]


def matrix_document(rows):
    return Document("matrix", VERSION, matrix_to_payload(rows))


# ------------------------------------------------------- symbolic elements

def symbolic_to_payload(elem):
    from .graphs import path_source
    terms = []
    for (mu, nu), v in sorted(elem.terms.items(),
                              key=lambda kv: (kv[0][0].edges, kv[0][1].edges,
                                              kv[0][0].vertex)):
        terms.append({"mu": list(mu.edges), "nu": list(nu.edges),
                      "vertex": path_source(elem.graph, mu),
                      "coeff": scalar_to_pair(v)})
    return {"terms": terms}


def symbolic_from_payload(payload, graph, path="payload"):
    from .graphs import (SymbolicGraphElement, empty_path, path_from_edges,
                         path_source)
    terms = {}
    for idx, item in enumerate(_need(payload, "terms", list, path)):
        here = f"{path}.terms[{idx}]"
        if not isinstance(item, dict) or \
                not {"mu", "nu", "coeff"} <= set(item):
            raise SchemaError(here, "expected {mu, nu, vertex, coeff}")

        def build(edge_list):
            if edge_list:
                return path_from_edges(graph, edge_list)
            return empty_path(item["vertex"])

        mu, nu = build(item["mu"]), build(item["nu"])
        if path_source(graph, mu) != path_source(graph, nu):
            raise SchemaError(here, "term paths must share their source")
        coeff = scalar_from_pair(item["coeff"], f"{here}.coeff")
        terms[(mu, nu)] = coeff
    return SymbolicGraphElement(graph, terms)
