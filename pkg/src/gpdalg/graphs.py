"""Symbolic algebra of graph groupoids.

Directed graphs are row-finite with no sources: r^{-1}(v) is finite and
nonempty for every vertex (finiteness is structural for finite input; the
emptiness check is real).  Paths compose like morphisms: a path
e1 e2 ... en has s(e_i) = r(e_{i+1}), range r(e1) and source s(en), and
infinite paths extend on the right, so a cylinder Z(mu) splits along
extensions z with r(z) = s(mu).

An element (mu, nu) with s(mu) = s(nu) stands for the indicator of the
basic cylinder bisection Z(mu, nu) of the boundary-path groupoid; finite
linear combinations of these are closed under convolution, which on basic
bisections reduces to path overlap.

Two symbolic elements can represent the same function: a cylinder is the
disjoint union of its one-edge extensions.  Semantic equality is decided
by expanding all terms of a fixed degree to a common numerator length,
where distinct terms denote disjoint cylinders.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import (GraphMismatch, HasSource, InconsistentDomain,
                     LevelTooLarge, NotIrreducible, PermutationMatrix)
from .linalg import det_int, smith_normal_form
from .scalars import as_scalar, conj_scalar, scalar_is_zero

DEFAULT_TERM_CAP = 10 ** 6


@dataclass(frozen=True, eq=False)
class DirectedGraph:
    vertices: tuple
    edges: dict           # edge id -> (range vertex, source vertex)
    in_edges: dict        # vertex v -> edges with r(e) = v, sorted
    out_edges: dict       # vertex v -> edges with s(e) = v, sorted

    def __eq__(self, other):
        if not isinstance(other, DirectedGraph):
            return NotImplemented
        return self.vertices == other.vertices and self.edges == other.edges

    def r(self, edge):
        return self.edges[edge][0]

    def s(self, edge):
        return self.edges[edge][1]


def validate_graph(vertices, edges):
    """edges: map id -> (range, source).  Verifies endpoints and the
    no-sources condition; row finiteness is automatic for a finite edge
    set and is recorded rather than searched for."""
    vertices = tuple(sorted(vertices))
    vset = set(vertices)
    if len(vset) != len(vertices):
        raise InconsistentDomain("duplicate vertices")
    for e, (rv, sv) in edges.items():
        if rv not in vset or sv not in vset:
            raise InconsistentDomain(f"edge {e!r} has unknown endpoints")
    in_edges = {v: [] for v in vertices}
    out_edges = {v: [] for v in vertices}
    for e in sorted(edges):
        in_edges[edges[e][0]].append(e)
        out_edges[edges[e][1]].append(e)
    for v in vertices:
        if not in_edges[v]:
            raise HasSource(v)
    return DirectedGraph(vertices, dict(edges),
                         {v: tuple(es) for v, es in in_edges.items()},
                         {v: tuple(es) for v, es in out_edges.items()})


# -------------------------------------------------------------------- paths

@dataclass(frozen=True)
class GPath:
    """A finite path; empty paths remember their vertex, nonempty paths
    carry their range vertex redundantly for uniform handling."""
    edges: tuple
    vertex: str

    def __len__(self):
        return len(self.edges)


def empty_path(vertex):
    return GPath((), vertex)


def path_from_edges(graph, edges):
    edges = tuple(edges)
    if not edges:
        raise InconsistentDomain("use empty_path(vertex) for empty paths")
    for a, b in zip(edges, edges[1:]):
        if graph.s(a) != graph.r(b):
            raise InconsistentDomain(f"edges {a!r}, {b!r} do not concatenate")
    return GPath(edges, graph.r(edges[0]))


def path_range(graph, p):
    return p.vertex if not p.edges else graph.r(p.edges[0])


def path_source(graph, p):
    return p.vertex if not p.edges else graph.s(p.edges[-1])


def concat(graph, p, q):
    if path_source(graph, p) != path_range(graph, q):
        raise InconsistentDomain("paths do not concatenate")
    if not p.edges:
        return q
    if not q.edges:
        return p
    return GPath(p.edges + q.edges, path_range(graph, p))


def paths_with_range(graph, vertex, length):
    """All paths p with r(p) = vertex and |p| = length (the extensions a
    cylinder at that vertex splits along)."""
    if length == 0:
        return [empty_path(vertex)]
    out = []
    stack = [((), vertex)]
    while stack:
        edges, frontier = stack.pop()
        if len(edges) == length:
            out.append(GPath(edges, vertex))
            continue
        for e in graph.in_edges[frontier]:
            stack.append((edges + (e,), graph.s(e)))
    return sorted(out, key=lambda p: p.edges)


def paths_with_source(graph, vertex, length):
    """All paths p with s(p) = vertex and |p| = length."""
    if length == 0:
        return [empty_path(vertex)]
    out = []
    stack = [((), vertex)]
    while stack:
        edges, frontier = stack.pop()
        if len(edges) == length:
            out.append(GPath(edges, graph.r(edges[0])))
            continue
        for e in graph.out_edges[frontier]:
            stack.append(((e,) + edges, graph.r(e)))
    return sorted(out, key=lambda p: p.edges)


def all_paths(graph, length):
    out = []
    for v in graph.vertices:
        out.extend(paths_with_range(graph, v, length))
    return out


def _strip_prefix(graph, longer, shorter):
    """The overhang z with longer = shorter . z, or None."""
    n = len(shorter)
    if len(longer) < n:
        return None
    if longer.edges[:n] != shorter.edges:
        return None
    if path_range(graph, longer) != path_range(graph, shorter):
        return None
    rest = longer.edges[n:]
    if not rest:
        return empty_path(path_source(graph, shorter))
    return GPath(rest, graph.r(rest[0]))


# ---------------------------------------------------------------- elements

class SymbolicGraphElement:
    """A finite linear combination of basic cylinder indicators 1_{Z(mu,nu)}.

    Terms are keyed by (mu, nu) path pairs with s(mu) = s(nu); identical
    keys are merged and zero coefficients dropped, which is the canonical
    form.  Term-level equality is finer than equality as functions; use
    semantically_equal for the latter.
    """

    __slots__ = ("graph", "terms")

    def __init__(self, graph, terms, term_cap=DEFAULT_TERM_CAP):
        if len(terms) > term_cap:
            raise LevelTooLarge(f"{len(terms)} terms exceeds cap {term_cap}")
        self.graph = graph
        self.terms = {k: v for k, v in terms.items() if not scalar_is_zero(v)}

    @staticmethod
    def basic(graph, mu, nu, coeff=1):
        if path_source(graph, mu) != path_source(graph, nu):
            raise InconsistentDomain("term paths must share their source")
        return SymbolicGraphElement(graph, {(mu, nu): as_scalar(coeff)})

    @staticmethod
    def vertex_projection(graph, v):
        p = empty_path(v)
        return SymbolicGraphElement.basic(graph, p, p)

    @staticmethod
    def edge_partial_isometry(graph, e):
        mu = GPath((e,), graph.r(e))
        return SymbolicGraphElement.basic(graph, mu, empty_path(graph.s(e)))

    @staticmethod
    def zero(graph):
        return SymbolicGraphElement(graph, {})

    def _check(self, other):
        if self.graph != other.graph:
            raise GraphMismatch("elements live over different graphs")

    def __eq__(self, other):
        if not isinstance(other, SymbolicGraphElement):
            return NotImplemented
        if set(self.terms) != set(other.terms):
            return False
        return all(self.terms[k] == other.terms[k] for k in self.terms)

    __hash__ = None

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out[k] + v if k in out else v
        return SymbolicGraphElement(self.graph, out)

    def __sub__(self, other):
        self._check(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out[k] - v if k in out else -v
        return SymbolicGraphElement(self.graph, out)

    def scale(self, c):
        return SymbolicGraphElement(self.graph,
                                    {k: v * c for k, v in self.terms.items()})

    def __bool__(self):
        return bool(self.terms)

    def involute(self):
        return SymbolicGraphElement(
            self.graph,
            {(nu, mu): conj_scalar(v) for (mu, nu), v in self.terms.items()})

    def max_length(self):
        return max((max(len(mu), len(nu)) for mu, nu in self.terms), default=0)

    def __repr__(self):
        bits = []
        for (mu, nu), v in sorted(self.terms.items(),
                                  key=lambda kv: (kv[0][0].edges, kv[0][1].edges)):
            bits.append(f"{v!r}*Z({','.join(mu.edges) or mu.vertex}"
                        f"|{','.join(nu.edges) or nu.vertex})")
        return " + ".join(bits) or "0"


def _term_product(graph, t1, t2):
    """Overlap product of basic cylinders:
    (mu, nu)(kappa, lam) = (mu k', lam)   if kappa = nu k',
                           (mu, lam n')   if nu = kappa n',
                           0              otherwise."""
    mu, nu = t1
    kappa, lam = t2
    if len(kappa) >= len(nu):
        overhang = _strip_prefix(graph, kappa, nu)
        if overhang is None:
            return None
        return (concat(graph, mu, overhang), lam)
    overhang = _strip_prefix(graph, nu, kappa)
    if overhang is None:
        return None
    return (mu, concat(graph, lam, overhang))


def symbolic_convolve(a, b, term_cap=DEFAULT_TERM_CAP):
    """Bilinear extension of the cylinder overlap product."""
    a._check(b)
    out = {}
    for t1, v1 in a.terms.items():
        for t2, v2 in b.terms.items():
            t = _term_product(a.graph, t1, t2)
            if t is not None:
                prod = v1 * v2
                out[t] = out[t] + prod if t in out else prod
    return SymbolicGraphElement(a.graph, out, term_cap=term_cap)


# ------------------------------------------------------- semantic equality

def _expand_term(graph, term, target):
    """Split (mu, nu) along all range extensions until |mu| = target."""
    mu, nu = term
    need = target - len(mu)
    out = []
    for z in paths_with_range(graph, path_source(graph, mu), need):
        out.append((concat(graph, mu, z), concat(graph, nu, z)))
    return out


def semantic_normal_form(elem):
    """Expand all terms of each degree to a common numerator length.

    After expansion, distinct keys denote disjoint cylinders, so the
    result is a complete invariant of the underlying function.
    """
    by_degree = {}
    for (mu, nu), v in elem.terms.items():
        by_degree.setdefault(len(mu) - len(nu), []).append(((mu, nu), v))
    out = {}
    for terms in by_degree.values():
        target = max(len(mu) for (mu, _), _ in terms)
        for term, v in terms:
            for expanded in _expand_term(elem.graph, term, target):
                out[expanded] = out[expanded] + v if expanded in out else v
    return SymbolicGraphElement(elem.graph, out)


def semantically_equal(a, b):
    a._check(b)
    return not semantic_normal_form(a - b)


def evaluate_on_boundary(elem, x, y):
    """Value at the groupoid point represented by finite paths (x, y) with
    s(x) = s(y) and a common generic infinite tail.

    The value is tail-independent whenever len(x), len(y) are at least the
    element's maximal path length.
    """
    graph = elem.graph
    if path_source(graph, x) != path_source(graph, y):
        raise InconsistentDomain("boundary pair must share its source")
    total = as_scalar(0)
    for (mu, nu), v in elem.terms.items():
        if len(x) - len(y) != len(mu) - len(nu):
            continue
        if _strip_prefix(graph, x, mu) is None:
            continue
        if _strip_prefix(graph, y, nu) is None:
            continue
        if x.edges[len(mu):] != y.edges[len(nu):]:
            continue
        total = total + v
    return total


def boundary_convolution(f, g, x, y):
    """(f*g) at the boundary point (x, y), summed over factorizations
    through the middle path; the independent pointwise oracle."""
    graph = f.graph
    total = as_scalar(0)
    for (mu, nu), v in f.terms.items():
        if _strip_prefix(graph, x, mu) is None:
            continue
        rest = x.edges[len(mu):]
        middle = concat(graph, nu,
                        GPath(rest, graph.r(rest[0])) if rest
                        else empty_path(path_source(graph, mu)))
        total = total + v * evaluate_on_boundary(g, middle, y)
    return total


# ------------------------------------------------------------------ towers

@dataclass
class AFLevel:
    level: int
    basis: tuple          # (mu, nu) pairs, |mu| = |nu| = n, s(mu) = s(nu)
    by_source: dict       # vertex -> paths of length n with that source
    embedding: dict       # basis term -> tuple of level-(n+1) terms

    def dimension(self):
        return len(self.basis)


def af_level(graph, n, term_cap=DEFAULT_TERM_CAP, verify_cap=256):
    """Level n of the AF tower: matrix units theta_n(mu, nu) grouped by
    source vertex, and the embedding theta(mu, nu) -> sum over edges e
    ranged at s(mu) of theta(mu e, nu e).

    The embedding is verified to be a *-homomorphism on structure
    constants whenever the basis is small (verify_cap); larger levels
    skip the quadratic check.
    """
    if n < 0:
        raise InconsistentDomain("level must be nonnegative")
    by_source = {v: tuple(paths_with_source(graph, v, n))
                 for v in graph.vertices}
    basis = []
    for v in graph.vertices:
        basis.extend(itertools.product(by_source[v], by_source[v]))
    if len(basis) > term_cap:
        raise LevelTooLarge(
            f"level {n} needs {len(basis)} matrix units, cap is {term_cap}")
    embedding = {}
    for mu, nu in basis:
        v = path_source(graph, mu)
        images = []
        for e in graph.in_edges[v]:
            tail = GPath((e,), v)
            images.append((concat(graph, mu, tail), concat(graph, nu, tail)))
        embedding[(mu, nu)] = tuple(images)
    level = AFLevel(n, tuple(basis), by_source, embedding)
    if len(basis) <= verify_cap:
        _verify_af_embedding(graph, level)
    return level


def _embedded(graph, level, term):
    out = SymbolicGraphElement.zero(graph)
    for mu, nu in level.embedding[term]:
        out = out + SymbolicGraphElement.basic(graph, mu, nu)
    return out


def _verify_af_embedding(graph, level):
    """theta(mu,nu) theta(kappa,lam) = delta_{nu,kappa} theta(mu,lam), and
    the embedding respects products and carries identity to identity."""
    from .errors import InternalInconsistency
    for (m1, n1), (m2, n2) in itertools.product(level.basis, level.basis):
        a = SymbolicGraphElement.basic(graph, m1, n1)
        b = SymbolicGraphElement.basic(graph, m2, n2)
        prod = symbolic_convolve(a, b)
        expected = SymbolicGraphElement.basic(graph, m1, n2) if n1 == m2 \
            else SymbolicGraphElement.zero(graph)
        if prod != expected:
            raise InternalInconsistency(
                "AF matrix-unit relation failed", witness=((m1, n1), (m2, n2)))
        lhs = symbolic_convolve(_embedded(graph, level, (m1, n1)),
                                _embedded(graph, level, (m2, n2)))
        rhs = _embedded(graph, level, (m1, n2)) if n1 == m2 else \
            SymbolicGraphElement.zero(graph)
        if lhs != rhs:
            raise InternalInconsistency(
                "AF embedding is not multiplicative",
                witness=((m1, n1), (m2, n2)))
    identity = SymbolicGraphElement.zero(graph)
    for v in graph.vertices:
        for p in level.by_source[v]:
            identity = identity + _embedded(graph, level, (p, p))
    next_identity = SymbolicGraphElement.zero(graph)
    for p in all_paths(graph, level.level + 1):
        next_identity = next_identity + SymbolicGraphElement.basic(graph, p, p)
    if identity != next_identity:
        raise InternalInconsistency("AF embedding is not unital")


# ---------------------------------------------------------- Cuntz--Krieger

def ck_check(graph):
    """With p_v = 1_{Z(v,v)} and s_e = 1_{Z(e, s(e))}: the p_v are mutually
    orthogonal projections, s_e* s_e = p_{s(e)}, and each p_v is the sum of
    s_e s_e* over edges ranged at v (semantic equality: the cylinder at v
    splits along first edges)."""
    p = {v: SymbolicGraphElement.vertex_projection(graph, v)
         for v in graph.vertices}
    s = {e: SymbolicGraphElement.edge_partial_isometry(graph, e)
         for e in graph.edges}
    report = {"projections": True, "isometries": True, "fullness": True,
              "witnesses": []}
    for v, w in itertools.product(graph.vertices, graph.vertices):
        prod = symbolic_convolve(p[v], p[w])
        expected = p[v] if v == w else SymbolicGraphElement.zero(graph)
        if prod != expected or p[v].involute() != p[v]:
            report["projections"] = False
            report["witnesses"].append(("projection", v, w))
    for e in graph.edges:
        if symbolic_convolve(s[e].involute(), s[e]) != p[graph.s(e)]:
            report["isometries"] = False
            report["witnesses"].append(("isometry", e))
    for v in graph.vertices:
        total = SymbolicGraphElement.zero(graph)
        for e in graph.in_edges[v]:
            total = total + symbolic_convolve(s[e], s[e].involute())
        if not semantically_equal(total, p[v]):
            report["fullness"] = False
            report["witnesses"].append(("fullness", v))
    report["holds"] = (report["projections"] and report["isometries"]
                       and report["fullness"])
    return report


# ------------------------------------------------------ structure criteria

def _reach(graph):
    """reach[v] = vertices w admitting a path with range v and source w,
    i.e. everything v reaches walking against the edge direction."""
    reach = {v: {v} for v in graph.vertices}
    changed = True
    while changed:
        changed = False
        for rv, sv in graph.edges.values():
            for v in graph.vertices:
                if rv in reach[v] and sv not in reach[v]:
                    reach[v].add(sv)
                    changed = True
    return reach


def _cycle_vertices(graph, reach=None):
    """Vertices lying on a cycle: some edge returns to them."""
    reach = reach or _reach(graph)
    return {v for v in graph.vertices
            if any(graph.r(e) == v and v in reach[graph.s(e)]
                   for e in graph.edges)}


def cycles_without_entrance(graph):
    """Cycles all of whose vertices receive exactly one edge.

    Inside the single-entry region the incoming edge is unique, so
    following it is deterministic; any repetition closes an entrance-free
    cycle.
    """
    single = {v for v in graph.vertices if len(graph.in_edges[v]) == 1}
    found = []
    seen = set()
    for start in sorted(single):
        if start in seen:
            continue
        trail = []
        positions = {}
        v = start
        while v in single and v not in positions:
            positions[v] = len(trail)
            e = graph.in_edges[v][0]
            trail.append(e)
            seen.add(v)
            v = graph.s(e)
        if v in positions:
            found.append(tuple(trail[positions[v]:]))
    return found


def graph_structure(graph):
    """Graph-level criteria: effective iff every cycle has an entrance;
    minimal iff cofinal (every vertex reaches, against edge direction,
    every cycle vertex); simple = effective and minimal, since graph
    groupoids are amenable."""
    entrance_free = cycles_without_entrance(graph)
    reach = _reach(graph)
    cyc = _cycle_vertices(graph, reach)
    minimal = all(c in reach[v] for v in graph.vertices for c in cyc)
    effective = not entrance_free
    return {"effective": effective, "minimal": minimal,
            "simple": effective and minimal,
            "entrance_free_cycles": entrance_free}


def isotropy_oracle(graph, max_length=6, depth=6):
    """Depth-bounded search for a basic bisection (mu, nu), mu != nu, all
    of whose depth-`depth` extensions are prefix-compatible; a witness
    denies effectiveness at the symbolic level."""
    for v in graph.vertices:
        paths = []
        for n in range(max_length + 1):
            paths.extend(p for p in all_paths(graph, n)
                         if path_source(graph, p) == v)
        for mu, nu in itertools.combinations(paths, 2):
            ok = True
            for z in paths_with_range(graph, v, depth):
                xz = concat(graph, mu, z)
                yz = concat(graph, nu, z)
                shorter, longer = sorted((xz, yz), key=len)
                if _strip_prefix(graph, longer, shorter) is None:
                    ok = False
                    break
            if ok:
                return (mu, nu)
    return None


# ------------------------------------------------------------ flow algebra

@dataclass
class FlowInvariants:
    matrix: tuple
    smith_diagonal: tuple
    invariant_factors: tuple   # cokernel cyclic factors (0 = free Z summand)
    determinant: int
    determinant_sign: str      # "-", "0" or "+"

    def bowen_franks(self):
        return self.invariant_factors


def _validate_shift_matrix(a):
    n = len(a)
    if n == 0 or any(len(row) != n for row in a):
        raise InconsistentDomain("matrix must be square and nonempty")
    if any(x not in (0, 1) for row in a for x in row):
        raise InconsistentDomain("matrix entries must be 0 or 1")
    if all(sum(row) == 1 for row in a) and \
            all(sum(a[i][j] for i in range(n)) == 1 for j in range(n)):
        raise PermutationMatrix("permutation matrices are excluded")
    reach = [{i} for i in range(n)]
    changed = True
    while changed:
        changed = False
        for i in range(n):
            for j in range(n):
                if a[i][j]:
                    for k in range(n):
                        if i in reach[k] and j not in reach[k]:
                            reach[k].add(j)
                            changed = True
    if any(len(r) != n for r in reach):
        raise NotIrreducible("matrix is not irreducible")


def flow_invariants(a):
    """Bowen--Franks data of an irreducible non-permutation {0,1} matrix:
    Smith normal form of 1 - A^t, its cokernel, and the sign of
    det(1 - A^t), in exact integer arithmetic."""
    _validate_shift_matrix(a)
    n = len(a)
    m = [[(1 if i == j else 0) - a[j][i] for j in range(n)] for i in range(n)]
    snf = smith_normal_form(m)
    if not snf.verify():
        raise InconsistentDomain("Smith normal form self-check failed")
    det = det_int(m)
    sign = "0" if det == 0 else ("+" if det > 0 else "-")
    return FlowInvariants(tuple(map(tuple, a)), tuple(snf.diagonal()),
                          tuple(snf.invariant_factors()), det, sign)


def classify_pair(a, b):
    """Verdict from the computable invariants: flow equivalent iff the
    cokernels are isomorphic and the determinant signs agree when nonzero;
    stably isomorphic Cuntz--Krieger algebras iff the cokernels are
    isomorphic."""
    ia, ib = flow_invariants(a), flow_invariants(b)
    coker_iso = sorted(x for x in ia.invariant_factors if x) == \
        sorted(x for x in ib.invariant_factors if x) and \
        ia.invariant_factors.count(0) == ib.invariant_factors.count(0)
    signs_agree = ia.determinant_sign == ib.determinant_sign
    return {
        "a": ia, "b": ib,
        "cokernels_isomorphic": coker_iso,
        "determinant_signs_agree": signs_agree,
        "flow_equivalent": coker_iso and signs_agree,
        "stably_isomorphic_ck": coker_iso,
    }
