"""Deterministic pseudorandom corpora of groupoids and graphs.

Recipes cycle through a fixed pattern so every window of ten instances
contains at least one non-principal groupoid and at least one with
several orbits; every emitted document has already passed its validator.
"""

from __future__ import annotations

import random

from .documents import Document, VERSION, graph_to_payload, groupoid_to_payload
from .graphs import validate_graph
from .groupoid import (construct_standard, cyclic_table, group_bundle_spec,
                       group_spec, matrix_spec, partition_spec, product_table,
                       transformation_spec)

SMALL_ABELIAN = {
    "z1": lambda: cyclic_table(1),
    "z2": lambda: cyclic_table(2),
    "z3": lambda: cyclic_table(3),
    "z4": lambda: cyclic_table(4),
    "z5": lambda: cyclic_table(5),
    "z6": lambda: cyclic_table(6),
    "z2xz2": lambda: product_table(cyclic_table(2, "a"), cyclic_table(2, "b")),
}


def _random_partition(rng, max_elements, min_blocks=1):
    """Random partition groupoid with sum of squared block sizes bounded
    by max_elements and at least min_blocks orbits."""
    nblocks = rng.randint(min_blocks, max(min_blocks, 4))
    nblocks = min(nblocks, max_elements)
    blocks = []
    budget = max_elements
    counter = 0
    for i in range(nblocks):
        remaining = nblocks - i - 1
        max_size = max(1, int((budget - remaining) ** 0.5))
        size = rng.randint(1, max_size)
        blocks.append([f"p{counter + k}" for k in range(size)])
        counter += size
        budget -= size * size
    return construct_standard(partition_spec(blocks))


def _random_bundle(rng, max_elements, force_nontrivial=False):
    points = rng.randint(2 if force_nontrivial else 1, 4)
    points = min(points, max(1, max_elements - 1))
    fibers = {}
    budget = max_elements
    for i in range(points):
        avail = budget - (points - i - 1)
        choices = [k for k, make in SMALL_ABELIAN.items()
                   if len(make()[0]) <= avail]
        if force_nontrivial and i == 0:
            nontrivial = [k for k in choices if k != "z1"]
            choices = nontrivial or ["z2"]
        pick = rng.choice(choices)
        table = SMALL_ABELIAN[pick]()
        fibers[f"b{i}"] = table
        budget -= len(table[0])
    return construct_standard(group_bundle_spec(fibers))


def _random_transformation(rng, max_elements):
    order = rng.choice([2, 2, 3, 4])
    n_points = rng.randint(1, max(1, min(6, max_elements // order)))
    points = tuple(f"x{i}" for i in range(n_points))
    elements, table = cyclic_table(order)
    # a permutation of order dividing `order`: product of cycles with
    # lengths dividing it
    perm = {}
    pool = list(points)
    rng.shuffle(pool)
    while pool:
        divisors = [d for d in (1, 2, 3, 4, 6) if order % d == 0
                    and d <= len(pool)]
        length = rng.choice(divisors)
        cycle = [pool.pop() for _ in range(length)]
        for i, x in enumerate(cycle):
            perm[x] = cycle[(i + 1) % length]
    action = {}
    for x in points:
        y = x
        for k in range(order):
            action[(str(k), x)] = y
            y = perm[y]
    return construct_standard(
        transformation_spec(elements, table, points, action))


def _random_group(rng, max_elements):
    names = [k for k, make in SMALL_ABELIAN.items()
             if len(make()[0]) <= max_elements]
    pick = rng.choice(names)
    return construct_standard(group_spec(*SMALL_ABELIAN[pick]()))


def _random_matrix_groupoid(rng, max_elements):
    n = rng.randint(1, max(1, int(max_elements ** 0.5)))
    return construct_standard(matrix_spec(n))


def random_groupoid(rng, index, max_elements):
    """Recipe wheel; positions 0 and 1 of each 5-cycle carry the
    multi-orbit and non-principal guarantees."""
    slot = index % 5
    if slot == 0:
        return _random_partition(rng, max_elements, min_blocks=2)
    if slot == 1:
        return _random_bundle(rng, max_elements, force_nontrivial=True)
    if slot == 2:
        return _random_transformation(rng, max_elements)
    if slot == 3:
        return _random_partition(rng, max_elements)
    return rng.choice([_random_group, _random_matrix_groupoid])(
        rng, max_elements)


def random_graph(rng, max_vertices=5, max_edges=8):
    n = rng.randint(1, max_vertices)
    vertices = [f"v{i}" for i in range(n)]
    edges = {}
    counter = 0
    # no sources: give every vertex one incoming edge first
    for v in vertices:
        edges[f"e{counter}"] = (v, rng.choice(vertices))
        counter += 1
    while counter < rng.randint(n, max_edges):
        edges[f"e{counter}"] = (rng.choice(vertices), rng.choice(vertices))
        counter += 1
    return validate_graph(vertices, edges)


def corpus_generate(seed, count=10, max_elements=32, kinds=("groupoid",)):
    """A reproducible list of validated documents."""
    rng = random.Random(seed)
    docs = []
    index = 0
    while len(docs) < count:
        kind = kinds[len(docs) % len(kinds)]
        if kind == "groupoid":
            g = random_groupoid(rng, index, max_elements)
            docs.append(Document("groupoid", VERSION, groupoid_to_payload(g)))
            index += 1
        elif kind == "graph":
            graph = random_graph(rng)
            docs.append(Document("graph", VERSION, graph_to_payload(graph)))
        else:
            raise ValueError(f"unknown corpus kind {kind!r}")
    return docs


def corpus_groupoids(seed, count=10, max_elements=32):
    """The same corpus, materialized as FiniteGroupoid objects."""
    rng = random.Random(seed)
    return [random_groupoid(rng, i, max_elements) for i in range(count)]
