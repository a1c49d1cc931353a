"""Shared builders for Cartan presentations used across test modules."""

import itertools

from gpdalg.cartan import CartanPresentation
from gpdalg.scalars import Cyc


def matrix_presentation(n, normalizer_pairs=None):
    """M_n with its diagonal masa and matrix-unit normalizers."""
    basis = tuple(f"e{i}{j}" for i in range(1, n + 1) for j in range(1, n + 1))
    product = {}
    for i, j, k, l in itertools.product(range(1, n + 1), repeat=4):
        key = (f"e{i}{j}", f"e{k}{l}")
        product[key] = {f"e{i}{l}": Cyc.one()} if j == k else {}
    star = {f"e{i}{j}": {f"e{j}{i}": Cyc.one()}
            for i in range(1, n + 1) for j in range(1, n + 1)}
    diagonal = tuple(f"e{i}{i}" for i in range(1, n + 1))
    if normalizer_pairs is None:
        normalizer_pairs = [(i, j) for i in range(1, n + 1)
                            for j in range(1, n + 1) if i != j]
    normalizers = tuple({f"e{i}{j}": Cyc.one()} for i, j in normalizer_pairs)
    return CartanPresentation(basis, product, star, diagonal, normalizers)
