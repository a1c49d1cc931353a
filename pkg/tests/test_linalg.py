"""Smith normal form, exact determinants, modular solving, field elimination."""

import random
from fractions import Fraction
from math import gcd

from gpdalg.linalg import (det_int, field_nullspace, field_rank, field_solve,
                           mat_mul, smith_normal_form, solve_mod)


def minor_gcd_invariant_factors(matrix):
    """Independent oracle: d_k = gcd of all k x k minors; factor_k = d_k/d_{k-1}.

    Canonical characterisation of the SNF diagonal, computed without any
    elimination at all.
    """
    from itertools import combinations

    rows, cols = len(matrix), len(matrix[0])

    def minor_det(rs, cs):
        sub = [[matrix[i][j] for j in cs] for i in rs]
        return det_int(sub)

    out = []
    prev = 1
    for k in range(1, min(rows, cols) + 1):
        g = 0
        for rs in combinations(range(rows), k):
            for cs in combinations(range(cols), k):
                g = gcd(g, minor_det(rs, cs))
        if g == 0:
            out.append(0)
            prev = 0
            continue
        out.append(g // prev if prev else 0)
        prev = g
    return out


def test_snf_known_small_cases():
    snf = smith_normal_form([[0, -1], [-1, 0]])
    assert snf.verify()
    assert snf.diagonal() == [1, 1]
    snf = smith_normal_form([[2, 0], [0, 3]])
    assert snf.diagonal() == [1, 6]
    snf = smith_normal_form([[2, 4], [0, 2]])
    assert snf.diagonal() == [2, 2]
    snf = smith_normal_form([[0, 0], [0, 0]])
    assert snf.diagonal() == [0, 0]


def test_snf_random_against_minor_gcd_oracle():
    rng = random.Random(11)
    for _ in range(60):
        n = rng.randint(1, 4)
        m = [[rng.randint(-6, 6) for _ in range(n)] for _ in range(n)]
        snf = smith_normal_form(m)
        assert snf.verify()
        assert snf.diagonal() == minor_gcd_invariant_factors(m)


def test_det_int_matches_expansion():
    rng = random.Random(5)

    def naive_det(m):
        n = len(m)
        if n == 1:
            return m[0][0]
        total = 0
        for j in range(n):
            sub = [row[:j] + row[j + 1:] for row in m[1:]]
            total += (-1) ** j * m[0][j] * naive_det(sub)
        return total

    for _ in range(40):
        n = rng.randint(1, 5)
        m = [[rng.randint(-5, 5) for _ in range(n)] for _ in range(n)]
        assert det_int(m) == naive_det(m)


def test_solve_mod_roundtrip():
    rng = random.Random(23)
    for n in (2, 3, 4, 6):
        for _ in range(30):
            rows, cols = rng.randint(1, 5), rng.randint(1, 5)
            m = [[rng.randint(-3, 3) for _ in range(cols)] for _ in range(rows)]
            x = [rng.randrange(n) for _ in range(cols)]
            rhs = [sum(m[i][j] * x[j] for j in range(cols)) % n for i in range(rows)]
            sol = solve_mod(m, rhs, n)
            assert sol is not None
            check = [sum(m[i][j] * sol[j] for j in range(cols)) % n
                     for i in range(rows)]
            assert check == rhs


def test_solve_mod_detects_unsolvable():
    # 2x = 1 mod 4 has no solution
    assert solve_mod([[2]], [1], 4) is None
    # 0x = 1 mod 2 has no solution
    assert solve_mod([[0]], [1], 2) is None


def test_field_routines():
    rows = [[Fraction(1), Fraction(2)], [Fraction(2), Fraction(4)]]
    assert field_rank(rows) == 1
    sol = field_solve(rows, [Fraction(3), Fraction(6)])
    assert sol is not None
    assert sol[0] + 2 * sol[1] == 3
    assert field_solve(rows, [Fraction(3), Fraction(7)]) is None
    null = field_nullspace(rows, 2)
    assert len(null) == 1
    v = null[0]
    assert v[0] + 2 * v[1] == 0


def test_field_routines_over_cyclotomics():
    from gpdalg.scalars import Cyc
    i = Cyc.gaussian(0, 1)
    rows = [[Cyc.one(), i], [i, Cyc.rational(-1)]]
    assert field_rank(rows) == 1
    null = field_nullspace(rows, 2, zero=Cyc.zero(), one=Cyc.one())
    assert len(null) == 1
    a, b = null[0]
    assert a + i * b == 0


def test_mat_mul():
    assert mat_mul([[1, 2]], [[3], [4]]) == [[11]]
