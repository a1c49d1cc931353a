"""Exact linear algebra: integer Smith normal form, Bareiss determinants,
linear systems over Z_n, and Gaussian elimination over exact fields.

Field routines are generic over any scalar supporting +, -, *, /, bool
(Fraction and Cyc both qualify).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd


# ----------------------------------------------------------------- integers

def _identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(a, b):
    rows, inner, cols = len(a), len(b), len(b[0]) if b else 0
    out = [[0] * cols for _ in range(rows)]
    for i in range(rows):
        ai = a[i]
        for k in range(inner):
            f = ai[k]
            if f:
                bk = b[k]
                oi = out[i]
                for j in range(cols):
                    oi[j] += f * bk[j]
    return out


@dataclass
class SNFResult:
    """U @ M @ V == D with U, V unimodular and D = diag(d1, d2, ...),
    each d nonnegative and d1 | d2 | ... with trailing zeros."""

    matrix: list
    U: list
    D: list
    V: list

    def diagonal(self):
        rows = len(self.D)
        cols = len(self.D[0]) if rows else 0
        return [self.D[i][i] for i in range(min(rows, cols))]

    def invariant_factors(self):
        """Diagonal entries != 1, i.e. the cokernel's cyclic factors
        (a 0 denotes a free Z summand)."""
        return [d for d in self.diagonal() if d != 1]

    def verify(self):
        if mat_mul(mat_mul(self.U, self.matrix), self.V) != self.D:
            return False
        if abs(det_int(self.U)) != 1 or abs(det_int(self.V)) != 1:
            return False
        diag = self.diagonal()
        for a, b in zip(diag, diag[1:]):
            if a == 0:
                if b != 0:
                    return False
            elif a < 0 or b % a != 0:
                return False
        return True


def smith_normal_form(matrix):
    """SNF over Z with unimodular transforms recorded.

    Pivoting picks the smallest nonzero absolute value in the working
    block to keep entry growth in check; Python integers are exact at any
    size regardless.
    """
    m = [list(row) for row in matrix]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    U = _identity(rows)
    V = _identity(cols)

    def swap_rows(i, j):
        m[i], m[j] = m[j], m[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in m:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, q):
        m[dst] = [a + q * b for a, b in zip(m[dst], m[src])]
        U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(src, dst, q):
        for row in m:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]

    def negate_row(i):
        m[i] = [-a for a in m[i]]
        U[i] = [-a for a in U[i]]

    def diagonalize():
        t = 0
        while t < min(rows, cols):
            pivot = None
            best = None
            for i in range(t, rows):
                for j in range(t, cols):
                    a = abs(m[i][j])
                    if a and (best is None or a < best):
                        best, pivot = a, (i, j)
            if pivot is None:
                break
            swap_rows(t, pivot[0])
            swap_cols(t, pivot[1])
            while True:
                dirty = False
                for i in range(t + 1, rows):
                    if m[i][t]:
                        add_row(t, i, -(m[i][t] // m[t][t]))
                        if m[i][t]:
                            swap_rows(t, i)
                            dirty = True
                for j in range(t + 1, cols):
                    if m[t][j]:
                        add_col(t, j, -(m[t][j] // m[t][t]))
                        if m[t][j]:
                            swap_cols(t, j)
                            dirty = True
                if not dirty:
                    break
            if m[t][t] < 0:
                negate_row(t)
            t += 1

    diagonalize()
    while True:
        k = min(rows, cols)
        violation = next(
            (i for i in range(k - 1)
             if m[i][i] and m[i + 1][i + 1] % m[i][i] != 0), None)
        if violation is None:
            break
        add_col(violation + 1, violation, 1)
        diagonalize()
    return SNFResult([list(row) for row in matrix], U, m, V)


def det_int(matrix):
    """Exact determinant of a square integer matrix (Bareiss)."""
    n = len(matrix)
    if n == 0:
        return 1
    m = [list(row) for row in matrix]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if not m[k][k]:
            swap = next((i for i in range(k + 1, n) if m[i][k]), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def solve_mod(matrix, rhs, n):
    """One solution x of matrix @ x = rhs (mod n), or None.

    Uses the integer SNF: with U M V = D the system becomes
    D y = U rhs (mod n), x = V y.
    """
    if not matrix or not matrix[0]:
        if any(b % n for b in rhs):
            return None
        return []
    snf = smith_normal_form(matrix)
    rows, cols = len(matrix), len(matrix[0])
    ub = [sum(snf.U[i][k] * rhs[k] for k in range(rows)) % n for i in range(rows)]
    y = [0] * cols
    for i in range(rows):
        d = snf.D[i][i] if i < cols else 0
        if d == 0:
            if ub[i] % n:
                return None
            continue
        g = gcd(d, n)
        if ub[i] % g:
            return None
        d_, b_, n_ = d // g, ub[i] // g, n // g
        y[i] = (b_ * pow(d_, -1, n_)) % n_ if n_ > 1 else 0
    return [sum(snf.V[i][j] * y[j] for j in range(cols)) % n for i in range(cols)]


# ------------------------------------------------------------------- fields

def field_echelon(rows, ncols):
    """Reduced row echelon form; returns (new_rows, pivot_columns)."""
    rows = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = rows[r][c]
        rows[r] = [x / inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def field_rank(rows, ncols=None):
    if not rows:
        return 0
    ncols = len(rows[0]) if ncols is None else ncols
    _, pivots = field_echelon(rows, ncols)
    return len(pivots)


def field_solve(rows, rhs):
    """One solution of rows @ x = rhs over a field, or None."""
    if not rows:
        return []
    ncols = len(rows[0])
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    ech, pivots = field_echelon(aug, ncols)
    for row in ech:
        if not any(row[:ncols]) and row[ncols]:
            return None
    zero = rows[0][0] - rows[0][0]
    sol = [zero] * ncols
    for i, c in enumerate(pivots):
        sol[c] = ech[i][ncols]
    return sol


def field_nullspace(rows, ncols, zero=Fraction(0), one=Fraction(1)):
    """Basis of the right nullspace over a field."""
    ech, pivots = field_echelon(rows, ncols) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        vec = [zero] * ncols
        vec[f] = one
        for i, c in enumerate(pivots):
            vec[c] = zero - ech[i][f]
        basis.append(vec)
    return basis
