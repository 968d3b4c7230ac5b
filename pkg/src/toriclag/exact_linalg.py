"""Exact integer and rational linear algebra.

Everything here works on plain Python ``int`` and ``fractions.Fraction``
values; there is no floating point anywhere in this module.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Optional, Sequence

IntMatrix = list[list[int]]


def as_int_vector(v: Iterable) -> tuple[int, ...]:
    out = []
    for x in v:
        if isinstance(x, Fraction):
            if x.denominator != 1:
                raise ValueError(f"non-integer lattice entry {x}")
            x = x.numerator
        if isinstance(x, bool) or int(x) != x:
            raise ValueError(f"non-integer lattice entry {x!r}")
        out.append(int(x))
    return tuple(out)


def as_rational_vector(v: Iterable) -> tuple[Fraction, ...]:
    return tuple(Fraction(x) for x in v)


def dot(u: Sequence, v: Sequence):
    if len(u) != len(v):
        raise ValueError("dimension mismatch")
    return sum((a * b for a, b in zip(u, v)), 0)


def cross3(u: Sequence[int], v: Sequence[int]) -> tuple[int, int, int]:
    return (
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )


def content(v: Sequence[int]) -> int:
    """gcd of the entries (0 for the zero vector)."""
    g = 0
    for x in v:
        g = gcd(g, int(x))
    return g


def is_primitive(v: Sequence[int]) -> bool:
    g = content(v)
    if g == 0:
        raise ValueError("zero vector has no primitivity")
    return g == 1


def primitive_part(v: Sequence[int]) -> tuple[int, ...]:
    g = content(v)
    if g == 0:
        raise ValueError("zero vector has no primitivity")
    return tuple(int(x) // g for x in v)


def identity(n: int) -> IntMatrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(A: Sequence[Sequence], B: Sequence[Sequence]) -> list[list]:
    if not A:
        return []
    inner = len(B)
    if len(A[0]) != inner:
        raise ValueError("shape mismatch")
    cols = len(B[0]) if inner else 0
    return [[sum((A[i][k] * B[k][j] for k in range(inner)), 0) for j in range(cols)]
            for i in range(len(A))]


def determinant(A: Sequence[Sequence]) -> Fraction:
    """Exact determinant by fraction-valued elimination."""
    n = len(A)
    M = [[Fraction(x) for x in row] for row in A]
    if any(len(row) != n for row in M):
        raise ValueError("determinant of a non-square matrix")
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if M[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            M[c], M[p] = M[p], M[c]
            det = -det
        det *= M[c][c]
        for r in range(c + 1, n):
            if M[r][c] != 0:
                f = M[r][c] / M[c][c]
                M[r] = [a - f * b for a, b in zip(M[r], M[c])]
    return det


def inverse_unimodular(U: Sequence[Sequence[int]]) -> IntMatrix:
    """Integer inverse of a unimodular matrix (Gauss-Jordan over Q)."""
    n = len(U)
    M = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(U)]
    for c in range(n):
        p = next((r for r in range(c, n) if M[r][c] != 0), None)
        if p is None:
            raise ValueError("matrix is singular")
        M[c], M[p] = M[p], M[c]
        piv = M[c][c]
        M[c] = [x / piv for x in M[c]]
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = M[r][c]
                M[r] = [a - f * b for a, b in zip(M[r], M[c])]
    inv = [[x for x in row[n:]] for row in M]
    if any(x.denominator != 1 for row in inv for x in row):
        raise ValueError("matrix is not unimodular")
    return [[int(x) for x in row] for row in inv]


def smith_normal_form(A: Sequence[Sequence[int]]) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return ``(U, D, V)`` with ``U @ A @ V == D``.

    ``U`` and ``V`` are unimodular, ``D`` is diagonal with non-negative
    entries and ``D[i][i]`` divides ``D[i+1][i+1]``. Pivots are chosen by
    minimal absolute value; fine for the desk-sized matrices used here.
    """
    rows = len(A)
    if rows == 0 or len(A[0]) == 0:
        raise ValueError("empty matrix")
    cols = len(A[0])
    D = [list(as_int_vector(r)) for r in A]
    if any(len(r) != cols for r in D):
        raise ValueError("matrix is not rectangular")
    U = identity(rows)
    V = identity(cols)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for M in (D, V):
            for r in M:
                r[i], r[j] = r[j], r[i]

    def add_row(dst, src, k):  # row_dst += k * row_src
        for M in (D, U):
            M[dst] = [a + k * b for a, b in zip(M[dst], M[src])]

    def add_col(dst, src, k):  # col_dst += k * col_src
        for M in (D, V):
            for r in M:
                r[dst] += k * r[src]

    for t in range(min(rows, cols)):
        while True:
            best = None
            for i in range(t, rows):
                for j in range(t, cols):
                    if D[i][j] != 0 and (best is None or abs(D[i][j]) < abs(D[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                return U, D, V
            if best[0] != t:
                swap_rows(t, best[0])
            if best[1] != t:
                swap_cols(t, best[1])
            p = D[t][t]
            clean = True
            for i in range(t + 1, rows):
                if D[i][t]:
                    add_row(i, t, -(D[i][t] // p))
                    clean = clean and D[i][t] == 0
            for j in range(t + 1, cols):
                if D[t][j]:
                    add_col(j, t, -(D[t][j] // p))
                    clean = clean and D[t][j] == 0
            if not clean:
                continue
            bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                        if D[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
    return U, D, V


def elementary_divisors(A: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Nonzero diagonal entries of the Smith normal form."""
    _, D, _ = smith_normal_form(A)
    return tuple(D[i][i] for i in range(min(len(D), len(D[0]))) if D[i][i] != 0)


def _echelon(vectors: Sequence[Sequence]) -> list[list[Fraction]]:
    M = [[Fraction(x) for x in v] for v in vectors]
    if not M:
        return []
    n = len(M[0])
    if any(len(r) != n for r in M):
        raise ValueError("vectors of different dimension")
    rank = 0
    for c in range(n):
        p = next((r for r in range(rank, len(M)) if M[r][c] != 0), None)
        if p is None:
            continue
        M[rank], M[p] = M[p], M[rank]
        for r in range(rank + 1, len(M)):
            if M[r][c] != 0:
                f = M[r][c] / M[rank][c]
                M[r] = [a - f * b for a, b in zip(M[r], M[rank])]
        rank += 1
    return M[:rank]


def rational_rank(vectors: Sequence[Sequence]) -> int:
    return len(_echelon(vectors))


def in_rational_span(v: Sequence, vectors: Sequence[Sequence]) -> bool:
    if not vectors:
        return all(x == 0 for x in v)
    return rational_rank(list(vectors) + [v]) == rational_rank(vectors)


def solve_all_ones(A: Sequence[Sequence[int]]) -> Optional[tuple[int, ...]]:
    """Integer ``x`` with ``A @ x == (1, ..., 1)``, or ``None`` if there is none."""
    U, D, V = smith_normal_form(A)
    rows, cols = len(D), len(D[0])
    rhs = [sum(U[i]) for i in range(rows)]  # U @ ones
    z = [0] * cols
    for i in range(rows):
        d = D[i][i] if i < cols else 0
        if d == 0:
            if rhs[i] != 0:
                return None
        elif rhs[i] % d:
            return None
        else:
            z[i] = rhs[i] // d
    x = tuple(sum(V[r][k] * z[k] for k in range(cols)) for r in range(cols))
    assert all(dot(row, x) == 1 for row in A)
    return x


def unimodular_with_first_row(v: Sequence[int]) -> IntMatrix:
    """A unimodular matrix whose first row is the primitive vector ``v``."""
    if not is_primitive(v):
        raise ValueError("vector is not primitive")
    U, D, V = smith_normal_form([list(v)])
    # U*v*V = e1 with U = (+-1), so v = U * e1 * V^-1 and row 0 of V^-1 is +-v
    W = inverse_unimodular(V)
    if U[0][0] < 0:
        W[0] = [-x for x in W[0]]
    assert tuple(W[0]) == tuple(v)
    return W
