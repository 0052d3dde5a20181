"""Small exact linear algebra over Fraction (or any exact field-like) entries.

Matrices are plain lists of lists.  The elimination routines assume entries
support +, -, *, / and truth-testing for "nonzero"; stdlib Fraction and the
scalar tower both qualify.  Shapes here are desk scale (dims well under 100),
so plain Gaussian elimination with exact pivots is the right tool.
"""
from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

Matrix = List[List]
Vector = List


def zeros(r: int, c: int, zero=Fraction(0)) -> Matrix:
    return [[zero for _ in range(c)] for _ in range(r)]


def identity(n: int, one=Fraction(1), zero=Fraction(0)) -> Matrix:
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def mat_add(A: Matrix, B: Matrix) -> Matrix:
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]

def mat_sub(A: Matrix, B: Matrix) -> Matrix:
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_scale(A: Matrix, c) -> Matrix:
    return [[a * c for a in row] for row in A]


def mat_mul(A: Matrix, B: Matrix) -> Matrix:
    rows, inner, cols = len(A), len(B), len(B[0])
    out = []
    for i in range(rows):
        row = []
        for j in range(cols):
            acc = A[i][0] * B[0][j]
            for k in range(1, inner):
                acc = acc + A[i][k] * B[k][j]
            row.append(acc)
        out.append(row)
    return out


def mat_vec(A: Matrix, v: Vector) -> Vector:
    return [sum_prod(row, v) for row in A]


def sum_prod(xs: Sequence, ys: Sequence):
    acc = xs[0] * ys[0]
    for x, y in zip(xs[1:], ys[1:]):
        acc = acc + x * y
    return acc


def transpose(A: Matrix) -> Matrix:
    return [list(col) for col in zip(*A)]


def commutator(A: Matrix, B: Matrix) -> Matrix:
    return mat_sub(mat_mul(A, B), mat_mul(B, A))


def mat_eq(A: Matrix, B: Matrix) -> bool:
    return all(a == b for ra, rb in zip(A, B) for a, b in zip(ra, rb))


def is_zero_matrix(A: Matrix) -> bool:
    return all(not x for row in A for x in row)


def rref(A: Matrix) -> Tuple[Matrix, List[int]]:
    """Reduced row echelon form with unit pivots; returns (R, pivot columns)."""
    R = [list(row) for row in A]
    rows = len(R)
    cols = len(R[0]) if rows else 0
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if R[i][c]), None)
        if pivot is None:
            continue
        R[r], R[pivot] = R[pivot], R[r]
        pv = R[r][c]
        R[r] = [x / pv for x in R[r]]
        for i in range(rows):
            if i != r and R[i][c]:
                f = R[i][c]
                R[i] = [x - f * y for x, y in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return R, pivots


def nullspace(A: Matrix) -> List[Vector]:
    """Basis of the exact kernel, one vector per free column."""
    if not A:
        return []
    R, pivots = rref(A)
    cols = len(A[0])
    zero = A[0][0] - A[0][0] if cols else Fraction(0)
    one = zero + 1
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = [zero for _ in range(cols)]
        v[f] = one
        for r, p in enumerate(pivots):
            v[p] = -R[r][f]
        basis.append(v)
    return basis


def solve_affine(A: Matrix, b: Vector) -> Optional[Tuple[Vector, List[Vector]]]:
    """All solutions of A x = b as (particular, kernel basis); None if inconsistent."""
    rows = len(A)
    cols = len(A[0]) if rows else 0
    aug = [list(A[i]) + [b[i]] for i in range(rows)]
    R, pivots = rref(aug)
    if cols in pivots:
        return None
    zero = b[0] - b[0] if rows else Fraction(0)
    x = [zero for _ in range(cols)]
    for r, p in enumerate(pivots):
        x[p] = R[r][cols]
    return x, nullspace(A)


def det(A: Matrix):
    """Exact determinant via elimination (entries must form a field)."""
    n = len(A)
    M = [list(row) for row in A]
    sign = 1
    acc = None
    for c in range(n):
        pivot = next((i for i in range(c, n) if M[i][c]), None)
        if pivot is None:
            return A[0][0] - A[0][0]
        if pivot != c:
            M[c], M[pivot] = M[pivot], M[c]
            sign = -sign
        pv = M[c][c]
        acc = pv if acc is None else acc * pv
        for i in range(c + 1, n):
            if M[i][c]:
                f = M[i][c] / pv
                M[i] = [x - f * y for x, y in zip(M[i], M[c])]
    return acc * sign if sign == -1 else acc
