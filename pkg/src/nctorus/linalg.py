"""Small exact matrix helpers over ints, Fractions and the scalar kinds.

Matrices are lists (or tuples) of rows.  Nothing here uses floating point.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .errors import DimensionMismatch, DivisionByZero

Matrix = Sequence[Sequence]


def shape(M: Matrix):
    rows = len(M)
    cols = len(M[0]) if rows else 0
    if any(len(r) != cols for r in M):
        raise DimensionMismatch("ragged matrix")
    return rows, cols


def identity(n: int) -> list:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def zeros(r: int, c: int) -> list:
    return [[0] * c for _ in range(r)]


def transpose(M: Matrix) -> list:
    return [list(col) for col in zip(*M)] if M else []


def matmul(A: Matrix, B: Matrix) -> list:
    ra, ca = shape(A)
    rb, cb = shape(B)
    if ca != rb:
        raise DimensionMismatch(f"cannot multiply {ra}x{ca} by {rb}x{cb}")
    out = []
    for i in range(ra):
        row = A[i]
        out_row = []
        for j in range(cb):
            acc = 0
            for k in range(ca):
                a = row[k]
                if a != 0:
                    b = B[k][j]
                    if b != 0:
                        acc = acc + a * b
            out_row.append(acc)
        out.append(out_row)
    return out


def matvec(A: Matrix, v: Sequence) -> list:
    return [sum((a * x for a, x in zip(row, v)), 0) for row in A]


def matadd(A: Matrix, B: Matrix) -> list:
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def matsub(A: Matrix, B: Matrix) -> list:
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def matneg(A: Matrix) -> list:
    return [[-a for a in r] for r in A]


def scale(A: Matrix, s) -> list:
    return [[a * s for a in r] for r in A]


def matpow(A: Matrix, k: int) -> list:
    n = len(A)
    result = identity(n)
    base = [list(r) for r in A]
    while k:
        if k & 1:
            result = matmul(result, base)
        base = matmul(base, base)
        k >>= 1
    return result


def mat_equal(A: Matrix, B: Matrix) -> bool:
    return len(A) == len(B) and all(
        len(ra) == len(rb) and all(a == b for a, b in zip(ra, rb)) for ra, rb in zip(A, B)
    )


def is_zero_matrix(A: Matrix) -> bool:
    return all(a == 0 for r in A for a in r)


def block(M: Matrix, rows: range, cols: range) -> list:
    return [[M[i][j] for j in cols] for i in rows]


def block_matrix(blocks) -> list:
    """Assemble a matrix from a 2-D list of blocks (empty blocks allowed)."""
    out = []
    for brow in blocks:
        height = max((len(b) for b in brow), default=0)
        for i in range(height):
            row = []
            for b in brow:
                row.extend(b[i] if b else [])
            out.append(row)
    return out


def is_integer_matrix(M: Matrix) -> bool:
    for r in M:
        for a in r:
            if isinstance(a, int):
                continue
            if isinstance(a, Fraction) and a.denominator == 1:
                continue
            return False
    return True


def to_int_matrix(M: Matrix) -> list:
    return [[int(a) for a in r] for r in M]


def det_bareiss(M: Matrix):
    """Fraction-free (Bareiss) determinant.  Exact for ints; works over any exact field."""
    n, c = shape(M)
    if n != c:
        raise DimensionMismatch("determinant of a non-square matrix")
    if n == 0:
        return 1
    A = [list(r) for r in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if A[i][k] != 0), None)
            if swap is None:
                return 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = A[i][j] * A[k][k] - A[i][k] * A[k][j]
                if isinstance(num, int) and isinstance(prev, int):
                    A[i][j] = num // prev
                else:
                    A[i][j] = num / prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def inverse(M: Matrix) -> list:
    """Gauss-Jordan inverse over an exact field (ints are promoted to Fractions)."""
    n, c = shape(M)
    if n != c:
        raise DimensionMismatch("inverse of a non-square matrix")
    A = [[Fraction(a) if isinstance(a, int) else a for a in r] + [Fraction(int(i == j)) for j in range(n)]
         for i, r in enumerate(M)]
    for col in range(n):
        piv = next((i for i in range(col, n) if A[i][col] != 0), None)
        if piv is None:
            raise DivisionByZero("matrix is singular")
        A[col], A[piv] = A[piv], A[col]
        inv_p = 1 / A[col][col]
        A[col] = [a * inv_p for a in A[col]]
        for i in range(n):
            if i != col and A[i][col] != 0:
                f = A[i][col]
                A[i] = [a - f * b for a, b in zip(A[i], A[col])]
    return [r[n:] for r in A]


def integer_inverse(M: Matrix):
    """Inverse of an integer matrix as an integer matrix, or None if not unimodular."""
    d = det_bareiss(M)
    if d not in (1, -1):
        return None
    inv = inverse(M)
    return to_int_matrix(inv)
