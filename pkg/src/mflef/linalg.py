"""Dense exact linear algebra over Scalar (used by the graded solvers)."""

from __future__ import annotations

from .scalars import Scalar, as_scalar

Matrix = list  # list[list[Scalar]]


def zeros(rows: int, cols: int) -> Matrix:
    z = Scalar.zero()
    return [[z for _ in range(cols)] for _ in range(rows)]


def identity(n: int) -> Matrix:
    mat = zeros(n, n)
    for i in range(n):
        mat[i][i] = Scalar.one()
    return mat


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    rows, inner, cols = len(a), len(b), len(b[0]) if b else 0
    out = zeros(rows, cols)
    for i in range(rows):
        ai = a[i]
        for k in range(inner):
            c = ai[k]
            if c.is_zero():
                continue
            bk = b[k]
            oi = out[i]
            for j in range(cols):
                if not bk[j].is_zero():
                    oi[j] = oi[j] + c * bk[j]
    return out


def mat_vec(a: Matrix, v: list) -> list:
    return [sum_scalars(a[i][j] * v[j] for j in range(len(v))) for i in range(len(a))]


def sum_scalars(items) -> Scalar:
    total = Scalar.zero()
    for item in items:
        total = total + item
    return total


def _echelon(mat: Matrix, ncols: int):
    """In-place row reduction to reduced echelon form; returns pivot columns."""
    pivots = []
    r = 0
    for col in range(ncols):
        pivot = next((i for i in range(r, len(mat)) if not mat[i][col].is_zero()), None)
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        inv = mat[r][col].inverse()
        mat[r] = [c * inv for c in mat[r]]
        for i in range(len(mat)):
            if i != r and not mat[i][col].is_zero():
                f = mat[i][col]
                mat[i] = [c - f * p for c, p in zip(mat[i], mat[r])]
        pivots.append(col)
        r += 1
    return pivots


def rank(a: Matrix) -> int:
    if not a or not a[0]:
        return 0
    work = [row[:] for row in a]
    return len(_echelon(work, len(a[0])))


def solve(a: Matrix, b: list):
    """One solution x of A x = b, or None when inconsistent."""
    rows = len(a)
    cols = len(a[0]) if rows else 0
    aug = [a[i][:] + [as_scalar(b[i])] for i in range(rows)]
    pivots = _echelon(aug, cols)
    for i in range(len(pivots), rows):
        if not aug[i][cols].is_zero():
            return None
    x = [Scalar.zero()] * cols
    for i, col in enumerate(pivots):
        x[col] = aug[i][cols]
    return x


def nullspace(a: Matrix) -> list:
    """Basis column vectors of ker(A), deterministic order."""
    rows = len(a)
    cols = len(a[0]) if rows else 0
    if cols == 0:
        return []
    work = [row[:] for row in a]
    pivots = _echelon(work, cols)
    pivot_set = set(pivots)
    basis = []
    for free in range(cols):
        if free in pivot_set:
            continue
        vec = [Scalar.zero()] * cols
        vec[free] = Scalar.one()
        for i, col in enumerate(pivots):
            vec[col] = -work[i][free]
        basis.append(vec)
    return basis


def invert(a: Matrix) -> Matrix:
    n = len(a)
    aug = [a[i][:] + identity(n)[i] for i in range(n)]
    pivots = _echelon(aug, n)
    if len(pivots) != n:
        raise ArithmeticError("matrix is singular")
    return [row[n:] for row in aug]


def det(a: Matrix) -> Scalar:
    n = len(a)
    if n == 0:
        return Scalar.one()
    work = [row[:] for row in a]
    result = Scalar.one()
    for col in range(n):
        pivot = next((i for i in range(col, n) if not work[i][col].is_zero()), None)
        if pivot is None:
            return Scalar.zero()
        if pivot != col:
            work[col], work[pivot] = work[pivot], work[col]
            result = -result
        result = result * work[col][col]
        inv = work[col][col].inverse()
        for i in range(col + 1, n):
            if not work[i][col].is_zero():
                f = work[i][col] * inv
                work[i] = [c - f * p for c, p in zip(work[i], work[col])]
    return result

