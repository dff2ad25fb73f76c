"""Exact rational linear algebra on immutable tuples.

Vectors are tuples of Fraction (or int), matrices are tuples of row
tuples.  Nothing here ever touches floating point: signatures come from
Descartes' rule on the integer characteristic polynomial, quadratic
forms are split by rational LDL decomposition, and integer kernels come
from unimodular column reduction.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .errors import InputError, PreconditionError

Vec = tuple[Fraction, ...]
Mat = tuple[Vec, ...]


def vec(entries: Sequence) -> Vec:
    return tuple(Fraction(x) for x in entries)


def mat(rows: Sequence[Sequence]) -> Mat:
    out = tuple(vec(row) for row in rows)
    if out and any(len(row) != len(out[0]) for row in out):
        raise InputError("ragged matrix")
    return out


def dot(u: Sequence, v: Sequence) -> Fraction:
    if len(u) != len(v):
        raise InputError("dimension mismatch")
    return sum((Fraction(a) * Fraction(b) for a, b in zip(u, v)), Fraction(0))


def mat_vec(m: Mat, v: Sequence) -> Vec:
    return tuple(dot(row, v) for row in m)


def mat_mul(a: Mat, b: Mat) -> Mat:
    if a and b and len(a[0]) != len(b):
        raise InputError("dimension mismatch")
    cols = list(zip(*b))
    return tuple(tuple(dot(row, col) for col in cols) for row in a)


def transpose(m: Mat) -> Mat:
    return tuple(zip(*m))


def identity(n: int) -> Mat:
    return tuple(
        tuple(Fraction(1 if i == j else 0) for j in range(n)) for i in range(n)
    )


def is_symmetric(m: Mat) -> bool:
    n = len(m)
    return all(len(row) == n for row in m) and all(
        m[i][j] == m[j][i] for i in range(n) for j in range(i)
    )


def char_poly(m: Mat) -> list[Fraction]:
    """Coefficients [1, c1, ..., cn] of det(x*I - M), highest degree first.

    Faddeev-LeVerrier recursion; exact over the rationals, and integral
    when the matrix is integral.
    """
    n = len(m)
    coeffs = [Fraction(1)]
    work = identity(n)
    for k in range(1, n + 1):
        work = mat_mul(m, work)
        c = -sum((work[i][i] for i in range(n)), Fraction(0)) / k
        coeffs.append(c)
        if k < n:
            work = tuple(
                tuple(work[i][j] + (c if i == j else 0) for j in range(n))
                for i in range(n)
            )
    return coeffs


def sign_changes(coeffs: Sequence[Fraction]) -> int:
    """Descartes sign variation count, zeros skipped."""
    signs = [1 if c > 0 else -1 for c in coeffs if c != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def symmetric_inertia(m: Mat) -> tuple[int, int, int]:
    """(positive, negative, zero) eigenvalue counts of a symmetric matrix.

    A real symmetric matrix has only real eigenvalues, so Descartes'
    rule applied to the exact characteristic polynomial is sharp: the
    number of positive roots equals the number of sign variations.
    """
    if not is_symmetric(m):
        raise InputError("matrix is not symmetric")
    n = len(m)
    p = char_poly(m)
    pos = sign_changes(p)
    neg = sign_changes([c if (n - i) % 2 == 0 else -c for i, c in enumerate(p)])
    return pos, neg, n - pos - neg


def ldl_decompose(q: Mat) -> tuple[list[Fraction], list[list[Fraction]]]:
    """Split a positive definite form as Q(x) = sum_i d_i (x_i + sum_{j>i} u_ij x_j)^2.

    Returns (d, u) with every d_i > 0; raises PreconditionError when the
    form is not positive definite.
    """
    if not is_symmetric(q):
        raise InputError("quadratic form matrix is not symmetric")
    n = len(q)
    d: list[Fraction] = [Fraction(0)] * n
    u = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        pivot = q[i][i] - sum((d[k] * u[k][i] * u[k][i] for k in range(i)), Fraction(0))
        if pivot <= 0:
            raise PreconditionError("form is not positive definite")
        d[i] = pivot
        u[i][i] = Fraction(1)
        for j in range(i + 1, n):
            off = q[i][j] - sum(
                (d[k] * u[k][i] * u[k][j] for k in range(i)), Fraction(0)
            )
            u[i][j] = off / pivot
    return d, u


def mat_inverse(m: Mat) -> Mat:
    """Exact inverse by Gauss-Jordan elimination."""
    n = len(m)
    aug = [list(row) + list(identity(n)[i]) for i, row in enumerate(m)]
    for col in range(n):
        pivot_row = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot_row is None:
            raise PreconditionError("matrix is singular")
        aug[col], aug[pivot_row] = aug[pivot_row], aug[col]
        inv_pivot = 1 / Fraction(aug[col][col])
        aug[col] = [x * inv_pivot for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [a - factor * b for a, b in zip(aug[r], aug[col])]
    return tuple(tuple(row[n:]) for row in aug)


def rational_kernel(rows: Sequence[Sequence[Fraction]], n: int) -> list[Vec]:
    """Basis of the right kernel of a matrix with n columns, by row reduction."""
    work = [list(vec(row)) for row in rows]
    for row in work:
        if len(row) != n:
            raise InputError("dimension mismatch")
    pivots: list[int] = []
    r = 0
    for col in range(n):
        pivot_row = next((i for i in range(r, len(work)) if work[i][col] != 0), None)
        if pivot_row is None:
            continue
        work[r], work[pivot_row] = work[pivot_row], work[r]
        inv_pivot = 1 / work[r][col]
        work[r] = [x * inv_pivot for x in work[r]]
        for i in range(len(work)):
            if i != r and work[i][col] != 0:
                factor = work[i][col]
                work[i] = [a - factor * b for a, b in zip(work[i], work[r])]
        pivots.append(col)
        r += 1
    basis: list[Vec] = []
    free = [c for c in range(n) if c not in pivots]
    for fc in free:
        v = [Fraction(0)] * n
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -work[i][fc]
        basis.append(tuple(v))
    return basis


def integer_kernel(rows: Sequence[Sequence[Fraction]], n: int) -> list[tuple[int, ...]]:
    """Basis of the saturated integer kernel {x in Z^n : A x = 0}.

    Denominators are cleared row by row, then unimodular column
    operations reduce the matrix to column echelon form; the columns of
    the accumulated transform that map to zero form a basis.
    """
    cleared: list[list[int]] = []
    for row in rows:
        row = list(vec(row))
        if len(row) != n:
            raise InputError("dimension mismatch")
        scale = 1
        for x in row:
            scale = scale * x.denominator // _gcd(scale, x.denominator)
        cleared.append([int(x * scale) for x in row])
    a = [list(col) for col in zip(*cleared)] if cleared else [[] for _ in range(n)]
    # a[i] is the i-th column of the input, viewed as a row here so the
    # reduction below is plain row arithmetic on (column, transform) pairs.
    u = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    m = len(cleared)
    rank = 0
    for pos in range(m):
        rank = _eliminate_column(a, u, rank, pos)
    return [tuple(u[i]) for i in range(rank, n)]


def _eliminate_column(a, u, rank, pos):
    live = [i for i in range(rank, len(a)) if a[i][pos] != 0]
    if not live:
        return rank
    while len(live) > 1:
        live.sort(key=lambda i: abs(a[i][pos]))
        base = live[0]
        for i in live[1:]:
            q = a[i][pos] // a[base][pos]
            a[i] = [x - q * y for x, y in zip(a[i], a[base])]
            u[i] = [x - q * y for x, y in zip(u[i], u[base])]
        live = [i for i in live if a[i][pos] != 0]
    keep = live[0]
    a[rank], a[keep] = a[keep], a[rank]
    u[rank], u[keep] = u[keep], u[rank]
    if a[rank][pos] < 0:
        a[rank] = [-x for x in a[rank]]
        u[rank] = [-x for x in u[rank]]
    return rank + 1


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a if a else 1
