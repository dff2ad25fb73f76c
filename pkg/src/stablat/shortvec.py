"""Complete short-vector enumeration for positive definite rational forms.

The enumerator splits the form exactly as Q(x) = sum_i d_i (x_i +
sum_{j>i} u_ij x_j)^2 and walks integer intervals whose endpoints are
computed exactly, so the returned list is provably all of
{x != 0 : Q(x) <= bound}.  Floating point is used only to seed the
integer square-root walk, never to prune.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

from .linalg import Mat, dot, ldl_decompose, mat


def quadratic_value(q: Mat, x: Sequence[int]) -> Fraction:
    """Q(x) = x^T q x, exact."""
    return dot(x, tuple(dot(row, x) for row in q))


def floor_plus_sqrt(p: Fraction, t: Fraction) -> int:
    """Largest integer n with n <= p + sqrt(t), for rational p and t >= 0."""
    guess = p.numerator // p.denominator + math.isqrt(t.numerator // t.denominator) + 2
    while guess - p > 0 and (guess - p) ** 2 > t:
        guess -= 1
    return guess


def enumerate_short_vectors(
    q: Sequence[Sequence], bound, half: bool = False
) -> list[tuple[int, ...]]:
    """All integer vectors x != 0 with Q(x) <= bound, lexicographically sorted.

    Fincke-Pohst style descent on the exact LDL split of q.  With
    half=True only the representative of each {x, -x} pair whose first
    nonzero entry is positive is kept.  Raises PreconditionError when q
    is not positive definite.
    """
    form = mat(q)
    bound = Fraction(bound)
    d, u = ldl_decompose(form)
    n = len(d)
    found: list[tuple[int, ...]] = []
    if bound < 0:
        return found
    x = [0] * n

    def descend(i: int, budget: Fraction) -> None:
        if i < 0:
            if any(x):
                found.append(tuple(x))
            return
        center = sum((u[i][j] * x[j] for j in range(i + 1, n)), Fraction(0))
        t = budget / d[i]
        hi = floor_plus_sqrt(-center, t)
        lo = -floor_plus_sqrt(center, t)
        for value in range(lo, hi + 1):
            x[i] = value
            descend(i - 1, budget - d[i] * (value + center) ** 2)
        x[i] = 0

    descend(n - 1, bound)
    if half:
        found = [v for v in found if _leading_sign(v) > 0]
    found.sort()
    return found


def _leading_sign(v: tuple[int, ...]) -> int:
    for entry in v:
        if entry:
            return 1 if entry > 0 else -1
    return 0
