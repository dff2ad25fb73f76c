from fractions import Fraction

import pytest

from stablat import PreconditionError
from stablat.linalg import (
    char_poly,
    identity,
    integer_kernel,
    ldl_decompose,
    mat,
    mat_inverse,
    mat_mul,
    rational_kernel,
    symmetric_inertia,
)


def test_char_poly_of_diag():
    m = mat([[2, 0], [0, 3]])
    # (x - 2)(x - 3) = x^2 - 5x + 6, stored leading-first
    assert char_poly(m) == [Fraction(1), Fraction(-5), Fraction(6)]


def test_inertia_hyperbolic():
    assert symmetric_inertia(mat([[0, 1], [1, 0]])) == (1, 1, 0)


def test_inertia_with_kernel():
    assert symmetric_inertia(mat([[1, 0, 0], [0, 0, 0], [0, 0, -2]])) == (1, 1, 1)


def test_mukai_signature_rank_one():
    # pairing matrix of the rank-one reference lattice in (r, c, s) order
    m = mat([[0, 0, -1], [0, 2, 0], [-1, 0, 0]])
    assert symmetric_inertia(m) == (2, 1, 0)


def test_ldl_reconstructs():
    q = mat([[4, 2, 0], [2, 3, 1], [0, 1, 5]])
    d, u = ldl_decompose(q)
    n = len(d)
    rebuilt = [
        [
            sum(d[k] * u[k][i] * u[k][j] for k in range(n))
            for j in range(n)
        ]
        for i in range(n)
    ]
    assert rebuilt == [list(row) for row in q]
    assert all(value > 0 for value in d)


def test_ldl_rejects_indefinite():
    with pytest.raises(PreconditionError):
        ldl_decompose(mat([[1, 0], [0, -1]]))


def test_mat_inverse_round_trip():
    m = mat([[2, 1], [7, 4]])
    assert mat_mul(m, mat_inverse(m)) == identity(2)


def test_rational_kernel_dimension():
    rows = [mat([[1, 2, 3]])[0]]
    kernel = rational_kernel(rows, 3)
    assert len(kernel) == 2
    for vec in kernel:
        assert sum(a * b for a, b in zip(rows[0], vec)) == 0


def test_integer_kernel_is_primitive():
    # kernel of (2, 4) is spanned by (2, -1), not (4, -2)
    rows = [(Fraction(2), Fraction(4))]
    kernel = integer_kernel(rows, 2)
    assert len(kernel) == 1
    x, y = kernel[0]
    assert 2 * x + 4 * y == 0
    from math import gcd

    assert gcd(abs(x), abs(y)) == 1
