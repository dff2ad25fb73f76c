from fractions import Fraction
from itertools import product

import pytest

from stablat import PreconditionError
from stablat.shortvec import enumerate_short_vectors, floor_plus_sqrt, quadratic_value


def test_floor_plus_sqrt_exact_square():
    # 1 + sqrt(4) = 3 exactly; no off-by-one at perfect squares
    assert floor_plus_sqrt(Fraction(1), Fraction(4)) == 3
    assert floor_plus_sqrt(Fraction(0), Fraction(0)) == 0


def test_floor_plus_sqrt_rationals():
    # 1/2 + sqrt(2) = 1.914..., floor 1
    assert floor_plus_sqrt(Fraction(1, 2), Fraction(2)) == 1
    # -5/2 + sqrt(1/4) = -2 exactly
    assert floor_plus_sqrt(Fraction(-5, 2), Fraction(1, 4)) == -2


def test_identity_form_counts():
    # x^2 + y^2 <= 4: all integer points in the closed disk except 0
    found = enumerate_short_vectors([[1, 0], [0, 1]], 4)
    expected = sorted(
        (x, y)
        for x, y in product(range(-2, 3), repeat=2)
        if (x, y) != (0, 0) and x * x + y * y <= 4
    )
    assert found == expected


def test_matches_box_scan_on_skew_form():
    q = [[2, 1], [1, 3]]
    bound = 12
    found = enumerate_short_vectors(q, bound)
    expected = sorted(
        (x, y)
        for x, y in product(range(-6, 7), repeat=2)
        if (x, y) != (0, 0) and quadratic_value(q, (x, y)) <= bound
    )
    assert found == expected


def test_half_keeps_one_per_sign_pair():
    full = enumerate_short_vectors([[1, 0], [0, 1]], 2)
    half = enumerate_short_vectors([[1, 0], [0, 1]], 2, half=True)
    assert len(full) == 2 * len(half)
    assert all(tuple(-a for a in v) not in half for v in half)


def test_negative_bound_is_empty():
    assert enumerate_short_vectors([[1]], -1) == []


def test_rejects_indefinite_form():
    with pytest.raises(PreconditionError):
        enumerate_short_vectors([[1, 0], [0, -1]], 5)


def test_fractional_entries_and_bound():
    q = [[Fraction(1, 4)]]
    # x^2/4 <= 9/4 means |x| <= 3
    assert enumerate_short_vectors(q, Fraction(9, 4)) == [
        (-3,),
        (-2,),
        (-1,),
        (1,),
        (2,),
        (3,),
    ]
