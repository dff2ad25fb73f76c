import math
from fractions import Fraction

import pytest

from stablat import (
    HoleClassError,
    PreconditionError,
    TwoTermSheafDatum,
    central_charge,
    charge_norm_inf,
    evaluate,
    exp_params,
    functional_rows,
    gl2_apply,
    gl2_compose,
    gl2_from_matrix,
    gl2_identity,
    gl2_inverse,
    gl2_relabel,
    heart_contains,
    is_positive_plane,
    pair,
    plane_gram,
    principal_phase,
    same_component,
    standard_charge,
    vector_from_tuple,
)
from _oracles import oracle_charge_rows


def std(ref_lattice, b=(0,), omega=(2,)):
    return standard_charge(ref_lattice, exp_params(b, omega))


def test_standard_charge_matches_oracle(ref_lattice):
    z = std(ref_lattice, b=(1,), omega=(3,))
    re, im = oracle_charge_rows(ref_lattice.ns_gram, (1,), (3,))
    assert z.re == re
    assert z.im == im


def test_standard_charge_rejects_bad_omega(ref_lattice, rank2_lattice):
    with pytest.raises(PreconditionError):
        std(ref_lattice, omega=(0,))
    with pytest.raises(PreconditionError):
        # positive square but on the wrong side of the ample cone
        standard_charge(rank2_lattice, exp_params((0, 0), (-1, 0)))


def test_evaluate_reference_values(ref_lattice):
    z = std(ref_lattice)
    assert evaluate(ref_lattice, z, vector_from_tuple((1, 0, 1))) == (3, 0)
    assert evaluate(ref_lattice, z, vector_from_tuple((0, 0, 1))) == (-1, 0)
    assert evaluate(ref_lattice, z, vector_from_tuple((1, -2, 5))) == (-1, -8)


def test_functional_rows_agree_with_evaluate(ref_lattice):
    z = std(ref_lattice, b=(1,), omega=(2,))
    f_re, f_im = functional_rows(ref_lattice, z)
    for v in [(1, 0, 1), (0, 1, 0), (2, -1, 1)]:
        re = sum(a * b for a, b in zip(f_re, v))
        im = sum(a * b for a, b in zip(f_im, v))
        assert (re, im) == evaluate(ref_lattice, z, vector_from_tuple(v))


def test_plane_gram_is_scalar_for_exponential(ref_lattice):
    # <Omega_re, Omega_re> = omega^2 = <Omega_im, Omega_im>, cross term 0
    z = std(ref_lattice, b=(3,), omega=(2,))
    g = plane_gram(ref_lattice, z)
    assert g == ((8, 0), (0, 8))
    assert is_positive_plane(ref_lattice, z)


def test_principal_phase_axes(ref_lattice):
    z = std(ref_lattice)
    # Z(point class) = -1: negative real axis, phase 1, flagged
    assert principal_phase(ref_lattice, z, vector_from_tuple((0, 0, 1))) == (1.0, True)
    # Z(1,0,1) = 3: positive real axis, phase 2
    assert principal_phase(ref_lattice, z, vector_from_tuple((1, 0, 1))) == (2.0, False)


def test_principal_phase_off_axis(ref_lattice):
    z = std(ref_lattice)
    phase, flagged = principal_phase(ref_lattice, z, vector_from_tuple((0, 1, 0)))
    # Z(0,1,0) = 0 + 4i: phase 1/2
    assert not flagged
    assert phase == pytest.approx(0.5, abs=1e-12)


def test_principal_phase_hole(ref_lattice):
    z = std(ref_lattice, omega=(1,))
    with pytest.raises(HoleClassError):
        principal_phase(ref_lattice, z, vector_from_tuple((1, 0, 1)))


def test_same_component_flip(ref_lattice):
    z = std(ref_lattice)
    flipped = central_charge(z.im, z.re)  # orientation reversed
    assert same_component(ref_lattice, z, z)
    assert not same_component(ref_lattice, flipped, z)


def test_heart_membership(ref_lattice):
    params = exp_params((0,), (2,))  # B.omega = 0
    # torsion-free H^0 with positive slope, no H^{-1}
    assert heart_contains(ref_lattice, params, TwoTermSheafDatum(None, Fraction(1)))
    # slope-zero H^0 is tilted out
    assert not heart_contains(ref_lattice, params, TwoTermSheafDatum(None, Fraction(0)))
    # H^{-1} needs mu_max <= 0
    assert heart_contains(ref_lattice, params, TwoTermSheafDatum(Fraction(-1), None))
    assert not heart_contains(ref_lattice, params, TwoTermSheafDatum(Fraction(1), None))


def test_charge_norm_inf_scaling(ref_lattice):
    z = std(ref_lattice)
    scaled = central_charge(
        tuple(x * Fraction(11, 10) for x in z.re),
        tuple(x * Fraction(11, 10) for x in z.im),
    )
    f_re, f_im = functional_rows(ref_lattice, z)
    biggest = max(
        math.hypot(float(a), float(b)) for a, b in zip(f_re, f_im)
    )
    assert charge_norm_inf(ref_lattice, z, scaled) == pytest.approx(
        0.1 * biggest, rel=1e-12
    )


# --- lifted GL2 action -------------------------------------------------------


def test_gl2_identity_fixes_everything(ref_lattice):
    g = gl2_identity()
    z = std(ref_lattice)
    assert gl2_apply(g, z) == z
    for phase in (-1.25, 0.0, 0.5, 3.75):
        assert gl2_relabel(g, phase) == pytest.approx(phase, abs=1e-12)


def test_gl2_rotation_shifts_phases():
    # T = rotation by pi/2 has f(phi) = phi + 1/2
    g = gl2_from_matrix(((0, -1), (1, 0)))
    assert g.f0 == pytest.approx(0.5, abs=1e-15)
    for phase in (0.0, 0.25, 1.0, -2.5):
        assert gl2_relabel(g, phase) == pytest.approx(phase + 0.5, abs=1e-12)


def test_gl2_shift_lift():
    # the double shift [2]: identity matrix on charges, phases move by 2
    g = gl2_from_matrix(((1, 0), (0, 1)), lift=1)
    assert gl2_relabel(g, 0.25) == pytest.approx(2.25, abs=1e-12)


def test_gl2_relabel_monotone_and_periodic():
    g = gl2_from_matrix(((2, 1), (1, 1)))
    phases = [i / 7 for i in range(-14, 15)]
    values = [gl2_relabel(g, p) for p in phases]
    assert all(a < b for a, b in zip(values, values[1:]))
    assert gl2_relabel(g, 1.25) == pytest.approx(
        gl2_relabel(g, 0.25) + 1.0, abs=1e-12
    )


def test_gl2_compose_and_inverse_round_trip():
    g = gl2_from_matrix(((1, 1), (-1, 2)))
    h = gl2_from_matrix(((0, -3), (2, 0)), lift=-1)
    gh = gl2_compose(g, h)
    for phase in (-0.75, 0.1, 1.6):
        assert gl2_relabel(gh, phase) == pytest.approx(
            gl2_relabel(g, gl2_relabel(h, phase)), abs=1e-12
        )
    inv = gl2_inverse(g)
    for phase in (-0.75, 0.1, 1.6):
        assert gl2_relabel(inv, gl2_relabel(g, phase)) == pytest.approx(
            phase, abs=1e-12
        )


def test_gl2_apply_is_exact_matrix_action(ref_lattice):
    g = gl2_from_matrix(((1, 1), (-1, 2)))
    z = std(ref_lattice)
    moved = gl2_apply(g, z)
    # T^{-1} Z recomputed by hand: T^{-1} = 1/3 [[2, -1], [1, 1]]
    assert moved.re == tuple(
        Fraction(2, 3) * r - Fraction(1, 3) * i for r, i in zip(z.re, z.im)
    )
    assert moved.im == tuple(
        Fraction(1, 3) * r + Fraction(1, 3) * i for r, i in zip(z.re, z.im)
    )
    back = gl2_apply(gl2_inverse(g), moved)
    assert back == z


def test_gl2_rejects_bad_input():
    with pytest.raises(PreconditionError):
        gl2_from_matrix(((1, 0), (0, -1)))  # negative determinant
    with pytest.raises(PreconditionError):
        # f0 off the matrix ray
        from stablat import Gl2Element

        Gl2Element(((Fraction(1), Fraction(0)), (Fraction(0), Fraction(1))), 0.5)


def test_pair_rejects_wrong_length(ref_lattice):
    from stablat import InputError

    with pytest.raises(InputError):
        pair(ref_lattice, (1, 0), (1, 0, 1))
