from fractions import Fraction

import pytest

from stablat import (
    AmpleData,
    Atom,
    MukaiLattice,
    RigidityClass,
    ToyStability,
    central_charge,
    make_datum,
    vector_from_tuple,
)


@pytest.fixture
def ref_lattice():
    """Picard rank one, G = (2), ample h = (1)."""
    return MukaiLattice(1, ((2,),), AmpleData((1,)))


@pytest.fixture
def rank2_lattice():
    """Rank two with signature (1, 1) Gram and ample h = (1, 0)."""
    return MukaiLattice(2, ((2, 0), (0, -2)), AmpleData((1, 0)))


@pytest.fixture
def toy_datum(ref_lattice):
    """One spherical atom L = (1, 0, 1) and one semirigid atom P = (0, 0, 1)
    with the evaluation map hom^0(L, P) = 1 and its Serre dual."""
    atoms = [
        Atom("L", vector_from_tuple((1, 0, 1)), RigidityClass.SPHERICAL),
        Atom("P", vector_from_tuple((0, 0, 1)), RigidityClass.SEMIRIGID),
    ]
    hom = [
        (0, 0, 0, 1),
        (0, 0, 2, 1),
        (1, 1, 0, 1),
        (1, 1, 1, 2),
        (1, 1, 2, 1),
        (0, 1, 0, 1),
        (1, 0, 2, 1),
    ]
    return make_datum(ref_lattice, atoms, hom)


@pytest.fixture
def toy_charge():
    """Z(L) = i and Z(P) = -1: phases 1/2 and 1 are exactly on the rays."""
    return central_charge((1, 0, -1), (0, 1, -1))


@pytest.fixture
def toy_sigma(toy_charge):
    return ToyStability((0.5, 1.0), toy_charge)


def exp_charge_rows():
    """Reference exponential charge rows (B = 0, omega = 2h) for rank one."""
    return (
        (Fraction(1), Fraction(0), Fraction(-4)),
        (Fraction(0), Fraction(2), Fraction(0)),
    )
