from fractions import Fraction

import pytest

from stablat import (
    InputError,
    PhaseInterval,
    Witness,
    enumerate_spherical,
    exp_params,
    parse_rational,
    parse_rational_vector,
    rational_str,
    standard_admissible,
    standard_charge,
    validate_stability,
    vector_from_tuple,
    wall_slice,
    walls_for_class,
)
from stablat.config import (
    admissibility_from_report,
    admissibility_report,
    interval_from_report,
    interval_report,
    load_datum,
    load_lattice,
    load_sheaf_datum,
    load_stability,
    poly_from_report,
    poly_report,
    validation_report_from_json,
    validation_report_json,
    vectors_from_report,
    vectors_report,
    wallset_from_report,
    wallset_report,
    witness_from_report,
    witness_report,
)

DATUM_TOML = """
[lattice]
ns_rank = 1
ns_gram = [[2]]
ample = [1]

[datum]
atoms = [
  { name = "L", class = [1, 0, 1], rigidity = "spherical" },
  { name = "P", class = [0, 0, 1], rigidity = "semirigid" },
]
hom = [
  [0, 0, 0, 1], [0, 0, 2, 1],
  [1, 1, 0, 1], [1, 1, 1, 2], [1, 1, 2, 1],
  [0, 1, 0, 1], [1, 0, 2, 1],
]
"""

SIGMA_TOML = """
[stability]
phases = ["1/2", 1.0]
charge_re = ["1", "0", "-1"]
charge_im = ["0", "1", "-1"]
"""


def test_parse_rational():
    assert parse_rational("3/4") == Fraction(3, 4)
    assert parse_rational("-7") == -7
    assert parse_rational(5) == 5
    with pytest.raises(InputError):
        parse_rational("0.25")
    assert parse_rational("0.25", approx=True) == Fraction(1, 4)
    assert parse_rational(0.1, approx=True) == Fraction(1, 10)
    with pytest.raises(InputError):
        parse_rational(0.1)
    with pytest.raises(InputError):
        parse_rational(True)
    with pytest.raises(InputError):
        parse_rational("1/0")


def test_parse_rational_vector():
    assert parse_rational_vector("1,-2/3, 4") == (1, Fraction(-2, 3), 4)
    with pytest.raises(InputError):
        parse_rational_vector("")


def test_rational_str():
    assert rational_str(Fraction(3, 4)) == "3/4"
    assert rational_str(Fraction(-8, 2)) == "-4"


def test_load_lattice(tmp_path):
    path = tmp_path / "lat.toml"
    path.write_text("[lattice]\nns_rank = 1\nns_gram = [[2]]\nample = [1]\n")
    lattice = load_lattice(path)
    assert lattice.ns_rank == 1
    assert lattice.ns_gram == ((2,),)


def test_load_lattice_errors(tmp_path):
    missing = tmp_path / "none.toml"
    with pytest.raises(InputError):
        load_lattice(missing)
    bad = tmp_path / "bad.toml"
    bad.write_text("not toml [ at all\n")
    with pytest.raises(InputError):
        load_lattice(bad)
    empty = tmp_path / "empty.toml"
    empty.write_text("[other]\n")
    with pytest.raises(InputError):
        load_lattice(empty)


def test_load_datum_and_stability(tmp_path):
    datum_path = tmp_path / "datum.toml"
    datum_path.write_text(DATUM_TOML)
    datum = load_datum(datum_path)
    assert [a.name for a in datum.atoms] == ["L", "P"]
    assert datum.hom_value(0, 1, 0) == 1

    sigma_path = tmp_path / "sigma.toml"
    sigma_path.write_text(SIGMA_TOML)
    sigma = load_stability(datum, sigma_path)
    assert sigma.phases == (0.5, 1.0)
    assert validate_stability(datum, sigma).ok


def test_load_sheaf_datum(tmp_path):
    path = tmp_path / "sheaf.toml"
    path.write_text('[sheaf]\nmu_max = "-1/2"\n')
    datum = load_sheaf_datum(path)
    assert datum.mu_max == Fraction(-1, 2)
    assert datum.mu_min is None


def test_vectors_round_trip(ref_lattice):
    z = standard_charge(ref_lattice, exp_params((0,), (2,)))
    vectors = enumerate_spherical(ref_lattice, z, 10)
    data = vectors_report(vectors)
    assert vectors_from_report(data) == vectors


def test_admissibility_round_trip(ref_lattice):
    report = standard_admissible(
        ref_lattice, exp_params((0,), (Fraction(9, 10),)), 20
    )
    data = admissibility_report(report)
    back = admissibility_from_report(data)
    assert back == report


@pytest.fixture(scope="module")
def small_wallset():
    from stablat import AmpleData, MukaiLattice

    lattice = MukaiLattice(1, ((2,),), AmpleData((1,)))
    return walls_for_class(
        lattice,
        vector_from_tuple((0, 0, 1)),
        wall_slice(lattice, -1, 1, 2),
        4,
    )


def test_wallset_round_trip(small_wallset):
    data = wallset_report(small_wallset)
    back = wallset_from_report(data)
    assert back == small_wallset


def test_poly_round_trip(small_wallset):
    poly = small_wallset.walls[0].locus
    assert poly_from_report(poly_report(poly)) == poly


def test_validation_round_trip(toy_datum, toy_sigma):
    report = validate_stability(toy_datum, toy_sigma)
    assert validation_report_from_json(validation_report_json(report)) == report


def test_interval_round_trip():
    interval = PhaseInterval(0.5, 2.5, forced_value=1.0)
    assert interval_from_report(interval_report(interval)) == interval


def test_witness_round_trip():
    witness = Witness("Q", (0.25, 2.25), forced=False)
    assert witness_from_report(witness_report(witness)) == witness
    assert witness_from_report(witness_report(None)) is None
