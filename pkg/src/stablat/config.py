"""Structured-text configuration files and JSON report plumbing.

Input files are TOML; rationals travel as `p/q` strings (plain integers
allowed), and decimal or float values are accepted only when the caller
passes approx=True, in which case they are read by their decimal
meaning.  Reports are plain JSON dictionaries built and re-parsed by
the converter pairs below, so every emitted report round-trips into the
structure that produced it.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from typing import Mapping

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from .charge import CentralCharge, TwoTermSheafDatum, central_charge
from .enumeration import (
    AdmissibilityReport,
    Hole,
    Poly2,
    Wall,
    WallSet,
    WallSlice,
)
from .errors import InputError
from .lattice import (
    AmpleData,
    MukaiLattice,
    MukaiVector,
    RigidityClass,
    vector_from_tuple,
)
from .sim import (
    Atom,
    PhaseInterval,
    RegisteredObject,
    SphericalCollectionDatum,
    ToyStability,
    ValidationReport,
    Violation,
    Witness,
    make_datum,
    make_stability,
)

_RATIONAL = re.compile(r"[+-]?\d+(/\d+)?\Z")


def parse_rational(value, approx: bool = False) -> Fraction:
    """Exact rational from `p/q` text or an integer; decimal notation
    (including TOML floats) only with approx, read by decimal value."""
    if isinstance(value, bool):
        raise InputError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if not approx:
            raise InputError(
                f"float value {value!r} requires --approx (rationals are p/q)"
            )
        return Fraction(str(value))
    text = str(value).strip()
    if _RATIONAL.match(text):
        try:
            return Fraction(text)
        except ZeroDivisionError:
            raise InputError(f"zero denominator in {text!r}") from None
    if approx:
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError):
            raise InputError(f"cannot read {text!r} as a number") from None
    raise InputError(f"{text!r} is not a p/q rational (use --approx for decimals)")


def parse_rational_vector(text, approx: bool = False) -> tuple[Fraction, ...]:
    """Comma-separated rationals, as used by --B / --omega / --point."""
    if isinstance(text, str):
        parts = [p for p in text.split(",") if p.strip()]
    else:
        parts = list(text)
    if not parts:
        raise InputError("empty vector")
    return tuple(parse_rational(p, approx) for p in parts)


def rational_str(value) -> str:
    q = Fraction(value)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def _parse_phase(value) -> float:
    if isinstance(value, bool):
        raise InputError("booleans are not phases")
    if isinstance(value, (int, float)):
        return float(value)
    return float(Fraction(str(value).strip()))


def _read_toml(path) -> dict:
    try:
        with open(path, "rb") as handle:
            return tomllib.load(handle)
    except FileNotFoundError:
        raise InputError(f"no such file: {path}") from None
    except tomllib.TOMLDecodeError as exc:
        raise InputError(f"{path}: {exc}") from None


def lattice_from_table(doc: Mapping) -> MukaiLattice:
    table = doc.get("lattice")
    if not isinstance(table, Mapping):
        raise InputError("missing [lattice] table")
    try:
        ns_rank = int(table["ns_rank"])
        gram = tuple(tuple(int(x) for x in row) for row in table["ns_gram"])
        ample = tuple(int(x) for x in table["ample"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad [lattice] table: {exc}") from None
    return MukaiLattice(ns_rank, gram, AmpleData(ample))


def load_lattice(path) -> MukaiLattice:
    return lattice_from_table(_read_toml(path))


def load_sheaf_datum(path, approx: bool = False) -> TwoTermSheafDatum:
    doc = _read_toml(path)
    table = doc.get("sheaf")
    if not isinstance(table, Mapping):
        raise InputError("missing [sheaf] table")
    mu_max = table.get("mu_max")
    mu_min = table.get("mu_min")
    return TwoTermSheafDatum(
        mu_max=None if mu_max is None else parse_rational(mu_max, approx),
        mu_min=None if mu_min is None else parse_rational(mu_min, approx),
    )


def load_datum(path) -> SphericalCollectionDatum:
    doc = _read_toml(path)
    lattice = lattice_from_table(doc)
    table = doc.get("datum")
    if not isinstance(table, Mapping):
        raise InputError("missing [datum] table")
    atoms = []
    for entry in table.get("atoms", ()):
        try:
            atoms.append(
                Atom(
                    str(entry["name"]),
                    vector_from_tuple([int(x) for x in entry["class"]]),
                    RigidityClass(str(entry["rigidity"])),
                )
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"bad atom entry: {exc}") from None
    if not atoms:
        raise InputError("datum declares no atoms")
    hom_entries = []
    for row in table.get("hom", ()):
        if len(row) != 4:
            raise InputError(f"hom entries are [i, j, k, value]; got {row!r}")
        hom_entries.append(tuple(int(x) for x in row))
    registered = []
    for entry in table.get("registered", ()):
        try:
            registered.append(
                RegisteredObject(
                    str(entry["name"]),
                    tuple((int(i), int(k)) for i, k in entry["factors"]),
                    RigidityClass(str(entry["rigidity"])),
                )
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"bad registered entry: {exc}") from None
    return make_datum(lattice, atoms, hom_entries, registered)


def load_stability(
    datum: SphericalCollectionDatum, path, approx: bool = False
) -> ToyStability:
    doc = _read_toml(path)
    table = doc.get("stability")
    if not isinstance(table, Mapping):
        raise InputError("missing [stability] table")
    try:
        phases = [_parse_phase(p) for p in table["phases"]]
        re_part = [parse_rational(x, approx) for x in table["charge_re"]]
        im_part = [parse_rational(x, approx) for x in table["charge_im"]]
    except KeyError as exc:
        raise InputError(f"missing stability field {exc}") from None
    return make_stability(datum, phases, central_charge(re_part, im_part))


# --- JSON report converters ---------------------------------------------------


def dump_report(data: dict) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def vectors_report(vectors) -> dict:
    return {"vectors": [list(v.as_tuple()) for v in vectors]}


def vectors_from_report(data: Mapping) -> list[MukaiVector]:
    return [vector_from_tuple(entry) for entry in data["vectors"]]


def admissibility_report(report: AdmissibilityReport) -> dict:
    return {
        "sufficient": report.sufficient,
        "omega_sq": rational_str(report.omega_sq),
        "mass_bound": rational_str(report.mass_bound),
        "violations": [
            {
                "class": list(delta.as_tuple()),
                "z_re": rational_str(re),
                "z_im": rational_str(im),
            }
            for delta, re, im in report.violations
        ],
    }


def admissibility_from_report(data: Mapping) -> AdmissibilityReport:
    return AdmissibilityReport(
        sufficient=bool(data["sufficient"]),
        omega_sq=Fraction(data["omega_sq"]),
        mass_bound=Fraction(data["mass_bound"]),
        violations=tuple(
            (
                vector_from_tuple(entry["class"]),
                Fraction(entry["z_re"]),
                Fraction(entry["z_im"]),
            )
            for entry in data["violations"]
        ),
    )


def poly_report(poly: Poly2) -> dict:
    return {f"{i},{j}": rational_str(c) for (i, j), c in poly.items()}


def poly_from_report(data: Mapping) -> Poly2:
    coeffs = {}
    for key, value in data.items():
        i, j = key.split(",")
        coeffs[(int(i), int(j))] = Fraction(value)
    return Poly2(coeffs)


def wallset_report(wall_set: WallSet) -> dict:
    slc = wall_set.slice
    holes = []
    for hole in wall_set.holes:
        alpha = rational_str(hole.alpha) if hole.exact else float(hole.alpha)
        holes.append(
            {
                "delta": list(hole.delta.as_tuple()),
                "beta": rational_str(hole.beta),
                "alpha": alpha,
                "exact": hole.exact,
                "kind": hole.kind,
            }
        )
    return {
        "class": list(wall_set.klass.as_tuple()),
        "slice": {
            "beta0": rational_str(slc.beta0),
            "beta1": rational_str(slc.beta1),
            "alpha1": rational_str(slc.alpha1),
            "hb": list(slc.hb),
            "hw": list(slc.hw),
        },
        "mass_bound": rational_str(wall_set.mass_bound),
        "walls": [
            {
                "delta": list(wall.delta.as_tuple()),
                "locus": poly_report(wall.locus),
                "validity": poly_report(wall.validity),
            }
            for wall in wall_set.walls
        ],
        "holes": holes,
    }


def wallset_from_report(data: Mapping) -> WallSet:
    slc_data = data["slice"]
    slc = WallSlice(
        Fraction(slc_data["beta0"]),
        Fraction(slc_data["beta1"]),
        Fraction(slc_data["alpha1"]),
        tuple(int(x) for x in slc_data["hb"]),
        tuple(int(x) for x in slc_data["hw"]),
    )
    walls = tuple(
        Wall(
            vector_from_tuple(entry["delta"]),
            poly_from_report(entry["locus"]),
            poly_from_report(entry["validity"]),
        )
        for entry in data["walls"]
    )
    holes = tuple(
        Hole(
            vector_from_tuple(entry["delta"]),
            Fraction(entry["beta"]),
            Fraction(entry["alpha"]) if entry["exact"] else float(entry["alpha"]),
            bool(entry["exact"]),
            str(entry["kind"]),
        )
        for entry in data["holes"]
    )
    return WallSet(
        vector_from_tuple(data["class"]),
        slc,
        Fraction(data["mass_bound"]),
        walls,
        holes,
    )


def validation_report_json(report: ValidationReport) -> dict:
    return {
        "ok": report.ok,
        "violations": [
            {"rule": v.rule, "subject": list(v.subject), "message": v.message}
            for v in report.violations
        ],
    }


def validation_report_from_json(data: Mapping) -> ValidationReport:
    return ValidationReport(
        bool(data["ok"]),
        tuple(
            Violation(str(v["rule"]), tuple(v["subject"]), str(v["message"]))
            for v in data["violations"]
        ),
    )


def interval_report(interval: PhaseInterval) -> dict:
    return {
        "lower": interval.lower,
        "upper": interval.upper,
        "lower_strict": interval.lower_strict,
        "upper_strict": interval.upper_strict,
        "forced": interval.forced_value,
    }


def interval_from_report(data: Mapping) -> PhaseInterval:
    return PhaseInterval(
        float(data["lower"]),
        float(data["upper"]),
        bool(data["lower_strict"]),
        bool(data["upper_strict"]),
        None if data["forced"] is None else float(data["forced"]),
    )


def witness_report(witness: Witness | None) -> dict:
    if witness is None:
        return {"ok": True, "witness": None}
    return {
        "ok": False,
        "witness": {
            "atom": witness.name,
            "phases": list(witness.phases),
            "forced": witness.forced,
        },
    }


def witness_from_report(data: Mapping) -> Witness | None:
    if data["witness"] is None:
        return None
    entry = data["witness"]
    return Witness(
        str(entry["atom"]),
        (float(entry["phases"][0]), float(entry["phases"][1])),
        bool(entry["forced"]),
    )
