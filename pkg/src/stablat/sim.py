"""Finite simulator of stability data on a declared collection of
spherical and semirigid objects.

A datum lists atoms (stable objects) with lattice classes, rigidity
tags, and a table of hom^k dimensions for k in [-2, 4]; objects are
multisets of shifted atoms.  A toy stability assigns each atom a real
phase lift and fixes a central charge on the ambient lattice.  The
module validates both layers, decomposes objects into phase-sorted
groups, measures the slicing and charge metrics, and runs the
phase-forcing arguments: Hom links between a spherical atom and a
semirigid atom confine the semirigid phase to an open interval of
length two, and intersecting with the charge ray pins it completely.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Iterable, Iterator, Mapping, Sequence

from .charge import (
    CentralCharge,
    Gl2Element,
    charge_norm_inf,
    evaluate,
    gl2_apply,
    gl2_inverse,
    gl2_relabel,
)
from .errors import (
    HoleClassError,
    InconsistencyError,
    InputError,
    PreconditionError,
)
from .lattice import (
    MukaiLattice,
    MukaiVector,
    RigidityClass,
    mukai_pairing,
    self_square,
    shift_class,
)

HOM_DEGREE_MIN = -2
HOM_DEGREE_MAX = 4
HOM_DEGREES = range(HOM_DEGREE_MIN, HOM_DEGREE_MAX + 1)
RAY_TOLERANCE = 1e-9


@dataclass(frozen=True)
class Atom:
    """A declared stable object: name, lattice class, rigidity tag."""

    name: str
    klass: MukaiVector
    rigidity: RigidityClass


@dataclass(frozen=True)
class RegisteredObject:
    """A composite object registered with a rigidity claim, so that the
    structural factor rules can be checked and the spherical metric can
    see it."""

    name: str
    factors: tuple[tuple[int, int], ...]
    rigidity: RigidityClass


@dataclass(frozen=True)
class FilteredObject:
    """A formal object: a nonempty multiset of (atom index, shift)."""

    factors: tuple[tuple[int, int], ...]


def filtered_object(factors: Iterable[tuple[int, int]]) -> FilteredObject:
    canon = tuple(sorted((int(i), int(k)) for i, k in factors))
    if not canon:
        raise InputError("an object needs at least one factor")
    return FilteredObject(canon)


@dataclass(frozen=True)
class SphericalCollectionDatum:
    lattice: MukaiLattice
    atoms: tuple[Atom, ...]
    hom: tuple[tuple[tuple[int, int, int], int], ...]
    registered: tuple[RegisteredObject, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "_table", dict(self.hom))
        object.__setattr__(
            self, "_names", {atom.name: i for i, atom in enumerate(self.atoms)}
        )

    def hom_value(self, i: int, j: int, k: int) -> int:
        return self._table.get((i, j, k), 0)

    def atom_index(self, key) -> int:
        if isinstance(key, str):
            if key not in self._names:
                raise InputError(f"unknown atom {key!r}")
            return self._names[key]
        i = int(key)
        if not 0 <= i < len(self.atoms):
            raise InputError(f"atom index {i} out of range")
        return i

    def indices_of(self, rigidity: RigidityClass) -> tuple[int, ...]:
        return tuple(
            i for i, atom in enumerate(self.atoms) if atom.rigidity is rigidity
        )


def make_datum(
    lattice: MukaiLattice,
    atoms: Sequence[Atom],
    hom_entries: Iterable[tuple[int, int, int, int]],
    registered: Sequence[RegisteredObject] = (),
) -> SphericalCollectionDatum:
    """Normalized datum: duplicate table keys and duplicate names are
    rejected here; the mathematical invariants are the validator's job."""
    names = [atom.name for atom in atoms]
    if len(set(names)) != len(names):
        raise InputError("atom names must be distinct")
    table = {}
    for i, j, k, value in hom_entries:
        key = (int(i), int(j), int(k))
        if key in table:
            raise InputError(f"duplicate hom entry for {key}")
        if int(value) != 0:
            table[key] = int(value)
    return SphericalCollectionDatum(
        lattice, tuple(atoms), tuple(sorted(table.items())), tuple(registered)
    )


def object_class(datum: SphericalCollectionDatum, obj: FilteredObject) -> MukaiVector:
    """Signed sum of shifted atom classes."""
    total = None
    for i, k in obj.factors:
        term = shift_class(datum.atoms[i].klass, k)
        total = term if total is None else total + term
    return total


@dataclass(frozen=True)
class ToyStability:
    phases: tuple[float, ...]
    charge: CentralCharge


def make_stability(
    datum: SphericalCollectionDatum, phases: Sequence[float], charge: CentralCharge
) -> ToyStability:
    if len(phases) != len(datum.atoms):
        raise InputError("one phase per atom is required")
    if len(charge.re) != datum.lattice.dim:
        raise InputError("charge has wrong dimension for the lattice")
    return ToyStability(tuple(float(p) for p in phases), charge)


@dataclass(frozen=True)
class Violation:
    rule: str
    subject: tuple
    message: str


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: tuple[Violation, ...]


_DIAGONAL_PATTERNS = {
    RigidityClass.SPHERICAL: {0: 1, 1: 0, 2: 1},
    RigidityClass.SEMIRIGID: {0: 1, 1: 2, 2: 1},
}


def validate_datum(datum: SphericalCollectionDatum) -> ValidationReport:
    """Structural and numerical invariants of the datum.

    Checked: table entries in range with nonnegative dimensions, Serre
    symmetry hom^k(i,j) = hom^{2-k}(j,i), Euler sums matching the
    negated lattice pairing, the self-hom pattern of each rigidity tag,
    class squares matching the tags, and the factor rules for
    registered composites (all factors of a spherical composite are
    spherical atoms; a semirigid composite has at most one semirigid
    factor).
    """
    violations = []
    n = len(datum.atoms)
    for (i, j, k), value in datum.hom:
        if not (0 <= i < n and 0 <= j < n):
            violations.append(
                Violation("index", (i, j, k), "atom index out of range")
            )
        if not HOM_DEGREE_MIN <= k <= HOM_DEGREE_MAX:
            violations.append(
                Violation(
                    "degree",
                    (i, j, k),
                    f"degree outside [{HOM_DEGREE_MIN}, {HOM_DEGREE_MAX}]",
                )
            )
        if value < 0:
            violations.append(Violation("value", (i, j, k), "negative dimension"))
    if violations:
        return ValidationReport(False, tuple(violations))

    for i in range(n):
        for j in range(n):
            for k in HOM_DEGREES:
                if (i, j, k) > (j, i, 2 - k):
                    continue
                left = datum.hom_value(i, j, k)
                right = datum.hom_value(j, i, 2 - k)
                if left != right:
                    violations.append(
                        Violation(
                            "serre",
                            (i, j, k),
                            f"hom^{k}({i},{j})={left} but hom^{2 - k}({j},{i})={right}",
                        )
                    )

    for i in range(n):
        for j in range(n):
            total = sum(
                (-1 if k % 2 else 1) * datum.hom_value(i, j, k) for k in HOM_DEGREES
            )
            expected = -mukai_pairing(
                datum.lattice, datum.atoms[i].klass, datum.atoms[j].klass
            )
            if total != expected:
                violations.append(
                    Violation(
                        "euler",
                        (i, j),
                        f"alternating sum {total} differs from {expected}",
                    )
                )

    expected_square = {RigidityClass.SPHERICAL: -2, RigidityClass.SEMIRIGID: 0}
    for i, atom in enumerate(datum.atoms):
        pattern = _DIAGONAL_PATTERNS.get(atom.rigidity)
        if pattern is None:
            violations.append(
                Violation("rigidity", (i,), "atom must be spherical or semirigid")
            )
            continue
        square = self_square(datum.lattice, atom.klass)
        if square != expected_square[atom.rigidity]:
            violations.append(
                Violation(
                    "class",
                    (i,),
                    f"class square {square} does not match {atom.rigidity.value}",
                )
            )
        for k in HOM_DEGREES:
            if datum.hom_value(i, i, k) != pattern.get(k, 0):
                violations.append(
                    Violation(
                        "diagonal",
                        (i, k),
                        f"self-hom in degree {k} must be {pattern.get(k, 0)}",
                    )
                )

    seen = set()
    for reg in datum.registered:
        if reg.name in seen or reg.name in {a.name for a in datum.atoms}:
            violations.append(Violation("registered", (reg.name,), "duplicate name"))
        seen.add(reg.name)
        if not reg.factors:
            violations.append(Violation("registered", (reg.name,), "empty object"))
            continue
        if any(not 0 <= i < n for i, _ in reg.factors):
            violations.append(
                Violation("registered", (reg.name,), "factor index out of range")
            )
            continue
        rigidities = [datum.atoms[i].rigidity for i, _ in reg.factors]
        if reg.rigidity is RigidityClass.SPHERICAL:
            if any(r is not RigidityClass.SPHERICAL for r in rigidities):
                violations.append(
                    Violation(
                        "registered",
                        (reg.name,),
                        "a spherical composite must have all-spherical factors",
                    )
                )
        elif reg.rigidity is RigidityClass.SEMIRIGID:
            semirigid = sum(1 for r in rigidities if r is RigidityClass.SEMIRIGID)
            if semirigid > 1:
                violations.append(
                    Violation(
                        "registered",
                        (reg.name,),
                        "a semirigid composite allows at most one semirigid factor",
                    )
                )
        else:
            violations.append(
                Violation("registered", (reg.name,), "unsupported rigidity tag")
            )

    return ValidationReport(not violations, tuple(violations))


def _ray_distance(phase: float, re, im) -> float:
    """Distance from phase to the arithmetic progression arg(Z)/pi + 2Z."""
    a = math.atan2(float(im), float(re)) / math.pi
    offset = (phase - a) % 2.0
    return min(offset, 2.0 - offset)


def validate_stability(
    datum: SphericalCollectionDatum, sigma: ToyStability
) -> ValidationReport:
    """Ray condition and Hom-order for a phase assignment.

    Each atom's charge value must be nonzero and lie on the ray
    exp(i pi phi_i) R_{>0} within 1e-9; each nonzero hom^k(i,j) with
    (i,j,k) not the identity slot forces phi_i < phi_j + k strictly
    (stable objects of equal phase admit no nonzero hom in degree <= 0
    unless they coincide).  Registered objects are decomposed to confirm
    every declared object carries a phase-sorted filtration.
    """
    base = validate_datum(datum)
    if not base.ok:
        raise PreconditionError(
            f"datum is invalid ({len(base.violations)} violations); fix it first"
        )
    if len(sigma.phases) != len(datum.atoms):
        raise InputError("one phase per atom is required")
    if len(sigma.charge.re) != datum.lattice.dim:
        raise InputError("charge has wrong dimension for the lattice")
    violations = []
    for i, atom in enumerate(datum.atoms):
        re, im = evaluate(datum.lattice, sigma.charge, atom.klass)
        if re == 0 and im == 0:
            violations.append(
                Violation("ray", (i,), f"charge vanishes on atom {atom.name}")
            )
            continue
        dist = _ray_distance(sigma.phases[i], re, im)
        if dist > RAY_TOLERANCE:
            violations.append(
                Violation(
                    "ray",
                    (i,),
                    f"phase {sigma.phases[i]} is {dist:.3e} off the charge ray",
                )
            )
    for (i, j, k), value in datum.hom:
        if value == 0 or (i == j and k == 0):
            continue
        if not sigma.phases[i] < sigma.phases[j] + k:
            violations.append(
                Violation(
                    "hom-order",
                    (i, j, k),
                    f"hom^{k} nonzero but phases {sigma.phases[i]} !< "
                    f"{sigma.phases[j]} + {k}",
                )
            )
    report = ValidationReport(not violations, tuple(violations))
    if report.ok:
        for reg in datum.registered:
            hn_decompose(datum, sigma, FilteredObject(tuple(sorted(reg.factors))))
    return report


@dataclass(frozen=True)
class HNGroup:
    phase: float
    factors: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class HNDecomposition:
    groups: tuple[HNGroup, ...]

    @property
    def phi_plus(self) -> float:
        return self.groups[0].phase

    @property
    def phi_minus(self) -> float:
        return self.groups[-1].phase


def hn_decompose(
    datum: SphericalCollectionDatum, sigma: ToyStability, obj: FilteredObject
) -> HNDecomposition:
    """Factors grouped by phase, strictly descending; ties inside a
    group are ordered by atom index, then shift."""
    if not obj.factors:
        raise InputError("cannot decompose an empty object")
    buckets: dict[float, list[tuple[int, int]]] = defaultdict(list)
    for i, k in obj.factors:
        buckets[sigma.phases[i] + k].append((i, k))
    groups = tuple(
        HNGroup(phase, tuple(sorted(buckets[phase])))
        for phase in sorted(buckets, reverse=True)
    )
    return HNDecomposition(groups)


def phase_bounds(
    datum: SphericalCollectionDatum, sigma: ToyStability, obj: FilteredObject
) -> tuple[float, float]:
    """(phi_plus, phi_minus) without building the full decomposition."""
    values = [sigma.phases[i] + k for i, k in obj.factors]
    return max(values), min(values)


def iter_universe(
    datum: SphericalCollectionDatum, max_size: int = 3, max_shift: int = 3
) -> Iterator[FilteredObject]:
    """All multisets of shifted atoms up to the given size and shift."""
    items = [
        (i, k)
        for i in range(len(datum.atoms))
        for k in range(-max_shift, max_shift + 1)
    ]
    for size in range(1, max_size + 1):
        for combo in combinations_with_replacement(items, size):
            yield FilteredObject(tuple(sorted(combo)))


def sup_phase_distance(
    datum: SphericalCollectionDatum,
    first: ToyStability,
    second: ToyStability,
    objects: Iterable[FilteredObject],
) -> float:
    best = 0.0
    for obj in objects:
        plus_a, minus_a = phase_bounds(datum, first, obj)
        plus_b, minus_b = phase_bounds(datum, second, obj)
        best = max(best, abs(plus_a - plus_b), abs(minus_a - minus_b))
    return best


def f_distance(
    datum: SphericalCollectionDatum,
    first: ToyStability,
    second: ToyStability,
    universe: Iterable[FilteredObject] | None = None,
) -> float:
    """sup over the object universe of max(|phi+ - phi+'|, |phi- - phi-'|).

    With no explicit universe the sup is computed over all multisets of
    shifted atoms: max and min of a multiset are 1-Lipschitz in the
    member phases, so the sup is attained on singletons and shifting a
    factor moves both phases equally, leaving the value at
    max_i |phi_i - phi_i'|.
    """
    if universe is not None:
        return sup_phase_distance(datum, first, second, universe)
    if not datum.atoms:
        return 0.0
    return max(abs(a - b) for a, b in zip(first.phases, second.phases))


def spherical_objects(
    datum: SphericalCollectionDatum,
) -> list[FilteredObject]:
    """The declared spherical objects: spherical atoms (shifts add
    nothing to phase differences) and registered spherical composites."""
    out = [
        FilteredObject(((i, 0),))
        for i in datum.indices_of(RigidityClass.SPHERICAL)
    ]
    out.extend(
        FilteredObject(tuple(sorted(reg.factors)))
        for reg in datum.registered
        if reg.rigidity is RigidityClass.SPHERICAL
    )
    return out


def fS_distance(
    datum: SphericalCollectionDatum, first: ToyStability, second: ToyStability
) -> float:
    return sup_phase_distance(datum, first, second, spherical_objects(datum))


def d_distance(
    datum: SphericalCollectionDatum,
    first: ToyStability,
    second: ToyStability,
    universe: Iterable[FilteredObject] | None = None,
) -> float:
    return max(
        f_distance(datum, first, second, universe),
        charge_norm_inf(datum.lattice, first.charge, second.charge),
    )


def dS_distance(
    datum: SphericalCollectionDatum, first: ToyStability, second: ToyStability
) -> float:
    return max(
        fS_distance(datum, first, second),
        charge_norm_inf(datum.lattice, first.charge, second.charge),
    )


@lru_cache(maxsize=64)
def _spherical_universe(
    datum: SphericalCollectionDatum, max_size: int, max_shift: int
) -> tuple[FilteredObject, ...]:
    """Spherical singletons with shifts, bounded spherical-atom multisets
    whose total class squares to -2, and registered spherical composites.

    Cached on the datum (it is immutable): grid scans call this with the
    same arguments thousands of times."""
    spherical = datum.indices_of(RigidityClass.SPHERICAL)
    items = [(i, k) for i in spherical for k in range(-max_shift, max_shift + 1)]
    out = [FilteredObject((item,)) for item in items]
    for size in range(2, max_size + 1):
        for combo in combinations_with_replacement(items, size):
            obj = FilteredObject(tuple(sorted(combo)))
            total = object_class(datum, obj)
            if self_square(datum.lattice, total) == -2:
                out.append(obj)
    out.extend(
        FilteredObject(tuple(sorted(reg.factors)))
        for reg in datum.registered
        if reg.rigidity is RigidityClass.SPHERICAL
    )
    return tuple(out)


def check_equivalent_conditions(
    datum: SphericalCollectionDatum,
    first: ToyStability,
    second: ToyStability,
    max_size: int = 3,
    max_shift: int = 2,
) -> dict[str, bool]:
    """Three ways of saying the spherical data agree, evaluated
    independently over the spherical universe:

    i.   every spherical atom has the same phase in both;
    ii.  the semistable spherical objects agree, with phases;
    iii. phi+ and phi- agree on every spherical object.

    The three answers must coincide; disagreement raises
    InconsistencyError, since it would break the equivalence the checks
    are built on.
    """
    spherical = datum.indices_of(RigidityClass.SPHERICAL)
    cond_i = all(first.phases[i] == second.phases[i] for i in spherical)

    universe = _spherical_universe(datum, max_size, max_shift)

    def semistable_record(sigma: ToyStability):
        record = {}
        for obj in universe:
            plus, minus = phase_bounds(datum, sigma, obj)
            record[obj] = plus if plus == minus else None
        return record

    cond_ii = semistable_record(first) == semistable_record(second)
    cond_iii = all(
        phase_bounds(datum, first, obj) == phase_bounds(datum, second, obj)
        for obj in universe
    )
    if not (cond_i == cond_ii == cond_iii):
        raise InconsistencyError(
            f"equivalent conditions disagree: i={cond_i} ii={cond_ii} iii={cond_iii}"
        )
    return {"i": cond_i, "ii": cond_ii, "iii": cond_iii}


@dataclass(frozen=True)
class PhaseInterval:
    lower: float
    upper: float
    lower_strict: bool = True
    upper_strict: bool = True
    forced_value: float | None = None


def _hom0_links(datum: SphericalCollectionDatum, target: int) -> list[int]:
    links = []
    for i in datum.indices_of(RigidityClass.SPHERICAL):
        if datum.hom_value(i, target, 0) or datum.hom_value(target, i, 0):
            links.append(i)
    return links


def spherically_generated(datum: SphericalCollectionDatum) -> bool:
    """Every semirigid atom is pinned by a hom^0 link to a spherical atom."""
    return all(
        _hom0_links(datum, t) for t in datum.indices_of(RigidityClass.SEMIRIGID)
    )


def propagate_phase_constraints(
    datum: SphericalCollectionDatum,
    spherical_phases: Mapping,
    charge: CentralCharge,
    target,
) -> PhaseInterval:
    """Open interval of admissible phases for a semirigid atom, given
    phases for the spherical atoms it is Hom-linked to, intersected with
    the charge ray of its class.

    Each nonzero hom^m(L, target) forces
    phi_L - m < phi_target < phi_L - m + 2 (the Hom-order bound, its
    Serre dual, and strictness because a spherical and a semirigid
    stable object never share a phase); links in the other direction
    contribute the mirrored interval.  The charge ray then meets the
    interval in at most one point once a hom^0 link exists, and that
    point is the forced phase.  An empty intersection means no valid
    stability extends the data.
    """
    t = datum.atom_index(target)
    if datum.atoms[t].rigidity is not RigidityClass.SEMIRIGID:
        raise PreconditionError("propagation target must be a semirigid atom")
    if not _hom0_links(datum, t):
        raise PreconditionError(
            f"atom {datum.atoms[t].name} has no hom^0 link to a spherical atom"
        )
    resolved = {}
    for key, value in spherical_phases.items():
        resolved[datum.atom_index(key)] = float(value)
    lower = -math.inf
    upper = math.inf
    for i in datum.indices_of(RigidityClass.SPHERICAL):
        linked = any(
            datum.hom_value(i, t, m) or datum.hom_value(t, i, m)
            for m in HOM_DEGREES
        )
        if not linked:
            continue
        if i not in resolved:
            raise InputError(
                f"no phase supplied for linked spherical atom {datum.atoms[i].name}"
            )
        phi = resolved[i]
        for m in HOM_DEGREES:
            if datum.hom_value(i, t, m):
                lower = max(lower, phi - m)
                upper = min(upper, phi - m + 2)
            if datum.hom_value(t, i, m):
                lower = max(lower, phi + m - 2)
                upper = min(upper, phi + m)
    if lower >= upper:
        raise InconsistencyError(
            f"Hom constraints leave no phase for {datum.atoms[t].name}"
        )
    re, im = evaluate(datum.lattice, charge, datum.atoms[t].klass)
    if re == 0 and im == 0:
        raise HoleClassError(datum.atoms[t].klass.as_tuple())
    anchor = math.atan2(float(im), float(re)) / math.pi
    first_k = math.ceil((lower - anchor) / 2) - 1
    last_k = math.floor((upper - anchor) / 2) + 1
    candidates = [
        anchor + 2 * k
        for k in range(first_k, last_k + 1)
        if lower < anchor + 2 * k < upper
    ]
    if not candidates:
        raise InconsistencyError(
            f"no phase on the charge ray of {datum.atoms[t].name} satisfies "
            "the Hom constraints"
        )
    forced = candidates[0] if len(candidates) == 1 else None
    return PhaseInterval(lower, upper, forced_value=forced)


@dataclass(frozen=True)
class Witness:
    """An atom on which two stabilities disagree."""

    name: str
    phases: tuple[float, float]
    forced: bool = False


def _require_comparable(
    datum: SphericalCollectionDatum, first: ToyStability, second: ToyStability
) -> None:
    if first.charge != second.charge:
        raise PreconditionError("stabilities must share the same central charge")
    for sigma in (first, second):
        report = validate_stability(datum, sigma)
        if not report.ok:
            raise PreconditionError(
                f"stability is invalid: {report.violations[0].message}"
            )


def verify_spherical_determinacy(
    datum: SphericalCollectionDatum, first: ToyStability, second: ToyStability
) -> Witness | None:
    """None when the two stabilities agree on every atom; otherwise the
    first atom where they differ.

    With equal charges and equal spherical phases, every semirigid atom
    with a hom^0 link has its phase forced by propagation, and both
    inputs are checked against the forced value; disagreement there
    would contradict validity and raises InconsistencyError.  A
    difference can therefore survive only on an unlinked semirigid
    atom, and the witness reports it.
    """
    _require_comparable(datum, first, second)
    for i in datum.indices_of(RigidityClass.SPHERICAL):
        if abs(first.phases[i] - second.phases[i]) > RAY_TOLERANCE:
            return Witness(
                datum.atoms[i].name, (first.phases[i], second.phases[i])
            )
    sph_phases = {
        i: first.phases[i] for i in datum.indices_of(RigidityClass.SPHERICAL)
    }
    for t in datum.indices_of(RigidityClass.SEMIRIGID):
        if not _hom0_links(datum, t):
            continue
        interval = propagate_phase_constraints(
            datum, sph_phases, first.charge, t
        )
        if interval.forced_value is None:
            continue
        for sigma in (first, second):
            if abs(sigma.phases[t] - interval.forced_value) > 2 * RAY_TOLERANCE:
                raise InconsistencyError(
                    f"valid stability violates the forced phase of "
                    f"{datum.atoms[t].name}"
                )
    for i, atom in enumerate(datum.atoms):
        if abs(first.phases[i] - second.phases[i]) > RAY_TOLERANCE:
            return Witness(
                atom.name, (first.phases[i], second.phases[i]), forced=False
            )
    return None


def check_fS_gap(
    datum: SphericalCollectionDatum, first: ToyStability, second: ToyStability
) -> Witness | None:
    """The gap argument: with equal charges, a spherical phase
    difference lies on one ray, so it is an even integer; values in
    (0, 1) are impossible for valid inputs.  When fS < 1 the claim is
    full equality on atoms, and any violating atom is returned; fS >= 1
    makes no claim and returns None.
    """
    _require_comparable(datum, first, second)
    fs = fS_distance(datum, first, second)
    if fs >= 1:
        return None
    if fs > 0:
        for i in datum.indices_of(RigidityClass.SPHERICAL):
            if 0 < abs(first.phases[i] - second.phases[i]) < 1:
                return Witness(
                    datum.atoms[i].name, (first.phases[i], second.phases[i])
                )
    for i, atom in enumerate(datum.atoms):
        if abs(first.phases[i] - second.phases[i]) > RAY_TOLERANCE:
            return Witness(atom.name, (first.phases[i], second.phases[i]))
    return None


def apply_gl2(
    datum: SphericalCollectionDatum, g: Gl2Element, sigma: ToyStability
) -> ToyStability:
    """Right action on a stability: the charge maps to T^{-1} Z and each
    phase to f^{-1}(phase), so charge rays and phase labels stay
    matched and semistable sets are preserved."""
    inverse = gl2_inverse(g)
    phases = tuple(gl2_relabel(inverse, phi) for phi in sigma.phases)
    return ToyStability(phases, gl2_apply(g, sigma.charge))
