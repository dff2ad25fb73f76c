"""Integral model of the extended cohomology lattice of a K3 surface.

The lattice is Z + NS + Z with a user-supplied Neron-Severi Gram matrix
G (symmetric, even diagonal, signature (1, rho-1)), so the full pairing

    <(r, c, s), (r', c', s')> = c^T G c' - r s' - s r'

has signature (2, rho).  Vectors are written (r, c, s) with r the rank
component and s the degree-4 component; the point class is (0, 0, 1)
and the structure-sheaf class is (1, 0, 1).

Conventions fixed here and used everywhere else: the Euler pairing is
chi = -<. , .>, and the shift [1] acts on classes by -1.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Sequence

from .errors import InputError, PreconditionError
from .linalg import Mat, dot, symmetric_inertia


class RigidityClass(Enum):
    SPHERICAL = "spherical"
    SEMIRIGID = "semirigid"
    OTHER = "other"


@dataclass(frozen=True)
class AmpleData:
    """A chosen integral class h in the positive cone of NS."""

    h: tuple[int, ...]


@dataclass(frozen=True)
class MukaiLattice:
    ns_rank: int
    ns_gram: tuple[tuple[int, ...], ...]
    ample: AmpleData

    def __post_init__(self) -> None:
        rho = self.ns_rank
        if rho < 1:
            raise InputError("ns_rank must be a positive integer")
        g = self.ns_gram
        if len(g) != rho or any(len(row) != rho for row in g):
            raise InputError(f"ns_gram must be {rho}x{rho}")
        for i in range(rho):
            if g[i][i] % 2 != 0:
                raise InputError(f"ns_gram diagonal entry {i} is odd")
            for j in range(rho):
                if g[i][j] != g[j][i]:
                    raise InputError("ns_gram is not symmetric")
        inertia = symmetric_inertia(tuple(tuple(Fraction(x) for x in row) for row in g))
        if inertia != (1, rho - 1, 0):
            raise InputError(
                f"ns_gram has signature {inertia[:2]}, expected (1, {rho - 1})"
            )
        h = self.ample.h
        if len(h) != rho:
            raise InputError("ample class has wrong length")
        if self.ns_product(h, h) <= 0:
            raise InputError("ample class has non-positive square")

    @property
    def dim(self) -> int:
        return self.ns_rank + 2

    def ns_product(self, x: Sequence, y: Sequence):
        """x^T G y on NS coefficient vectors, exact."""
        if len(x) != self.ns_rank or len(y) != self.ns_rank:
            raise InputError("NS vector has wrong length")
        return sum(
            x[i] * self.ns_gram[i][j] * y[j]
            for i in range(self.ns_rank)
            for j in range(self.ns_rank)
        )

    def pairing_matrix(self) -> Mat:
        """Gram matrix of the full pairing in (r, c, s) coordinates."""
        rho = self.ns_rank
        n = rho + 2
        rows = []
        for i in range(n):
            row = [Fraction(0)] * n
            if i == 0:
                row[n - 1] = Fraction(-1)
            elif i == n - 1:
                row[0] = Fraction(-1)
            else:
                for j in range(rho):
                    row[1 + j] = Fraction(self.ns_gram[i - 1][j])
            rows.append(tuple(row))
        return tuple(rows)


@dataclass(frozen=True)
class MukaiVector:
    r: int
    c: tuple[int, ...]
    s: int

    def as_tuple(self) -> tuple[int, ...]:
        return (self.r, *self.c, self.s)

    def __neg__(self) -> "MukaiVector":
        return MukaiVector(-self.r, tuple(-x for x in self.c), -self.s)

    def __add__(self, other: "MukaiVector") -> "MukaiVector":
        if len(self.c) != len(other.c):
            raise InputError("cannot add vectors of different NS rank")
        return MukaiVector(
            self.r + other.r,
            tuple(a + b for a, b in zip(self.c, other.c)),
            self.s + other.s,
        )


def vector_from_tuple(entries: Sequence[int]) -> MukaiVector:
    if len(entries) < 3:
        raise InputError("a Mukai vector needs at least 3 components")
    return MukaiVector(int(entries[0]), tuple(int(x) for x in entries[1:-1]), int(entries[-1]))


def mukai_pairing(lattice: MukaiLattice, v: MukaiVector, w: MukaiVector) -> int:
    """<v, w> = c^T G c' - r s' - s r', exact integer."""
    if len(v.c) != lattice.ns_rank or len(w.c) != lattice.ns_rank:
        raise InputError("NS component has wrong length")
    return lattice.ns_product(v.c, w.c) - v.r * w.s - v.s * w.r


def self_square(lattice: MukaiLattice, v: MukaiVector) -> int:
    return mukai_pairing(lattice, v, v)


def classify_rigidity(lattice: MukaiLattice, v: MukaiVector) -> RigidityClass:
    """Spherical (v^2 = -2), semirigid (v^2 = 0), or other."""
    square = self_square(lattice, v)
    if square == -2:
        return RigidityClass.SPHERICAL
    if square == 0:
        return RigidityClass.SEMIRIGID
    return RigidityClass.OTHER


def mukai_vector_of_sheaf(
    lattice: MukaiLattice, r: int, c1: Sequence[int], ch2
) -> MukaiVector:
    """(r, c1, ch2 + r): the Chern character times the square root (1, 0, 1)
    of the Todd class."""
    ch2 = Fraction(ch2)
    s = ch2 + r
    if s.denominator != 1:
        raise InputError(f"degree-4 component {s} is not an integer")
    if len(c1) != lattice.ns_rank:
        raise InputError("c1 has wrong length")
    return MukaiVector(int(r), tuple(int(x) for x in c1), int(s))


def reflect(lattice: MukaiLattice, v: MukaiVector, delta: MukaiVector) -> MukaiVector:
    """Reflection s_delta(v) = v + <v, delta> delta in a spherical class."""
    if self_square(lattice, delta) != -2:
        raise PreconditionError(f"{delta.as_tuple()} is not spherical")
    factor = mukai_pairing(lattice, v, delta)
    return MukaiVector(
        v.r + factor * delta.r,
        tuple(a + factor * b for a, b in zip(v.c, delta.c)),
        v.s + factor * delta.s,
    )


def tensor_exp(lattice: MukaiLattice, v: MukaiVector, ell: Sequence[int]) -> MukaiVector:
    """Multiplication by exp(ell) = (1, ell, ell^2/2): the class-level
    effect of twisting by a line bundle with first Chern class ell."""
    ell = tuple(int(x) for x in ell)
    if len(ell) != lattice.ns_rank:
        raise InputError("twist class has wrong length")
    ell_sq = lattice.ns_product(ell, ell)
    s = v.s + lattice.ns_product(v.c, ell) + v.r * (ell_sq // 2)
    return MukaiVector(v.r, tuple(a + v.r * b for a, b in zip(v.c, ell)), s)


def shift_class(v: MukaiVector, k: int) -> MukaiVector:
    """Class of v[k]: the shift acts by (-1)^k."""
    return v if k % 2 == 0 else -v
