"""Central charges on the extended lattice and the regions they cut out.

A charge is stored as the pair (Omega_re, Omega_im) of rational vectors
in lattice coordinates, with evaluation Z(v) = <Omega_re, v> +
i <Omega_im, v> through the lattice pairing.  The exponential form
Z = <exp(B + i omega), v> covers the standard construction; positivity
of the spanned plane, component membership, heart membership and the
lifted GL+(2, R) action are all decided exactly except where a phase is
genuinely a real number (tolerance 1e-12, documented per function).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import (
    HoleClassError,
    InputError,
    OrthogonalPlanesError,
    PreconditionError,
)
from .lattice import MukaiLattice, MukaiVector
from .linalg import Mat, mat_inverse, mat_mul, vec

GL2_TOLERANCE = 1e-12


@dataclass(frozen=True)
class CentralCharge:
    """Z(v) = <re, v> + i <im, v> in lattice coordinates."""

    re: tuple[Fraction, ...]
    im: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if len(self.re) != len(self.im):
            raise InputError("re and im have different lengths")


def central_charge(re: Sequence, im: Sequence) -> CentralCharge:
    return CentralCharge(vec(re), vec(im))


@dataclass(frozen=True)
class ExpParams:
    """NS-coefficient vectors B and omega of an exponential charge."""

    b: tuple[Fraction, ...]
    omega: tuple[Fraction, ...]


def exp_params(b: Sequence, omega: Sequence) -> ExpParams:
    return ExpParams(vec(b), vec(omega))


@dataclass(frozen=True)
class TwoTermSheafDatum:
    """Slope data of a two-term complex H^{-1}[1] -> E -> H^0.

    mu_max is the largest slope of H^{-1} (None when H^{-1} = 0) and
    mu_min the smallest slope of a torsion-free quotient of H^0 (None
    when H^0 is torsion).  Slopes are measured against omega.
    """

    mu_max: Fraction | None = None
    mu_min: Fraction | None = None


def pair(lattice: MukaiLattice, x: Sequence, y: Sequence):
    """The lattice pairing extended to rational coefficient vectors."""
    if len(x) != lattice.dim or len(y) != lattice.dim:
        raise InputError("vector has wrong length")
    return lattice.ns_product(x[1:-1], y[1:-1]) - x[0] * y[-1] - x[-1] * y[0]


def standard_charge(lattice: MukaiLattice, params: ExpParams) -> CentralCharge:
    """The exponential charge Z(v) = <exp(B + i omega), v>.

    Omega_re = (1, B, (B^2 - omega^2)/2) and Omega_im = (0, omega,
    B.omega), all products taken in the NS Gram form.
    """
    b, omega = params.b, params.omega
    omega_sq = lattice.ns_product(omega, omega)
    if omega_sq <= 0:
        raise PreconditionError(f"omega^T G omega = {omega_sq} is not positive")
    omega_h = lattice.ns_product(omega, lattice.ample.h)
    if omega_h <= 0:
        raise PreconditionError(
            f"omega^T G h = {omega_h} is not positive (wrong cone component)"
        )
    b_sq = lattice.ns_product(b, b)
    b_omega = lattice.ns_product(b, omega)
    re = (Fraction(1), *vec(b), Fraction(b_sq - omega_sq, 2))
    im = (Fraction(0), *vec(omega), Fraction(b_omega))
    return CentralCharge(re, im)


def evaluate(
    lattice: MukaiLattice, z: CentralCharge, v: MukaiVector
) -> tuple[Fraction, Fraction]:
    """Exact (Re Z(v), Im Z(v))."""
    coords = v.as_tuple()
    return Fraction(pair(lattice, z.re, coords)), Fraction(pair(lattice, z.im, coords))


def functional_rows(
    lattice: MukaiLattice, z: CentralCharge
) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
    """Coordinate rows of v -> Re Z(v) and v -> Im Z(v) as linear forms."""
    m = lattice.pairing_matrix()
    return (
        tuple(sum((row[j] * z.re[j] for j in range(len(row))), Fraction(0)) for row in m),
        tuple(sum((row[j] * z.im[j] for j in range(len(row))), Fraction(0)) for row in m),
    )


def principal_phase(
    lattice: MukaiLattice, z: CentralCharge, v: MukaiVector
) -> tuple[float, bool]:
    """The unique phase in (0, 2] with Z(v) on exp(i pi phase) R_{>0}.

    Axis cases are decided exactly: Im Z(v) = 0 gives phase 1 (negative
    axis, flagged) or 2 (positive axis); off-axis phases are floats good
    to 1e-12.  A vanishing charge raises HoleClassError.
    """
    re, im = evaluate(lattice, z, v)
    if re == 0 and im == 0:
        raise HoleClassError(v.as_tuple())
    if im == 0:
        return (1.0, True) if re < 0 else (2.0, False)
    phase = math.atan2(float(im), float(re)) / math.pi
    if phase <= 0:
        phase += 2.0
    return phase, False


def plane_gram(lattice: MukaiLattice, z: CentralCharge) -> Mat:
    """2x2 Gram matrix of (Omega_re, Omega_im) under the lattice pairing."""
    rr = pair(lattice, z.re, z.re)
    ri = pair(lattice, z.re, z.im)
    ii = pair(lattice, z.im, z.im)
    return ((Fraction(rr), Fraction(ri)), (Fraction(ri), Fraction(ii)))


def is_positive_plane(lattice: MukaiLattice, z: CentralCharge) -> bool:
    """True iff Omega_re, Omega_im span a positive definite 2-plane
    (exact leading-minor test on plane_gram)."""
    g = plane_gram(lattice, z)
    return g[0][0] > 0 and g[0][0] * g[1][1] - g[0][1] * g[1][0] > 0


def same_component(
    lattice: MukaiLattice, z: CentralCharge, z_ref: CentralCharge
) -> bool:
    """Whether two oriented positive planes sit in the same component.

    Decided by the sign of det of the mutual pairing matrix; zero cannot
    occur for two positive planes in signature (2, rho) and is raised
    defensively.
    """
    if not is_positive_plane(lattice, z) or not is_positive_plane(lattice, z_ref):
        raise PreconditionError("both charges must span positive planes")
    m00 = pair(lattice, z.re, z_ref.re)
    m01 = pair(lattice, z.re, z_ref.im)
    m10 = pair(lattice, z.im, z_ref.re)
    m11 = pair(lattice, z.im, z_ref.im)
    det = m00 * m11 - m01 * m10
    if det == 0:
        raise OrthogonalPlanesError("mutual pairing matrix is singular")
    return det > 0


def heart_contains(
    lattice: MukaiLattice, params: ExpParams, datum: TwoTermSheafDatum
) -> bool:
    """Membership of a two-term complex in the tilted heart at (B, omega):
    H^{-1} zero or torsion-free with mu_max <= B.omega, and H^0 torsion
    or with mu_min > B.omega.  Exact rational comparisons."""
    b_omega = lattice.ns_product(params.b, params.omega)
    minus_ok = datum.mu_max is None or datum.mu_max <= b_omega
    zero_ok = datum.mu_min is None or datum.mu_min > b_omega
    return minus_ok and zero_ok


def charge_norm_inf(
    lattice: MukaiLattice, z: CentralCharge, z_other: CentralCharge
) -> float:
    """max over lattice basis vectors e of |Z(e) - Z'(e)|."""
    re_a, im_a = functional_rows(lattice, z)
    re_b, im_b = functional_rows(lattice, z_other)
    return max(
        math.hypot(float(ra - rb), float(ia - ib))
        for ra, rb, ia, ib in zip(re_a, re_b, im_a, im_b)
    )


# --- lifted GL+(2, R) action -------------------------------------------------
#
# An element is a pair (T, f) with T in GL+(2, R) and f an increasing
# relabeling satisfying f(phi + 1) = f(phi) + 1, compatible in the sense
# that T(exp(i pi phi)) lies on the ray exp(i pi f(phi)) R_{>0}.  The
# pair is stored as T plus the single value f0 = f(0); f is recovered by
# continuous lifting.  Charges transform by Z -> T^{-1} Z, phases by f.


@dataclass(frozen=True)
class Gl2Element:
    t: tuple[tuple[Fraction, ...], tuple[Fraction, ...]]
    f0: float

    def __post_init__(self) -> None:
        (a, b), (c, d) = self.t
        if a * d - b * c <= 0:
            raise PreconditionError("matrix determinant must be positive")
        norm = math.hypot(float(a), float(c))
        residual = math.hypot(
            float(a) / norm - math.cos(math.pi * self.f0),
            float(c) / norm - math.sin(math.pi * self.f0),
        )
        if residual > GL2_TOLERANCE:
            raise PreconditionError(
                f"f0={self.f0} is inconsistent with the matrix (residual {residual:.3e})"
            )


def gl2_from_matrix(t: Sequence[Sequence], lift: int = 0) -> Gl2Element:
    """Build an element from a rational matrix; lift picks f(0) among the
    branches differing by even integers."""
    rows = tuple(tuple(Fraction(x) for x in row) for row in t)
    if len(rows) != 2 or any(len(row) != 2 for row in rows):
        raise InputError("expected a 2x2 matrix")
    f0 = math.atan2(float(rows[1][0]), float(rows[0][0])) / math.pi + 2 * lift
    return Gl2Element(rows, f0)


def gl2_identity() -> Gl2Element:
    return gl2_from_matrix(((1, 0), (0, 1)))


def gl2_relabel(g: Gl2Element, phase: float) -> float:
    """f(phase) for the relabeling determined by (T, f0).

    Continuous lifting: on [0, 1) the argument of T(exp(i pi t))
    advances by a value in [0, pi), so the branch is unambiguous.
    """
    k = math.floor(phase)
    t = phase - k
    (a, b), (c, d) = g.t
    w0 = math.atan2(float(c), float(a))
    x = float(a) * math.cos(math.pi * t) + float(b) * math.sin(math.pi * t)
    y = float(c) * math.cos(math.pi * t) + float(d) * math.sin(math.pi * t)
    advance = (math.atan2(y, x) - w0) % (2 * math.pi)
    if advance > 1.5 * math.pi:
        advance -= 2 * math.pi
    return g.f0 + k + advance / math.pi


def gl2_apply(g: Gl2Element, z: CentralCharge) -> CentralCharge:
    """Z -> T^{-1} Z acting on (Re, Im) value pairs; exact."""
    inv = mat_inverse(g.t)
    re = tuple(inv[0][0] * x + inv[0][1] * y for x, y in zip(z.re, z.im))
    im = tuple(inv[1][0] * x + inv[1][1] * y for x, y in zip(z.re, z.im))
    return CentralCharge(re, im)


def gl2_compose(g1: Gl2Element, g2: Gl2Element) -> Gl2Element:
    """(T1, f1) (T2, f2) = (T1 T2, f1 o f2)."""
    t = mat_mul(g1.t, g2.t)
    return Gl2Element((tuple(t[0]), tuple(t[1])), gl2_relabel(g1, g2.f0))


def gl2_inverse(g: Gl2Element) -> Gl2Element:
    """(T, f)^{-1} = (T^{-1}, f^{-1}); the lift of f^{-1}(0) is pinned by
    f(f^{-1}(0)) = 0."""
    inv = mat_inverse(g.t)
    candidate = math.atan2(float(inv[1][0]), float(inv[0][0])) / math.pi
    image = gl2_relabel(g, candidate)
    branch = 2 * round(image / 2)
    if abs(image - branch) > 1e-9:
        raise PreconditionError("could not pin the inverse relabeling branch")
    return Gl2Element((tuple(inv[0]), tuple(inv[1])), candidate - branch)
