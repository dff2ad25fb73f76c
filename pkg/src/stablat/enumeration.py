"""Finiteness bound, bounded enumeration of spherical classes, and the
wall/hole geometry of two-parameter charge slices.

The engine is the inequality Q(delta) <= 2 (1 + C |Z(delta)|^2) for
spherical delta, where Q is the positive definite Euclideanization of
the lattice pairing along the positive plane of Z and C is a certified
rational bound for the largest eigenvalue of the inverse plane Gram
matrix.  Enumerating the Q-ball therefore provably catches every
spherical class of bounded mass.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt, sqrt
from typing import Callable, Sequence

from .charge import (
    CentralCharge,
    ExpParams,
    evaluate,
    functional_rows,
    is_positive_plane,
    plane_gram,
    standard_charge,
)
from .errors import InputError, OnWallError, PreconditionError
from .lattice import MukaiLattice, MukaiVector, vector_from_tuple
from .linalg import Mat, integer_kernel, mat_inverse, symmetric_inertia
from .shortvec import enumerate_short_vectors, quadratic_value


def thread_cap() -> int:
    """Worker cap from STABLAT_THREADS (default 1, sequential)."""
    raw = os.environ.get("STABLAT_THREADS", "1")
    try:
        cap = int(raw)
    except ValueError:
        raise InputError(f"STABLAT_THREADS={raw!r} is not an integer") from None
    return max(1, cap)


def _map_ordered(fn: Callable, items: Sequence) -> list:
    """Map preserving input order; fans out when STABLAT_THREADS > 1."""
    cap = thread_cap()
    if cap == 1 or len(items) < 2:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=cap) as pool:
        return list(pool.map(fn, items))


@dataclass(frozen=True)
class PositivitySplit:
    """Exact data of the Euclideanized form along a positive plane.

    gram is the 2x2 plane Gram matrix, c = trace(gram)/det(gram) bounds
    the largest eigenvalue of its inverse, and q is the positive
    definite matrix of Q(x) = 2 z^T gram^{-1} z - x^2 with
    z = (<Omega_re, x>, <Omega_im, x>).
    """

    gram: Mat
    c: Fraction
    q: Mat


def positivity_split(lattice: MukaiLattice, z: CentralCharge) -> PositivitySplit:
    if not is_positive_plane(lattice, z):
        raise PreconditionError("charge does not span a positive plane")
    gram = plane_gram(lattice, z)
    det = gram[0][0] * gram[1][1] - gram[0][1] * gram[1][0]
    c = (gram[0][0] + gram[1][1]) / det
    inv = mat_inverse(gram)
    rows = functional_rows(lattice, z)
    mpair = lattice.pairing_matrix()
    n = lattice.dim
    q = tuple(
        tuple(
            2
            * sum(
                (
                    inv[a][b] * rows[a][i] * rows[b][j]
                    for a in range(2)
                    for b in range(2)
                ),
                Fraction(0),
            )
            - mpair[i][j]
            for j in range(n)
        )
        for i in range(n)
    )
    return PositivitySplit(gram, c, q)


def enumerate_spherical(
    lattice: MukaiLattice, z: CentralCharge, mass_bound
) -> list[MukaiVector]:
    """All spherical classes delta with |Z(delta)| <= mass_bound.

    Complete by the certified bound: every delta with delta^2 = -2 and
    mass at most M satisfies Q(delta) <= 2 (1 + C M^2), so filtering the
    Q-ball misses nothing.  Canonically sorted.
    """
    mass = Fraction(mass_bound)
    if mass < 0:
        raise PreconditionError("mass bound must be nonnegative")
    split = positivity_split(lattice, z)
    ball = enumerate_short_vectors(split.q, 2 * (1 + split.c * mass * mass))
    gram = lattice.ns_gram
    rho = lattice.ns_rank
    f_re, f_im = functional_rows(lattice, z)
    fr = [float(a) for a in f_re]
    fi = [float(a) for a in f_im]
    mass_sq = mass * mass
    loose = float(mass_sq) * (1 + 1e-6) + 1e-12
    out = []
    for x in ball:
        c = x[1:-1]
        square = sum(
            c[i] * gram[i][j] * c[j] for i in range(rho) for j in range(rho)
        ) - 2 * x[0] * x[-1]
        if square != -2:
            continue
        # float screen; anything close gets the exact test
        re_f = sum(a * b for a, b in zip(fr, x))
        im_f = sum(a * b for a, b in zip(fi, x))
        if re_f * re_f + im_f * im_f > loose:
            continue
        re = sum((a * b for a, b in zip(f_re, x)), Fraction(0))
        im = sum((a * b for a, b in zip(f_im, x)), Fraction(0))
        if re * re + im * im <= mass_sq:
            out.append(vector_from_tuple(x))
    return out


def enumerate_spherical_box(
    lattice: MukaiLattice, z: CentralCharge, mass_bound
) -> list[MukaiVector]:
    """Cross-check enumeration by brute force over the bounding box of
    the Q-ball: coordinate i ranges over |x_i|^2 <= bound * (Q^{-1})_ii.
    Slower than the lattice walk, used to confirm it."""
    mass = Fraction(mass_bound)
    if mass < 0:
        raise PreconditionError("mass bound must be nonnegative")
    split = positivity_split(lattice, z)
    bound = 2 * (1 + split.c * mass * mass)
    inv = mat_inverse(split.q)
    n = lattice.dim
    radii = []
    for i in range(n):
        limit = bound * inv[i][i]
        r = isqrt(limit.numerator // limit.denominator) + 1
        radii.append(r)
    mpair = lattice.pairing_matrix()
    f_re, f_im = functional_rows(lattice, z)
    out = []
    grids = [range(-r, r + 1) for r in radii]

    def scan(prefix: list[int], depth: int) -> None:
        if depth == n:
            x = tuple(prefix)
            if quadratic_value(mpair, x) != -2:
                return
            re = sum((a * b for a, b in zip(f_re, x)), Fraction(0))
            im = sum((a * b for a, b in zip(f_im, x)), Fraction(0))
            if re * re + im * im <= mass * mass:
                out.append(vector_from_tuple(x))
            return
        for value in grids[depth]:
            prefix.append(value)
            scan(prefix, depth + 1)
            prefix.pop()

    scan([], 0)
    out.sort(key=lambda v: v.as_tuple())
    return out


def hole_classes(lattice: MukaiLattice, z: CentralCharge) -> list[MukaiVector]:
    """All spherical classes in the kernel of Z.

    The kernel sublattice K = ker(Z) cap N is computed exactly; the
    pairing restricted to K is negative definite (K is orthogonal to a
    positive plane), so its (-2)-vectors come from one short-vector run.
    Empty output means the charge misses every spherical wall.
    """
    if not is_positive_plane(lattice, z):
        raise PreconditionError("charge does not span a positive plane")
    rows = functional_rows(lattice, z)
    kernel = integer_kernel(rows, lattice.dim)
    if not kernel:
        return []
    mpair = lattice.pairing_matrix()
    k = len(kernel)
    gram_k = tuple(
        tuple(
            sum(
                (
                    Fraction(kernel[i][a]) * mpair[a][b] * kernel[j][b]
                    for a in range(lattice.dim)
                    for b in range(lattice.dim)
                ),
                Fraction(0),
            )
            for j in range(k)
        )
        for i in range(k)
    )
    if symmetric_inertia(gram_k) != (0, k, 0):
        raise PreconditionError("kernel pairing is not negative definite")
    minus_gram = tuple(tuple(-x for x in row) for row in gram_k)
    found = []
    for coords in enumerate_short_vectors(minus_gram, 2):
        if quadratic_value(minus_gram, coords) == 2:
            ambient = tuple(
                sum(coords[i] * kernel[i][j] for i in range(k))
                for j in range(lattice.dim)
            )
            found.append(vector_from_tuple(ambient))
    found.sort(key=lambda v: v.as_tuple())
    return found


@dataclass(frozen=True)
class AdmissibilityReport:
    """Class-level admissibility of an exponential charge.

    sufficient records the omega^2 > 2 test; violations lists every
    enumerated spherical class with rank >= 1, mass at most the given
    bound, and charge value on the nonpositive real axis.
    """

    sufficient: bool
    omega_sq: Fraction
    mass_bound: Fraction
    violations: tuple[tuple[MukaiVector, Fraction, Fraction], ...]


def standard_admissible(
    lattice: MukaiLattice, params: ExpParams, mass_bound
) -> AdmissibilityReport:
    z = standard_charge(lattice, params)
    omega_sq = Fraction(lattice.ns_product(params.omega, params.omega))
    spherical = enumerate_spherical(lattice, z, mass_bound)
    violations = []
    for delta in spherical:
        if delta.r < 1:
            continue
        re, im = evaluate(lattice, z, delta)
        if im == 0 and re <= 0:
            violations.append((delta, re, im))
    return AdmissibilityReport(
        sufficient=omega_sq > 2,
        omega_sq=omega_sq,
        mass_bound=Fraction(mass_bound),
        violations=tuple(violations),
    )


# --- polynomials in (beta, alpha) --------------------------------------------


class Poly2:
    """Polynomial in two variables with exact rational coefficients,
    stored as {(i, j): coeff} for beta^i alpha^j."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None) -> None:
        self.coeffs = {}
        for key, value in (coeffs or {}).items():
            value = Fraction(value)
            if value != 0:
                self.coeffs[key] = value

    @classmethod
    def constant(cls, value) -> "Poly2":
        return cls({(0, 0): Fraction(value)})

    def _lift(self, other):
        return other if isinstance(other, Poly2) else Poly2.constant(other)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.coeffs)
        for key, value in other.coeffs.items():
            out[key] = out.get(key, Fraction(0)) + value
        return Poly2(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly2({k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) + (-self)

    def __mul__(self, other):
        other = self._lift(other)
        out = {}
        for (i, j), a in self.coeffs.items():
            for (k, l), b in other.coeffs.items():
                key = (i + k, j + l)
                out[key] = out.get(key, Fraction(0)) + a * b
        return Poly2(out)

    __rmul__ = __mul__

    def evaluate(self, beta, alpha):
        return sum(
            coeff * beta**i * alpha**j for (i, j), coeff in self.coeffs.items()
        )

    def is_zero(self) -> bool:
        return not self.coeffs

    def items(self):
        return tuple(sorted(self.coeffs.items()))

    def __eq__(self, other):
        return isinstance(other, Poly2) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.items())

    def __repr__(self):
        return f"Poly2({dict(self.items())!r})"


@dataclass(frozen=True)
class WallSlice:
    """Rectangle [beta0, beta1] x (0, alpha1] of charges exp(beta*hb + i alpha*hw)."""

    beta0: Fraction
    beta1: Fraction
    alpha1: Fraction
    hb: tuple[int, ...]
    hw: tuple[int, ...]


def wall_slice(lattice: MukaiLattice, beta0, beta1, alpha1, hb=None, hw=None) -> WallSlice:
    beta0, beta1, alpha1 = Fraction(beta0), Fraction(beta1), Fraction(alpha1)
    if beta0 >= beta1 or alpha1 <= 0:
        raise InputError("empty slice rectangle")
    hb = tuple(int(x) for x in (hb if hb is not None else lattice.ample.h))
    hw = tuple(int(x) for x in (hw if hw is not None else lattice.ample.h))
    if lattice.ns_product(hw, hw) <= 0 or lattice.ns_product(hw, lattice.ample.h) <= 0:
        raise InputError("omega direction is not positive")
    if lattice.ns_product(hb, hw) == 0:
        raise InputError("orthogonal slice directions are not supported")
    return WallSlice(beta0, beta1, alpha1, hb, hw)


@dataclass(frozen=True)
class Wall:
    delta: MukaiVector
    locus: Poly2
    validity: Poly2


@dataclass(frozen=True)
class Hole:
    delta: MukaiVector
    beta: Fraction
    alpha: object
    exact: bool
    kind: str = "point"


@dataclass(frozen=True)
class WallSet:
    klass: MukaiVector
    slice: WallSlice
    mass_bound: Fraction
    walls: tuple[Wall, ...]
    holes: tuple[Hole, ...]


def symbolic_exp_charge(lattice: MukaiLattice, slc: WallSlice):
    """Components of Omega_re, Omega_im for B = beta*hb, omega = alpha*hw,
    as polynomials in (beta, alpha)."""
    beta = Poly2({(1, 0): 1})
    alpha = Poly2({(0, 1): 1})
    hb_sq = lattice.ns_product(slc.hb, slc.hb)
    hw_sq = lattice.ns_product(slc.hw, slc.hw)
    hb_hw = lattice.ns_product(slc.hb, slc.hw)
    re = (
        Poly2.constant(1),
        *[beta * x for x in slc.hb],
        beta * beta * Fraction(hb_sq, 2) - alpha * alpha * Fraction(hw_sq, 2),
    )
    im = (
        Poly2.constant(0),
        *[alpha * x for x in slc.hw],
        beta * alpha * hb_hw,
    )
    return re, im


def _symbolic_value(lattice: MukaiLattice, omega, v: MukaiVector):
    """<Omega(beta, alpha), v> as a Poly2."""
    coords = v.as_tuple()
    acc = Poly2()
    ns = lattice.ns_product(
        [omega[1 + i] for i in range(lattice.ns_rank)], [Poly2.constant(x) for x in v.c]
    )
    acc = acc + ns
    acc = acc - omega[0] * coords[-1]
    acc = acc - omega[-1] * coords[0]
    return acc


def _is_rational_multiple(a: Sequence[int], b: Sequence[int]) -> bool:
    return all(
        a[i] * b[j] == a[j] * b[i] for i in range(len(a)) for j in range(i + 1, len(a))
    )


def _sqrt_exact(t: Fraction):
    """(value, exact): rational square root when it exists, float otherwise."""
    num, den = t.numerator, t.denominator
    rn, rd = isqrt(num), isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Fraction(rn, rd), True
    return sqrt(num / den), False


def _holes_of(lattice: MukaiLattice, slc: WallSlice, delta: MukaiVector) -> list[Hole]:
    """Exact solutions of Z_{beta,alpha}(delta) = 0 inside the rectangle.

    Im Z = alpha (hw.c - beta (hb.hw) r) and Re Z is quadratic in alpha
    at the solved beta, so holes are points, vertical segments (r = 0,
    hw.c = 0), or the whole slice (charge kills delta identically).
    """
    hw_c = lattice.ns_product(slc.hw, delta.c)
    hb_c = lattice.ns_product(slc.hb, delta.c)
    hb_hw = lattice.ns_product(slc.hb, slc.hw)
    hb_sq = lattice.ns_product(slc.hb, slc.hb)
    hw_sq = lattice.ns_product(slc.hw, slc.hw)
    if delta.r != 0:
        beta_star = Fraction(hw_c, hb_hw * delta.r)
        if not slc.beta0 <= beta_star <= slc.beta1:
            return []
        const = beta_star * hb_c - delta.s - Fraction(delta.r * hb_sq, 2) * beta_star**2
        alpha_sq = Fraction(-2, delta.r * hw_sq) * const
        if alpha_sq <= 0:
            return []
        alpha, exact = _sqrt_exact(alpha_sq)
        if alpha > slc.alpha1:
            return []
        return [Hole(delta, beta_star, alpha, exact)]
    if hw_c != 0:
        return []
    if hb_c != 0:
        beta_star = Fraction(delta.s, hb_c)
        if not slc.beta0 <= beta_star <= slc.beta1:
            return []
        return [Hole(delta, beta_star, slc.alpha1, True, kind="segment")]
    if delta.s == 0:
        mid = (slc.beta0 + slc.beta1) / 2
        return [Hole(delta, mid, slc.alpha1, True, kind="everywhere")]
    return []


def walls_for_class(
    lattice: MukaiLattice,
    v: MukaiVector,
    slc: WallSlice,
    mass_bound,
    grid: int = 8,
    alpha_floor=None,
) -> WallSet:
    """Potential walls of v on the slice: spherical classes of bounded
    mass, their alignment loci Im(Z(delta) conj(Z(v))) = 0 with validity
    Re(Z(delta) conj(Z(v))) > 0, and the holes Z(delta) = 0.

    The mass test is sampled on a (grid+1) x (grid+1) rectangle of
    charges, and candidates are the union of the certified Q-balls of
    every sample point, so any class whose mass at some sample point is
    at most the bound is provably found.  Classes dipping under the
    bound only between sample points can escape; raise grid to chase
    them.  Walls accumulate without bound as alpha -> 0, so the sample
    rectangle floors alpha at alpha1/4 by default; pass alpha_floor to
    dig deeper at matching cost.
    """
    mass = Fraction(mass_bound)
    if mass < 0:
        raise PreconditionError("mass bound must be nonnegative")
    if not any(v.as_tuple()):
        raise PreconditionError("wall system of the zero class is undefined")
    if grid < 1:
        raise InputError("grid must be a positive integer")
    floor = slc.alpha1 / 4 if alpha_floor is None else Fraction(alpha_floor)
    if not 0 < floor <= slc.alpha1:
        raise InputError("alpha_floor must lie in (0, alpha1]")
    betas = [
        slc.beta0 + Fraction(i, grid) * (slc.beta1 - slc.beta0) for i in range(grid + 1)
    ]
    alphas = sorted(
        {floor + Fraction(j, grid) * (slc.alpha1 - floor) for j in range(grid + 1)}
    )
    points = [(b, a) for b in betas for a in alphas]
    charges = _map_ordered(
        lambda p: standard_charge(
            lattice,
            ExpParams(
                tuple(p[0] * x for x in slc.hb), tuple(p[1] * x for x in slc.hw)
            ),
        ),
        points,
    )
    splits = _map_ordered(lambda z: positivity_split(lattice, z), charges)
    gram = lattice.ns_gram
    rho = lattice.ns_rank

    def self_square_int(x) -> int:
        c = x[1:-1]
        return sum(
            c[i] * gram[i][j] * c[j] for i in range(rho) for j in range(rho)
        ) - 2 * x[0] * x[-1]

    def ball_sphericals(split: PositivitySplit) -> set:
        bound = 2 * (1 + split.c * mass * mass)
        return {
            x
            for x in enumerate_short_vectors(split.q, bound)
            if self_square_int(x) == -2
        }

    raw = set()
    for found in _map_ordered(ball_sphericals, splits):
        raw |= found

    functionals = _map_ordered(lambda z: functional_rows(lattice, z), charges)
    float_functionals = [
        ([float(a) for a in f_re], [float(a) for a in f_im])
        for f_re, f_im in functionals
    ]
    mass_sq = mass * mass
    loose = float(mass_sq) * (1 + 1e-6) + 1e-12

    def within_mass(x) -> bool:
        # float screen first; anything close gets the exact test
        for idx, (fr, fi) in enumerate(float_functionals):
            re = sum(a * b for a, b in zip(fr, x))
            im = sum(a * b for a, b in zip(fi, x))
            if re * re + im * im > loose:
                continue
            f_re, f_im = functionals[idx]
            re_exact = sum((a * b for a, b in zip(f_re, x)), Fraction(0))
            im_exact = sum((a * b for a, b in zip(f_im, x)), Fraction(0))
            if re_exact * re_exact + im_exact * im_exact <= mass_sq:
                return True
        return False

    v_tuple = v.as_tuple()
    candidates = [
        vector_from_tuple(x)
        for x in sorted(raw)
        if not _is_rational_multiple(x, v_tuple) and within_mass(x)
    ]

    omega_re, omega_im = symbolic_exp_charge(lattice, slc)
    re_v = _symbolic_value(lattice, omega_re, v)
    im_v = _symbolic_value(lattice, omega_im, v)
    walls = []
    holes = []
    for delta in candidates:
        re_d = _symbolic_value(lattice, omega_re, delta)
        im_d = _symbolic_value(lattice, omega_im, delta)
        locus = im_d * re_v - re_d * im_v
        validity = re_d * re_v + im_d * im_v
        if not locus.is_zero():
            walls.append(Wall(delta, locus, validity))
        holes.extend(_holes_of(lattice, slc, delta))
    holes.sort(key=lambda h: (h.delta.as_tuple(), h.beta, float(h.alpha)))
    return WallSet(v, slc, mass, tuple(walls), tuple(holes))


def chamber_of(point, wall_set: WallSet, tolerance: float = 1e-10) -> tuple[int, ...]:
    """Sign vector of all wall polynomials at the point; points within
    tolerance of a wall (exactly on it, for rational input) raise
    OnWallError naming the class."""
    beta, alpha = point
    slc = wall_set.slice
    exact = not (isinstance(beta, float) or isinstance(alpha, float))
    if exact:
        beta, alpha = Fraction(beta), Fraction(alpha)
    if not (slc.beta0 <= beta <= slc.beta1 and 0 < alpha <= slc.alpha1):
        raise InputError("point lies outside the slice rectangle")
    signs = []
    for wall in wall_set.walls:
        value = wall.locus.evaluate(beta, alpha)
        if exact:
            if value == 0:
                raise OnWallError(wall.delta.as_tuple(), 0)
        if abs(float(value)) <= tolerance:
            raise OnWallError(wall.delta.as_tuple(), float(value))
        signs.append(1 if value > 0 else -1)
    return tuple(signs)
