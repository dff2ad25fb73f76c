"""Independent brute-force reference implementations for the tests.

Everything here is written from the definitions with its own arithmetic
(own pairing, own Gaussian inverse, own box scan) so that agreement with
the package is evidence, not circularity.  Fractions everywhere; no
calls into stablat.
"""

from fractions import Fraction
from itertools import product
from math import isqrt


def oracle_pairing_matrix(gram):
    """Matrix of <(r, c, s), (r', c', s')> = c^T G c' - r s' - s r' in the
    coordinate order (r, c_1..c_rho, s)."""
    rho = len(gram)
    dim = rho + 2
    m = [[Fraction(0)] * dim for _ in range(dim)]
    for i in range(rho):
        for j in range(rho):
            m[1 + i][1 + j] = Fraction(gram[i][j])
    m[0][dim - 1] = Fraction(-1)
    m[dim - 1][0] = Fraction(-1)
    return m


def oracle_pair(gram, x, y):
    m = oracle_pairing_matrix(gram)
    return sum(
        Fraction(x[i]) * m[i][j] * Fraction(y[j])
        for i in range(len(m))
        for j in range(len(m))
    )


def oracle_inverse(m):
    """Gauss-Jordan inverse over Fractions."""
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(m)]
    for col in range(n):
        pivot = next(r for r in range(col, n) if a[r][col] != 0)
        a[col], a[pivot] = a[pivot], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                factor = a[r][col]
                a[r] = [x - factor * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def oracle_charge_rows(gram, b, omega):
    """(Omega_re, Omega_im) of Z = <exp(B + i omega), .> as coordinate
    vectors (r, c, s)."""
    rho = len(gram)

    def ns(u, v):
        return sum(
            Fraction(u[i]) * gram[i][j] * Fraction(v[j])
            for i in range(rho)
            for j in range(rho)
        )

    re = (Fraction(1), *map(Fraction, b), Fraction(ns(b, b) - ns(omega, omega), 2))
    im = (Fraction(0), *map(Fraction, omega), ns(b, omega))
    return re, im


def oracle_mass_squared(gram, b, omega, x):
    """|Z(x)|^2 for the exponential charge, exact."""
    re_row, im_row = oracle_charge_rows(gram, b, omega)
    re = oracle_pair(gram, re_row, x)
    im = oracle_pair(gram, im_row, x)
    return re * re + im * im


def oracle_box_spherical(gram, b, omega, mass_bound):
    """All delta with delta^2 = -2 and |Z(delta)| <= mass_bound, by
    scanning the integer box around the positive-definite ball.

    The ball: Q(x) = 2 x_P^2 - x^2 where x_P is the projection onto the
    plane spanned by (Omega_re, Omega_im); on delta^2 = -2 and mass <= M
    it satisfies Q <= 2 (1 + C M^2) with C = tr(P) / det(P) for the
    plane Gram P.  Box radii come from the diagonal of Q^{-1}.
    """
    mass = Fraction(mass_bound)
    rho = len(gram)
    dim = rho + 2
    m = oracle_pairing_matrix(gram)
    re_row, im_row = oracle_charge_rows(gram, b, omega)
    f_re = [sum(m[i][j] * re_row[j] for j in range(dim)) for i in range(dim)]
    f_im = [sum(m[i][j] * im_row[j] for j in range(dim)) for i in range(dim)]
    p = [
        [oracle_pair(gram, re_row, re_row), oracle_pair(gram, re_row, im_row)],
        [oracle_pair(gram, im_row, re_row), oracle_pair(gram, im_row, im_row)],
    ]
    p_inv = oracle_inverse(p)
    rows = [f_re, f_im]
    q = [
        [
            2
            * sum(
                p_inv[a][bb] * rows[a][i] * rows[bb][j]
                for a in range(2)
                for bb in range(2)
            )
            - m[i][j]
            for j in range(dim)
        ]
        for i in range(dim)
    ]
    c = (p[0][0] + p[1][1]) / (p[0][0] * p[1][1] - p[0][1] * p[1][0])
    bound = 2 * (1 + c * mass * mass)
    q_inv = oracle_inverse(q)
    radii = [
        isqrt((bound * q_inv[i][i]).numerator // (bound * q_inv[i][i]).denominator)
        + 1
        for i in range(dim)
    ]
    found = []
    for x in product(*(range(-r, r + 1) for r in radii)):
        if not any(x):
            continue
        if oracle_pair(gram, x, x) != -2:
            continue
        re = sum(a * v for a, v in zip(f_re, x))
        im = sum(a * v for a, v in zip(f_im, x))
        if re * re + im * im <= mass * mass:
            found.append(x)
    found.sort()
    return found


def oracle_reflect(gram, v, delta):
    """s_delta(v) = v + <v, delta> delta componentwise."""
    factor = oracle_pair(gram, v, delta)
    return tuple(Fraction(a) + factor * Fraction(d) for a, d in zip(v, delta))


def oracle_tensor_exp(gram, v, ell):
    """v . exp(ell) written out: (r, c + r ell, s + c.ell + r ell^2/2)."""
    rho = len(gram)

    def ns(u, w):
        return sum(
            Fraction(u[i]) * gram[i][j] * Fraction(w[j])
            for i in range(rho)
            for j in range(rho)
        )

    r, c, s = v[0], v[1:-1], v[-1]
    new_c = tuple(Fraction(a) + r * Fraction(e) for a, e in zip(c, ell))
    new_s = Fraction(s) + ns(c, ell) + r * ns(ell, ell) / 2
    return (Fraction(r), *new_c, new_s)
