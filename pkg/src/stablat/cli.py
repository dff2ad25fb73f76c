"""Command-line entry point.

Rationals are written p/q (plain integers allowed); decimal notation
needs --approx, which reads numbers by their decimal value.  Outputs
are line-oriented text on stdout, with optional JSON (--json), CSV
(--out) and SVG (--svg) files.  Runs are deterministic: identical
inputs give byte-identical CSV and JSON, and SVG floats are formatted
to 12 significant digits.

Exit codes: 0 on success, 1 when a check fails (invalid data, heart or
admissibility violations, a point on a wall, a determinacy witness) or
a computation reports an inconsistency, 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import sys

from .charge import charge_norm_inf, exp_params, heart_contains, standard_charge
from .config import (
    admissibility_report,
    dump_report,
    interval_report,
    load_datum,
    load_lattice,
    load_sheaf_datum,
    load_stability,
    parse_rational,
    parse_rational_vector,
    rational_str,
    validation_report_json,
    vectors_report,
    wallset_report,
    witness_report,
)
from .enumeration import (
    Poly2,
    WallSet,
    chamber_of,
    enumerate_spherical,
    enumerate_spherical_box,
    hole_classes,
    standard_admissible,
    wall_slice,
    walls_for_class,
)
from .errors import InconsistencyError, InputError, StablatError
from .lattice import AmpleData, MukaiLattice, RigidityClass, vector_from_tuple
from .linalg import symmetric_inertia
from .sim import (
    check_fS_gap,
    dS_distance,
    d_distance,
    fS_distance,
    f_distance,
    propagate_phase_constraints,
    validate_datum,
    validate_stability,
    verify_spherical_determinacy,
)

SVG_STEPS = 256
SVG_WIDTH = 640
SVG_HEIGHT = 480


def reference_lattice() -> MukaiLattice:
    """Rank-one lattice with intersection form (2) and ample class (1),
    the default when no --lattice file is given."""
    return MukaiLattice(1, ((2,),), AmpleData((1,)))


def _lattice(args) -> MukaiLattice:
    if args.lattice is None:
        return reference_lattice()
    return load_lattice(args.lattice)


def _exp_params(lattice, args):
    approx = getattr(args, "approx", False)
    b = parse_rational_vector(args.B, approx)
    omega = parse_rational_vector(args.omega, approx)
    if len(b) != lattice.ns_rank or len(omega) != lattice.ns_rank:
        raise InputError(
            f"--B and --omega need {lattice.ns_rank} comma-separated rationals"
        )
    return exp_params(b, omega)


def _emit(args, lines, report) -> None:
    for line in lines:
        print(line)
    if getattr(args, "json", None):
        with open(args.json, "w", newline="") as handle:
            handle.write(dump_report(report))


def _vector_lines(vectors) -> list[str]:
    return [" ".join(str(x) for x in v.as_tuple()) for v in vectors]


def cmd_lattice_info(args) -> int:
    lattice = _lattice(args)
    signature = symmetric_inertia(lattice.pairing_matrix())
    lines = [
        f"ns_rank: {lattice.ns_rank}",
        f"ns_gram: {[list(row) for row in lattice.ns_gram]}",
        f"ample: {list(lattice.ample.h)}",
        f"dim: {lattice.dim}",
        f"pairing signature: ({signature[0]}, {signature[1]})",
    ]
    report = {
        "ns_rank": lattice.ns_rank,
        "ns_gram": [list(row) for row in lattice.ns_gram],
        "ample": list(lattice.ample.h),
        "dim": lattice.dim,
        "pairing_signature": [signature[0], signature[1]],
    }
    _emit(args, lines, report)
    return 0


def cmd_enumerate(args) -> int:
    lattice = _lattice(args)
    params = _exp_params(lattice, args)
    mass = parse_rational(args.mass_bound, getattr(args, "approx", False))
    z = standard_charge(lattice, params)
    vectors = enumerate_spherical(lattice, z, mass)
    lines = [f"spherical classes with mass <= {rational_str(mass)}: {len(vectors)}"]
    lines.extend(_vector_lines(vectors))
    if args.oracle:
        box = enumerate_spherical_box(lattice, z, mass)
        if box != vectors:
            raise InconsistencyError(
                f"enumeration mismatch: walk found {len(vectors)} classes, "
                f"box scan found {len(box)}"
            )
        lines.append(f"oracle agreement: {len(box)} classes")
    report = vectors_report(vectors)
    report["mass_bound"] = rational_str(mass)
    _emit(args, lines, report)
    return 0


def cmd_admissible(args) -> int:
    lattice = _lattice(args)
    params = _exp_params(lattice, args)
    mass = parse_rational(args.mass_bound, getattr(args, "approx", False))
    report = standard_admissible(lattice, params, mass)
    verdict = "yes" if report.sufficient else "no"
    lines = [
        f"omega^2 = {rational_str(report.omega_sq)} -> sufficient: {verdict}",
        f"violations: {len(report.violations)}",
    ]
    for delta, re, im in report.violations:
        z_text = rational_str(re) if im == 0 else f"{rational_str(re)}+{rational_str(im)}i"
        lines.append(
            " ".join(str(x) for x in delta.as_tuple()) + f"  Z = {z_text}"
        )
    _emit(args, lines, admissibility_report(report))
    return 1 if report.violations else 0


def cmd_holes(args) -> int:
    lattice = _lattice(args)
    params = _exp_params(lattice, args)
    z = standard_charge(lattice, params)
    vectors = hole_classes(lattice, z)
    lines = [f"hole classes: {len(vectors)}"]
    lines.extend(_vector_lines(vectors))
    _emit(args, lines, vectors_report(vectors))
    return 0


def cmd_heart_test(args) -> int:
    lattice = _lattice(args)
    params = _exp_params(lattice, args)
    datum = load_sheaf_datum(args.datum, getattr(args, "approx", False))
    contained = heart_contains(lattice, params, datum)
    b_omega = lattice.ns_product(params.b, params.omega)
    lines = [
        f"B.omega = {rational_str(b_omega)}",
        f"contained: {'yes' if contained else 'no'}",
    ]
    report = {"b_omega": rational_str(b_omega), "contained": contained}
    _emit(args, lines, report)
    return 0 if contained else 1


def _poly_text(poly: Poly2) -> str:
    if poly.is_zero():
        return "0"
    terms = []
    for (i, j), coeff in poly.items():
        monomial = "".join(
            (f"*b^{i}" if i > 1 else "*b" if i == 1 else "",
             f"*a^{j}" if j > 1 else "*a" if j == 1 else "")
        )
        terms.append(f"{rational_str(coeff)}{monomial}")
    return " + ".join(terms)


def _poly_grid(poly: Poly2, betas: list[float], alphas: list[float]) -> list[list[float]]:
    """Values on the alpha x beta grid, one row per alpha."""
    items = [((i, j), float(c)) for (i, j), c in poly.items()]
    deg_b = max((i for (i, _), _ in items), default=0)
    rows = []
    for alpha in alphas:
        by_beta = [0.0] * (deg_b + 1)
        for (i, j), c in items:
            by_beta[i] += c * alpha**j
        if deg_b == 0:
            c0 = by_beta[0]
            rows.append([c0] * len(betas))
        elif deg_b == 1:
            c0, c1 = by_beta
            rows.append([c0 + c1 * beta for beta in betas])
        elif deg_b == 2:
            c0, c1, c2 = by_beta
            rows.append([(c2 * beta + c1) * beta + c0 for beta in betas])
        else:
            row = []
            for beta in betas:
                acc = 0.0
                for coeff in reversed(by_beta):
                    acc = acc * beta + coeff
                row.append(acc)
            rows.append(row)
    return rows


def _march_segments(wall, slc, steps: int):
    """Zero-crossing segments of the wall locus on the slice rectangle,
    filtered to where the validity form is positive at the segment
    midpoint.  Plain marching squares with linear interpolation."""
    b0, b1, a1 = float(slc.beta0), float(slc.beta1), float(slc.alpha1)
    betas = [b0 + (b1 - b0) * i / steps for i in range(steps + 1)]
    alphas = [a1 * j / steps for j in range(1, steps + 1)]
    grid = _poly_grid(wall.locus, betas, alphas)

    def sign(value: float) -> int:
        return 1 if value >= 0 else -1

    signs = [[v >= 0.0 for v in row] for row in grid]
    segments = []
    for row in range(len(alphas) - 1):
        lo_vals, hi_vals = grid[row], grid[row + 1]
        lo_sign, hi_sign = signs[row], signs[row + 1]
        for col in range(len(betas) - 1):
            if lo_sign[col] is lo_sign[col + 1] is hi_sign[col] is hi_sign[col + 1]:
                continue
            corners = [
                (lo_vals[col], betas[col], alphas[row]),
                (lo_vals[col + 1], betas[col + 1], alphas[row]),
                (hi_vals[col + 1], betas[col + 1], alphas[row + 1]),
                (hi_vals[col], betas[col], alphas[row + 1]),
            ]
            crossings = []
            for idx in range(4):
                va, xa, ya = corners[idx]
                vb, xb, yb = corners[(idx + 1) % 4]
                if sign(va) == sign(vb):
                    continue
                t = va / (va - vb)
                crossings.append((xa + t * (xb - xa), ya + t * (yb - ya)))
            for start, end in zip(crossings[0::2], crossings[1::2]):
                mid_b = (start[0] + end[0]) / 2
                mid_a = (start[1] + end[1]) / 2
                if wall.validity.evaluate(mid_b, mid_a) > 0:
                    segments.append((start, end))
    return segments


def _fmt(value: float) -> str:
    return format(float(value), ".12g")


def _render_svg(wall_set: WallSet, segment_map) -> str:
    slc = wall_set.slice
    b0, b1, a1 = float(slc.beta0), float(slc.beta1), float(slc.alpha1)

    def to_x(beta: float) -> float:
        return (beta - b0) / (b1 - b0) * SVG_WIDTH

    def to_y(alpha: float) -> float:
        return (1.0 - alpha / a1) * SVG_HEIGHT

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" '
        f'viewBox="0 0 {SVG_WIDTH} {SVG_HEIGHT}">',
        f'<rect x="0" y="0" width="{SVG_WIDTH}" height="{SVG_HEIGHT}" '
        f'fill="none" stroke="#888"/>',
    ]
    for wall in wall_set.walls:
        segments = segment_map.get(wall.delta.as_tuple(), [])
        if not segments:
            continue
        path = " ".join(
            f"M {_fmt(to_x(x1))} {_fmt(to_y(y1))} "
            f"L {_fmt(to_x(x2))} {_fmt(to_y(y2))}"
            for (x1, y1), (x2, y2) in segments
        )
        parts.append(f'<path d="{path}" fill="none" stroke="#223" stroke-width="1"/>')
    for hole in wall_set.holes:
        parts.append(
            f'<circle cx="{_fmt(to_x(float(hole.beta)))}" '
            f'cy="{_fmt(to_y(float(hole.alpha)))}" r="3" fill="#c33"/>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _walls_csv(wall_set: WallSet, segment_map) -> str:
    rho = len(wall_set.klass.c)
    header = (
        ["r"]
        + [f"c{i + 1}" for i in range(rho)]
        + ["s", "locus", "validity", "alpha_min", "alpha_max"]
    )
    rows = [",".join(header)]
    for wall in wall_set.walls:
        segments = segment_map.get(wall.delta.as_tuple(), [])
        alpha_values = [y for seg in segments for (_, y) in seg]
        alpha_min = _fmt(min(alpha_values)) if alpha_values else ""
        alpha_max = _fmt(max(alpha_values)) if alpha_values else ""
        fields = [str(x) for x in wall.delta.as_tuple()]
        fields.append('"' + _poly_text(wall.locus) + '"')
        fields.append('"' + _poly_text(wall.validity) + '"')
        fields.extend([alpha_min, alpha_max])
        rows.append(",".join(fields))
    return "\n".join(rows) + "\n"


def _wall_system(args):
    lattice = _lattice(args)
    components = [x.strip() for x in args.klass.split(",")]
    if len(components) != lattice.dim:
        raise InputError(f"--class needs {lattice.dim} integer components")
    try:
        v = vector_from_tuple([int(x) for x in components])
    except ValueError:
        raise InputError("--class components must be integers") from None
    approx = getattr(args, "approx", False)
    parts = parse_rational_vector(args.slice, approx)
    if len(parts) != 3:
        raise InputError("--slice is beta0,beta1,alpha1")
    slc = wall_slice(lattice, *parts)
    mass = parse_rational(args.mass_bound, approx)
    floor = (
        parse_rational(args.alpha_floor, approx)
        if args.alpha_floor is not None
        else None
    )
    return lattice, walls_for_class(
        lattice, v, slc, mass, grid=args.grid, alpha_floor=floor
    )


def cmd_walls(args) -> int:
    _, wall_set = _wall_system(args)
    segment_map = {
        wall.delta.as_tuple(): _march_segments(wall, wall_set.slice, SVG_STEPS)
        for wall in wall_set.walls
    }
    lines = [f"walls: {len(wall_set.walls)}, holes: {len(wall_set.holes)}"]
    for wall in wall_set.walls:
        delta = " ".join(str(x) for x in wall.delta.as_tuple())
        lines.append(f"wall {delta}: {_poly_text(wall.locus)} = 0")
    for hole in wall_set.holes:
        delta = " ".join(str(x) for x in hole.delta.as_tuple())
        alpha = rational_str(hole.alpha) if hole.exact else _fmt(hole.alpha)
        lines.append(
            f"hole {delta}: beta = {rational_str(hole.beta)}, alpha = {alpha}"
            + ("" if hole.kind == "point" else f" ({hole.kind})")
        )
    if args.out:
        with open(args.out, "w", newline="") as handle:
            handle.write(_walls_csv(wall_set, segment_map))
    if args.svg:
        with open(args.svg, "w", newline="") as handle:
            handle.write(_render_svg(wall_set, segment_map))
    _emit(args, lines, wallset_report(wall_set))
    return 0


def cmd_chamber(args) -> int:
    _, wall_set = _wall_system(args)
    point = parse_rational_vector(args.point, getattr(args, "approx", False))
    if len(point) != 2:
        raise InputError("--point is beta,alpha")
    signs = chamber_of(point, wall_set, tolerance=args.tolerance)
    lines = [
        f"point: ({rational_str(point[0])}, {rational_str(point[1])})",
        "chamber: " + (" ".join(str(s) for s in signs) if signs else "(no walls)"),
    ]
    report = {
        "point": [rational_str(point[0]), rational_str(point[1])],
        "signs": list(signs),
        "walls": [list(w.delta.as_tuple()) for w in wall_set.walls],
    }
    _emit(args, lines, report)
    return 0


def _violation_lines(report) -> list[str]:
    lines = []
    for violation in report.violations:
        subject = ",".join(str(x) for x in violation.subject)
        lines.append(f"  {violation.rule}[{subject}]: {violation.message}")
    return lines


def cmd_sim_validate(args) -> int:
    datum = load_datum(args.datum)
    report = validate_datum(datum)
    lines = [f"datum: {'ok' if report.ok else 'INVALID'}"]
    lines.extend(_violation_lines(report))
    payload = {"datum": validation_report_json(report)}
    ok = report.ok
    if args.sigma and not report.ok:
        lines.append("stability: skipped until the datum is valid")
        payload["stability"] = None
    elif args.sigma:
        sigma = load_stability(datum, args.sigma, getattr(args, "approx", False))
        sigma_report = validate_stability(datum, sigma)
        lines.append(f"stability: {'ok' if sigma_report.ok else 'INVALID'}")
        lines.extend(_violation_lines(sigma_report))
        payload["stability"] = validation_report_json(sigma_report)
        ok = ok and sigma_report.ok
    _emit(args, lines, payload)
    return 0 if ok else 1


def cmd_sim_metrics(args) -> int:
    approx = getattr(args, "approx", False)
    datum = load_datum(args.datum)
    first = load_stability(datum, args.sigma, approx)
    second = load_stability(datum, args.sigma_prime, approx)
    for sigma in (first, second):
        report = validate_stability(datum, sigma)
        if not report.ok:
            raise InputError(
                f"stability file is invalid: {report.violations[0].message}"
            )
    values = {
        "f": f_distance(datum, first, second),
        "fS": fS_distance(datum, first, second),
        "d": d_distance(datum, first, second),
        "dS": dS_distance(datum, first, second),
        "charge_norm": charge_norm_inf(datum.lattice, first.charge, second.charge),
    }
    lines = [f"{name} = {_fmt(value)}" for name, value in values.items()]
    _emit(args, lines, values)
    return 0


def cmd_sim_propagate(args) -> int:
    datum = load_datum(args.datum)
    sigma = load_stability(datum, args.sigma, getattr(args, "approx", False))
    spherical = {
        i: sigma.phases[i] for i in datum.indices_of(RigidityClass.SPHERICAL)
    }
    try:
        target = int(args.target)
    except ValueError:
        target = args.target
    interval = propagate_phase_constraints(datum, spherical, sigma.charge, target)
    lines = [f"interval: ({_fmt(interval.lower)}, {_fmt(interval.upper)})"]
    if interval.forced_value is not None:
        lines.append(f"forced: {_fmt(interval.forced_value)}")
    else:
        lines.append("forced: none")
    _emit(args, lines, interval_report(interval))
    return 0


def cmd_sim_determinacy(args) -> int:
    approx = getattr(args, "approx", False)
    datum = load_datum(args.datum)
    first = load_stability(datum, args.sigma, approx)
    second = load_stability(datum, args.sigma_prime, approx)
    witness = verify_spherical_determinacy(datum, first, second)
    gap = check_fS_gap(datum, first, second)
    fs = fS_distance(datum, first, second)
    lines = [f"fS = {_fmt(fs)}"]
    if witness is None:
        lines.append("determinacy: ok")
    else:
        lines.append(
            f"determinacy: witness {witness.name} "
            f"({_fmt(witness.phases[0])} vs {_fmt(witness.phases[1])})"
        )
    if gap is None:
        lines.append("gap: ok")
    else:
        lines.append(f"gap: witness {gap.name}")
    report = {
        "fS": fs,
        "determinacy": witness_report(witness),
        "gap": witness_report(gap),
    }
    _emit(args, lines, report)
    return 0 if witness is None and gap is None else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stablat",
        description="Exact lattice computations for stability conditions "
        "on K3 categories, plus a finite slicing simulator.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    def lattice_arg(p):
        p.add_argument(
            "--lattice",
            metavar="FILE",
            default=None,
            help="lattice TOML; default is the rank-one form (2) with ample (1)",
        )

    def common(p, json_out=True):
        p.add_argument(
            "--approx",
            action="store_true",
            help="accept decimal numbers (read by decimal value); "
            "default accepts only p/q",
        )
        if json_out:
            p.add_argument("--json", metavar="FILE", help="write a JSON report")

    p = sub.add_parser("lattice-info", help="show lattice facts")
    lattice_arg(p)
    common(p)
    p.set_defaults(func=cmd_lattice_info)

    p = sub.add_parser("enumerate", help="spherical classes of bounded mass")
    lattice_arg(p)
    p.add_argument("--B", required=True, help="B-field coefficients, comma-separated")
    p.add_argument("--omega", required=True, help="Kaehler coefficients")
    p.add_argument("--mass-bound", required=True, help="mass bound M")
    p.add_argument(
        "--oracle",
        action="store_true",
        help="cross-check against the brute-force box scan",
    )
    common(p)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("admissible", help="test the class-level heart conditions")
    lattice_arg(p)
    p.add_argument("--B", required=True)
    p.add_argument("--omega", required=True)
    p.add_argument("--mass-bound", required=True)
    common(p)
    p.set_defaults(func=cmd_admissible)

    p = sub.add_parser("holes", help="spherical classes killed by the charge")
    lattice_arg(p)
    p.add_argument("--B", required=True)
    p.add_argument("--omega", required=True)
    common(p)
    p.set_defaults(func=cmd_holes)

    p = sub.add_parser("heart-test", help="membership of a two-term complex")
    lattice_arg(p)
    p.add_argument("--B", required=True)
    p.add_argument("--omega", required=True)
    p.add_argument("--datum", required=True, metavar="FILE", help="sheaf slope TOML")
    common(p)
    p.set_defaults(func=cmd_heart_test)

    def wall_args(p):
        lattice_arg(p)
        p.add_argument(
            "--class", dest="klass", required=True, help="class r,c...,s (integers)"
        )
        p.add_argument("--slice", required=True, help="beta0,beta1,alpha1")
        p.add_argument("--mass-bound", required=True)
        p.add_argument(
            "--grid",
            type=int,
            default=8,
            help="per-axis sample count for the candidate search (default 8)",
        )
        p.add_argument(
            "--alpha-floor",
            dest="alpha_floor",
            help="smallest alpha sampled by the candidate search "
            "(default alpha1/4; walls pile up as alpha -> 0)",
        )

    p = sub.add_parser("walls", help="potential walls and holes on a slice")
    wall_args(p)
    p.add_argument("--out", metavar="FILE", help="write walls as CSV")
    p.add_argument("--svg", metavar="FILE", help="render the slice as SVG")
    common(p)
    p.set_defaults(func=cmd_walls)

    p = sub.add_parser("chamber", help="sign vector of a point in the wall system")
    wall_args(p)
    p.add_argument("--point", required=True, help="beta,alpha")
    p.add_argument(
        "--tolerance",
        type=float,
        default=1e-10,
        help="distance treated as lying on a wall (default 1e-10)",
    )
    common(p)
    p.set_defaults(func=cmd_chamber)

    p = sub.add_parser("sim-validate", help="check a simulator datum (and stability)")
    p.add_argument("--datum", required=True, metavar="FILE")
    p.add_argument("--sigma", metavar="FILE", help="also validate this stability")
    common(p)
    p.set_defaults(func=cmd_sim_validate)

    p = sub.add_parser("sim-metrics", help="slicing and charge distances")
    p.add_argument("--datum", required=True, metavar="FILE")
    p.add_argument("--sigma", required=True, metavar="FILE")
    p.add_argument("--sigma-prime", required=True, metavar="FILE")
    common(p)
    p.set_defaults(func=cmd_sim_metrics)

    p = sub.add_parser("sim-propagate", help="phase interval forced on an atom")
    p.add_argument("--datum", required=True, metavar="FILE")
    p.add_argument("--sigma", required=True, metavar="FILE")
    p.add_argument("--target", required=True, help="semirigid atom name or index")
    common(p)
    p.set_defaults(func=cmd_sim_propagate)

    p = sub.add_parser(
        "sim-determinacy", help="spherical determinacy and the gap check"
    )
    p.add_argument("--datum", required=True, metavar="FILE")
    p.add_argument("--sigma", required=True, metavar="FILE")
    p.add_argument("--sigma-prime", required=True, metavar="FILE")
    common(p)
    p.set_defaults(func=cmd_sim_determinacy)

    return parser


# options whose values may start with a minus sign (vectors, rationals);
# argparse reads a bare "-2,2,3" as an option name, so the value is glued
# to its flag with "=" before parsing
_SIGNED_VALUE_FLAGS = frozenset(
    {"--B", "--omega", "--class", "--slice", "--point", "--mass-bound", "--alpha-floor"}
)


def _glue_signed_values(argv: list[str]) -> list[str]:
    out = []
    i = 0
    while i < len(argv):
        token = argv[i]
        following = argv[i + 1] if i + 1 < len(argv) else None
        if (
            token in _SIGNED_VALUE_FLAGS
            and following is not None
            and len(following) > 1
            and following[0] == "-"
            and following[1].isdigit()
        ):
            out.append(f"{token}={following}")
            i += 2
        else:
            out.append(token)
            i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    if argv is None:
        argv = sys.argv[1:]
    try:
        args = parser.parse_args(_glue_signed_values(list(argv)))
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except StablatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
