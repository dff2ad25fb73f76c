"""Exact lattice computations for stability conditions on K3 categories.

Four layers: the integral Mukai lattice with its pairing, reflections,
and twist action (`lattice`); exact central charges, hearts, and the
lifted GL+(2,R) action (`charge`); certified enumeration of spherical
classes with wall/hole geometry on two-parameter slices
(`enumeration`); and a finite simulator of stability data on spherical
collections (`sim`).  Everything user-facing is re-exported here.
"""

from .charge import (
    GL2_TOLERANCE,
    CentralCharge,
    ExpParams,
    Gl2Element,
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
)
from .config import (
    load_datum,
    load_lattice,
    load_sheaf_datum,
    load_stability,
    parse_rational,
    parse_rational_vector,
    rational_str,
)
from .enumeration import (
    AdmissibilityReport,
    Hole,
    Poly2,
    PositivitySplit,
    Wall,
    WallSet,
    WallSlice,
    chamber_of,
    enumerate_spherical,
    enumerate_spherical_box,
    hole_classes,
    positivity_split,
    standard_admissible,
    thread_cap,
    wall_slice,
    walls_for_class,
)
from .errors import (
    HoleClassError,
    InconsistencyError,
    InputError,
    OnWallError,
    OrthogonalPlanesError,
    PreconditionError,
    StablatError,
)
from .lattice import (
    AmpleData,
    MukaiLattice,
    MukaiVector,
    RigidityClass,
    classify_rigidity,
    mukai_pairing,
    mukai_vector_of_sheaf,
    reflect,
    self_square,
    shift_class,
    tensor_exp,
    vector_from_tuple,
)
from .shortvec import enumerate_short_vectors, quadratic_value
from .sim import (
    HOM_DEGREE_MAX,
    HOM_DEGREE_MIN,
    RAY_TOLERANCE,
    Atom,
    FilteredObject,
    HNDecomposition,
    HNGroup,
    PhaseInterval,
    RegisteredObject,
    SphericalCollectionDatum,
    ToyStability,
    ValidationReport,
    Violation,
    Witness,
    apply_gl2,
    check_equivalent_conditions,
    check_fS_gap,
    dS_distance,
    d_distance,
    fS_distance,
    f_distance,
    filtered_object,
    hn_decompose,
    iter_universe,
    make_datum,
    make_stability,
    object_class,
    phase_bounds,
    propagate_phase_constraints,
    spherical_objects,
    spherically_generated,
    sup_phase_distance,
    validate_datum,
    validate_stability,
    verify_spherical_determinacy,
)

__version__ = "0.1.0"
