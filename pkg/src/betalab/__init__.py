"""Numerical laboratory for critical surfaces of beta-weighted area in C^2.

The functional integrates cos^(-beta) of the Kahler angle over a surface;
its critical points interpolate between minimal surfaces (beta = 0) and
holomorphic curves (beta -> infinity).  The package evaluates the
Euler-Lagrange operator on explicit immersions, checks ellipticity of its
principal symbol, computes first and second variations by independent
routes, and solves the full rotationally symmetric family.
"""

from .config import DEFAULT_SEED, DEFAULT_TOLS, SEED_ENV_VAR, Tolerances
from .errors import (
    AsymptoticMismatch,
    BetaLabError,
    BoundViolation,
    ComplexPoint,
    DegenerateImmersion,
    EllipticityViolation,
    GridTooCoarse,
    InvalidBeta,
    LagrangianPoint,
    NoSolution,
    NotCritical,
    UsageError,
)
from .geometry_core import (
    STANDARD_J,
    ComplexStructure,
    ELResidual,
    GeometryBatch,
    Immersion,
    SurfaceGeometry,
    adapted_frame,
    el_residual,
    el_residual_batch,
    evaluate_geometry,
    evaluate_geometry_batch,
    kahler_angle,
    kahler_cosine_batch,
    kahler_gram_matrix,
    laplace_beltrami_radial,
    mean_curvature,
    validate_immersion,
)
from .rotational import (
    AsymptoticsReport,
    LimitBoundsReport,
    PdeResiduals,
    RotationalProfile,
    SweepResult,
    angle_pde_check,
    asymptotic_far,
    asymptotic_near,
    beta_sweep,
    catenoid_slope,
    limit_bounds_check,
    near_coefficients,
    profile_grid,
    profile_on_grid,
    rotational_immersion,
    solve_profile,
    solve_slope,
    validate_profile,
    verify_asymptotics,
)
from .surfaces import (
    catenoid,
    catenoid_normal,
    holomorphic_graph,
    lagrangian_plane,
    linear_graph,
    plane,
    rotational_graph,
)
from .symbol import (
    EllipticityReport,
    SymbolData,
    ellipticity_check,
    symbol_matrix,
    symbol_quadratic,
)
from .variation import (
    Bump1D,
    QuadratureSpec,
    VariationField,
    VariationReport,
    analytic_normal_bump,
    constant_bump,
    deformed_immersion,
    field_c1_norm,
    first_variation_fd,
    first_variation_formula,
    first_variation_prestokes,
    functional,
    j_companion_field,
    normal_bump,
    random_normal_fields,
    second_variation_fd,
    second_variation_formula,
    second_variation_mixed,
    second_variation_pair,
    tangent_bump,
    validate_field,
    variation_report,
)

__version__ = "0.1.0"

__all__ = [
    "STANDARD_J",
    "DEFAULT_SEED",
    "DEFAULT_TOLS",
    "SEED_ENV_VAR",
    "Tolerances",
    "BetaLabError",
    "UsageError",
    "DegenerateImmersion",
    "LagrangianPoint",
    "ComplexPoint",
    "NotCritical",
    "NoSolution",
    "InvalidBeta",
    "GridTooCoarse",
    "AsymptoticMismatch",
    "BoundViolation",
    "EllipticityViolation",
    "ComplexStructure",
    "Immersion",
    "GeometryBatch",
    "SurfaceGeometry",
    "ELResidual",
    "kahler_gram_matrix",
    "validate_immersion",
    "evaluate_geometry",
    "evaluate_geometry_batch",
    "kahler_cosine_batch",
    "kahler_angle",
    "mean_curvature",
    "el_residual",
    "el_residual_batch",
    "adapted_frame",
    "laplace_beltrami_radial",
    "plane",
    "linear_graph",
    "lagrangian_plane",
    "holomorphic_graph",
    "rotational_graph",
    "catenoid",
    "catenoid_normal",
    "SymbolData",
    "EllipticityReport",
    "symbol_quadratic",
    "symbol_matrix",
    "ellipticity_check",
    "QuadratureSpec",
    "Bump1D",
    "VariationField",
    "VariationReport",
    "constant_bump",
    "normal_bump",
    "tangent_bump",
    "analytic_normal_bump",
    "random_normal_fields",
    "j_companion_field",
    "deformed_immersion",
    "validate_field",
    "field_c1_norm",
    "functional",
    "first_variation_formula",
    "first_variation_prestokes",
    "first_variation_fd",
    "second_variation_formula",
    "second_variation_mixed",
    "second_variation_pair",
    "second_variation_fd",
    "variation_report",
    "RotationalProfile",
    "AsymptoticsReport",
    "PdeResiduals",
    "LimitBoundsReport",
    "SweepResult",
    "solve_slope",
    "catenoid_slope",
    "profile_grid",
    "profile_on_grid",
    "solve_profile",
    "validate_profile",
    "rotational_immersion",
    "asymptotic_far",
    "asymptotic_near",
    "near_coefficients",
    "verify_asymptotics",
    "angle_pde_check",
    "limit_bounds_check",
    "beta_sweep",
]
