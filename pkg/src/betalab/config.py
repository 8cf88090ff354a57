"""Tolerances and defaults used throughout the package.

Every threshold that a check asserts against lives here so reports can quote
the tolerance they actually used.  Instances are immutable; use `replace`
(dataclasses.replace) or `Tolerances.with_overrides` for adjusted copies.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

DEFAULT_SEED = 42
SEED_ENV_VAR = "BETA_LAB_SEED"


@dataclass(frozen=True)
class Tolerances:
    # geometry
    degenerate_det: float = 1e-14          # det g below this is degenerate
    lagrangian_cos: float = 1e-12          # cos(alpha) at/below this flags a Lagrangian point
    complex_sin: float = 1e-10             # sin(alpha) at/below this blocks the adapted rotation
    frame_orthonormal: float = 1e-12
    normal_seed_min: float = 1e-6          # seed projection norm below this triggers the fallback seed
    residual_two_forms_rel: float = 1e-9   # cubic form vs cos(alpha) * reduced form
    mean_curvature_rel: float = 1e-10      # generic route vs profile-family closed form
    adapted_identity: float = 1e-7         # |H - beta tan^2(alpha) V| on solved profiles
    fd_step: float = 1e-5                  # base step for gradients of cos(alpha)

    # symbol
    symbol_factor_rel: float = 1e-12       # brute-force det vs factored det
    ellipticity_neg: float = -1e-9         # det below this raises EllipticityViolation
    ellipticity_margin: float = -1e-12     # det below this counts as a violation in reports

    # rotational family
    slope_bisect: float = 1e-13            # bisection width on log-slope before Newton polish
    first_integral_rel: float = 1e-10
    closure_abs: float = 1e-8              # |EL residual| on solved profiles
    pde_residual: float = 1e-5             # angle identities at 4097 nodes on [1, 10]
    pde_ratio: float = 3.5                 # residual contraction under grid doubling
    far_window: float = 0.01               # |E_far| at the largest node, beta <= 5
    near_rel: float = 1e-3                 # relative error of the 2-term near expansion at r = 1e-2
    decrease_floor: float = 1e-9           # treat |E| below this as converged when testing decrease

    # variation
    first_variation_abs: float = 1e-6
    first_variation_rel: float = 1e-4      # vs the FD value when it dominates
    criticality_gate: float = 1e-7         # max |EL residual| before trusting second-variation formulas
    second_variation_rel: float = 1e-3     # direct formula vs FD
    pair_identity_rel: float = 1e-6
    bilinear_symmetry: float = 1e-8
    support_vanish: float = 1e-14          # field and first partials on the support boundary

    def with_overrides(self, **kv: float) -> "Tolerances":
        unknown = set(kv) - {f.name for f in dataclasses.fields(self)}
        if unknown:
            raise KeyError(f"unknown tolerance name(s): {sorted(unknown)}")
        return dataclasses.replace(self, **kv)


DEFAULT_TOLS = Tolerances()
