"""Principal symbol of the linearized critical-surface operator.

For a normal perturbation direction G of the immersion, the top-order part of
the linearization acts on the frequency covector xi = (xi1, xi2) through a
2x2 symmetric coefficient matrix O.  Its determinant factors as

    det O = cos^2(alpha) |G_perp|^2 [cos^2(alpha) |G_perp|^2
            + beta (jg1^2 + jg2^2)],

with jg_i = <G_perp, J t_i>, so det O >= 0 for beta >= 0 and vanishes only
where G_perp = 0 or at a Lagrangian point: the system is elliptic modulo
tangential reparametrisation.  All quantities live in the orthonormalized
frame of a SurfaceGeometry.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_SEED, DEFAULT_TOLS, Tolerances
from .geometry_core import SurfaceGeometry
from .errors import EllipticityViolation


@dataclass(frozen=True)
class SymbolData:
    """Coefficient matrix of the principal symbol and its determinant routes."""

    O: np.ndarray
    det_direct: float
    det_factored: float
    g_perp_norm2: float
    jg1: float
    jg2: float


def _split(geo: SurfaceGeometry, G: np.ndarray):
    G = np.asarray(G, dtype=float)
    t1, t2 = geo.t1, geo.t2
    G_perp = G - np.dot(G, t1) * t1 - np.dot(G, t2) * t2
    return G, G_perp, t1, t2


def symbol_quadratic(
    geo: SurfaceGeometry, G: np.ndarray, xi: tuple[float, float], *, beta: float | None = None
) -> float:
    """<sigma(x, xi) G, G> as the explicit quadratic in xi.

    This is the raw second-order coefficient collection, before regrouping
    into the matrix form; `symbol_matrix` must reproduce it via xi^T O xi.
    """
    beta = geo.beta if beta is None else beta
    G, G_perp, t1, t2 = _split(geo, G)
    J = geo.J
    Jt1, Jt2 = J @ t1, J @ t2
    cos = geo.cos_alpha
    xi1, xi2 = float(xi[0]), float(xi[1])

    jg1_perp = float(np.dot(Jt1, G_perp))
    jg2_perp = float(np.dot(Jt2, G_perp))
    jg1_full = float(np.dot(Jt1, G))
    jg2_full = float(np.dot(Jt2, G))
    a1 = float(np.dot(G, t1))
    a2 = float(np.dot(G, t2))
    norm2 = float(np.dot(G_perp, G_perp))

    c11 = -jg2_perp * jg2_full - cos * a1 * jg2_perp
    c22 = -jg1_perp * jg1_full + cos * a2 * jg1_perp
    c12 = (
        jg2_perp * jg1_full
        + jg1_perp * jg2_full
        + cos * a1 * jg1_perp
        - cos * a2 * jg2_perp
    )
    return (
        cos * cos * (xi1 * xi1 + xi2 * xi2) * norm2
        - beta * (c11 * xi1 * xi1 + c22 * xi2 * xi2 + c12 * xi1 * xi2)
    )


def symbol_matrix(geo: SurfaceGeometry, G: np.ndarray, *, beta: float | None = None) -> SymbolData:
    """Assemble the xi-coefficient matrix O and both determinant routes."""
    beta = geo.beta if beta is None else beta
    G, G_perp, t1, t2 = _split(geo, G)
    J = geo.J
    cos = geo.cos_alpha
    jg1 = float(np.dot(G_perp, J @ t1))
    jg2 = float(np.dot(G_perp, J @ t2))
    norm2 = float(np.dot(G_perp, G_perp))
    c2n = cos * cos * norm2
    O = np.array(
        [
            [c2n + beta * jg2 * jg2, -beta * jg1 * jg2],
            [-beta * jg1 * jg2, c2n + beta * jg1 * jg1],
        ]
    )
    det_direct = float(O[0, 0] * O[1, 1] - O[0, 1] * O[1, 0])
    det_factored = float(c2n * (c2n + beta * (jg1 * jg1 + jg2 * jg2)))
    return SymbolData(
        O=O,
        det_direct=det_direct,
        det_factored=det_factored,
        g_perp_norm2=norm2,
        jg1=jg1,
        jg2=jg2,
    )


@dataclass(frozen=True)
class EllipticityReport:
    """Outcome of a randomized positivity sweep of det O at one point."""

    min_det: float
    min_det_direction: np.ndarray
    samples: int
    beta: float
    seed: int
    degenerate_only_at_tangent: bool
    passed: bool


def ellipticity_check(
    geo: SurfaceGeometry,
    beta: float,
    samples: int,
    *,
    seed: int = DEFAULT_SEED,
    tols: Tolerances = DEFAULT_TOLS,
) -> EllipticityReport:
    """Sample unit directions G and verify det O >= 0 up to roundoff.

    Near-zero determinants are accepted only where |G_perp| cos(alpha) is
    itself tiny (tangent G or Lagrangian point); a genuinely negative value
    signals an assembly bug and raises.
    """
    if beta < 0:
        raise ValueError("beta must be nonnegative")
    if samples < 1:
        raise ValueError("need at least one sample")
    rng = np.random.default_rng(seed)
    min_det = np.inf
    min_dir = np.zeros(4)
    degenerate_ok = True
    for _ in range(samples):
        G = rng.normal(size=4)
        G /= np.linalg.norm(G)
        data = symbol_matrix(geo, G, beta=beta)
        if data.det_direct < tols.ellipticity_neg:
            raise EllipticityViolation(
                f"det O = {data.det_direct:.3e} for G = {G} (beta = {beta})"
            )
        if data.det_direct < min_det:
            min_det = data.det_direct
            min_dir = G
        if abs(data.det_direct) < 1e-12:
            scale = np.sqrt(data.g_perp_norm2) * abs(geo.cos_alpha)
            if scale >= 1e-6:
                degenerate_ok = False
    passed = min_det >= tols.ellipticity_neg and degenerate_ok
    return EllipticityReport(
        min_det=float(min_det),
        min_det_direction=min_dir,
        samples=samples,
        beta=beta,
        seed=seed,
        degenerate_only_at_tangent=degenerate_ok,
        passed=passed,
    )
