"""Pointwise geometry of immersed surfaces in R^4 viewed as C^2.

An `Immersion` supplies positions and first/second partials over a parameter
rectangle.  From those this module builds the induced metric, orthonormal
tangent and normal frames, the second fundamental form, mean curvature, the
Kahler cosine cos(alpha), and the Euler-Lagrange residual of the functional

    L_beta = integral of cos(alpha)^(-beta) d(area),

together with the adapted normal rotation that aligns the frame with J and a
radial Laplace-Beltrami stencil for S^1-symmetric scalars.

Vector conventions: the ambient complex structure J acts on column vectors,
omega(u, v) = <J u, v>, and cos(alpha) = omega(e1, e2) / sqrt(det g) for the
coordinate tangent frame (e1, e2).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .config import DEFAULT_TOLS, Tolerances
from .errors import ComplexPoint, DegenerateImmersion, GridTooCoarse, LagrangianPoint

# J E1 = E2, J E2 = -E1, J E3 = E4, J E4 = -E3 (column action).
STANDARD_J = np.array(
    [
        [0.0, -1.0, 0.0, 0.0],
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, -1.0],
        [0.0, 0.0, 1.0, 0.0],
    ]
)

_SEED_NORMALS = (np.eye(4)[2], np.eye(4)[3])
_FALLBACK_NORMALS = (np.eye(4)[0], np.eye(4)[1])


@dataclass(frozen=True)
class ComplexStructure:
    """An orthogonal complex structure on R^4."""

    matrix: np.ndarray

    @staticmethod
    def standard() -> "ComplexStructure":
        return ComplexStructure(STANDARD_J.copy())

    def validate(self, tol: float = 1e-12) -> None:
        J = self.matrix
        if J.shape != (4, 4):
            raise ValueError("complex structure must be 4x4")
        if np.max(np.abs(J @ J + np.eye(4))) > tol:
            raise ValueError("J^2 != -I")
        if np.max(np.abs(J.T @ J - np.eye(4))) > tol:
            raise ValueError("J is not an isometry")
        if np.max(np.abs(J.T + J)) > tol:
            raise ValueError("J is not skew")


def kahler_gram_matrix(x: float, y: float, z: float) -> np.ndarray:
    """Gram matrix <J f_i, f_j> of J in an adapted orthonormal frame.

    Here x = cos(alpha), y = <J f_1, f_3>, z = <J f_1, f_4>; the form is
    self-dual, which forces the remaining entries.
    """
    return np.array(
        [
            [0.0, x, y, z],
            [-x, 0.0, z, -y],
            [-y, -z, 0.0, x],
            [-z, y, -x, 0.0],
        ]
    )


@dataclass(frozen=True)
class Immersion:
    """A parametrised surface patch in R^4.

    `eval(x1, x2)` must accept scalars or equal-length 1-D arrays and return
    (F, dF, d2F) with trailing shapes (4,), (4, 2), (4, 2, 2); batched inputs
    prepend the batch axis.  `periodic` marks parameter axes that wrap (the
    angular axis of a rotational surface), which relaxes compact-support
    requirements on variation fields along that axis.
    """

    eval: Callable[..., tuple]
    domain: tuple[tuple[float, float], tuple[float, float]]
    beta: float
    periodic: tuple[bool, bool] = (False, False)
    name: str = ""


def _eval_arrays(imm: Immersion, x1, x2):
    """Evaluate an immersion on flat arrays, normalising shapes to (N, ...)."""
    x1 = np.atleast_1d(np.asarray(x1, dtype=float))
    x2 = np.atleast_1d(np.asarray(x2, dtype=float))
    if x1.shape != x2.shape:
        x1, x2 = np.broadcast_arrays(x1, x2)
    F, dF, d2F = imm.eval(x1, x2)
    n = x1.size
    return (
        np.reshape(np.asarray(F, dtype=float), (n, 4)),
        np.reshape(np.asarray(dF, dtype=float), (n, 4, 2)),
        np.reshape(np.asarray(d2F, dtype=float), (n, 4, 2, 2)),
    )


def validate_immersion(imm: Immersion, points: Sequence[tuple[float, float]]) -> float:
    """Max asymmetry of the mixed second partials over the sample points."""
    x1 = np.array([p[0] for p in points])
    x2 = np.array([p[1] for p in points])
    _, _, d2F = _eval_arrays(imm, x1, x2)
    return float(np.max(np.abs(d2F[:, :, 0, 1] - d2F[:, :, 1, 0])))


@dataclass
class GeometryBatch:
    """Geometry of an immersion at a batch of parameter points.

    Tangent frames: (e1, e2) is the coordinate basis, (t1, t2) its
    Gram-Schmidt orthonormalisation with t_i = frame[i, k] e_k.  (e3, e4) is
    an orthonormal normal frame from the deterministic seed/fallback
    projection.  `h[a, i, j]` are second-fundamental-form components in the
    orthonormal frames (a = 0 for e3, a = 1 for e4).
    """

    x1: np.ndarray
    x2: np.ndarray
    F: np.ndarray
    dF: np.ndarray
    d2F: np.ndarray
    e1: np.ndarray
    e2: np.ndarray
    g: np.ndarray
    g_inv: np.ndarray
    det_g: np.ndarray
    sqrt_det: np.ndarray
    t1: np.ndarray
    t2: np.ndarray
    frame: np.ndarray
    e3: np.ndarray
    e4: np.ndarray
    h: np.ndarray
    H: np.ndarray
    cos_alpha: np.ndarray
    y: np.ndarray
    z: np.ndarray
    lagrangian: np.ndarray
    beta: float
    J: np.ndarray


@dataclass
class SurfaceGeometry:
    """Single-point view of `GeometryBatch` (same conventions)."""

    e1: np.ndarray
    e2: np.ndarray
    g: np.ndarray
    g_inv: np.ndarray
    det_g: float
    t1: np.ndarray
    t2: np.ndarray
    frame: np.ndarray
    e3: np.ndarray
    e4: np.ndarray
    h: np.ndarray
    H: np.ndarray
    cos_alpha: float
    y: float
    z: float
    lagrangian: bool
    beta: float
    J: np.ndarray

    @staticmethod
    def from_batch(batch: GeometryBatch, i: int = 0) -> "SurfaceGeometry":
        return SurfaceGeometry(
            e1=batch.e1[i],
            e2=batch.e2[i],
            g=batch.g[i],
            g_inv=batch.g_inv[i],
            det_g=float(batch.det_g[i]),
            t1=batch.t1[i],
            t2=batch.t2[i],
            frame=batch.frame[i],
            e3=batch.e3[i],
            e4=batch.e4[i],
            h=batch.h[i],
            H=batch.H[i],
            cos_alpha=float(batch.cos_alpha[i]),
            y=float(batch.y[i]),
            z=float(batch.z[i]),
            lagrangian=bool(batch.lagrangian[i]),
            beta=batch.beta,
            J=batch.J,
        )


def _dot(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.einsum("...i,...i->...", a, b)


def _project_out(v: np.ndarray, *units: np.ndarray) -> np.ndarray:
    for u in units:
        v = v - _dot(v, u)[..., None] * u
    return v


def evaluate_geometry_batch(
    imm: Immersion,
    x1,
    x2,
    *,
    J: np.ndarray | None = None,
    normal_seed: tuple[np.ndarray, np.ndarray] | None = None,
    tols: Tolerances = DEFAULT_TOLS,
) -> GeometryBatch:
    """Assemble frames, metric, curvature, and Kahler data on a point batch."""
    J = STANDARD_J if J is None else np.asarray(J, dtype=float)
    F, dF, d2F = _eval_arrays(imm, x1, x2)
    n = F.shape[0]
    e1 = dF[:, :, 0]
    e2 = dF[:, :, 1]

    g = np.einsum("nai,naj->nij", dF, dF)
    det_g = g[:, 0, 0] * g[:, 1, 1] - g[:, 0, 1] * g[:, 1, 0]
    bad = det_g < tols.degenerate_det
    if np.any(bad):
        i = int(np.argmax(bad))
        raise DegenerateImmersion(
            f"det g = {det_g[i]:.3e} at (x1, x2) = "
            f"({np.atleast_1d(x1).ravel()[min(i, np.atleast_1d(x1).size - 1)]}, "
            f"{np.atleast_1d(x2).ravel()[min(i, np.atleast_1d(x2).size - 1)]})"
        )
    g_inv = np.empty_like(g)
    g_inv[:, 0, 0] = g[:, 1, 1] / det_g
    g_inv[:, 1, 1] = g[:, 0, 0] / det_g
    g_inv[:, 0, 1] = -g[:, 0, 1] / det_g
    g_inv[:, 1, 0] = -g[:, 1, 0] / det_g
    sqrt_det = np.sqrt(det_g)

    n1 = np.linalg.norm(e1, axis=1)
    t1 = e1 / n1[:, None]
    u = e2 - _dot(e2, t1)[:, None] * t1
    n2 = np.linalg.norm(u, axis=1)
    t2 = u / n2[:, None]
    frame = np.zeros((n, 2, 2))
    frame[:, 0, 0] = 1.0 / n1
    frame[:, 1, 0] = -_dot(e2, t1) / (n1 * n2)
    frame[:, 1, 1] = 1.0 / n2

    e3, e4 = _normal_frame(t1, t2, tols)

    cos_alpha = _dot(e1 @ J.T, e2) / sqrt_det
    y = _dot(t1 @ J.T, e3)
    z = _dot(t1 @ J.T, e4)
    lagrangian = np.abs(cos_alpha) <= tols.lagrangian_cos

    d2_perp = d2F - np.einsum("nkl,ni->nikl", _dot2(d2F, t1), t1)
    d2_perp = d2_perp - np.einsum("nkl,ni->nikl", _dot2(d2_perp, t2), t2)
    H = np.einsum("nkl,nikl->ni", g_inv, d2_perp)
    h_coord = np.stack(
        [_dot2(d2_perp, e3), _dot2(d2_perp, e4)], axis=1
    )  # (n, 2, 2, 2): [point, normal slot, k, l]
    h = np.einsum("nik,njl,nakl->naij", frame, frame, h_coord)

    return GeometryBatch(
        x1=np.atleast_1d(np.asarray(x1, dtype=float)).ravel(),
        x2=np.atleast_1d(np.asarray(x2, dtype=float)).ravel(),
        F=F,
        dF=dF,
        d2F=d2F,
        e1=e1,
        e2=e2,
        g=g,
        g_inv=g_inv,
        det_g=det_g,
        sqrt_det=sqrt_det,
        t1=t1,
        t2=t2,
        frame=frame,
        e3=e3,
        e4=e4,
        h=h,
        H=H,
        cos_alpha=cos_alpha,
        y=y,
        z=z,
        lagrangian=lagrangian,
        beta=imm.beta,
        J=J,
    )


def _dot2(tensors: np.ndarray, vec: np.ndarray) -> np.ndarray:
    """Contract (n, 4, k, l) second partials with an (n, 4) vector."""
    return np.einsum("nikl,ni->nkl", tensors, vec)


def _normal_frame(t1: np.ndarray, t2: np.ndarray, tols: Tolerances):
    """Orthonormal normal frame by projecting fixed seeds, with fallback.

    The seed cascade ends with all four basis vectors: the projections of
    E1..E4 onto a 1- or 2-dimensional subspace cannot all be short, so the
    chain always terminates with a unit vector and never divides by ~0.
    """
    n = t1.shape[0]
    basis = np.eye(4)

    def pick(primary: np.ndarray, fallback: np.ndarray, *avoid: np.ndarray):
        cand = _project_out(np.broadcast_to(primary, (n, 4)).copy(), t1, t2, *avoid)
        norm = np.linalg.norm(cand, axis=1)
        for seed in (fallback, *basis):
            weak = norm < tols.normal_seed_min
            if not np.any(weak):
                break
            alt = _project_out(np.broadcast_to(seed, (n, 4)).copy(), t1, t2, *avoid)
            alt_norm = np.linalg.norm(alt, axis=1)
            better = weak & (alt_norm > norm)
            cand = np.where(better[:, None], alt, cand)
            norm = np.where(better, alt_norm, norm)
        return cand / norm[:, None]

    e3 = pick(_SEED_NORMALS[0], _FALLBACK_NORMALS[0])
    e4 = pick(_SEED_NORMALS[1], _FALLBACK_NORMALS[1], e3)
    return e3, e4


def evaluate_geometry(
    imm: Immersion,
    p: tuple[float, float],
    *,
    J: np.ndarray | None = None,
    normal_seed=None,
    tols: Tolerances = DEFAULT_TOLS,
) -> SurfaceGeometry:
    """Full geometry record at a single parameter point."""
    batch = evaluate_geometry_batch(imm, p[0], p[1], J=J, normal_seed=normal_seed, tols=tols)
    return SurfaceGeometry.from_batch(batch, 0)


def kahler_cosine_batch(imm: Immersion, x1, x2, *, J: np.ndarray | None = None) -> np.ndarray:
    """cos(alpha) from first partials only (cheap path for gradients)."""
    J = STANDARD_J if J is None else J
    _, dF, _ = _eval_arrays(imm, x1, x2)
    e1 = dF[:, :, 0]
    e2 = dF[:, :, 1]
    g11 = _dot(e1, e1)
    g22 = _dot(e2, e2)
    g12 = _dot(e1, e2)
    det = g11 * g22 - g12 * g12
    return _dot(e1 @ J.T, e2) / np.sqrt(det)


def kahler_angle(geo: SurfaceGeometry | GeometryBatch):
    """cos(alpha) = omega(e1, e2) / sqrt(det g) from stored coordinate frames."""
    Je1 = geo.e1 @ geo.J.T
    return _dot(Je1, geo.e2) / np.sqrt(geo.det_g)


def mean_curvature(imm: Immersion, p: tuple[float, float], **kw) -> np.ndarray:
    """Mean curvature vector (trace of the second fundamental form)."""
    return evaluate_geometry(imm, p, **kw).H


def cos_alpha_gradient_from_batch(batch: GeometryBatch) -> np.ndarray:
    """Exact parameter-space partials of cos(alpha), shape (N, 2).

    cos = omega(e1, e2) / sqrt(det g) depends on first derivatives only, so
    its gradient is algebraic in dF and d2F: no finite differencing, no step
    size to tune, and full accuracy wherever the immersion supplies exact
    second derivatives.
    """
    e1, e2, J = batch.e1, batch.e2, batch.J
    Je1 = e1 @ J.T
    s = batch.sqrt_det
    cos = batch.cos_alpha
    g = batch.g
    out = np.empty((e1.shape[0], 2))
    for i in range(2):
        de1 = batch.d2F[:, :, 0, i]
        de2 = batch.d2F[:, :, 1, i]
        dw = _dot(de1 @ J.T, e2) + _dot(Je1, de2)
        dg11 = 2.0 * _dot(de1, e1)
        dg22 = 2.0 * _dot(de2, e2)
        dg12 = _dot(de1, e2) + _dot(e1, de2)
        ddet = dg11 * g[:, 1, 1] + g[:, 0, 0] * dg22 - 2.0 * g[:, 0, 1] * dg12
        out[:, i] = (dw - cos * ddet / (2.0 * s)) / s
    return out


def cos_alpha_gradient_batch(
    imm: Immersion,
    x1,
    x2,
    *,
    J: np.ndarray | None = None,
    tols: Tolerances = DEFAULT_TOLS,
) -> np.ndarray:
    """Exact partials of cos(alpha) in parameter space, (N, 2)."""
    batch = evaluate_geometry_batch(imm, x1, x2, J=J, tols=tols)
    return cos_alpha_gradient_from_batch(batch)


@dataclass
class ELResidual:
    """Euler-Lagrange residual of the weighted-area functional, two forms.

    `full` is cos(alpha)^3 H - beta (J (J grad cos alpha)^T)^perp, the form in
    which the critical-surface equation is usually stated; `reduced` is the
    same divided through by cos(alpha), assembled independently from
    directional derivatives in the orthonormal tangent frame.  The two must
    agree via full = cos(alpha) * reduced.
    """

    full: np.ndarray
    reduced: np.ndarray
    cos_alpha: np.ndarray


def cos_gradient_terms(geo: GeometryBatch, dc: np.ndarray):
    """Gradient-of-cos(alpha) composites entering the operator and variations.

    From coordinate partials dc of cos(alpha), returns
      grad     intrinsic gradient vector g^{ij} dc_j e_i in R^4,
      JT_perp  normal part of J applied to the tangential part of J grad,
      d_dir    directional derivatives of cos(alpha) along (t1, t2),
      JV_perp  normal part of J (d_1 t2 - d_2 t1), the orthonormal-frame route.
    """
    coeff = np.einsum("nij,nj->ni", geo.g_inv, dc)
    grad = coeff[:, 0:1] * geo.e1 + coeff[:, 1:2] * geo.e2
    Jgrad = grad @ geo.J.T
    T = geo.t1 * _dot(Jgrad, geo.t1)[:, None] + geo.t2 * _dot(Jgrad, geo.t2)[:, None]
    JT_perp = _project_out(T @ geo.J.T, geo.t1, geo.t2)

    d_dir = np.einsum("nik,nk->ni", geo.frame, dc)
    V = d_dir[:, 0:1] * geo.t2 - d_dir[:, 1:2] * geo.t1
    JV_perp = _project_out(V @ geo.J.T, geo.t1, geo.t2)
    return grad, JT_perp, d_dir, JV_perp


def el_residual_batch(
    imm: Immersion,
    x1,
    x2,
    *,
    beta: float | None = None,
    J: np.ndarray | None = None,
    tols: Tolerances = DEFAULT_TOLS,
) -> ELResidual:
    beta = imm.beta if beta is None else beta
    geo = evaluate_geometry_batch(imm, x1, x2, J=J, tols=tols)
    if np.any(geo.cos_alpha <= tols.lagrangian_cos):
        i = int(np.argmax(geo.cos_alpha <= tols.lagrangian_cos))
        raise LagrangianPoint(f"cos(alpha) = {geo.cos_alpha[i]:.3e} at node {i}")
    dc = cos_alpha_gradient_from_batch(geo)
    _, JT_perp, _, JV_perp = cos_gradient_terms(geo, dc)
    full = geo.cos_alpha[:, None] ** 3 * geo.H - beta * JT_perp
    reduced = geo.cos_alpha[:, None] ** 2 * geo.H - beta * JV_perp
    return ELResidual(full=full, reduced=reduced, cos_alpha=geo.cos_alpha)


def el_residual(
    imm: Immersion,
    p: tuple[float, float],
    *,
    beta: float | None = None,
    J: np.ndarray | None = None,
    tols: Tolerances = DEFAULT_TOLS,
) -> ELResidual:
    r = el_residual_batch(imm, p[0], p[1], beta=beta, J=J, tols=tols)
    return ELResidual(full=r.full[0], reduced=r.reduced[0], cos_alpha=float(r.cos_alpha[0]))


def _adapted_arrays(batch: GeometryBatch, *, strict: bool, tols: Tolerances):
    """Rotate (e3, e4) so <J t1, e3'> = sin(alpha), <J t1, e4'> = 0,
    <J e3', e4'> = +cos(alpha).

    With strict=True a vanishing sin(alpha) raises ComplexPoint; otherwise
    those points keep their unrotated normal frame (any frame is y-aligned
    there) and only the orientation sign is fixed.
    """
    s = np.hypot(batch.y, batch.z)
    complex_pt = s <= tols.complex_sin
    if strict and np.any(complex_pt):
        i = int(np.argmax(complex_pt))
        raise ComplexPoint(f"sin(alpha) = {s[i]:.3e} at node {i}")
    safe = np.where(complex_pt, 1.0, s)
    cy = np.where(complex_pt, 1.0, batch.y / safe)
    cz = np.where(complex_pt, 0.0, batch.z / safe)

    e3 = cy[:, None] * batch.e3 + cz[:, None] * batch.e4
    e4 = -cz[:, None] * batch.e3 + cy[:, None] * batch.e4
    h3 = cy[:, None, None] * batch.h[:, 0] + cz[:, None, None] * batch.h[:, 1]
    h4 = -cz[:, None, None] * batch.h[:, 0] + cy[:, None, None] * batch.h[:, 1]

    w = _dot(e3 @ batch.J.T, e4)
    sgn = np.where(w * np.where(batch.cos_alpha == 0.0, 1.0, batch.cos_alpha) < 0.0, -1.0, 1.0)
    e4 = sgn[:, None] * e4
    h4 = sgn[:, None, None] * h4

    y = _dot(batch.t1 @ batch.J.T, e3)
    z = _dot(batch.t1 @ batch.J.T, e4)
    return e3, e4, np.stack([h3, h4], axis=1), y, z


def adapted_frame(
    geo: SurfaceGeometry,
    *,
    tols: Tolerances = DEFAULT_TOLS,
) -> SurfaceGeometry:
    """SurfaceGeometry with the normal frame rotated into adapted position."""
    batch = GeometryBatch(
        x1=np.zeros(1),
        x2=np.zeros(1),
        F=np.zeros((1, 4)),
        dF=np.zeros((1, 4, 2)),
        d2F=np.zeros((1, 4, 2, 2)),
        e1=geo.e1[None],
        e2=geo.e2[None],
        g=geo.g[None],
        g_inv=geo.g_inv[None],
        det_g=np.array([geo.det_g]),
        sqrt_det=np.sqrt(np.array([geo.det_g])),
        t1=geo.t1[None],
        t2=geo.t2[None],
        frame=geo.frame[None],
        e3=geo.e3[None],
        e4=geo.e4[None],
        h=geo.h[None],
        H=geo.H[None],
        cos_alpha=np.array([geo.cos_alpha]),
        y=np.array([geo.y]),
        z=np.array([geo.z]),
        lagrangian=np.array([geo.lagrangian]),
        beta=geo.beta,
        J=geo.J,
    )
    e3, e4, h, y, z = _adapted_arrays(batch, strict=True, tols=tols)
    return SurfaceGeometry(
        e1=geo.e1,
        e2=geo.e2,
        g=geo.g,
        g_inv=geo.g_inv,
        det_g=geo.det_g,
        t1=geo.t1,
        t2=geo.t2,
        frame=geo.frame,
        e3=e3[0],
        e4=e4[0],
        h=h[0],
        H=geo.H,
        cos_alpha=geo.cos_alpha,
        y=float(y[0]),
        z=float(z[0]),
        lagrangian=geo.lagrangian,
        beta=geo.beta,
        J=geo.J,
    )


def laplace_beltrami_radial(u: np.ndarray, metric_A: np.ndarray, r: np.ndarray) -> np.ndarray:
    """(1 / (r sqrt(A))) d/dr (r u' / sqrt(A)) by central differences.

    This is the Laplace-Beltrami operator of the rotational metric
    diag(A, r^2) applied to a radial scalar.  Endpoints use one-sided
    differences and are first-order only; trust the interior.
    """
    u = np.asarray(u, dtype=float)
    r = np.asarray(r, dtype=float)
    metric_A = np.asarray(metric_A, dtype=float)
    if u.size < 5:
        raise GridTooCoarse(f"need at least 5 nodes, got {u.size}")
    sA = np.sqrt(metric_A)
    flux = r * np.gradient(u, r) / sA
    return np.gradient(flux, r) / (r * sA)
