"""The weighted-area functional and its first and second variations.

Everything is verified three ways: closed variation formulas, the
pre-Stokes (differentiate under the integral) forms, and central finite
differences of t -> L(F + t X).  Variation families are straight lines in
R^4, so the ambient is flat and the mixed acceleration field vanishes.

Quadrature is composite Simpson along non-periodic parameter axes and
composite midpoint along periodic ones; the midpoint rule integrates
trigonometric polynomials exactly, which is what keeps S^1-symmetric test
fields at full Simpson accuracy in the radial direction.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .config import DEFAULT_SEED, DEFAULT_TOLS, Tolerances
from .errors import LagrangianPoint, NotCritical, UsageError
from .geometry_core import (
    GeometryBatch,
    Immersion,
    _adapted_arrays,
    _dot,
    _project_out,
    cos_alpha_gradient_from_batch,
    cos_gradient_terms,
    evaluate_geometry_batch,
    kahler_cosine_batch,
)


# ---------------------------------------------------------------------------
# quadrature


def _simpson_nodes(a: float, b: float, n: int):
    if n < 3:
        n = 3
    if n % 2 == 0:
        n += 1
    x = np.linspace(a, b, n)
    h = (b - a) / (n - 1)
    w = np.full(n, 2.0)
    w[1::2] = 4.0
    w[0] = w[-1] = 1.0
    return x, w * (h / 3.0)


def _midpoint_nodes(a: float, b: float, n: int):
    h = (b - a) / n
    x = a + (np.arange(n) + 0.5) * h
    return x, np.full(n, h)


@dataclass(frozen=True)
class QuadratureSpec:
    """Tensor-product quadrature: n1 nodes along axis 1, n2 along axis 2.

    Periodic axes (per the immersion) get the midpoint rule; the rest get
    composite Simpson (node counts are bumped to the next odd value).
    """

    n1: int = 257
    n2: int = 64

    def axes(self, imm: Immersion):
        out = []
        for k, n in ((0, self.n1), (1, self.n2)):
            a, b = imm.domain[k]
            if imm.periodic[k]:
                out.append(_midpoint_nodes(a, b, n))
            else:
                out.append(_simpson_nodes(a, b, n))
        return out

    def grid(self, imm: Immersion):
        (x1, w1), (x2, w2) = self.axes(imm)
        X1, X2 = np.meshgrid(x1, x2, indexing="ij")
        W = np.outer(w1, w2)
        return X1.ravel(), X2.ravel(), W.ravel()


DEFAULT_QUADRATURE = QuadratureSpec()


# ---------------------------------------------------------------------------
# compactly supported fields


def _bump_poly(s: np.ndarray):
    """w(s) = (1 - s^2)^5 clipped to [-1, 1]; C^4 across the cutoff.

    Four vanishing derivatives at the edges keep composite-Simpson error at
    O(h^4) even when the support endpoints fall inside a quadrature panel."""
    inside = np.abs(s) < 1.0
    q = np.where(inside, 1.0 - s * s, 0.0)
    w = q**5
    dw = np.where(inside, -10.0 * s * q**4, 0.0)
    d2w = np.where(inside, q**3 * (90.0 * s * s - 10.0), 0.0)
    return w, dw, d2w


@dataclass(frozen=True)
class Bump1D:
    """Polynomial bump supported on [a, b], C^4 at the endpoints."""

    a: float
    b: float

    def __call__(self, x):
        mid = 0.5 * (self.a + self.b)
        half = 0.5 * (self.b - self.a)
        s = (np.asarray(x, dtype=float) - mid) / half
        w, dw, d2w = _bump_poly(s)
        return w, dw / half, d2w / (half * half)


@dataclass(frozen=True)
class VariationField:
    """A compactly supported deformation field on an immersion's parameters.

    `eval(x1, x2)` returns (X, dX, d2X) with trailing shapes (4,), (4, 2),
    (4, 2, 2).  `support` is the closed sub-rectangle outside which the field
    vanishes; on a periodic parameter axis the full period is allowed.
    `normal_flag` promises pointwise normality to the surface.
    """

    eval: Callable[..., tuple]
    support: tuple[tuple[float, float], tuple[float, float]]
    normal_flag: bool
    name: str = ""


def _field_arrays(X: VariationField, x1, x2):
    x1 = np.atleast_1d(np.asarray(x1, dtype=float))
    x2 = np.atleast_1d(np.asarray(x2, dtype=float))
    if x1.shape != x2.shape:
        x1, x2 = np.broadcast_arrays(x1, x2)
    v, dv, d2v = X.eval(x1, x2)
    n = x1.size
    return (
        np.reshape(np.asarray(v, dtype=float), (n, 4)),
        np.reshape(np.asarray(dv, dtype=float), (n, 4, 2)),
        np.reshape(np.asarray(d2v, dtype=float), (n, 4, 2, 2)),
    )


def _fd_vector_field(value_fn: Callable, h1: float = 1e-6, h2: float = 1e-4) -> Callable:
    """Wrap a pointwise R^4-valued function with FD first/second partials.

    First partials use step h1 (central), second partials step h2 (second
    central and the four-point cross stencil).  Good to ~1e-10 on the first
    partials, which is what the variation formulas consume; second partials
    only enter deformed immersions multiplied by the deformation parameter.
    """

    def eval_(x1, x2):
        x1 = np.asarray(x1, dtype=float)
        x2 = np.asarray(x2, dtype=float)
        x1, x2 = np.broadcast_arrays(x1, x2)
        B = x1.shape
        v = value_fn(x1, x2)
        dv = np.empty(B + (4, 2))
        dv[..., 0] = (value_fn(x1 + h1, x2) - value_fn(x1 - h1, x2)) / (2.0 * h1)
        dv[..., 1] = (value_fn(x1, x2 + h1) - value_fn(x1, x2 - h1)) / (2.0 * h1)
        d2v = np.empty(B + (4, 2, 2))
        d2v[..., 0, 0] = (
            value_fn(x1 + h2, x2) - 2.0 * v + value_fn(x1 - h2, x2)
        ) / (h2 * h2)
        d2v[..., 1, 1] = (
            value_fn(x1, x2 + h2) - 2.0 * v + value_fn(x1, x2 - h2)
        ) / (h2 * h2)
        cross = (
            value_fn(x1 + h2, x2 + h2)
            - value_fn(x1 + h2, x2 - h2)
            - value_fn(x1 - h2, x2 + h2)
            + value_fn(x1 - h2, x2 - h2)
        ) / (4.0 * h2 * h2)
        d2v[..., 0, 1] = cross
        d2v[..., 1, 0] = cross
        return v, dv, d2v

    return eval_


def _support_or_default(imm: Immersion, support, shrink: float = 0.1):
    if support is not None:
        return (tuple(support[0]), tuple(support[1]))
    out = []
    for k in range(2):
        a, b = imm.domain[k]
        if imm.periodic[k]:
            out.append((a, b))
        else:
            pad = shrink * (b - a)
            out.append((a + pad, b - pad))
    return tuple(out)


def _angular_factor(mode: int, phase: float):
    def fac(x):
        if mode == 0:
            one = np.ones_like(np.asarray(x, dtype=float))
            return one, np.zeros_like(one), np.zeros_like(one)
        t = mode * np.asarray(x, dtype=float) + phase
        return np.cos(t), -mode * np.sin(t), -mode * mode * np.cos(t)

    return fac


def _envelope(imm: Immersion, support, mode: int, phase: float):
    """Scalar cutoff: bump along non-periodic axes, Fourier mode along periodic."""
    factors = []
    for k in range(2):
        if imm.periodic[k]:
            factors.append(_angular_factor(mode, phase))
        else:
            factors.append(Bump1D(*support[k]))

    def phi(x1, x2):
        w1, d1, dd1 = factors[0](x1)
        w2, d2, dd2 = factors[1](x2)
        val = w1 * w2
        grad = np.stack([d1 * w2, w1 * d2], axis=-1)
        hess = np.empty(val.shape + (2, 2))
        hess[..., 0, 0] = dd1 * w2
        hess[..., 1, 1] = w1 * dd2
        hess[..., 0, 1] = d1 * d2
        hess[..., 1, 0] = d1 * d2
        return val, grad, hess

    return phi


def constant_bump(
    imm: Immersion,
    direction,
    support=None,
    *,
    mode: int = 0,
    phase: float = 0.0,
    normal_flag: bool = False,
    name: str = "constant-bump",
) -> VariationField:
    """X = envelope(x1, x2) * v for a fixed direction v: all partials exact."""
    v = np.asarray(direction, dtype=float)
    support = _support_or_default(imm, support)
    phi = _envelope(imm, support, mode, phase)

    def eval_(x1, x2):
        x1 = np.asarray(x1, dtype=float)
        x2 = np.asarray(x2, dtype=float)
        x1, x2 = np.broadcast_arrays(x1, x2)
        val, grad, hess = phi(x1, x2)
        return (
            val[..., None] * v,
            grad[..., None, :] * v[:, None],
            hess[..., None, :, :] * v[:, None, None],
        )

    return VariationField(eval=eval_, support=support, normal_flag=normal_flag, name=name)


def _frame_value_fn(imm: Immersion, support, c3, c4, mode, phase, tols):
    phi = _envelope(imm, support, mode, phase)

    def value(x1, x2):
        x1 = np.asarray(x1, dtype=float)
        x2 = np.asarray(x2, dtype=float)
        x1b, x2b = np.broadcast_arrays(x1, x2)
        val, _, _ = phi(x1b, x2b)
        geo = evaluate_geometry_batch(imm, x1b.ravel(), x2b.ravel(), tols=tols)
        vec = c3 * geo.e3 + c4 * geo.e4
        return val[..., None] * vec.reshape(x1b.shape + (4,))

    return value


def normal_bump(
    imm: Immersion,
    support=None,
    *,
    c3: float = 1.0,
    c4: float = 0.0,
    mode: int = 0,
    phase: float = 0.0,
    tols: Tolerances = DEFAULT_TOLS,
    name: str = "normal-bump",
) -> VariationField:
    """X = envelope * (c3 e3 + c4 e4) along the seed normal frame.

    The frame factor is differentiated by finite differences; the envelope
    analytically, so the field and its first partials vanish to machine zero
    wherever the envelope does.
    """
    support = _support_or_default(imm, support)
    value = _frame_value_fn(imm, support, c3, c4, mode, phase, tols)
    return VariationField(
        eval=_fd_vector_field(value),
        support=support,
        normal_flag=True,
        name=name,
    )


def tangent_bump(
    imm: Immersion,
    support=None,
    *,
    c1: float = 1.0,
    c2: float = 0.0,
    mode: int = 0,
    phase: float = 0.0,
    tols: Tolerances = DEFAULT_TOLS,
    name: str = "tangent-bump",
) -> VariationField:
    """X = envelope * (c1 t1 + c2 t2): reparametrising, not shape-changing."""
    support = _support_or_default(imm, support)
    phi = _envelope(imm, support, mode, phase)

    def value(x1, x2):
        x1 = np.asarray(x1, dtype=float)
        x2 = np.asarray(x2, dtype=float)
        x1b, x2b = np.broadcast_arrays(x1, x2)
        val, _, _ = phi(x1b, x2b)
        geo = evaluate_geometry_batch(imm, x1b.ravel(), x2b.ravel(), tols=tols)
        vec = c1 * geo.t1 + c2 * geo.t2
        return val[..., None] * vec.reshape(x1b.shape + (4,))

    return VariationField(
        eval=_fd_vector_field(value),
        support=support,
        normal_flag=False,
        name=name,
    )


def analytic_normal_bump(
    imm: Immersion,
    normal_fn: Callable,
    support=None,
    *,
    mode: int = 0,
    phase: float = 0.0,
    name: str = "analytic-normal-bump",
) -> VariationField:
    """X = envelope * nu(x1, x2) for a caller-supplied unit normal section.

    Use when the seed-projected frame is unsuitable, e.g. a section that must
    stay smooth across a sign change of cos(alpha).
    """
    support = _support_or_default(imm, support)
    phi = _envelope(imm, support, mode, phase)

    def value(x1, x2):
        x1 = np.asarray(x1, dtype=float)
        x2 = np.asarray(x2, dtype=float)
        x1b, x2b = np.broadcast_arrays(x1, x2)
        val, _, _ = phi(x1b, x2b)
        return val[..., None] * np.asarray(normal_fn(x1b, x2b), dtype=float)

    return VariationField(
        eval=_fd_vector_field(value),
        support=support,
        normal_flag=True,
        name=name,
    )


def random_normal_fields(
    imm: Immersion,
    count: int,
    *,
    seed: int = DEFAULT_SEED,
    max_mode: int = 3,
    tols: Tolerances = DEFAULT_TOLS,
) -> list[VariationField]:
    """Deterministic pseudo-random normal bump fields for sweep tests.

    Each field gets a random sub-window of the radial domain (never narrower
    than 40% of it, so default grids resolve the bump), random frame
    coefficients, and a random angular mode on a periodic axis.
    """
    rng = np.random.default_rng(seed)
    base = _support_or_default(imm, None)
    fields = []
    for k in range(count):
        sup = []
        for ax in range(2):
            a, b = base[ax]
            if imm.periodic[ax]:
                sup.append((a, b))
                continue
            width = (b - a) * rng.uniform(0.4, 1.0)
            lo = a + rng.uniform(0.0, (b - a) - width)
            sup.append((lo, lo + width))
        c3, c4 = rng.normal(size=2)
        mode = int(rng.integers(0, max_mode + 1)) if any(imm.periodic) else 0
        phase = float(rng.uniform(0.0, 2.0 * np.pi))
        fields.append(
            normal_bump(
                imm,
                tuple(sup),
                c3=float(c3),
                c4=float(c4),
                mode=mode,
                phase=phase,
                tols=tols,
                name=f"random-bump-{k}",
            )
        )
    return fields


def j_companion_field(
    imm: Immersion,
    X: VariationField,
    *,
    tols: Tolerances = DEFAULT_TOLS,
) -> VariationField:
    """The J-rotated companion x3 e4 - x4 e3 of a normal field X.

    Components are taken in the adapted normal frame (orientation-fixed seed
    frame where the rotation degenerates at complex points); this is the
    second summand field of the paired second-variation identity.
    """
    if not X.normal_flag:
        raise UsageError("companion rotation is defined for normal fields")

    def value(x1, x2):
        x1 = np.asarray(x1, dtype=float)
        x2 = np.asarray(x2, dtype=float)
        x1b, x2b = np.broadcast_arrays(x1, x2)
        geo = evaluate_geometry_batch(imm, x1b.ravel(), x2b.ravel(), tols=tols)
        e3, e4, _, _, _ = _adapted_arrays(geo, strict=False, tols=tols)
        Xv, _, _ = _field_arrays(X, x1b.ravel(), x2b.ravel())
        x3 = _dot(Xv, e3)
        x4 = _dot(Xv, e4)
        W = x3[:, None] * e4 - x4[:, None] * e3
        return W.reshape(x1b.shape + (4,))

    return VariationField(
        eval=_fd_vector_field(value),
        support=X.support,
        normal_flag=True,
        name=(X.name + "-companion") if X.name else "companion",
    )


def deformed_immersion(imm: Immersion, X: VariationField, t: float) -> Immersion:
    """The straight-line deformation F + t X as a new immersion."""

    def eval_(x1, x2):
        F, dF, d2F = imm.eval(x1, x2)
        Xv, dXv, d2Xv = X.eval(x1, x2)
        return F + t * Xv, dF + t * dXv, d2F + t * d2Xv

    return Immersion(
        eval=eval_,
        domain=imm.domain,
        beta=imm.beta,
        periodic=imm.periodic,
        name=f"{imm.name}+t*{X.name}" if imm.name else "deformed",
    )


def validate_field(
    imm: Immersion,
    X: VariationField,
    quad: QuadratureSpec | None = None,
    *,
    tols: Tolerances = DEFAULT_TOLS,
    boundary_samples: int = 65,
) -> dict:
    """Compact-support and normality diagnostics for a variation field.

    Returns max |X| and max |dX| on the immersion's non-periodic boundary
    edges, and (for normal-flagged fields) the worst tangency |<X, e_i>| over
    the quadrature grid.
    """
    quad = quad or DEFAULT_QUADRATURE
    edges_x1, edges_x2 = [], []
    (a1, b1), (a2, b2) = imm.domain
    s1 = np.linspace(a1, b1, boundary_samples)
    s2 = np.linspace(a2, b2, boundary_samples)
    if not imm.periodic[0]:
        edges_x1 += [np.full_like(s2, a1), np.full_like(s2, b1)]
        edges_x2 += [s2, s2]
    if not imm.periodic[1]:
        edges_x1 += [s1, s1]
        edges_x2 += [np.full_like(s1, a2), np.full_like(s1, b2)]
    out = {"boundary_value": 0.0, "boundary_derivative": 0.0, "tangency": 0.0}
    if edges_x1:
        ex1 = np.concatenate(edges_x1)
        ex2 = np.concatenate(edges_x2)
        Xv, dXv, _ = _field_arrays(X, ex1, ex2)
        out["boundary_value"] = float(np.max(np.abs(Xv)))
        out["boundary_derivative"] = float(np.max(np.abs(dXv)))
    if X.normal_flag:
        x1, x2, _ = quad.grid(imm)
        geo = evaluate_geometry_batch(imm, x1, x2, tols=tols)
        Xv, _, _ = _field_arrays(X, x1, x2)
        tang = np.maximum(np.abs(_dot(Xv, geo.t1)), np.abs(_dot(Xv, geo.t2)))
        out["tangency"] = float(np.max(tang))
    return out


def field_c1_norm(imm: Immersion, X: VariationField, quad: QuadratureSpec | None = None) -> float:
    """max |X| + max |dX| over the quadrature grid: the C^1 scale of X."""
    quad = quad or DEFAULT_QUADRATURE
    x1, x2, _ = quad.grid(imm)
    Xv, dXv, _ = _field_arrays(X, x1, x2)
    return float(np.max(np.linalg.norm(Xv, axis=1)) + np.max(np.abs(dXv)))


# ---------------------------------------------------------------------------
# node state shared by the formula routes


@dataclass
class _Nodes:
    x1: np.ndarray
    x2: np.ndarray
    w: np.ndarray
    geo: GeometryBatch
    mu: np.ndarray  # w * sqrt(det g)
    dc: np.ndarray | None = None
    d_dir: np.ndarray | None = None
    JT_perp: np.ndarray | None = None


def _node_state(
    imm: Immersion,
    quad: QuadratureSpec,
    *,
    need_gradient: bool,
    tols: Tolerances,
) -> _Nodes:
    x1, x2, w = quad.grid(imm)
    geo = evaluate_geometry_batch(imm, x1, x2, tols=tols)
    nodes = _Nodes(x1=x1, x2=x2, w=w, geo=geo, mu=w * geo.sqrt_det)
    if need_gradient:
        dc = cos_alpha_gradient_from_batch(geo)
        _, JT_perp, d_dir, _ = cos_gradient_terms(geo, dc)
        nodes.dc = dc
        nodes.d_dir = d_dir
        nodes.JT_perp = JT_perp
    return nodes


def _require_symplectic(cos: np.ndarray, beta: float, tols: Tolerances) -> None:
    if beta == 0.0:
        return
    if np.any(cos <= tols.lagrangian_cos):
        i = int(np.argmax(cos <= tols.lagrangian_cos))
        raise LagrangianPoint(f"cos(alpha) = {cos[i]:.3e} at quadrature node {i}")


# ---------------------------------------------------------------------------
# the functional and first variation


def functional(
    imm: Immersion,
    quad: QuadratureSpec | None = None,
    *,
    beta: float | None = None,
    tols: Tolerances = DEFAULT_TOLS,
) -> float:
    """L = integral of cos(alpha)^(-beta) d(area) over the parameter domain."""
    quad = quad or DEFAULT_QUADRATURE
    beta = imm.beta if beta is None else beta
    x1, x2, w = quad.grid(imm)
    F, dF, _ = imm.eval(x1, x2)
    dF = np.reshape(np.asarray(dF, dtype=float), (x1.size, 4, 2))
    e1 = dF[:, :, 0]
    e2 = dF[:, :, 1]
    g11 = _dot(e1, e1)
    g22 = _dot(e2, e2)
    g12 = _dot(e1, e2)
    det = g11 * g22 - g12 * g12
    sqrt_det = np.sqrt(det)
    if beta == 0.0:
        return float(np.sum(w * sqrt_det))
    from .geometry_core import STANDARD_J

    cos = _dot(e1 @ STANDARD_J.T, e2) / sqrt_det
    _require_symplectic(cos, beta, tols)
    return float(np.sum(w * sqrt_det * cos ** (-beta)))


def first_variation_formula(
    imm: Immersion,
    X: VariationField,
    quad: QuadratureSpec | None = None,
    *,
    beta: float | None = None,
    tols: Tolerances = DEFAULT_TOLS,
    _nodes: _Nodes | None = None,
) -> float:
    """Post-Stokes first variation for a normal, compactly supported field:

    -(beta+1) int <X, H> cos^(-beta) dmu
    + beta (beta+1) int <X, (J (J grad cos)^T)^perp> cos^(-beta-3) dmu.
    """
    if not X.normal_flag:
        raise UsageError("the closed first-variation formula requires a normal field")
    quad = quad or DEFAULT_QUADRATURE
    beta = imm.beta if beta is None else beta
    nd = _nodes or _node_state(imm, quad, need_gradient=(beta != 0.0), tols=tols)
    cos = nd.geo.cos_alpha
    _require_symplectic(cos, beta, tols)
    Xv, _, _ = _field_arrays(X, nd.x1, nd.x2)
    XH = _dot(Xv, nd.geo.H)
    if beta == 0.0:
        return float(-np.sum(nd.mu * XH))
    val = -(beta + 1.0) * np.sum(nd.mu * XH * cos ** (-beta))
    val += beta * (beta + 1.0) * np.sum(
        nd.mu * _dot(Xv, nd.JT_perp) * cos ** (-(beta + 3.0))
    )
    return float(val)


def first_variation_prestokes(
    imm: Immersion,
    X: VariationField,
    quad: QuadratureSpec | None = None,
    *,
    beta: float | None = None,
    tols: Tolerances = DEFAULT_TOLS,
    _nodes: _Nodes | None = None,
) -> float:
    """Differentiate under the integral, before any integration by parts:

    int [ (beta+1) g^{ij} <d_i X, e_j> sqrt(det g) cos^(-beta)
          - beta (omega(d_1 X, e2) + omega(e1, d_2 X)) cos^(-beta-1) ] dx.

    Valid for any field, tangential ones included (it is the exact
    t-derivative of the quadrature of L along the family).
    """
    quad = quad or DEFAULT_QUADRATURE
    beta = imm.beta if beta is None else beta
    nd = _nodes or _node_state(imm, quad, need_gradient=False, tols=tols)
    geo = nd.geo
    cos = geo.cos_alpha
    _require_symplectic(cos, beta, tols)
    _, dXv, _ = _field_arrays(X, nd.x1, nd.x2)
    # g^{ij} <d_i X, e_j> with coordinate frames.
    de = np.empty((nd.x1.size, 2, 2))
    de[:, 0, 0] = _dot(dXv[:, :, 0], geo.e1)
    de[:, 0, 1] = _dot(dXv[:, :, 0], geo.e2)
    de[:, 1, 0] = _dot(dXv[:, :, 1], geo.e1)
    de[:, 1, 1] = _dot(dXv[:, :, 1], geo.e2)
    trace = np.einsum("nij,nij->n", geo.g_inv, de)
    if beta == 0.0:
        return float(np.sum(nd.w * geo.sqrt_det * trace))
    val = (beta + 1.0) * np.sum(nd.w * geo.sqrt_det * trace * cos ** (-beta))
    omega_part = _dot(dXv[:, :, 0] @ geo.J.T, geo.e2) + _dot(geo.e1 @ geo.J.T, dXv[:, :, 1])
    val -= beta * np.sum(nd.w * omega_part * cos ** (-(beta + 1.0)))
    return float(val)


def first_variation_fd(
    imm: Immersion,
    X: VariationField,
    h: float = 1e-3,
    quad: QuadratureSpec | None = None,
    *,
    beta: float | None = None,
    richardson: bool = True,
    tols: Tolerances = DEFAULT_TOLS,
) -> float:
    """Central difference of t -> L(F + t X), optionally Richardson-refined."""
    if h <= 0.0:
        raise UsageError("finite-difference step must be positive")
    quad = quad or DEFAULT_QUADRATURE

    def diff(step):
        Lp = functional(deformed_immersion(imm, X, step), quad, beta=beta, tols=tols)
        Lm = functional(deformed_immersion(imm, X, -step), quad, beta=beta, tols=tols)
        return (Lp - Lm) / (2.0 * step)

    d = diff(h)
    if not richardson:
        return float(d)
    return float((4.0 * diff(h / 2.0) - d) / 3.0)


# ---------------------------------------------------------------------------
# second variation


def _criticality_residual(nd: _Nodes, beta: float) -> float:
    """max |cos^3 H - beta (J (J grad cos)^T)^perp| over the nodes.

    Assembled inline (no Lagrangian guard): the operator is polynomial in
    cos(alpha), so it is well defined even where cos(alpha) changes sign,
    e.g. across a minimal surface's neck at beta = 0.
    """
    P = nd.geo.cos_alpha[:, None] ** 3 * nd.geo.H
    if beta != 0.0:
        P = P - beta * nd.JT_perp
    return float(np.max(np.linalg.norm(P, axis=1)))


def _field_node_data(nd: _Nodes, X: VariationField):
    Xv, dXv, _ = _field_arrays(X, nd.x1, nd.x2)
    # Ambient directional derivatives along the orthonormal tangent frame.
    dirX = np.einsum("nik,nak->nai", nd.geo.frame, dXv)
    return Xv, dirX


def _omega_sum(geo: GeometryBatch, dirX: np.ndarray) -> np.ndarray:
    return _dot(dirX[:, :, 0] @ geo.J.T, geo.t2) + _dot(geo.t1 @ geo.J.T, dirX[:, :, 1])


def second_variation_formula(
    imm: Immersion,
    X: VariationField,
    quad: QuadratureSpec | None = None,
    *,
    beta: float | None = None,
    check_critical: bool = True,
    tols: Tolerances = DEFAULT_TOLS,
    _nodes: _Nodes | None = None,
) -> float:
    """Diagonal second variation for a normal field on a critical surface."""
    if not X.normal_flag:
        raise UsageError("the second-variation formula requires a normal field")
    quad = quad or DEFAULT_QUADRATURE
    beta = imm.beta if beta is None else beta
    nd = _nodes or _node_state(imm, quad, need_gradient=True, tols=tols)
    geo = nd.geo
    cos = geo.cos_alpha
    _require_symplectic(cos, beta, tols)
    if check_critical:
        res = _criticality_residual(nd, beta)
        if res > tols.criticality_gate:
            raise NotCritical(f"max residual {res:.3e} exceeds {tols.criticality_gate:.0e}")

    Xv, dirX = _field_node_data(nd, X)
    perp1 = _project_out(dirX[:, :, 0], geo.t1, geo.t2)
    perp2 = _project_out(dirX[:, :, 1], geo.t1, geo.t2)
    grad_perp2 = _dot(perp1, perp1) + _dot(perp2, perp2)
    # <X, A(t_i, t_j)>^2 summed over i, j; frame-invariant normal contraction.
    XA = np.einsum("naij,na->nij", geo.h, np.stack([_dot(Xv, geo.e3), _dot(Xv, geo.e4)], axis=1))
    XA2 = np.einsum("nij,nij->n", XA, XA)
    XH = _dot(Xv, geo.H)

    bp1 = beta + 1.0
    if beta == 0.0:
        return float(np.sum(nd.mu * (grad_perp2 - XA2 + XH * XH)))

    cb = cos ** (-beta)
    osum = _omega_sum(geo, dirX)
    t5 = (
        _dot(Xv @ geo.J.T, dirX[:, :, 1]) * nd.d_dir[:, 0]
        + _dot(dirX[:, :, 0] @ geo.J.T, Xv) * nd.d_dir[:, 1]
    )
    val = bp1 * np.sum(nd.mu * cb * grad_perp2)
    val -= bp1 * np.sum(nd.mu * cb * XA2)
    val += bp1 * bp1 * np.sum(nd.mu * cb * XH * XH)
    val += 2.0 * beta * bp1 * np.sum(nd.mu * XH * osum * cos ** (-(beta + 1.0)))
    val -= beta * bp1 * np.sum(nd.mu * t5 * cos ** (-(beta + 2.0)))
    val += beta * bp1 * np.sum(nd.mu * osum * osum * cos ** (-(beta + 2.0)))
    return float(val)


def second_variation_mixed(
    imm: Immersion,
    X: VariationField,
    Y: VariationField,
    quad: QuadratureSpec | None = None,
    *,
    beta: float | None = None,
    check_critical: bool = True,
    tols: Tolerances = DEFAULT_TOLS,
) -> float:
    """Mixed second variation B(X, Y) for two normal fields (flat ambient,
    straight-line families).  Symmetric in (X, Y) term by term."""
    if not (X.normal_flag and Y.normal_flag):
        raise UsageError("the mixed second variation requires normal fields")
    quad = quad or DEFAULT_QUADRATURE
    beta = imm.beta if beta is None else beta
    nd = _node_state(imm, quad, need_gradient=True, tols=tols)
    geo = nd.geo
    cos = geo.cos_alpha
    _require_symplectic(cos, beta, tols)
    if check_critical:
        res = _criticality_residual(nd, beta)
        if res > tols.criticality_gate:
            raise NotCritical(f"max residual {res:.3e} exceeds {tols.criticality_gate:.0e}")

    _, dirX = _field_node_data(nd, X)
    _, dirY = _field_node_data(nd, Y)
    t = np.stack([geo.t1, geo.t2], axis=1)  # (n, 2, 4)

    perpX = np.stack(
        [_project_out(dirX[:, :, i], geo.t1, geo.t2) for i in range(2)], axis=2
    )
    perpY = np.stack(
        [_project_out(dirY[:, :, i], geo.t1, geo.t2) for i in range(2)], axis=2
    )
    grad_pair = np.einsum("nai,nai->n", perpX, perpY)

    tX = np.einsum("nia,naj->nij", t, dirX)  # <t_i, dir_j X>
    tY = np.einsum("nia,naj->nij", t, dirY)
    divX = tX[:, 0, 0] + tX[:, 1, 1]
    divY = tY[:, 0, 0] + tY[:, 1, 1]
    cross = np.einsum("nij,nji->n", tX, tY)

    bp1 = beta + 1.0
    if beta == 0.0:
        return float(np.sum(nd.mu * (grad_pair + divX * divY - cross)))

    cb = cos ** (-beta)
    osX = _omega_sum(geo, dirX)
    osY = _omega_sum(geo, dirY)
    omega_cross = _dot(dirX[:, :, 0] @ geo.J.T, dirY[:, :, 1]) + _dot(
        dirY[:, :, 0] @ geo.J.T, dirX[:, :, 1]
    )
    val = bp1 * np.sum(nd.mu * cb * grad_pair)
    val += bp1 * bp1 * np.sum(nd.mu * cb * divX * divY)
    val -= bp1 * np.sum(nd.mu * cb * cross)
    val -= beta * bp1 * np.sum(nd.mu * (divX * osY + divY * osX) * cos ** (-(beta + 1.0)))
    val -= beta * np.sum(nd.mu * omega_cross * cos ** (-(beta + 1.0)))
    val += beta * bp1 * np.sum(nd.mu * osX * osY * cos ** (-(beta + 2.0)))
    return float(val)


def second_variation_pair(
    imm: Immersion,
    X: VariationField,
    quad: QuadratureSpec | None = None,
    *,
    beta: float | None = None,
    check_critical: bool = True,
    tols: Tolerances = DEFAULT_TOLS,
    _nodes: _Nodes | None = None,
) -> float:
    """Paired second variation II(X) + II(-J_nu X) in dbar form:

    (beta+1) int |dbar X|^2 (2 cos^2 + beta sin^2) cos^(-beta-2) dmu
    - (beta+1) int (2 cos^2 + beta sin^2)(cos^2 + beta sin^2)
                 |X|^2 |grad alpha|^2 cos^(-beta-4) dmu,

    with X-components taken in the adapted normal frame.
    """
    if not X.normal_flag:
        raise UsageError("the paired second variation requires a normal field")
    quad = quad or DEFAULT_QUADRATURE
    beta = imm.beta if beta is None else beta
    nd = _nodes or _node_state(imm, quad, need_gradient=True, tols=tols)
    geo = nd.geo
    cos = geo.cos_alpha
    _require_symplectic(cos, beta, tols)
    if check_critical:
        res = _criticality_residual(nd, beta)
        if res > tols.criticality_gate:
            raise NotCritical(f"max residual {res:.3e} exceeds {tols.criticality_gate:.0e}")

    e3, e4, _, _, _ = _adapted_arrays(geo, strict=False, tols=tols)
    Xv, dirX = _field_node_data(nd, X)
    x3 = np.einsum("nai,na->ni", dirX, e3)  # <dir_i X, e3>
    x4 = np.einsum("nai,na->ni", dirX, e4)
    dbar2 = (x3[:, 1] + x4[:, 0]) ** 2 + (x4[:, 1] - x3[:, 0]) ** 2

    sin2 = np.maximum(0.0, 1.0 - cos * cos)
    dcos2 = nd.d_dir[:, 0] ** 2 + nd.d_dir[:, 1] ** 2
    # |grad alpha|^2 = |grad cos|^2 / sin^2; at complex points alpha attains a
    # minimum so the gradient vanishes with it.
    grad_alpha2 = np.where(sin2 > tols.complex_sin**2, dcos2 / np.where(sin2 == 0.0, 1.0, sin2), 0.0)
    X2 = _dot(Xv, Xv)

    bp1 = beta + 1.0
    if beta == 0.0:
        return float(2.0 * np.sum(nd.mu * dbar2) - 2.0 * np.sum(nd.mu * X2 * grad_alpha2))
    c2 = cos * cos
    w1 = (2.0 * c2 + beta * sin2) * cos ** (-(beta + 2.0))
    w2 = (2.0 * c2 + beta * sin2) * (c2 + beta * sin2) * cos ** (-(beta + 4.0))
    return float(bp1 * (np.sum(nd.mu * dbar2 * w1) - np.sum(nd.mu * X2 * grad_alpha2 * w2)))


def second_variation_fd(
    imm: Immersion,
    X: VariationField,
    h: float = 1e-3,
    quad: QuadratureSpec | None = None,
    *,
    beta: float | None = None,
    richardson: bool = True,
    tols: Tolerances = DEFAULT_TOLS,
) -> float:
    """Second central difference of t -> L(F + t X)."""
    if h <= 0.0:
        raise UsageError("finite-difference step must be positive")
    quad = quad or DEFAULT_QUADRATURE
    L0 = functional(imm, quad, beta=beta, tols=tols)

    def diff(step):
        Lp = functional(deformed_immersion(imm, X, step), quad, beta=beta, tols=tols)
        Lm = functional(deformed_immersion(imm, X, -step), quad, beta=beta, tols=tols)
        return (Lp - 2.0 * L0 + Lm) / (step * step)

    d = diff(h)
    if not richardson:
        return float(d)
    return float((4.0 * diff(h / 2.0) - d) / 3.0)


# ---------------------------------------------------------------------------
# consolidated report


@dataclass(frozen=True)
class VariationReport:
    """Functional value with first/second variations along one field,
    each computed by every applicable route."""

    L_value: float
    dL_formula: float
    dL_prestokes: float
    dL_fd: float
    d2L_formula: float
    d2L_pair: float
    d2L_fd: float
    critical: bool
    residual: float
    field_name: str = ""

    @property
    def discrepancies(self) -> dict[str, float]:
        out = {
            "dL_formula_vs_prestokes": abs(self.dL_formula - self.dL_prestokes),
            "dL_formula_vs_fd": abs(self.dL_formula - self.dL_fd),
            "dL_prestokes_vs_fd": abs(self.dL_prestokes - self.dL_fd),
        }
        if self.critical:
            out["d2L_formula_vs_fd"] = abs(self.d2L_formula - self.d2L_fd)
            out["d2L_pair_vs_fd"] = abs(self.d2L_pair - self.d2L_fd)
            out["d2L_formula_vs_pair"] = abs(self.d2L_formula - self.d2L_pair)
        return out


def variation_report(
    imm: Immersion,
    X: VariationField,
    quad: QuadratureSpec | None = None,
    *,
    beta: float | None = None,
    fd_step: float = 1e-3,
    tols: Tolerances = DEFAULT_TOLS,
) -> VariationReport:
    """All variation routes on one field.

    On surfaces that fail the criticality gate, the closed second-variation
    formulas are not trusted and the report carries finite differences only
    (d2L_formula and d2L_pair are NaN there).  d2L_pair is reported as the
    paired value minus the companion's diagonal value, so that all three
    second-order entries estimate the same quantity.
    """
    quad = quad or DEFAULT_QUADRATURE
    beta = imm.beta if beta is None else beta
    nd = _node_state(imm, quad, need_gradient=True, tols=tols)
    residual = _criticality_residual(nd, beta)
    critical = residual <= tols.criticality_gate

    L = functional(imm, quad, beta=beta, tols=tols)
    dL_formula = first_variation_formula(imm, X, quad, beta=beta, tols=tols, _nodes=nd)
    dL_prestokes = first_variation_prestokes(imm, X, quad, beta=beta, tols=tols, _nodes=nd)
    dL_fd = first_variation_fd(imm, X, fd_step, quad, beta=beta, tols=tols)
    d2L_fd = second_variation_fd(imm, X, fd_step, quad, beta=beta, tols=tols)
    if critical:
        d2L_formula = second_variation_formula(
            imm, X, quad, beta=beta, check_critical=False, tols=tols, _nodes=nd
        )
        W = j_companion_field(imm, X, tols=tols)
        d2L_companion = second_variation_formula(
            imm, W, quad, beta=beta, check_critical=False, tols=tols, _nodes=nd
        )
        d2L_pair = (
            second_variation_pair(
                imm, X, quad, beta=beta, check_critical=False, tols=tols, _nodes=nd
            )
            - d2L_companion
        )
    else:
        d2L_formula = float("nan")
        d2L_pair = float("nan")
    return VariationReport(
        L_value=L,
        dL_formula=dL_formula,
        dL_prestokes=dL_prestokes,
        dL_fd=dL_fd,
        d2L_formula=d2L_formula,
        d2L_pair=d2L_pair,
        d2L_fd=d2L_fd,
        critical=critical,
        residual=residual,
        field_name=X.name,
    )
