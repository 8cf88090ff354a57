"""Concrete immersions used across the library and its tests.

Everything here evaluates positions and partials analytically; the generic
geometry machinery never sees where a surface came from.  Evaluators accept
scalars or broadcastable arrays and return (F, dF, d2F) with trailing shapes
(4,), (4, 2), (4, 2, 2).
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from .geometry_core import Immersion

SQRT2 = np.sqrt(2.0)


def _prep(x1, x2):
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    x1, x2 = np.broadcast_arrays(x1, x2)
    B = x1.shape
    return x1, x2, np.zeros(B + (4,)), np.zeros(B + (4, 2)), np.zeros(B + (4, 2, 2))


def plane(beta: float = 0.0, half_width: float = 1.0) -> Immersion:
    """The flat holomorphic plane F = (x1, x2, 0, 0)."""

    def eval_(x1, x2):
        x1, x2, F, dF, d2F = _prep(x1, x2)
        F[..., 0] = x1
        F[..., 1] = x2
        dF[..., 0, 0] = 1.0
        dF[..., 1, 1] = 1.0
        return F, dF, d2F

    w = half_width
    return Immersion(eval=eval_, domain=((-w, w), (-w, w)), beta=beta, name="plane")


def linear_graph(a: np.ndarray, beta: float = 0.0, half_width: float = 1.0) -> Immersion:
    """Linear graph F = (x1, x2, a[0] . x, a[1] . x); flat, cos(alpha) constant."""
    a = np.asarray(a, dtype=float).reshape(2, 2)

    def eval_(x1, x2):
        x1, x2, F, dF, d2F = _prep(x1, x2)
        F[..., 0] = x1
        F[..., 1] = x2
        F[..., 2] = a[0, 0] * x1 + a[0, 1] * x2
        F[..., 3] = a[1, 0] * x1 + a[1, 1] * x2
        dF[..., 0, 0] = 1.0
        dF[..., 1, 1] = 1.0
        dF[..., 2, 0] = a[0, 0]
        dF[..., 2, 1] = a[0, 1]
        dF[..., 3, 0] = a[1, 0]
        dF[..., 3, 1] = a[1, 1]
        return F, dF, d2F

    w = half_width
    return Immersion(eval=eval_, domain=((-w, w), (-w, w)), beta=beta, name="linear-graph")


def lagrangian_plane(beta: float = 0.0, half_width: float = 1.0) -> Immersion:
    """F = (x1, 0, x2, 0): the symplectic form vanishes identically on it."""

    def eval_(x1, x2):
        x1, x2, F, dF, d2F = _prep(x1, x2)
        F[..., 0] = x1
        F[..., 2] = x2
        dF[..., 0, 0] = 1.0
        dF[..., 2, 1] = 1.0
        return F, dF, d2F

    w = half_width
    return Immersion(eval=eval_, domain=((-w, w), (-w, w)), beta=beta, name="lagrangian-plane")


def holomorphic_graph(beta: float = 0.0, half_width: float = 1.0) -> Immersion:
    """Graph of w = v^2 over the first complex factor: cos(alpha) = 1, H = 0."""

    def eval_(x1, x2):
        x1, x2, F, dF, d2F = _prep(x1, x2)
        F[..., 0] = x1
        F[..., 1] = x2
        F[..., 2] = x1 * x1 - x2 * x2
        F[..., 3] = 2.0 * x1 * x2
        dF[..., 0, 0] = 1.0
        dF[..., 1, 1] = 1.0
        dF[..., 2, 0] = 2.0 * x1
        dF[..., 2, 1] = -2.0 * x2
        dF[..., 3, 0] = 2.0 * x2
        dF[..., 3, 1] = 2.0 * x1
        d2F[..., 2, 0, 0] = 2.0
        d2F[..., 2, 1, 1] = -2.0
        d2F[..., 3, 0, 1] = 2.0
        d2F[..., 3, 1, 0] = 2.0
        return F, dF, d2F

    w = half_width
    return Immersion(eval=eval_, domain=((-w, w), (-w, w)), beta=beta, name="holomorphic-graph")


def rotational_graph(
    f: Callable,
    fp: Callable,
    fpp: Callable,
    g: Callable,
    gp: Callable,
    gpp: Callable,
    r_range: tuple[float, float],
    beta: float,
    name: str = "rotational-graph",
) -> Immersion:
    """Rotationally symmetric graph F = (r cos(theta), r sin(theta), f(r), g(r)).

    The six callables give the axial heights and their first two radial
    derivatives; each must accept arrays.
    """

    def eval_(r, theta):
        r, theta, F, dF, d2F = _prep(r, theta)
        c, s = np.cos(theta), np.sin(theta)
        F[..., 0] = r * c
        F[..., 1] = r * s
        F[..., 2] = f(r)
        F[..., 3] = g(r)
        dF[..., 0, 0] = c
        dF[..., 1, 0] = s
        dF[..., 2, 0] = fp(r)
        dF[..., 3, 0] = gp(r)
        dF[..., 0, 1] = -r * s
        dF[..., 1, 1] = r * c
        d2F[..., 2, 0, 0] = fpp(r)
        d2F[..., 3, 0, 0] = gpp(r)
        d2F[..., 0, 0, 1] = -s
        d2F[..., 0, 1, 0] = -s
        d2F[..., 1, 0, 1] = c
        d2F[..., 1, 1, 0] = c
        d2F[..., 0, 1, 1] = -r * c
        d2F[..., 1, 1, 1] = -r * s
        return F, dF, d2F

    return Immersion(
        eval=eval_,
        domain=(r_range, (0.0, 2.0 * np.pi)),
        beta=beta,
        periodic=(False, True),
        name=name,
    )


def catenoid(u_range: tuple[float, float] = (-5.0, 5.037), beta: float = 0.0) -> Immersion:
    """The full minimal catenoid F = (sqrt(2) cosh(u / sqrt(2)) e^{i theta}, u / sqrt(2), u / sqrt(2)).

    Both graph sheets joined across the neck circle r = sqrt(2), where
    cos(alpha) = tanh(u / sqrt(2)) changes sign.  Quadrature grids should
    avoid placing a node exactly at u = 0 (use a slightly asymmetric range).
    """

    def eval_(u, theta):
        u, theta, F, dF, d2F = _prep(u, theta)
        w = u / SQRT2
        ch, sh = np.cosh(w), np.sinh(w)
        c, s = np.cos(theta), np.sin(theta)
        F[..., 0] = SQRT2 * ch * c
        F[..., 1] = SQRT2 * ch * s
        F[..., 2] = w
        F[..., 3] = w
        dF[..., 0, 0] = sh * c
        dF[..., 1, 0] = sh * s
        dF[..., 2, 0] = 1.0 / SQRT2
        dF[..., 3, 0] = 1.0 / SQRT2
        dF[..., 0, 1] = -SQRT2 * ch * s
        dF[..., 1, 1] = SQRT2 * ch * c
        d2F[..., 0, 0, 0] = ch * c / SQRT2
        d2F[..., 1, 0, 0] = ch * s / SQRT2
        d2F[..., 0, 0, 1] = -sh * s
        d2F[..., 0, 1, 0] = -sh * s
        d2F[..., 1, 0, 1] = sh * c
        d2F[..., 1, 1, 0] = sh * c
        d2F[..., 0, 1, 1] = -SQRT2 * ch * c
        d2F[..., 1, 1, 1] = -SQRT2 * ch * s
        return F, dF, d2F

    return Immersion(
        eval=eval_,
        domain=(u_range, (0.0, 2.0 * np.pi)),
        beta=beta,
        periodic=(False, True),
        name="catenoid",
    )


def catenoid_normal(u, theta) -> np.ndarray:
    """Analytic unit normal on the catenoid, smooth across the neck.

    nu = (-cos(theta), -sin(theta), sinh(w)/sqrt(2), sinh(w)/sqrt(2)) / cosh(w)
    with w = u / sqrt(2).  Unlike frames derived from seed projection this
    field does not flip orientation where cos(alpha) crosses zero, so it is
    the right section for instability trial fields.
    """
    u = np.asarray(u, dtype=float)
    theta = np.asarray(theta, dtype=float)
    u, theta = np.broadcast_arrays(u, theta)
    w = u / SQRT2
    ch, sh = np.cosh(w), np.sinh(w)
    nu = np.zeros(u.shape + (4,))
    nu[..., 0] = -np.cos(theta)
    nu[..., 1] = -np.sin(theta)
    nu[..., 2] = sh / SQRT2
    nu[..., 3] = sh / SQRT2
    return nu / ch[..., None]
