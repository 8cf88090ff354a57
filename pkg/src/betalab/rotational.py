"""The rotationally symmetric critical family F = (r cos t, r sin t, f(r), g(r)).

The slope pair (f', g') is recovered from the first integrals
c1 = r f' A^((beta-1)/2), c2 = r g' A^((beta-1)/2), A = 1 + f'^2 + g'^2,
by solving the scalar equation r m(rho) = sqrt(c1^2 + c2^2) for the slope
magnitude rho = sqrt(f'^2 + g'^2), where m(rho) = rho (1 + rho^2)^((beta-1)/2)
is strictly increasing for beta >= 0.  The solve runs in u = log(rho), which
stays finite even where rho overflows a double (small beta near the origin).

Also here: closed-form checks (beta = 1 log profile, beta = 0 catenoid),
the two-sided asymptotic expansions, the beta -> infinity and beta -> 0
limit bounds, the angle PDE identities, and a beta-continuation sweep.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_TOLS, Tolerances
from .errors import (
    AsymptoticMismatch,
    BetaLabError,
    BoundViolation,
    InvalidBeta,
    NoSolution,
    UsageError,
)
from .geometry_core import Immersion, laplace_beltrami_radial
from .surfaces import rotational_graph


# ---------------------------------------------------------------------------
# slope equation


def _softplus2(u: np.ndarray) -> np.ndarray:
    """log(1 + exp(2u)) without overflow."""
    return np.where(u > 0.0, 2.0 * u, 0.0) + np.log1p(np.exp(-2.0 * np.abs(u)))


def _sigmoid2(u: np.ndarray) -> np.ndarray:
    """1 / (1 + exp(-2u)) without overflow."""
    out = np.empty_like(u)
    pos = u >= 0.0
    out[pos] = 1.0 / (1.0 + np.exp(-2.0 * u[pos]))
    e = np.exp(2.0 * u[~pos])
    out[~pos] = e / (1.0 + e)
    return out


def _solve_rho(r: np.ndarray, beta: float, c: float, tol: float) -> np.ndarray:
    """Unique rho >= 0 with r rho (1 + rho^2)^((beta-1)/2) = c, vectorized."""
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0.0):
        raise UsageError("radii must be positive")
    if beta < 0.0:
        raise InvalidBeta(f"beta = {beta} < 0")
    if c == 0.0:
        return np.zeros_like(r)
    mt = c / r
    if beta == 0.0:
        # m(rho) = rho / sqrt(1 + rho^2) < 1: bounded, explicit inverse.
        if np.any(mt >= 1.0):
            bad = float(r[np.argmax(mt >= 1.0)])
            raise NoSolution(
                f"no slope at r = {bad:g}: beta = 0 requires r > {c:g} (neck radius)"
            )
        return mt / np.sqrt(1.0 - mt * mt)
    if beta == 1.0:
        return mt.copy()

    t = np.log(mt)
    k = 0.5 * (beta - 1.0)

    def phi(u):
        return u + k * _softplus2(u) - t

    # Bracket: the root sits between the small-rho (u = t) and large-rho
    # (u = t / beta) regimes; expand outward until the signs straddle.
    lo = np.minimum(t, t / beta) - 1.0
    hi = np.maximum(t, t / beta) + 1.0
    step = np.ones_like(r)
    for _ in range(200):
        mask = phi(lo) > 0.0
        if not mask.any():
            break
        lo[mask] -= step[mask]
        step[mask] *= 2.0
    step = np.ones_like(r)
    for _ in range(200):
        mask = phi(hi) < 0.0
        if not mask.any():
            break
        hi[mask] += step[mask]
        step[mask] *= 2.0

    for _ in range(110):
        mid = 0.5 * (lo + hi)
        neg = phi(mid) < 0.0
        lo = np.where(neg, mid, lo)
        hi = np.where(neg, hi, mid)
    u = 0.5 * (lo + hi)
    for _ in range(3):
        u = u - phi(u) / (1.0 + (beta - 1.0) * _sigmoid2(u))
    return np.exp(u)


def solve_slope(r, beta: float, c1: float, c2: float, *, tols: Tolerances = DEFAULT_TOLS):
    """Slopes (f', g') at radius r (scalar or array) for first integrals (c1, c2)."""
    r_arr = np.atleast_1d(np.asarray(r, dtype=float))
    c = float(np.hypot(c1, c2))
    rho = _solve_rho(r_arr, beta, c, tols.slope_bisect)
    if c == 0.0:
        fp = gp = np.zeros_like(r_arr)
    else:
        fp, gp = c1 * rho / c, c2 * rho / c
    if np.isscalar(r) or np.ndim(r) == 0:
        return float(fp[0]), float(gp[0])
    return fp, gp


def _rho_prime(r: np.ndarray, rho: np.ndarray, beta: float) -> np.ndarray:
    """d(rho)/dr from differentiating r m(rho) = const:
    rho' = -rho (1 + rho^2) / (r (1 + beta rho^2))."""
    return -rho * (1.0 + rho * rho) / (r * (1.0 + beta * rho * rho))


def catenoid_slope(r) -> np.ndarray:
    """f' = 1 / sqrt(r^2 - 2), the beta = 0, c1 = c2 = 1 solution."""
    r = np.asarray(r, dtype=float)
    return 1.0 / np.sqrt(r * r - 2.0)


# ---------------------------------------------------------------------------
# profiles


def _cumulative_simpson(y: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Cumulative integral on a (possibly nonuniform) grid by local parabolas.

    Each interval is integrated under the quadratic through its surrounding
    node triple, so geometric grids lose no order of accuracy.
    """
    n = x.size
    out = np.zeros(n)
    if n < 2:
        return out
    if n == 2:
        out[1] = 0.5 * (y[0] + y[1]) * (x[1] - x[0])
        return out
    h0 = x[1:-1] - x[:-2]
    h1 = x[2:] - x[1:-1]
    f01 = (y[1:-1] - y[:-2]) / h0
    f012 = ((y[2:] - y[1:-1]) / h1 - f01) / (h0 + h1)
    left = y[:-2] * h0 + 0.5 * f01 * h0 * h0 - f012 * h0**3 / 6.0
    right = y[:-2] * h1 + f01 * h1 * (h0 + 0.5 * h1) + f012 * (
        0.5 * h0 * h1 * h1 + h1**3 / 3.0
    )
    # Interval i -> i+1 gets the left-piece of the triple at i+1 when
    # available, else the right-piece of the triple at i.
    seg = np.empty(n - 1)
    seg[:-1] = left
    seg[-1] = right[-1]
    # Average overlapping estimates in the interior for symmetry.
    seg[1:-1] = 0.5 * (left[1:] + right[:-1])
    out[1:] = np.cumsum(seg)
    return out


@dataclass(frozen=True)
class RotationalProfile:
    """Sampled rotationally symmetric solution for one (beta, c1, c2)."""

    beta: float
    c1: float
    c2: float
    r_grid: np.ndarray
    fp: np.ndarray
    gp: np.ndarray
    f: np.ndarray
    g: np.ndarray
    cos_alpha: np.ndarray


def profile_grid(eps: float, r_max: float, n: int) -> np.ndarray:
    """Radial grid: geometric once the range is wide enough that a uniform
    step underresolves the steep 1/r-type slopes near eps."""
    if not 0.0 < eps < r_max:
        raise UsageError("need 0 < eps < r_max")
    if n < 9:
        raise UsageError("need at least 9 grid nodes")
    if n % 2 == 0:
        n += 1
    if r_max / eps >= 50.0:
        return np.geomspace(eps, r_max, n)
    return np.linspace(eps, r_max, n)


def _log_first_integral(r: np.ndarray, rho: np.ndarray, beta: float) -> np.ndarray:
    """log(r m(rho)), numerically stable for extreme rho."""
    with np.errstate(divide="ignore"):
        lr = np.log(rho)
    return np.log(r) + lr + 0.5 * (beta - 1.0) * np.log1p(rho * rho)


def profile_on_grid(
    beta: float,
    c1: float,
    c2: float,
    r_grid: np.ndarray,
    f0: float = 0.0,
    g0: float = 0.0,
    *,
    tols: Tolerances = DEFAULT_TOLS,
) -> RotationalProfile:
    """Solve the slope equation on an explicit grid and integrate the heights."""
    r = np.asarray(r_grid, dtype=float)
    if r.ndim != 1 or r.size < 2 or np.any(np.diff(r) <= 0.0):
        raise UsageError("r_grid must be strictly increasing, length >= 2")
    c = float(np.hypot(c1, c2))
    rho = _solve_rho(r, beta, c, tols.slope_bisect)
    if c == 0.0:
        fp = np.zeros_like(r)
        gp = np.zeros_like(r)
    else:
        fp = c1 * rho / c
        gp = c2 * rho / c
        res = np.abs(np.exp(_log_first_integral(r, rho, beta)) - c) / c
        worst = float(np.max(res))
        if worst > tols.first_integral_rel:
            raise BetaLabError(
                f"first-integral residual {worst:.3e} exceeds {tols.first_integral_rel:.0e}"
            )
    cos_alpha = np.exp(-0.5 * np.log1p(rho * rho))
    f = f0 + _cumulative_simpson(fp, r)
    g = g0 + _cumulative_simpson(gp, r)
    return RotationalProfile(
        beta=beta, c1=c1, c2=c2, r_grid=r, fp=fp, gp=gp, f=f, g=g, cos_alpha=cos_alpha
    )


def solve_profile(
    beta: float,
    c1: float,
    c2: float,
    eps: float,
    r_max: float,
    n: int,
    f0: float = 0.0,
    g0: float = 0.0,
    *,
    tols: Tolerances = DEFAULT_TOLS,
) -> RotationalProfile:
    """Profile on [eps, r_max] with heights anchored at f(eps) = f0, g(eps) = g0."""
    return profile_on_grid(beta, c1, c2, profile_grid(eps, r_max, n), f0, g0, tols=tols)


def validate_profile(profile: RotationalProfile, *, tols: Tolerances = DEFAULT_TOLS) -> dict:
    """Nodewise invariant metrics: first-integral residuals, slope
    proportionality, cos(alpha) consistency."""
    r, fp, gp = profile.r_grid, profile.fp, profile.gp
    beta = profile.beta
    rho = np.hypot(fp, gp)
    c = float(np.hypot(profile.c1, profile.c2))
    if c == 0.0:
        fi_rel = float(np.max(np.abs(rho)))
    else:
        fi_rel = float(np.max(np.abs(np.exp(_log_first_integral(r, rho, beta)) - c)) / c)
    prop = float(np.max(np.abs(profile.c2 * fp - profile.c1 * gp)))
    cos_ref = np.exp(-0.5 * np.log1p(rho * rho))
    cos_err = float(np.max(np.abs(profile.cos_alpha - cos_ref)))
    return {
        "first_integral_rel": fi_rel,
        "slope_proportionality": prop,
        "cos_alpha_abs": cos_err,
    }


def rotational_immersion(profile: RotationalProfile) -> Immersion:
    """The profile as a full immersion, with slopes re-solved analytically.

    Derivative data comes from the slope equation itself (exact up to root
    tolerance), so the immersion is not limited by grid interpolation; only
    the height values f, g are interpolated, and those are a translation in
    the two axis coordinates that no curvature or angle quantity sees.
    """
    beta, c1, c2 = profile.beta, profile.c1, profile.c2
    c = float(np.hypot(c1, c2))
    r_grid, f_grid, g_grid = profile.r_grid, profile.f, profile.g
    tol = DEFAULT_TOLS.slope_bisect

    def rho_of(r):
        return _solve_rho(np.asarray(r, dtype=float), beta, c, tol)

    if c == 0.0:
        def fp(r):
            return np.zeros_like(np.asarray(r, dtype=float))

        gp = fp

        def fpp(r):
            return np.zeros_like(np.asarray(r, dtype=float))

        gpp = fpp
    else:
        def fp(r):
            return c1 * rho_of(r) / c

        def gp(r):
            return c2 * rho_of(r) / c

        def fpp(r):
            r = np.asarray(r, dtype=float)
            return c1 * _rho_prime(r, rho_of(r), beta) / c

        def gpp(r):
            r = np.asarray(r, dtype=float)
            return c2 * _rho_prime(r, rho_of(r), beta) / c

    def f(r):
        return np.interp(np.asarray(r, dtype=float), r_grid, f_grid)

    def g(r):
        return np.interp(np.asarray(r, dtype=float), r_grid, g_grid)

    return rotational_graph(
        f, fp, fpp, g, gp, gpp,
        (float(r_grid[0]), float(r_grid[-1])),
        beta,
        name=f"rotational(beta={beta:g})",
    )


# ---------------------------------------------------------------------------
# asymptotics (c1 = c2 = 1 normalization)


def asymptotic_far(r, beta: float) -> np.ndarray:
    """Two-term large-radius slope: f' = 1/r - (beta - 1)/r^3."""
    r = np.asarray(r, dtype=float)
    return 1.0 / r - (beta - 1.0) / r**3


def near_coefficients(beta: float) -> tuple[float, float]:
    """(a, b) with f' = a r^(-1/beta) + b r^(1/beta) + o(r^(1/beta)) as r -> 0."""
    if beta <= 0.0:
        raise InvalidBeta("near-origin expansion needs beta > 0")
    a = 2.0 ** ((1.0 - beta) / (2.0 * beta))
    b = -((beta - 1.0) / beta) * 2.0 ** (-(3.0 * beta + 1.0) / (2.0 * beta))
    return a, b


def asymptotic_near(r, beta: float) -> np.ndarray:
    """Two-term small-radius slope (c1 = c2 = 1)."""
    a, b = near_coefficients(beta)
    r = np.asarray(r, dtype=float)
    return a * r ** (-1.0 / beta) + b * r ** (1.0 / beta)


@dataclass(frozen=True)
class AsymptoticsReport:
    """Windowed expansion errors at the grid extremes of one profile."""

    beta: float
    far_r: np.ndarray
    far_E: np.ndarray
    near_r: np.ndarray
    near_rel: np.ndarray
    fitted_near_b: float
    predicted_near_b: float
    far_checked: bool
    near_checked: bool


def verify_asymptotics(
    profile: RotationalProfile,
    *,
    tols: Tolerances = DEFAULT_TOLS,
) -> AsymptoticsReport:
    """Check both expansions against the solved slopes at the grid extremes.

    Far side (needs r_max >= 1e3): E_far(r) = r^3 (f' - 1/r + (beta-1)/r^3)
    must shrink in magnitude across the three largest nodes and satisfy
    |E_far(r_max)| < 0.01 for beta <= 5.  Near side (needs beta > 0 and
    eps <= 0.011): the relative error of the two-term truncation must be
    below tolerance at the node nearest 1e-2 and keep shrinking toward the
    smallest node.  The second near coefficient is also fitted from the
    smallest node and reported next to its closed form.
    """
    if not (np.isclose(profile.c1, 1.0) and np.isclose(profile.c2, 1.0)):
        raise UsageError("asymptotic expansions are normalized to c1 = c2 = 1")
    beta = profile.beta
    r, fp = profile.r_grid, profile.fp
    floor = tols.decrease_floor

    far_checked = bool(r[-1] >= 999.0)
    far_r = r[-3:]
    far_E = far_r**3 * (fp[-3:] - asymptotic_far(far_r, beta))
    if far_checked:
        mags = np.abs(far_E)
        if not (mags[0] + floor > mags[1] and mags[1] + floor > mags[2]):
            raise AsymptoticMismatch(
                f"far-side error not decreasing at beta = {beta:g}: |E| = {mags}"
            )
        if beta <= 5.0 and mags[-1] >= 0.01:
            raise AsymptoticMismatch(
                f"far-side error {mags[-1]:.3e} at r = {far_r[-1]:g} exceeds 0.01"
            )

    near_checked = bool(beta > 0.0 and r[0] <= 0.011)
    if near_checked:
        i_window = int(np.argmin(np.abs(r - tols.far_window)))
        idx = np.unique([0, max(0, i_window // 2), i_window])
        near_r = r[idx]
        trunc = asymptotic_near(near_r, beta)
        near_rel = np.abs(fp[idx] - trunc) / np.abs(fp[idx])
        if near_rel[-1] >= tols.near_rel:
            raise AsymptoticMismatch(
                f"near-side relative error {near_rel[-1]:.3e} at r = {near_r[-1]:g} "
                f"exceeds {tols.near_rel:g}"
            )
        if not np.all(near_rel[:-1] <= near_rel[1:] + floor):
            raise AsymptoticMismatch(
                f"near-side error not shrinking toward the origin: {near_rel}"
            )
        a, b_pred = near_coefficients(beta)
        b_fit = float((fp[0] - a * r[0] ** (-1.0 / beta)) / r[0] ** (1.0 / beta))
    else:
        near_r = r[:3]
        near_rel = np.full(near_r.shape, np.nan)
        b_fit = float("nan")
        b_pred = near_coefficients(beta)[1] if beta > 0.0 else float("nan")
    return AsymptoticsReport(
        beta=beta,
        far_r=far_r,
        far_E=far_E,
        near_r=near_r,
        near_rel=near_rel,
        fitted_near_b=b_fit,
        predicted_near_b=b_pred,
        far_checked=far_checked,
        near_checked=near_checked,
    )


# ---------------------------------------------------------------------------
# angle PDE identities


@dataclass(frozen=True)
class PdeResiduals:
    """Interior-max residuals of the two angle identities on a profile."""

    res_cos: float
    res_inv_cos: float
    h_max: float
    n: int
    threshold: float
    passed: bool


def angle_pde_check(
    profile: RotationalProfile, *, tols: Tolerances = DEFAULT_TOLS
) -> PdeResiduals:
    """Residuals of the cos(alpha) Laplacian identity and its 1/cos form.

    Delta cos = 2 beta sin^2 / (cos (cos^2 + beta sin^2)) |grad alpha|^2
                - 2 cos |grad alpha|^2,
    Delta (1/cos) = 2 |grad alpha|^2 / (cos (cos^2 + beta sin^2)),

    with all derivatives taken by central differences on the radial grid, so
    the residual is pure FD truncation and must scale like h^2.
    """
    r = profile.r_grid
    beta = profile.beta
    cos = profile.cos_alpha
    A = 1.0 + profile.fp**2 + profile.gp**2
    sin2 = 1.0 - cos * cos
    alpha = np.arccos(np.clip(cos, -1.0, 1.0))
    dalpha = np.gradient(alpha, r)
    grad2 = dalpha * dalpha / A

    lhs1 = laplace_beltrami_radial(cos, A, r)
    rhs1 = 2.0 * beta * sin2 / (cos * (cos * cos + beta * sin2)) * grad2 - 2.0 * cos * grad2
    lhs2 = laplace_beltrami_radial(1.0 / cos, A, r)
    rhs2 = 2.0 * grad2 / (cos * (cos * cos + beta * sin2))

    interior = slice(2, -2)
    res1 = float(np.max(np.abs(lhs1[interior] - rhs1[interior])))
    res2 = float(np.max(np.abs(lhs2[interior] - rhs2[interior])))
    h_max = float(np.max(np.diff(r)))
    threshold = max(tols.pde_residual, 2.5 * h_max * h_max)
    return PdeResiduals(
        res_cos=res1,
        res_inv_cos=res2,
        h_max=h_max,
        n=r.size,
        threshold=threshold,
        passed=(res1 < threshold and res2 < threshold),
    )


# ---------------------------------------------------------------------------
# beta limits


@dataclass(frozen=True)
class LimitBoundsReport:
    """Outcome of the beta -> infinity and beta -> 0 bound checks."""

    interval: tuple[float, float]
    decay_betas: tuple
    decay_margin: float
    catenoid_betas: tuple
    sup_distances: tuple
    slope_sq_bound: float
    max_slope_sq: float
    divergence_r0: float
    divergence_values: tuple
    passed: bool


def limit_bounds_check(
    beta_list,
    interval: tuple[float, float],
    *,
    n: int = 513,
    r0: float = 1.0,
    tols: Tolerances = DEFAULT_TOLS,
) -> LimitBoundsReport:
    """Proof bounds for the two beta limits of the c1 = c2 = 1 family.

    beta > 1 entries must obey f' <= ((beta - 1) r)^(-1/3) nodewise.  Entries
    with beta < 1 must approach the catenoid monotonically in sup norm as
    beta decreases, obey (f')^2 <= 3 / (A^2 - 2) on [A, B] with A > sqrt(2),
    and blow up monotonically at the fixed inner radius r0 <= sqrt(2).
    """
    A_, B_ = float(interval[0]), float(interval[1])
    if not A_ < B_:
        raise UsageError("interval must be increasing")
    betas = sorted(float(b) for b in beta_list)
    small = [b for b in betas if b < 1.0]
    large = [b for b in betas if b > 1.0]
    if small and A_ <= np.sqrt(2.0):
        raise UsageError("the beta -> 0 comparison needs interval start > sqrt(2)")
    if not 0.0 < r0 <= np.sqrt(2.0):
        raise UsageError("divergence marker radius must sit in (0, sqrt(2)]")
    r = np.linspace(A_, B_, n)
    c = np.sqrt(2.0)

    decay_margin = np.inf
    for b in large:
        rho = _solve_rho(r, b, c, tols.slope_bisect)
        fp = rho / np.sqrt(2.0)
        bound = ((b - 1.0) * r) ** (-1.0 / 3.0)
        gap = bound - fp
        if np.any(gap < -1e-12):
            i = int(np.argmin(gap))
            raise BoundViolation(
                f"decay bound broken at beta = {b:g}, r = {r[i]:g}: "
                f"f' = {fp[i]:.6f} > {bound[i]:.6f}"
            )
        decay_margin = min(decay_margin, float(np.min(gap)))

    cat = catenoid_slope(r) if small else np.zeros_like(r)
    sq_bound = 3.0 / (A_ * A_ - 2.0) if A_ * A_ > 2.0 else float("inf")
    sups = []
    max_sq = 0.0
    for b in small:
        rho = _solve_rho(r, b, c, tols.slope_bisect) if b > 0.0 else None
        fp = rho / np.sqrt(2.0) if b > 0.0 else cat
        sq = float(np.max(fp * fp))
        max_sq = max(max_sq, sq)
        if sq > sq_bound + 1e-12:
            raise BoundViolation(
                f"slope-square bound broken at beta = {b:g}: {sq:.6f} > {sq_bound:.6f}"
            )
        sups.append(float(np.max(np.abs(fp - cat))))
    # Monotone convergence: smaller beta, smaller sup distance.
    for (b_hi, s_hi), (b_lo, s_lo) in zip(
        zip(small[::-1], sups[::-1]), zip(small[-2::-1], sups[-2::-1])
    ):
        if not s_lo < s_hi + tols.decrease_floor:
            raise BoundViolation(
                f"catenoid distance not shrinking: sup at beta = {b_lo:g} is "
                f"{s_lo:.3e}, at beta = {b_hi:g} is {s_hi:.3e}"
            )

    div_vals = []
    div_betas = [b for b in small if b > 0.0]
    for b in div_betas:
        rho0 = _solve_rho(np.atleast_1d(r0), b, c, tols.slope_bisect)[0]
        div_vals.append(float(rho0 / np.sqrt(2.0)))
    for (b_hi, v_hi), (b_lo, v_lo) in zip(
        zip(div_betas[::-1], div_vals[::-1]), zip(div_betas[-2::-1], div_vals[-2::-1])
    ):
        if not v_lo > v_hi - tols.decrease_floor:
            raise BoundViolation(
                f"inner slope not blowing up: f'({r0:g}) = {v_lo:.4g} at beta = {b_lo:g} "
                f"versus {v_hi:.4g} at beta = {b_hi:g}"
            )

    return LimitBoundsReport(
        interval=(A_, B_),
        decay_betas=tuple(large),
        decay_margin=float(decay_margin) if large else float("nan"),
        catenoid_betas=tuple(small),
        sup_distances=tuple(sups),
        slope_sq_bound=sq_bound,
        max_slope_sq=max_sq,
        divergence_r0=r0,
        divergence_values=tuple(div_vals),
        passed=True,
    )


# ---------------------------------------------------------------------------
# continuation sweep


@dataclass(frozen=True)
class SweepResult:
    """A beta-continuation family on a shared radial grid."""

    beta_grid: tuple
    profiles: tuple
    step_sup: tuple
    continuity: float


def beta_sweep(
    beta_grid,
    c1: float,
    c2: float,
    r_grid,
    *,
    tols: Tolerances = DEFAULT_TOLS,
) -> SweepResult:
    """Solve one profile per beta and report the slope continuity metric
    sup_r |f'_{beta_{k+1}} - f'_{beta_k}| between neighbours."""
    betas = [float(b) for b in beta_grid]
    if any(b < 0.0 for b in betas):
        raise InvalidBeta("sweep betas must be nonnegative")
    if sorted(betas) != betas:
        raise UsageError("beta grid must be increasing")
    r = np.asarray(r_grid, dtype=float)
    profiles = [profile_on_grid(b, c1, c2, r, tols=tols) for b in betas]
    steps = [
        float(np.max(np.abs(q.fp - p.fp))) for p, q in zip(profiles[:-1], profiles[1:])
    ]
    return SweepResult(
        beta_grid=tuple(betas),
        profiles=tuple(profiles),
        step_sup=tuple(steps),
        continuity=float(max(steps)) if steps else 0.0,
    )
