"""SVG figure output for profile families.

Figures are rendered with the Agg backend and a pinned hash salt so repeated
runs of the same command produce byte-identical files.
"""

from __future__ import annotations

import numpy as np

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

plt.rcParams["svg.hashsalt"] = "betalab"

_SQRT2 = np.sqrt(2.0)


def _save(fig, path: str) -> None:
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def save_profile_figure(profile, path: str) -> None:
    """Single-profile panel trio: height, slope, Kahler cosine against r."""
    r = profile.r_grid
    fig, axes = plt.subplots(3, 1, figsize=(6.0, 7.5), sharex=True)
    axes[0].plot(r, profile.f, label="f")
    axes[0].plot(r, profile.g, label="g", linestyle="--")
    axes[0].set_ylabel("height")
    axes[0].legend(loc="best")
    axes[1].plot(r, profile.fp, label="f'")
    axes[1].plot(r, profile.gp, label="g'", linestyle="--")
    axes[1].set_ylabel("slope")
    axes[1].legend(loc="best")
    axes[2].plot(r, profile.cos_alpha)
    axes[2].set_ylabel("cos(alpha)")
    axes[2].set_xlabel("r")
    axes[0].set_title(f"rotational profile, beta = {profile.beta:g}")
    fig.tight_layout()
    _save(fig, path)


def save_overlay_figure(profiles, path: str, *, catenoid_reference: bool = False) -> None:
    """Height curves f(r) of a profile family on shared axes.

    With `catenoid_reference`, the beta = 0 limit curve arccosh(r / sqrt(2))
    is drawn dashed, anchored to zero at the first radius where it exists.
    """
    fig, ax = plt.subplots(figsize=(6.5, 4.5))
    for p in profiles:
        ax.plot(p.r_grid, p.f, label=f"beta = {p.beta:g}")
    if catenoid_reference and profiles:
        r_all = profiles[0].r_grid
        mask = r_all > _SQRT2 * (1.0 + 1e-9)
        if mask.any():
            r = r_all[mask]
            f_cat = np.arccosh(r / _SQRT2)
            ax.plot(r, f_cat - f_cat[0], "k--", linewidth=1.0, label="catenoid limit")
    ax.set_xlabel("r")
    ax.set_ylabel("f(r) - f(eps)")
    ax.set_title("rotational family")
    ax.legend(loc="best")
    fig.tight_layout()
    _save(fig, path)
