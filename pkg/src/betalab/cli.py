"""Command-line interface: solve, sweep, verify, variation, symbol.

Output contract: delimited tables use the fixed header
`r,fp,gp,f,g,cos_alpha,residual` with round-trippable float formatting;
reports are JSON with the tolerance recorded next to every pass/fail entry,
and identical configurations produce byte-identical files.  Exit codes:
0 all checks pass, 1 a check failed, 2 usage error, 3 numerical error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, fields as dataclass_fields

import numpy as np

from .config import DEFAULT_SEED, DEFAULT_TOLS, SEED_ENV_VAR, Tolerances
from .errors import (
    AsymptoticMismatch,
    BetaLabError,
    BoundViolation,
    EllipticityViolation,
    InvalidBeta,
    UsageError,
)
from .geometry_core import el_residual_batch, evaluate_geometry
from .rotational import (
    RotationalProfile,
    angle_pde_check,
    beta_sweep,
    limit_bounds_check,
    profile_grid,
    rotational_immersion,
    solve_profile,
    validate_profile,
    verify_asymptotics,
)
from .surfaces import holomorphic_graph, plane
from .symbol import ellipticity_check, symbol_matrix, symbol_quadratic
from .variation import (
    QuadratureSpec,
    constant_bump,
    deformed_immersion,
    field_c1_norm,
    normal_bump,
    random_normal_fields,
    variation_report,
)

CSV_HEADER = "r,fp,gp,f,g,cos_alpha,residual"

_USAGE_ERRORS = (UsageError, InvalidBeta)
_CHECK_ERRORS = (AsymptoticMismatch, BoundViolation, EllipticityViolation)


@dataclass
class RunConfig:
    """Merged run options: flags override config-file keys override defaults."""

    subcommand: str = ""
    beta: float = 2.0
    betas: str = "0.5,1,2,5"
    c1: float = 1.0
    c2: float = 1.0
    eps: float = 1.0
    r_max: float = 10.0
    samples: int = 257
    f0: float = 0.0
    g0: float = 0.0
    fields: int = 5
    out: str = "."
    format: str = "csv"
    seed: int = DEFAULT_SEED
    profile_csv: str = ""

    def beta_list(self) -> list[float]:
        try:
            return [float(tok) for tok in self.betas.split(",") if tok.strip()]
        except ValueError as exc:
            raise UsageError(f"cannot parse beta list {self.betas!r}") from exc


_FIELD_TYPES = {f.name: f.type for f in dataclass_fields(RunConfig)}


def _parse_config_file(path: str) -> dict:
    values: dict = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from exc
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value, got {raw.strip()!r}")
        key, val = (part.strip() for part in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in _FIELD_TYPES or key == "subcommand":
            raise UsageError(f"{path}:{lineno}: unknown config key {key!r}")
        caster = {"float": float, "int": int, "str": str}[_FIELD_TYPES[key]]
        try:
            values[key] = caster(val)
        except ValueError as exc:
            raise UsageError(f"{path}:{lineno}: bad value for {key}: {val!r}") from exc
    return values


_SAMPLES_DEFAULT = {"verify": 4097, "symbol": 100}


def _merge_config(args: argparse.Namespace) -> tuple[RunConfig, Tolerances]:
    cfg = RunConfig(subcommand=args.subcommand)
    explicit = set()
    if getattr(args, "config", None):
        for key, val in _parse_config_file(args.config).items():
            setattr(cfg, key, val)
            explicit.add(key)
    for f in dataclass_fields(RunConfig):
        flag_val = getattr(args, f.name, None)
        if flag_val is not None:
            setattr(cfg, f.name, flag_val)
            explicit.add(f.name)
    if "samples" not in explicit:
        cfg.samples = _SAMPLES_DEFAULT.get(args.subcommand, cfg.samples)
    env_seed = os.environ.get(SEED_ENV_VAR)
    if env_seed is not None:
        try:
            cfg.seed = int(env_seed)
        except ValueError as exc:
            raise UsageError(f"{SEED_ENV_VAR} must be an integer, got {env_seed!r}") from exc
    overrides = {}
    for item in getattr(args, "tol", None) or []:
        if "=" not in item:
            raise UsageError(f"--tol expects name=value, got {item!r}")
        name, val = item.split("=", 1)
        try:
            overrides[name.strip()] = float(val)
        except ValueError as exc:
            raise UsageError(f"--tol {name}: bad value {val!r}") from exc
    try:
        tols = DEFAULT_TOLS.with_overrides(**overrides) if overrides else DEFAULT_TOLS
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from exc
    return cfg, tols


# ---------------------------------------------------------------------------
# serialization helpers


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    # bool first: Python bool is an int subclass and must stay a JSON boolean
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    return obj


def _write_json(path: str, payload: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps(_jsonable(payload), sort_keys=True, indent=2))
        fh.write("\n")


def _profile_rows(profile: RotationalProfile):
    from .rotational import _log_first_integral

    rho = np.hypot(profile.fp, profile.gp)
    c = float(np.hypot(profile.c1, profile.c2))
    if c == 0.0:
        residual = np.abs(rho)
    else:
        residual = np.abs(np.exp(_log_first_integral(profile.r_grid, rho, profile.beta)) - c) / c
    for i in range(profile.r_grid.size):
        yield (
            profile.r_grid[i],
            profile.fp[i],
            profile.gp[i],
            profile.f[i],
            profile.g[i],
            profile.cos_alpha[i],
            residual[i],
        )


def _write_profile_csv(path: str, profile: RotationalProfile) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(CSV_HEADER + "\n")
        for row in _profile_rows(profile):
            fh.write(",".join(repr(float(v)) for v in row) + "\n")


def _read_profile_csv(path: str, beta: float, c1: float, c2: float) -> RotationalProfile:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            header = fh.readline().strip()
            if header != CSV_HEADER:
                raise UsageError(f"{path}: expected header {CSV_HEADER!r}, got {header!r}")
            data = np.loadtxt(fh, delimiter=",", ndmin=2)
    except OSError as exc:
        raise UsageError(f"cannot read profile CSV {path}: {exc}") from exc
    if data.shape[1] != 7:
        raise UsageError(f"{path}: expected 7 columns, got {data.shape[1]}")
    return RotationalProfile(
        beta=beta,
        c1=c1,
        c2=c2,
        r_grid=data[:, 0],
        fp=data[:, 1],
        gp=data[:, 2],
        f=data[:, 3],
        g=data[:, 4],
        cos_alpha=data[:, 5],
    )


def _check(name: str, passed: bool, tolerance, **values) -> dict:
    entry = {"name": name, "passed": bool(passed), "tolerance": tolerance}
    entry.update(values)
    return entry


# ---------------------------------------------------------------------------
# subcommands


def _cmd_solve(cfg: RunConfig, tols: Tolerances) -> int:
    profile = solve_profile(
        cfg.beta, cfg.c1, cfg.c2, cfg.eps, cfg.r_max, cfg.samples, cfg.f0, cfg.g0, tols=tols
    )
    os.makedirs(cfg.out, exist_ok=True)
    csv_path = os.path.join(cfg.out, f"profile_beta{cfg.beta:g}.csv")
    _write_profile_csv(csv_path, profile)
    written = [csv_path]
    if cfg.format == "svg":
        from .plots import save_overlay_figure

        svg_path = os.path.join(cfg.out, f"profile_beta{cfg.beta:g}.svg")
        reference = cfg.beta < 0.5 and cfg.c1 == 1.0 and cfg.c2 == 1.0
        save_overlay_figure([profile], svg_path, catenoid_reference=reference)
        written.append(svg_path)
    elif cfg.format == "json":
        json_path = os.path.join(cfg.out, f"profile_beta{cfg.beta:g}.json")
        _write_json(json_path, {"beta": cfg.beta, "metrics": validate_profile(profile, tols=tols)})
        written.append(json_path)
    for path in written:
        print(path)
    return 0


def _cmd_sweep(cfg: RunConfig, tols: Tolerances) -> int:
    from .plots import save_overlay_figure

    betas = cfg.beta_list()
    grid = profile_grid(cfg.eps, cfg.r_max, cfg.samples)
    result = beta_sweep(betas, cfg.c1, cfg.c2, grid, tols=tols)
    os.makedirs(cfg.out, exist_ok=True)
    written = []
    for prof in result.profiles:
        path = os.path.join(cfg.out, f"sweep_beta{prof.beta:g}.csv")
        _write_profile_csv(path, prof)
        written.append(path)
    svg_path = os.path.join(cfg.out, "sweep_overlay.svg")
    save_overlay_figure(result.profiles, svg_path, catenoid_reference=min(betas) < 0.5)
    written.append(svg_path)
    json_path = os.path.join(cfg.out, "sweep_continuity.json")
    _write_json(
        json_path,
        {
            "beta_grid": list(result.beta_grid),
            "step_sup": list(result.step_sup),
            "continuity": result.continuity,
        },
    )
    written.append(json_path)
    for path in written:
        print(path)
    return 0


def _cmd_verify(cfg: RunConfig, tols: Tolerances) -> int:
    checks = []
    beta = cfg.beta

    if cfg.profile_csv:
        profile = _read_profile_csv(cfg.profile_csv, beta, cfg.c1, cfg.c2)
        metrics = validate_profile(profile, tols=tols)
        checks.append(
            _check(
                "csv_first_integral",
                metrics["first_integral_rel"] <= tols.first_integral_rel,
                tols.first_integral_rel,
                value=metrics["first_integral_rel"],
            )
        )
        checks.append(
            _check(
                "csv_slope_proportionality",
                metrics["slope_proportionality"] <= 1e-12,
                1e-12,
                value=metrics["slope_proportionality"],
            )
        )
    else:
        profile = solve_profile(
            beta, cfg.c1, cfg.c2, cfg.eps, cfg.r_max, cfg.samples, cfg.f0, cfg.g0, tols=tols
        )
        metrics = validate_profile(profile, tols=tols)
        checks.append(
            _check(
                "first_integral",
                metrics["first_integral_rel"] <= tols.first_integral_rel,
                tols.first_integral_rel,
                value=metrics["first_integral_rel"],
            )
        )

        if beta == 1.0:
            model = cfg.f0 + cfg.c1 * np.log(profile.r_grid / cfg.eps)
            err = float(np.max(np.abs(profile.f - model)))
            checks.append(_check("closed_form_log", err <= 1e-10, 1e-10, value=err))
        if beta == 0.0 and np.isclose(cfg.c1, 1.0) and np.isclose(cfg.c2, 1.0):
            model = cfg.f0 + np.arccosh(profile.r_grid / np.sqrt(2.0)) - np.arccosh(
                cfg.eps / np.sqrt(2.0)
            )
            err = float(np.max(np.abs(profile.f - model)))
            checks.append(_check("closed_form_catenoid", err <= tols.closure_abs, tols.closure_abs, value=err))

        imm = rotational_immersion(profile)
        interior = profile.r_grid[2:-2]
        res = el_residual_batch(imm, interior, np.full_like(interior, 0.37), tols=tols)
        max_res = float(np.max(np.linalg.norm(res.full, axis=1)))
        checks.append(_check("el_residual", max_res < 1e-8, 1e-8, value=max_res))

        # Dedicated uniform grid: the angle PDE residual is a second-order
        # FD check, so it needs an evenly spaced window, not the solve grid.
        # Small-beta profiles hug the catenoid wall at r ~ hypot(c1,c2),
        # where fourth derivatives defeat the h^2 allowance; start well
        # outside it.
        c_norm = float(np.hypot(cfg.c1, cfg.c2))
        pde_eps = 1.0 if beta >= 0.5 else max(2.0, 1.8 * c_norm)
        pde_r_max = max(10.0, 3.0 * pde_eps)
        pde_profile = solve_profile(beta, cfg.c1, cfg.c2, pde_eps, pde_r_max, cfg.samples, tols=tols)
        pde = angle_pde_check(pde_profile, tols=tols)
        checks.append(
            _check(
                "pde_identities",
                pde.passed,
                pde.threshold,
                residual_cos=pde.res_cos,
                residual_inv_cos=pde.res_inv_cos,
            )
        )

        asym_eps = 2.0 if beta == 0.0 else 1e-3
        asym = solve_profile(beta, 1.0, 1.0, asym_eps, 1e3, cfg.samples, tols=tols)
        try:
            rep = verify_asymptotics(asym, tols=tols)
            checks.append(
                _check(
                    "asymptotics",
                    True,
                    {"far_abs": 0.01, "near_rel": tols.near_rel},
                    far_E=list(np.abs(rep.far_E)),
                    near_rel=[x for x in rep.near_rel if not np.isnan(x)],
                    fitted_near_b=rep.fitted_near_b if rep.near_checked else None,
                    predicted_near_b=rep.predicted_near_b if rep.near_checked else None,
                )
            )
        except AsymptoticMismatch as exc:
            checks.append(
                _check("asymptotics", False, {"far_abs": 0.01, "near_rel": tols.near_rel}, error=str(exc))
            )

        try:
            decay = limit_bounds_check([10.0, 100.0], (0.5, 50.0), tols=tols)
            checks.append(
                _check("beta_decay_bound", True, "(beta-1)r)^(-1/3) nodewise", margin=decay.decay_margin)
            )
        except BoundViolation as exc:
            checks.append(_check("beta_decay_bound", False, "((beta-1)r)^(-1/3) nodewise", error=str(exc)))
        try:
            conv = limit_bounds_check([0.001, 0.01, 0.1], (2.0, 5.0), tols=tols)
            checks.append(
                _check(
                    "beta_zero_convergence",
                    True,
                    {"slope_sq": conv.slope_sq_bound},
                    sup_distances=list(conv.sup_distances),
                    divergence_values=list(conv.divergence_values),
                )
            )
        except BoundViolation as exc:
            checks.append(_check("beta_zero_convergence", False, {"slope_sq": 1.0}, error=str(exc)))

    passed = all(c["passed"] for c in checks)
    payload = {
        "subcommand": "verify",
        "beta": beta,
        "c1": cfg.c1,
        "c2": cfg.c2,
        "eps": cfg.eps,
        "r_max": cfg.r_max,
        "samples": cfg.samples,
        "seed": cfg.seed,
        "checks": checks,
        "passed": passed,
    }
    os.makedirs(cfg.out, exist_ok=True)
    json_path = os.path.join(cfg.out, "verify_report.json")
    _write_json(json_path, payload)
    written = [json_path]
    if not cfg.profile_csv:
        from .plots import save_profile_figure

        svg_path = os.path.join(cfg.out, "verify_profile.svg")
        save_profile_figure(profile, svg_path)
        written.append(svg_path)
    for path in written:
        print(path)
    for c in checks:
        print(f"{'PASS' if c['passed'] else 'FAIL'} {c['name']}")
    return 0 if passed else 1


def _cmd_variation(cfg: RunConfig, tols: Tolerances) -> int:
    beta = cfg.beta
    profile = solve_profile(beta, cfg.c1, cfg.c2, cfg.eps, cfg.r_max, max(cfg.samples, 129), tols=tols)
    imm = rotational_immersion(profile)
    quad = QuadratureSpec()
    fields = random_normal_fields(imm, cfg.fields, seed=cfg.seed, tols=tols)

    entries = []
    checks = []
    for X in fields:
        rep = variation_report(imm, X, quad, tols=tols)
        scale = field_c1_norm(imm, X, quad)
        first_max = max(abs(rep.dL_formula), abs(rep.dL_prestokes), abs(rep.dL_fd))
        agree = max(
            rep.discrepancies["dL_formula_vs_prestokes"],
            rep.discrepancies["dL_formula_vs_fd"],
        )
        agree_tol = max(tols.first_variation_abs, tols.first_variation_rel * abs(rep.dL_fd))
        d2_gap = abs(rep.d2L_formula - rep.d2L_fd)
        d2_tol = tols.second_variation_rel * max(abs(rep.d2L_fd), 1e-12)
        pair_gap = abs(rep.d2L_pair - rep.d2L_formula)
        pair_tol = tols.pair_identity_rel * max(1.0, abs(rep.d2L_formula), abs(rep.d2L_pair))
        entries.append(
            {
                "field": X.name,
                "L": rep.L_value,
                "dL_formula": rep.dL_formula,
                "dL_prestokes": rep.dL_prestokes,
                "dL_fd": rep.dL_fd,
                "d2L_formula": rep.d2L_formula,
                "d2L_pair": rep.d2L_pair,
                "d2L_fd": rep.d2L_fd,
                "c1_norm": scale,
            }
        )
        checks.append(
            _check(
                f"critical_first_variation[{X.name}]",
                first_max <= tols.first_variation_abs * scale,
                tols.first_variation_abs,
                value=first_max,
                scale=scale,
            )
        )
        checks.append(
            _check(f"first_variation_routes[{X.name}]", agree <= agree_tol, agree_tol, value=agree)
        )
        checks.append(
            _check(f"second_variation_fd[{X.name}]", d2_gap <= d2_tol, d2_tol, value=d2_gap)
        )
        checks.append(
            _check(f"pair_identity[{X.name}]", pair_gap <= pair_tol, pair_tol, value=pair_gap)
        )

    # Negative control: a visibly non-critical surface must show a nonzero
    # first variation while the three routes still agree with each other.
    # Mode 0 keeps the probe from integrating to zero against the
    # rotationally symmetric residual of the shifted surface.
    shift = constant_bump(imm, [0.0, 0.0, 0.2, -0.1], name="shift")
    imm_off = deformed_immersion(imm, shift, 1.0)
    X_off = normal_bump(imm_off, c3=1.0, c4=0.5, mode=0, tols=tols, name="control")
    rep_off = variation_report(imm_off, X_off, quad, tols=tols)
    scale_off = field_c1_norm(imm_off, X_off, quad)
    agree_off = max(
        rep_off.discrepancies["dL_formula_vs_prestokes"],
        rep_off.discrepancies["dL_formula_vs_fd"],
    )
    agree_off_tol = max(tols.first_variation_abs, tols.first_variation_rel * abs(rep_off.dL_fd))
    checks.append(
        _check(
            "noncritical_nonzero",
            abs(rep_off.dL_fd) > 1e-4 * scale_off,
            1e-4,
            value=abs(rep_off.dL_fd),
            scale=scale_off,
            critical_flag=rep_off.critical,
        )
    )
    checks.append(
        _check("noncritical_routes", agree_off <= agree_off_tol, agree_off_tol, value=agree_off)
    )

    passed = all(c["passed"] for c in checks)
    payload = {
        "subcommand": "variation",
        "beta": beta,
        "seed": cfg.seed,
        "fields": entries,
        "checks": checks,
        "passed": passed,
    }
    os.makedirs(cfg.out, exist_ok=True)
    json_path = os.path.join(cfg.out, "variation_report.json")
    _write_json(json_path, payload)
    print(json_path)
    for c in checks:
        print(f"{'PASS' if c['passed'] else 'FAIL'} {c['name']}")
    return 0 if passed else 1


def _cmd_symbol(cfg: RunConfig, tols: Tolerances) -> int:
    beta = cfg.beta
    rng = np.random.default_rng(cfg.seed)
    profile = solve_profile(beta, cfg.c1, cfg.c2, max(cfg.eps, 0.05), cfg.r_max, 129, tols=tols)
    imm = rotational_immersion(profile)
    mid_r = float(np.sqrt(profile.r_grid[0] * profile.r_grid[-1]))
    points = [
        ("plane", evaluate_geometry(plane(beta), (0.1, 0.2), tols=tols)),
        ("holomorphic_graph", evaluate_geometry(holomorphic_graph(beta), (0.3, 0.2), tols=tols)),
        ("rotational_mid", evaluate_geometry(imm, (mid_r, 0.9), tols=tols)),
        ("rotational_inner", evaluate_geometry(imm, (float(profile.r_grid[1]), 2.1), tols=tols)),
    ]
    checks = []
    for label, geo in points:
        worst_fact = 0.0
        worst_quad = 0.0
        for _ in range(max(cfg.samples, 1)):
            G = rng.normal(size=4)
            G /= np.linalg.norm(G)
            xi = rng.normal(size=2)
            data = symbol_matrix(geo, G, beta=beta)
            scale = max(abs(data.det_direct), abs(data.det_factored), 1e-300)
            worst_fact = max(worst_fact, abs(data.det_direct - data.det_factored) / scale)
            q = symbol_quadratic(geo, G, xi, beta=beta)
            q_mat = float(xi @ data.O @ xi)
            qscale = max(abs(q), abs(q_mat), 1e-300)
            worst_quad = max(worst_quad, abs(q - q_mat) / qscale)
        checks.append(
            _check(
                f"det_factorization[{label}]",
                worst_fact <= tols.symbol_factor_rel,
                tols.symbol_factor_rel,
                value=worst_fact,
            )
        )
        checks.append(
            _check(
                f"quadratic_matches_matrix[{label}]",
                worst_quad <= tols.symbol_factor_rel,
                tols.symbol_factor_rel,
                value=worst_quad,
            )
        )
        try:
            rep = ellipticity_check(geo, beta, max(cfg.samples, 1), seed=cfg.seed, tols=tols)
            checks.append(
                _check(
                    f"ellipticity[{label}]",
                    rep.passed,
                    tols.ellipticity_neg,
                    min_det=rep.min_det,
                )
            )
        except EllipticityViolation as exc:
            checks.append(_check(f"ellipticity[{label}]", False, tols.ellipticity_neg, error=str(exc)))
        tangent_worst = 0.0
        for G in (geo.t1, geo.t2, (geo.t1 + geo.t2) / np.sqrt(2.0)):
            data = symbol_matrix(geo, G, beta=beta)
            tangent_worst = max(tangent_worst, abs(data.det_direct))
        checks.append(
            _check(
                f"tangent_degeneracy[{label}]",
                tangent_worst < 1e-12,
                1e-12,
                value=tangent_worst,
            )
        )

    passed = all(c["passed"] for c in checks)
    payload = {
        "subcommand": "symbol",
        "beta": beta,
        "seed": cfg.seed,
        "samples": max(cfg.samples, 1),
        "checks": checks,
        "passed": passed,
    }
    os.makedirs(cfg.out, exist_ok=True)
    json_path = os.path.join(cfg.out, "symbol_report.json")
    _write_json(json_path, payload)
    print(json_path)
    for c in checks:
        print(f"{'PASS' if c['passed'] else 'FAIL'} {c['name']}")
    return 0 if passed else 1


# ---------------------------------------------------------------------------
# entry point


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", help="key=value config file (flags take precedence)")
    sub.add_argument("--beta", type=float)
    sub.add_argument("--c1", type=float)
    sub.add_argument("--c2", type=float)
    sub.add_argument("--eps", type=float)
    sub.add_argument("--r-max", dest="r_max", type=float)
    sub.add_argument("--samples", type=int)
    sub.add_argument("--f0", type=float)
    sub.add_argument("--g0", type=float)
    sub.add_argument("--out", help="output directory (default .)")
    sub.add_argument("--seed", type=int)
    sub.add_argument(
        "--tol", action="append", metavar="NAME=VALUE", help="override one tolerance constant"
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="betalab",
        description="Critical-surface laboratory for beta-weighted area functionals.",
    )
    subs = parser.add_subparsers(dest="subcommand", required=True)

    p = subs.add_parser("solve", help="solve one rotational profile, write CSV")
    _add_common(p)
    p.add_argument("--format", choices=["csv", "svg", "json"])

    p = subs.add_parser("sweep", help="solve a beta family on one grid")
    _add_common(p)
    p.add_argument("--betas", help="comma-separated increasing beta values")

    p = subs.add_parser("verify", help="run the consistency battery, write JSON")
    _add_common(p)
    p.add_argument("--profile-csv", dest="profile_csv", help="validate an existing profile CSV")

    p = subs.add_parser("variation", help="variation routes on a solved profile")
    _add_common(p)
    p.add_argument("--fields", type=int, help="number of random bump fields")

    p = subs.add_parser("symbol", help="principal-symbol ellipticity sweep")
    _add_common(p)
    return parser


_COMMANDS = {
    "solve": _cmd_solve,
    "sweep": _cmd_sweep,
    "verify": _cmd_verify,
    "variation": _cmd_variation,
    "symbol": _cmd_symbol,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        cfg, tols = _merge_config(args)
        return _COMMANDS[cfg.subcommand](cfg, tols)
    except _USAGE_ERRORS as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except _CHECK_ERRORS as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except BetaLabError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
