"""Acceptance battery: thirteen release criteria, one pass/fail line each.

Every test prints `criterion NN <slug>: PASS/FAIL [measured numbers]` before
asserting, so a `pytest -rA` run of this module reads as the release
checklist.  Tolerances here are pinned on purpose; loosening one is a
contract change, not a test fix.
"""

import time

import numpy as np
import pytest

import betalab as bl
from betalab.cli import main as cli_main
from betalab.geometry_core import el_residual_batch

BETAS_FAMILY = (0.5, 1.0, 2.0, 5.0)


def _line(num, slug, ok, detail):
    print(f"criterion {num:02d} {slug}: {'PASS' if ok else 'FAIL'} [{detail}]")
    return ok


@pytest.fixture(scope="module")
def family_profiles():
    """The four wide-range profiles shared by criteria 3 and 4."""
    return {b: bl.solve_profile(b, 1.0, 1.0, 0.01, 1000.0, 4097) for b in BETAS_FAMILY}


@pytest.fixture(scope="module")
def critical_beta2():
    prof = bl.solve_profile(2.0, 1.0, 1.0, 0.5, 6.0, 257)
    return bl.rotational_immersion(prof)


def test_criterion_01_beta_one_log_closed_form():
    t0 = time.perf_counter()
    prof = bl.solve_profile(1.0, 1.0, 1.0, 0.1, 100.0, 4097)
    elapsed = time.perf_counter() - t0
    err = float(np.max(np.abs(prof.f - np.log(prof.r_grid / 0.1))))
    ok = err <= 1e-10 and elapsed < 1.0
    assert _line(1, "beta=1 log profile", ok, f"max|f - ln(r/0.1)| = {err:.3e}, {elapsed:.2f}s")


def test_criterion_02_beta_zero_catenoid_closed_form():
    t0 = time.perf_counter()
    prof = bl.solve_profile(0.0, 1.0, 1.0, 1.5, 20.0, 8193)
    elapsed = time.perf_counter() - t0
    model = np.arccosh(prof.r_grid / np.sqrt(2.0)) - np.arccosh(1.5 / np.sqrt(2.0))
    err = float(np.max(np.abs(prof.f - model)))
    with pytest.raises(bl.NoSolution):
        bl.solve_slope(1.2, 0.0, 1.0, 1.0)
    with pytest.raises(bl.NoSolution):
        bl.solve_slope(np.sqrt(2.0), 0.0, 1.0, 1.0)
    ok = err <= 1e-8 and elapsed < 1.0
    assert _line(
        2, "beta=0 catenoid profile", ok, f"max|f - arccosh| = {err:.3e}, {elapsed:.2f}s, NoSolution below neck"
    )


def test_criterion_03_first_integral_residual(family_profiles):
    worst = 0.0
    for b, prof in family_profiles.items():
        worst = max(worst, bl.validate_profile(prof)["first_integral_rel"])
    ok = worst <= 1e-10
    assert _line(3, "first integral on [0.01,1000]", ok, f"worst rel residual = {worst:.3e}")


def test_criterion_04_el_closure(family_profiles):
    worst = 0.0
    slowest = 0.0
    for b, prof in family_profiles.items():
        imm = bl.rotational_immersion(prof)
        interior = prof.r_grid[2:-2]
        t0 = time.perf_counter()
        res = el_residual_batch(imm, interior, np.full_like(interior, 0.37))
        slowest = max(slowest, time.perf_counter() - t0)
        worst = max(worst, float(np.max(np.linalg.norm(res.full, axis=1))))
    ok = worst < 1e-8 and slowest < 5.0
    assert _line(4, "EL residual closure", ok, f"max|P| = {worst:.3e}, slowest profile {slowest:.2f}s")


def test_criterion_05_far_expansion_beta_two():
    r = np.array([250.0, 500.0, 1000.0])
    fp, _ = bl.solve_slope(r, 2.0, 1.0, 1.0)
    E = np.abs(r**3 * (fp - 1.0 / r + 1.0 / r**3))
    ok = bool(np.all(np.diff(E) < 0.0)) and E[-1] < 0.01
    assert _line(5, "far expansion beta=2", ok, f"E = {np.array2string(E, precision=3)}")


def test_criterion_06_near_expansion():
    details = []
    ok = True
    for beta in (0.5, 2.0):
        r = np.geomspace(1e-2, 1e-3, 7)
        fp, _ = bl.solve_slope(r, beta, 1.0, 1.0)
        rel = np.abs(fp - bl.asymptotic_near(r, beta)) / np.abs(fp)
        # exact expansions sit at rounding noise where ordering is arbitrary
        decreasing = rel[-1] <= rel[0] or rel[-1] < 1e-12
        ok = ok and rel[0] < 1e-3 and bool(np.all(rel < 1e-3)) and decreasing
        details.append(f"beta={beta}: rel {rel[0]:.2e} -> {rel[-1]:.2e}")
    assert _line(6, "near expansion", ok, "; ".join(details))


def test_criterion_07_large_beta_decay_bound():
    r = np.linspace(0.5, 50.0, 500)
    worst = -np.inf
    for beta in (10.0, 100.0):
        fp, _ = bl.solve_slope(r, beta, 1.0, 1.0)
        worst = max(worst, float(np.max(fp - ((beta - 1.0) * r) ** (-1.0 / 3.0))))
    rep = bl.limit_bounds_check([10.0, 100.0], (0.5, 50.0))
    ok = worst <= 0.0 and rep.passed
    assert _line(7, "beta->inf decay bound", ok, f"max(fp - bound) = {worst:.3e}")


def test_criterion_08_small_beta_catenoid_convergence():
    r = np.linspace(2.0, 5.0, 301)
    cat = bl.catenoid_slope(r)
    sups = []
    sq_at_neckpoint = []
    for beta in (0.1, 0.01, 0.001):
        fp, _ = bl.solve_slope(r, beta, 1.0, 1.0)
        sups.append(float(np.max(np.abs(fp - cat))))
        fp2, _ = bl.solve_slope(2.0, beta, 1.0, 1.0)
        sq_at_neckpoint.append(fp2 * fp2)
    rep = bl.limit_bounds_check([0.001, 0.01, 0.1], (2.0, 5.0))
    ok = (
        sups[0] > sups[1] > sups[2]
        and all(s <= 3.0 / (2.0**2 - 2.0) for s in sq_at_neckpoint)
        and rep.passed
    )
    assert _line(
        8,
        "beta->0 catenoid limit",
        ok,
        f"sup dist = {sups[0]:.2e} > {sups[1]:.2e} > {sups[2]:.2e}, max fp^2(2) = {max(sq_at_neckpoint):.3f} <= 1.5",
    )


def test_criterion_09_angle_pde_identities():
    fine = bl.angle_pde_check(bl.solve_profile(2.0, 1.0, 1.0, 1.0, 10.0, 4097))
    coarse = bl.angle_pde_check(bl.solve_profile(2.0, 1.0, 1.0, 1.0, 10.0, 2049))
    ratios = (coarse.res_cos / fine.res_cos, coarse.res_inv_cos / fine.res_inv_cos)
    ok = (
        fine.res_cos < 1e-5
        and fine.res_inv_cos < 1e-5
        and ratios[0] >= 3.5
        and ratios[1] >= 3.5
    )
    assert _line(
        9,
        "angle PDE identities",
        ok,
        f"residuals ({fine.res_cos:.2e}, {fine.res_inv_cos:.2e}), doubling ratios ({ratios[0]:.2f}, {ratios[1]:.2f})",
    )


@pytest.mark.slow
def test_criterion_10_first_variation_three_routes(critical_beta2):
    imm = critical_beta2
    quad = bl.QuadratureSpec(257, 64)
    fields = bl.random_normal_fields(imm, 20, seed=bl.DEFAULT_SEED)
    worst_value = 0.0  # |dL| relative to the field scale: criticality
    worst_spread = 0.0  # route disagreement relative to its allowance
    for X in fields:
        scale = bl.field_c1_norm(imm, X, quad)
        routes = (
            bl.first_variation_formula(imm, X, quad),
            bl.first_variation_prestokes(imm, X, quad),
            bl.first_variation_fd(imm, X, quad=quad),
        )
        worst_value = max(worst_value, max(abs(v) for v in routes) / scale)
        spread = max(routes) - min(routes)
        worst_spread = max(worst_spread, spread / max(1e-6, 1e-4 * scale))
    ok = worst_value < 1e-6 and worst_spread <= 1.0
    assert _line(
        10,
        "first variation, three routes",
        ok,
        f"20 fields: max|dL|/||X|| = {worst_value:.3e}, worst spread/allowance = {worst_spread:.3f}",
    )


@pytest.mark.slow
def test_criterion_11_second_variation_identities():
    quad = bl.QuadratureSpec(257, 64)
    details = []
    ok = True
    for beta, eps, seed in ((0.0, 1.6, 3), (2.0, 0.5, 7)):
        prof = bl.solve_profile(beta, 1.0, 1.0, eps, 6.0, 257)
        imm = bl.rotational_immersion(prof)
        X = bl.random_normal_fields(imm, 1, seed=seed)[0]
        W = bl.j_companion_field(imm, X)
        d2 = bl.second_variation_formula(imm, X, quad)
        d2_fd = bl.second_variation_fd(imm, X, quad=quad)
        pair = bl.second_variation_pair(imm, X, quad)
        pair_sum = d2 + bl.second_variation_formula(imm, W, quad)
        fd_rel = abs(d2 - d2_fd) / abs(d2_fd)
        pair_rel = abs(pair - pair_sum) / max(abs(pair), abs(pair_sum))
        ok = ok and fd_rel <= 1e-3 and pair_rel <= 1e-6
        details.append(f"beta={beta:g}: fd rel {fd_rel:.2e}, pair rel {pair_rel:.2e}")
    assert _line(11, "second variation identities", ok, "; ".join(details))


def test_criterion_12_symbol_factorization(critical_beta2):
    rng = np.random.default_rng(bl.DEFAULT_SEED)
    geos = [
        bl.evaluate_geometry(bl.plane(2.0), (0.1, 0.2)),
        bl.evaluate_geometry(bl.holomorphic_graph(2.0), (0.3, 0.2)),
        bl.evaluate_geometry(bl.linear_graph(np.array([[0.4, -0.1], [0.2, 0.3]]), beta=2.0), (0.3, -0.2)),
        bl.evaluate_geometry(critical_beta2, (1.7, 0.9)),
        bl.evaluate_geometry(critical_beta2, (0.52, 2.1)),
    ]
    betas = (0.0, 0.5, 1.0, 2.0, 10.0)
    pairs = 0
    worst_rel = 0.0
    positivity_ok = True
    for i in range(100):
        geo = geos[i % len(geos)]
        beta = betas[i % len(betas)]
        G = rng.normal(size=4)
        data = bl.symbol_matrix(geo, G, beta=beta)
        brute = float(np.linalg.det(data.O))
        rel = abs(brute - data.det_factored) / max(abs(brute), abs(data.det_factored), 1e-300)
        worst_rel = max(worst_rel, rel)
        if geo.cos_alpha > 1e-6 and data.g_perp_norm2 > 1e-12:
            positivity_ok = positivity_ok and data.det_direct > 0.0
        pairs += 1
    tangent_worst = 0.0
    for geo in geos:
        for G in (geo.t1, geo.t2, (geo.t1 + geo.t2) / np.sqrt(2.0)):
            tangent_worst = max(tangent_worst, abs(bl.symbol_matrix(geo, G, beta=2.0).det_direct))
    ok = pairs == 100 and worst_rel <= 1e-12 and positivity_ok and tangent_worst < 1e-12
    assert _line(
        12,
        "symbol determinant factorization",
        ok,
        f"100 pairs: worst rel = {worst_rel:.2e}, det>0 where gated, tangent det <= {tangent_worst:.2e}",
    )


def test_criterion_13_verify_determinism(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    rc_a = cli_main(["verify", "--seed", "123", "--out", str(a)])
    rc_b = cli_main(["verify", "--seed", "123", "--out", str(b)])
    same = (a / "verify_report.json").read_bytes() == (b / "verify_report.json").read_bytes()
    ok = rc_a == 0 and rc_b == 0 and same
    assert _line(13, "verify determinism", ok, f"exit codes ({rc_a}, {rc_b}), byte-identical JSON = {same}")
