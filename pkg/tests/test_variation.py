"""Weighted-area functional and its first/second variations, route by route."""

import numpy as np
import pytest
import scipy.integrate

import betalab as bl


# ---------------------------------------------------------------------------
# functional


def test_plane_functional_is_area():
    for beta in (0.0, 2.0):
        assert bl.functional(bl.plane(beta)) == pytest.approx(4.0, rel=1e-12)


def test_holomorphic_patch_functional_exact():
    # sqrt(det g) = 1 + 4(x1^2 + x2^2) and cos = 1, so L = 44/3 on [-1,1]^2,
    # and the quadrature integrates the quadratic exactly.
    for beta in (0.0, 3.0):
        L = bl.functional(bl.holomorphic_graph(beta))
        assert L == pytest.approx(44.0 / 3.0, rel=1e-13)


def test_rotational_functional_against_radial_quadrature(prof_beta2, imm_beta2):
    # Reduce to one dimension: L = 2 pi int r (1 + rho^2)^((beta+1)/2) dr.
    def integrand(r):
        fp, gp = bl.solve_slope(r, 2.0, 1.0, 1.0)
        return r * (1.0 + fp * fp + gp * gp) ** 1.5

    ref, err = scipy.integrate.quad(integrand, 0.5, 6.0, limit=200, epsabs=1e-12, epsrel=1e-12)
    assert err < 1e-9
    L = bl.functional(imm_beta2, bl.QuadratureSpec(1025, 16))
    assert L == pytest.approx(2.0 * np.pi * ref, rel=1e-10)


def test_functional_quadrature_order():
    # Radial Simpson error must shrink by >= 4 per grid doubling.
    def integrand(r):
        fp, gp = bl.solve_slope(r, 2.0, 1.0, 1.0)
        return r * (1.0 + fp * fp + gp * gp) ** 1.5

    ref, _ = scipy.integrate.quad(integrand, 0.5, 6.0, limit=200)
    ref *= 2.0 * np.pi
    prof = bl.solve_profile(2.0, 1.0, 1.0, 0.5, 6.0, 257)
    imm = bl.rotational_immersion(prof)
    e_coarse = abs(bl.functional(imm, bl.QuadratureSpec(17, 8)) - ref)
    e_fine = abs(bl.functional(imm, bl.QuadratureSpec(33, 8)) - ref)
    assert e_coarse / e_fine >= 4.0


def test_functional_beta_zero_crosses_lagrangian_points():
    # The full catenoid's angle cosine changes sign across the neck; the
    # area functional must still evaluate (no symplectic guard at beta = 0).
    imm = bl.catenoid()
    L = bl.functional(imm, bl.QuadratureSpec(129, 16))
    assert np.isfinite(L) and L > 0.0


def test_functional_rejects_lagrangian_for_positive_beta():
    with pytest.raises(bl.LagrangianPoint):
        bl.functional(bl.lagrangian_plane(beta=1.0))


# ---------------------------------------------------------------------------
# fields


def test_constant_bump_compact_support(imm_beta2, quad_small):
    X = bl.constant_bump(imm_beta2, [0.0, 0.0, 1.0, 0.0])
    diag = bl.validate_field(imm_beta2, X, quad_small)
    assert diag["boundary_value"] < 1e-14
    assert diag["boundary_derivative"] < 1e-14


def test_normal_bump_is_normal(imm_beta2, quad_small):
    X = bl.normal_bump(imm_beta2, c3=1.0, c4=-0.7, mode=2)
    diag = bl.validate_field(imm_beta2, X, quad_small)
    assert diag["tangency"] < 1e-8
    assert X.normal_flag


def test_tangent_bump_is_tangent(imm_beta2, quad_small):
    X = bl.tangent_bump(imm_beta2, c1=1.0, c2=0.5)
    x1, x2, _ = quad_small.grid(imm_beta2)
    x1, x2 = x1[:64], x2[:64]
    geo = bl.evaluate_geometry_batch(imm_beta2, x1, x2)
    Xv = X.eval(x1, x2)[0]
    perp = Xv - (np.sum(Xv * geo.t1, axis=1)[:, None] * geo.t1
                 + np.sum(Xv * geo.t2, axis=1)[:, None] * geo.t2)
    assert np.max(np.linalg.norm(perp, axis=1)) < 1e-8


def test_random_fields_deterministic(imm_beta2):
    xs = bl.random_normal_fields(imm_beta2, 3, seed=9)
    ys = bl.random_normal_fields(imm_beta2, 3, seed=9)
    zs = bl.random_normal_fields(imm_beta2, 3, seed=10)
    p = (np.array([1.3]), np.array([0.8]))
    for X, Y in zip(xs, ys):
        assert np.array_equal(X.eval(*p)[0], Y.eval(*p)[0])
    assert any(not np.array_equal(X.eval(*p)[0], Z.eval(*p)[0]) for X, Z in zip(xs, zs))


def test_j_companion_rotates_normal_components(imm_beta2):
    X = bl.normal_bump(imm_beta2, c3=0.8, c4=0.6, mode=1)
    W = bl.j_companion_field(imm_beta2, X)
    for p in [(1.2, 0.5), (2.5, 2.0)]:
        geo = bl.evaluate_geometry(imm_beta2, p)
        q = (np.array([p[0]]), np.array([p[1]]))
        Xv = X.eval(*q)[0][0]
        Wv = W.eval(*q)[0][0]
        assert np.linalg.norm(Wv) == pytest.approx(np.linalg.norm(Xv), rel=1e-9, abs=1e-12)
        assert abs(np.dot(Wv, Xv)) < 1e-10
        assert abs(np.dot(Wv, geo.t1)) < 1e-9
        assert abs(np.dot(Wv, geo.t2)) < 1e-9


def test_field_scale_is_linear(imm_beta2, quad_small):
    X1 = bl.normal_bump(imm_beta2, c3=1.0)
    X2 = bl.normal_bump(imm_beta2, c3=2.0)
    n1 = bl.field_c1_norm(imm_beta2, X1, quad_small)
    n2 = bl.field_c1_norm(imm_beta2, X2, quad_small)
    assert n2 == pytest.approx(2.0 * n1, rel=1e-9)


# ---------------------------------------------------------------------------
# first variation


def test_first_variation_three_routes_vanish_on_critical(imm_beta2, quad_full):
    for X in bl.random_normal_fields(imm_beta2, 3, seed=21):
        scale = bl.field_c1_norm(imm_beta2, X, quad_full)
        a = bl.first_variation_formula(imm_beta2, X, quad_full)
        b = bl.first_variation_prestokes(imm_beta2, X, quad_full)
        c = bl.first_variation_fd(imm_beta2, X, 1e-3, quad_full)
        assert max(abs(a), abs(b), abs(c)) < 1e-6 * scale


def test_first_variation_routes_agree_off_critical(imm_beta2, quad_full):
    shift = bl.constant_bump(imm_beta2, [0.0, 0.0, 0.15, -0.08])
    imm_off = bl.deformed_immersion(imm_beta2, shift, 1.0)
    X = bl.normal_bump(imm_off, c3=1.0, c4=0.5, mode=0)
    a = bl.first_variation_formula(imm_off, X, quad_full)
    b = bl.first_variation_prestokes(imm_off, X, quad_full)
    c = bl.first_variation_fd(imm_off, X, 1e-3, quad_full)
    scale = bl.field_c1_norm(imm_off, X, quad_full)
    assert abs(c) > 1e-3 * scale  # visibly non-critical
    tol = max(1e-6, 1e-4 * abs(c))
    assert abs(a - b) < tol and abs(a - c) < tol and abs(b - c) < tol


def test_first_variation_formula_requires_normal_field(imm_beta2, quad_small):
    X = bl.tangent_bump(imm_beta2, c1=1.0)
    with pytest.raises(bl.UsageError):
        bl.first_variation_formula(imm_beta2, X, quad_small)


def test_tangential_fields_do_not_move_the_functional(imm_beta2, quad_full):
    # Reparametrizations leave the integral unchanged.
    X = bl.tangent_bump(imm_beta2, c1=1.0, c2=-0.6)
    scale = bl.field_c1_norm(imm_beta2, X, quad_full)
    b = bl.first_variation_prestokes(imm_beta2, X, quad_full)
    c = bl.first_variation_fd(imm_beta2, X, 1e-3, quad_full)
    assert abs(b) < 1e-6 * scale
    assert abs(c) < 1e-6 * scale


def test_zero_field_gives_zero(imm_beta2, quad_small):
    X = bl.constant_bump(imm_beta2, [0.0, 0.0, 0.0, 0.0], normal_flag=True)
    assert bl.first_variation_formula(imm_beta2, X, quad_small) == 0.0
    assert bl.first_variation_prestokes(imm_beta2, X, quad_small) == 0.0
    assert bl.first_variation_fd(imm_beta2, X, 1e-3, quad_small) == pytest.approx(0.0, abs=1e-12)


# ---------------------------------------------------------------------------
# second variation


def test_second_variation_identities_beta2(imm_beta2, quad_small):
    X = bl.random_normal_fields(imm_beta2, 1, seed=33)[0]
    form = bl.second_variation_formula(imm_beta2, X, quad_small)
    W = bl.j_companion_field(imm_beta2, X)
    form_W = bl.second_variation_formula(imm_beta2, W, quad_small)
    pair = bl.second_variation_pair(imm_beta2, X, quad_small)
    scale = max(abs(pair), abs(form), 1.0)
    assert abs(pair - (form + form_W)) <= 1e-6 * scale


def test_mixed_bilinear_symmetric_and_consistent(imm_beta2, quad_small):
    X = bl.normal_bump(imm_beta2, c3=1.0, c4=0.3, mode=1)
    Y = bl.normal_bump(imm_beta2, c3=-0.4, c4=1.0, mode=2, phase=0.7)
    bxy = bl.second_variation_mixed(imm_beta2, X, Y, quad_small)
    byx = bl.second_variation_mixed(imm_beta2, Y, X, quad_small)
    assert abs(bxy - byx) <= 1e-8 * max(1.0, abs(bxy))
    bxx = bl.second_variation_mixed(imm_beta2, X, X, quad_small)
    ii = bl.second_variation_formula(imm_beta2, X, quad_small)
    assert bxx == pytest.approx(ii, rel=1e-6)


def test_second_variation_matches_fd(imm_beta2, quad_full):
    X = bl.random_normal_fields(imm_beta2, 1, seed=41)[0]
    form = bl.second_variation_formula(imm_beta2, X, quad_full)
    fd = bl.second_variation_fd(imm_beta2, X, 1e-3, quad_full)
    assert form == pytest.approx(fd, rel=1e-3)


def test_second_variation_beta_zero(imm_beta0, quad_full):
    X = bl.random_normal_fields(imm_beta0, 1, seed=3)[0]
    form = bl.second_variation_formula(imm_beta0, X, quad_full)
    fd = bl.second_variation_fd(imm_beta0, X, 1e-3, quad_full)
    pair = bl.second_variation_pair(imm_beta0, X, quad_full)
    W = bl.j_companion_field(imm_beta0, X)
    form_W = bl.second_variation_formula(imm_beta0, W, quad_full)
    assert form == pytest.approx(fd, rel=1e-3)
    assert abs(pair - (form + form_W)) <= 1e-6 * max(abs(pair), 1.0)


def test_flat_patch_closed_form():
    # On a flat plane only the gradient term survives:
    # II(X) = (beta+1)(c3^2+c4^2) int |grad(w(x1) w(x2))|^2, and the paired
    # route doubles it through the companion.
    beta, c3, c4 = 2.0, 0.8, -0.5
    imm = bl.plane(beta)
    X = bl.constant_bump(imm, [0.0, 0.0, c3, c4], normal_flag=True)
    a, b = X.support[0]
    w_sq, _ = scipy.integrate.quad(lambda s: (1 - s * s) ** 10, -1.0, 1.0)
    dw_sq, _ = scipy.integrate.quad(lambda s: (10.0 * s * (1 - s * s) ** 4) ** 2, -1.0, 1.0)
    half = 0.5 * (b - a)
    # per-axis integrals after rescaling s = (x - mid)/half
    grad_sq = 2.0 * (dw_sq / half) * (w_sq * half)
    expected = (beta + 1.0) * (c3 * c3 + c4 * c4) * grad_sq
    quad = bl.QuadratureSpec(257, 257)
    ii = bl.second_variation_formula(imm, X, quad)
    pair = bl.second_variation_pair(imm, X, quad)
    assert ii == pytest.approx(expected, rel=1e-6)
    assert pair == pytest.approx(2.0 * expected, rel=1e-6)


def test_catenoid_is_unstable():
    imm = bl.catenoid()
    X = bl.analytic_normal_bump(
        imm, bl.catenoid_normal, support=((-4.0, 4.0), (0.0, 2.0 * np.pi))
    )
    quad = bl.QuadratureSpec(257, 32)
    rep = bl.variation_report(imm, X, quad)
    assert rep.critical
    assert rep.d2L_formula < -1.0
    assert rep.d2L_formula == pytest.approx(rep.d2L_fd, rel=1e-4)
    assert rep.d2L_pair == pytest.approx(rep.d2L_formula, rel=1e-9)


def test_second_variation_gate_rejects_non_critical(imm_beta2, quad_small):
    shift = bl.constant_bump(imm_beta2, [0.0, 0.0, 0.2, -0.1])
    imm_off = bl.deformed_immersion(imm_beta2, shift, 1.0)
    X = bl.normal_bump(imm_off, c3=1.0)
    with pytest.raises(bl.NotCritical):
        bl.second_variation_formula(imm_off, X, quad_small)


def test_variation_report_routes_and_flags(imm_beta2, quad_small):
    X = bl.random_normal_fields(imm_beta2, 1, seed=55)[0]
    rep = bl.variation_report(imm_beta2, X, quad_small)
    assert rep.critical
    assert rep.field_name == X.name
    d = rep.discrepancies
    assert set(d) == {
        "dL_formula_vs_prestokes",
        "dL_formula_vs_fd",
        "dL_prestokes_vs_fd",
        "d2L_formula_vs_fd",
        "d2L_pair_vs_fd",
        "d2L_formula_vs_pair",
    }
    shift = bl.constant_bump(imm_beta2, [0.0, 0.0, 0.2, -0.1])
    imm_off = bl.deformed_immersion(imm_beta2, shift, 1.0)
    X_off = bl.normal_bump(imm_off, c3=1.0, mode=0)
    rep_off = bl.variation_report(imm_off, X_off, quad_small)
    assert not rep_off.critical
    assert np.isnan(rep_off.d2L_formula) and np.isnan(rep_off.d2L_pair)
    assert np.isfinite(rep_off.d2L_fd)
    assert "d2L_formula_vs_fd" not in rep_off.discrepancies
