"""Principal symbol: quadratic/matrix agreement, factorization, positivity."""

import numpy as np
import pytest

import betalab as bl


def _random_points(rng, count):
    """Geometry records at assorted symplectic points."""
    pts = []
    while len(pts) < count:
        a = rng.normal(scale=0.7, size=(2, 2))
        if 1.0 + np.linalg.det(a) <= 0.05:
            continue  # keep clearly symplectic examples
        imm = bl.linear_graph(a, beta=0.0)
        pts.append(bl.evaluate_geometry(imm, (0.0, 0.0)))
    return pts


def test_quadratic_matches_matrix_form_for_seeded_pairs():
    rng = np.random.default_rng(101)
    for geo in _random_points(rng, 20):
        for _ in range(5):
            beta = float(rng.uniform(0.0, 8.0))
            G = rng.normal(size=4)
            G /= np.linalg.norm(G)
            xi = tuple(rng.normal(size=2))
            data = bl.symbol_matrix(geo, G, beta=beta)
            q = bl.symbol_quadratic(geo, G, xi, beta=beta)
            q_mat = float(np.array(xi) @ data.O @ np.array(xi))
            assert abs(q - q_mat) <= 1e-12 * max(abs(q), abs(q_mat), 1.0)


def test_determinant_factorization_matches_brute_force():
    rng = np.random.default_rng(7)
    for geo in _random_points(rng, 10):
        for beta in (0.0, 0.5, 2.0, 10.0):
            G = rng.normal(size=4)
            data = bl.symbol_matrix(geo, G, beta=beta)
            brute = float(np.linalg.det(data.O))
            scale = max(abs(brute), 1e-30)
            assert abs(data.det_direct - brute) <= 1e-12 * scale
            assert abs(data.det_factored - brute) <= 1e-11 * scale


def test_factored_determinant_formula():
    # det O = c2n (c2n + beta (jg1^2 + jg2^2)) with c2n = cos^2 |G_perp|^2
    geo = bl.evaluate_geometry(bl.linear_graph(np.array([[0.3, 0.1], [-0.2, 0.4]])), (0.0, 0.0))
    G = np.array([0.2, -0.7, 0.5, 0.4])
    beta = 3.0
    data = bl.symbol_matrix(geo, G, beta=beta)
    c2n = geo.cos_alpha**2 * data.g_perp_norm2
    expected = c2n * (c2n + beta * (data.jg1**2 + data.jg2**2))
    assert data.det_factored == pytest.approx(expected, rel=1e-13)


def test_tangent_directions_degenerate(generic_graph):
    geo = bl.evaluate_geometry(generic_graph, (0.1, 0.1))
    for G in (geo.t1, geo.t2, 0.6 * geo.t1 - 0.8 * geo.t2):
        data = bl.symbol_matrix(geo, G)
        assert abs(data.det_direct) < 1e-12
        assert np.linalg.norm(data.O) < 1e-12


def test_holomorphic_point_normal_direction_gives_identity():
    # J preserves the tangent plane of a holomorphic curve, so normal G has
    # jg1 = jg2 = 0 and O collapses to |G|^2 cos^2 I = I.
    geo = bl.evaluate_geometry(bl.holomorphic_graph(2.0), (0.3, 0.2))
    G = geo.e3
    data = bl.symbol_matrix(geo, G, beta=5.0)
    assert np.allclose(data.O, np.eye(2), atol=1e-12)


def test_beta_zero_symbol_is_scaled_identity(generic_graph):
    rng = np.random.default_rng(3)
    geo = bl.evaluate_geometry(generic_graph, (0.0, 0.0))
    for _ in range(5):
        G = rng.normal(size=4)
        data = bl.symbol_matrix(geo, G, beta=0.0)
        c2n = geo.cos_alpha**2 * data.g_perp_norm2
        assert np.allclose(data.O, c2n * np.eye(2), atol=1e-13 * max(c2n, 1.0))


def test_lagrangian_point_symbol_degenerates():
    geo = bl.evaluate_geometry(bl.lagrangian_plane(), (0.0, 0.0))
    rng = np.random.default_rng(2)
    for _ in range(5):
        G = rng.normal(size=4)
        data = bl.symbol_matrix(geo, G, beta=2.0)
        assert abs(data.det_direct) < 1e-12 * max(1.0, np.linalg.norm(data.O))


def test_ellipticity_sweep_on_symplectic_points(generic_graph, imm_beta2):
    for geo in (
        bl.evaluate_geometry(bl.plane(0.5), (0.0, 0.0)),
        bl.evaluate_geometry(generic_graph, (0.2, -0.2)),
        bl.evaluate_geometry(imm_beta2, (1.5, 0.4)),
    ):
        for beta in (0.0, 0.5, 2.0, 10.0):
            rep = bl.ellipticity_check(geo, beta, 200, seed=17)
            assert rep.passed
            assert rep.min_det > -1e-9
            assert rep.samples == 200
            assert rep.seed == 17


def test_ellipticity_reports_are_deterministic(generic_graph):
    geo = bl.evaluate_geometry(generic_graph, (0.0, 0.0))
    a = bl.ellipticity_check(geo, 2.0, 64, seed=5)
    b = bl.ellipticity_check(geo, 2.0, 64, seed=5)
    assert a.min_det == b.min_det
    assert np.array_equal(a.min_det_direction, b.min_det_direction)
