import math

import numpy as np
import pytest

from crosscover.errors import DegenerateCone
from crosscover.geometry import cross_polytope, random_antipodal, uniform_sphere
from crosscover.hull import enumerate_facets
from crosscover.projection import (CapSimplex, cap_monotonicity_check, cone_hits,
                                   maximize_cap_simplex, projected_volume_exact_d3,
                                   projected_volume_mc, regular_cap_simplex,
                                   regular_simplex_directions, rim_angles,
                                   rim_directions, sphere_area)


def van_oosterom_strackee(v):
    """Independent solid-angle formula for a triangle of unit vectors."""
    a, b, c = v / np.linalg.norm(v, axis=1, keepdims=True)
    num = abs(a @ np.cross(b, c))
    den = 1 + a @ b + b @ c + c @ a
    return 2 * math.atan2(num, den)


def test_sphere_area():
    assert abs(sphere_area(2) - 2 * math.pi) < 1e-14
    assert abs(sphere_area(3) - 4 * math.pi) < 1e-14
    assert abs(sphere_area(4) - 2 * math.pi ** 2) < 1e-13


def test_orthant():
    assert abs(projected_volume_exact_d3(np.eye(3)) - math.pi / 2) < 1e-14
    est = projected_volume_mc(np.eye(3), 100_000, 0)
    assert abs(est.value - math.pi / 2) < 3 * est.stderr


def test_exact_matches_independent_formula():
    v = np.array([[1, 0, 0], [0, 1, 0], [1, 1, 1]]) / np.array([[1], [1], [math.sqrt(3)]])
    ex = projected_volume_exact_d3(v)
    assert abs(ex - math.pi / 6) < 1e-14
    rng = np.random.default_rng(0)
    for _ in range(50):
        w = uniform_sphere(3, 3, rng)
        assert abs(projected_volume_exact_d3(w) - van_oosterom_strackee(w)) < 1e-12


def test_thin_cone():
    t = 1e-3
    v = np.array([[1, 0, 0], [math.cos(t), math.sin(t), 0], [0, 0, 1]])
    assert projected_volume_exact_d3(v) < 1e-2


def test_scale_invariance():
    v = uniform_sphere(4, 4, np.random.default_rng(3))
    x = uniform_sphere(5000, 4, np.random.default_rng(4))
    scaled = v * np.array([[0.1], [3.0], [7.0], [1.0]])
    np.testing.assert_array_equal(cone_hits(v, x), cone_hits(scaled, x))


def test_degenerate_cone():
    with pytest.raises(DegenerateCone):
        projected_volume_mc(np.array([[1, 0, 0], [0, 1, 0], [1, 1, 0]]), 1000)
    with pytest.raises(DegenerateCone):
        projected_volume_exact_d3(np.array([[1, 0, 0], [0, 1, 0], [2, 0, 0]]))
    with pytest.raises(ValueError):
        projected_volume_mc(np.eye(3), 10)


@pytest.mark.parametrize("d", [3, 4, 5])
def test_cross_polytope_facet_cone(d):
    est = projected_volume_mc(np.eye(d), 200_000, d)
    assert abs(est.value - sphere_area(d) / 2 ** d) < 3 * est.stderr


def test_facet_cones_sum_to_sphere():
    cfg = random_antipodal(3, 8)
    h = enumerate_facets(cfg)
    total = sum(projected_volume_exact_d3(f.vertices(cfg)) for f in h.facets)
    assert abs(total - 4 * math.pi) < 1e-12
    cfg = random_antipodal(4, 8)
    ests = [projected_volume_mc(f.vertices(cfg), 20_000, k)
            for k, f in enumerate(enumerate_facets(cfg).facets)]
    se = math.sqrt(sum(e.stderr ** 2 for e in ests))
    assert abs(sum(e.value for e in ests) - sphere_area(4)) < 4 * se


def test_rim_coordinates_round_trip():
    dirs = uniform_sphere(6, 4, np.random.default_rng(0))
    np.testing.assert_allclose(rim_directions(rim_angles(dirs)), dirs, atol=1e-13)


def test_cap_simplex_geometry():
    s = CapSimplex.from_angles(4, 0.3, np.random.default_rng(0).uniform(0, 3, (4, 2)))
    np.testing.assert_allclose(np.linalg.norm(s.vertices, axis=1), 1.0, atol=1e-12)
    np.testing.assert_allclose(s.vertices[:, -1], 0.3, atol=1e-12)
    u = regular_simplex_directions(4)
    g = u @ u.T
    np.testing.assert_allclose(g[~np.eye(4, dtype=bool)], -1 / 3, atol=1e-14)
    assert regular_cap_simplex(4, 0.5).regularity_defect() < 1e-14


def test_regular_cap_at_inverse_sqrt3_is_orthant():
    s = regular_cap_simplex(3, 1 / math.sqrt(3))
    assert abs(projected_volume_exact_d3(s) - math.pi / 2) < 1e-12


@pytest.mark.parametrize("a, tol", [(1 / math.sqrt(3), 1e-3), (0.9, 1e-2)])
def test_cap_search_d3(a, tol):
    res = maximize_cap_simplex(3, a, restarts=4, rng_seed=0)
    assert res.regularity_defect < tol
    reg = projected_volume_exact_d3(regular_cap_simplex(3, a))
    assert abs(res.volume.value - reg) < 1e-9


def test_regular_start_is_stationary():
    res = maximize_cap_simplex(3, 0.5, restarts=1, initial=regular_cap_simplex(3, 0.5))
    assert res.n_improvements == 0


def test_monotonicity():
    assert cap_monotonicity_check(3, 1 / math.sqrt(3), 0.8)
    assert cap_monotonicity_check(4, 0.5, 0.6)
    assert not cap_monotonicity_check(3, 0.5, 0.5)
    assert not cap_monotonicity_check(4, 0.5, 0.5)
