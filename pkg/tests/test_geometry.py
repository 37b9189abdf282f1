import numpy as np
import pytest
from hypothesis import given, strategies as st

from crosscover import config
from crosscover.errors import BadDimension, ZeroVector
from crosscover.geometry import (AntipodalConfig, cross_polytope, is_general_position,
                                 is_unit, normalize, perturbed_cross_polytope,
                                 random_antipodal, random_orthogonal, tangent_project,
                                 uniform_sphere)

from strategies import finite


@pytest.mark.parametrize("v, expected", [
    ((3, 4), (0.6, 0.8)),
    ((1, 0, 0), (1, 0, 0)),
    ((1, 1, 1, 1), (0.5, 0.5, 0.5, 0.5)),
])
def test_normalize_examples(v, expected):
    np.testing.assert_allclose(normalize(v), expected, atol=1e-15)


def test_normalize_zero():
    with pytest.raises(ZeroVector):
        normalize([0.0, 0.0, 0.0])
    with pytest.raises(ZeroVector):
        normalize([1e-15, 0.0])


def test_normalize_is_read_only():
    x = normalize([1.0, 2.0])
    with pytest.raises(ValueError):
        x[0] = 3.0


@given(st.lists(finite, min_size=2, max_size=8), st.floats(1e-3, 1e3))
def test_normalize_unit_and_scale_free(v, c):
    v = np.array(v)
    if np.linalg.norm(v) < 1e-6:
        return
    x = normalize(v)
    assert is_unit(x)
    np.testing.assert_allclose(normalize(c * v), x, atol=1e-14)
    np.testing.assert_allclose(normalize(x), x, atol=1e-15)


def test_antipodal_config_validation():
    with pytest.raises(BadDimension):
        AntipodalConfig(np.ones((2, 3)))
    with pytest.raises(BadDimension):
        AntipodalConfig(np.ones((1, 1)))
    with pytest.raises(ZeroVector):
        AntipodalConfig([[1.0, 0.0], [0.0, 0.0]])


def test_config_rows_are_normalized_and_frozen():
    cfg = AntipodalConfig([[2.0, 0.0], [1.0, 1.0]])
    np.testing.assert_allclose(np.linalg.norm(cfg.representatives, axis=1), 1.0)
    assert cfg.points.shape == (4, 2)
    np.testing.assert_array_equal(cfg.points[2:], -cfg.representatives)
    with pytest.raises(ValueError):
        cfg.representatives[0, 0] = 5.0


def test_general_position():
    assert is_general_position(cross_polytope(4))
    assert not is_general_position(AntipodalConfig([[1, 0, 0], [0, 1, 0], [1, 1, 0]]))
    # nearly dependent: below the 1e-9 relative threshold
    y = np.eye(3)
    y[2] = [1, 1, 1e-12]
    assert not is_general_position(AntipodalConfig(y))
    with config.override(rank=1e-14):
        assert is_general_position(AntipodalConfig(y))


def test_cross_polytope_and_perturbation():
    assert cross_polytope(5).is_cross_polytope()
    assert perturbed_cross_polytope(4, 0.0).is_cross_polytope()
    p = perturbed_cross_polytope(4, 1e-2)
    assert not p.is_cross_polytope()
    assert abs(p.max_abs_offdiagonal() - np.sin(1e-2)) < 1e-15


def test_random_antipodal_deterministic():
    a, b = random_antipodal(4, 7), random_antipodal(4, 7)
    np.testing.assert_array_equal(a.representatives, b.representatives)
    assert not np.array_equal(a.representatives, random_antipodal(4, 8).representatives)


def test_random_orthogonal_and_rotation():
    rng = np.random.default_rng(0)
    q = random_orthogonal(5, rng)
    np.testing.assert_allclose(q @ q.T, np.eye(5), atol=1e-13)
    cfg = random_antipodal(5, 1)
    np.testing.assert_allclose(cfg.rotated(q).gram(), cfg.gram(), atol=1e-13)


def test_uniform_sphere_and_tangent():
    x = uniform_sphere(1000, 4, np.random.default_rng(0))
    np.testing.assert_allclose(np.linalg.norm(x, axis=1), 1.0)
    assert np.all(np.abs(x.mean(axis=0)) < 0.1)
    g = np.random.default_rng(1).standard_normal((1000, 4))
    np.testing.assert_allclose(np.sum(tangent_project(x, g) * x, axis=1), 0.0, atol=1e-14)
