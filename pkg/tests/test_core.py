import math

import numpy as np
import pytest
from hypothesis import given

from ballbodies.core import (
    DirectionGrid, GeometryError, RigidMotion, SeededRng, apply_motion, fibonacci_grid,
    nearest_directions, orthonormal_complement, reflect, unit_ball_volume,
)

from strategies import point_sets, seeds, unit_vectors, vectors


def test_reflect_examples():
    assert np.allclose(reflect([1, 0], [0, 1]), [1, 0])
    assert np.allclose(reflect([0, 1], [0, 1]), [0, -1])
    assert np.allclose(reflect([3, 4], [1, 0]), [-3, 4])


def test_reflect_rejects_non_unit():
    with pytest.raises(GeometryError):
        reflect([1, 0], [0, 2])


@given(vectors(3), vectors(3), unit_vectors(3))
def test_reflect_involution_and_isometry(x, y, u):
    assert np.allclose(reflect(reflect(x, u), u), x, atol=1e-12)
    d = np.linalg.norm(reflect(x, u) - reflect(y, u))
    assert d == pytest.approx(np.linalg.norm(x - y), abs=1e-12)


def test_motion_examples():
    A = np.array([[0.0, 0.0], [1.0, 0.0]])
    assert np.array_equal(apply_motion(RigidMotion.identity(2), A), A)
    rot = RigidMotion(np.array([[0.0, -1.0], [1.0, 0.0]]), np.zeros(2))
    assert np.allclose(apply_motion(rot, [[1.0, 0.0]]), [[0.0, 1.0]])
    tr = RigidMotion(np.eye(2), np.array([1.0, 1.0]))
    assert np.allclose(apply_motion(tr, A), [[1, 1], [2, 1]])


def test_motion_rejects_non_orthogonal():
    with pytest.raises(GeometryError):
        RigidMotion(np.array([[1.0, 0.1], [0.0, 1.0]]), np.zeros(2))


@given(point_sets(3, 2, 6), seeds)
def test_motion_preserves_distances(A, seed):
    g = RigidMotion.random(3, SeededRng(seed))
    B = apply_motion(g, A)
    DA = np.linalg.norm(A[:, None] - A[None], axis=2)
    DB = np.linalg.norm(B[:, None] - B[None], axis=2)
    assert np.abs(DA - DB).max() <= 1e-12


def test_planar_grid_is_uniform():
    g = fibonacci_grid(2, 4)
    assert np.allclose(np.sort(g.directions, axis=0),
                       np.sort(np.array([[1, 0], [0, 1], [-1, 0], [0, -1]]), axis=0), atol=1e-15)
    assert g.mesh == pytest.approx(math.pi / 4)
    assert fibonacci_grid(2, 360).mesh == pytest.approx(math.pi / 360)


def test_spherical_grid_normalized_and_symmetric():
    g = fibonacci_grid(3, 1000)
    assert g.size >= 1000
    assert np.abs(np.linalg.norm(g.directions, axis=1) - 1).max() <= 1e-12
    assert g.symmetric
    assert np.allclose(g.directions[g.neg_index], -g.directions)


def test_spherical_grid_mesh_covers():
    g = fibonacci_grid(3, 300)
    Q = SeededRng(5).unit_vectors(5000, 3)
    _, ang = nearest_directions(g.directions, Q)
    assert ang.max() <= g.mesh


def test_grid_rejects_tiny():
    with pytest.raises(GeometryError):
        fibonacci_grid(2, 1)


def test_rng_reproducible():
    a = SeededRng(42).normal(size=10 ** 4)
    b = SeededRng(42).normal(size=10 ** 4)
    assert np.array_equal(a, b)
    assert not np.array_equal(SeededRng(42, 1).normal(size=10), SeededRng(42, 2).normal(size=10))


def test_in_ball_stays_inside():
    X = SeededRng(3).in_ball(2000, 4, 0.3)
    assert np.linalg.norm(X, axis=1).max() <= 0.3


def test_unit_ball_volume_table():
    assert unit_ball_volume(1) == 2.0
    assert unit_ball_volume(2) == pytest.approx(math.pi)
    assert unit_ball_volume(3) == pytest.approx(4 * math.pi / 3)


def test_orthonormal_complement():
    E = np.array([[1.0], [1.0], [0.0]]) / math.sqrt(2)
    C = orthonormal_complement(E)
    assert C.shape == (3, 2)
    assert np.allclose(C.T @ C, np.eye(2))
    assert np.allclose(E.T @ C, 0)
