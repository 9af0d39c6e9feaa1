import json
import math

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from ballbodies import body as B
from ballbodies.core import EmptyBodyError, GeometryError, SeededRng, fibonacci_grid
from ballbodies.planar import intersect_disks, spindle_hull

from strategies import point_sets, seeds, unit_vectors

G2 = fibonacci_grid(2, 360)
G3 = fibonacci_grid(3, 200)


def lens(d, n=2):
    a = np.zeros(n)
    a[0] = d
    return B.BallIntersectionBody.from_balls(np.vstack([a, -a]), 1.0)


def test_dual_of_points_examples():
    K = B.c_dual_of_points([[0.0, 0.0]])
    assert K.count == 1 and not K.empty
    K = B.c_dual_of_points([[-1.0, 0.0], [1.0, 0.0]])
    assert not K.empty
    assert np.allclose(B.inradius_primal(K).center, 0.0, atol=1e-12)
    tri = 1.2 * np.array([[1, 0], [-0.5, math.sqrt(3) / 2], [-0.5, -math.sqrt(3) / 2]])
    assert B.c_dual_of_points(tri).empty


def test_support_examples():
    ball = B.BallIntersectionBody.from_balls([[0.0, 0.0, 0.0]])
    U = SeededRng(1).unit_vectors(20, 3)
    assert np.allclose(B.support_values(ball, U).values, 1.0)
    K = lens(0.6, 3)
    assert B.support_value(K, [0, 1, 0]) == pytest.approx(0.8, abs=1e-12)
    assert B.support_value(K, [1, 0, 0]) == pytest.approx(0.4, abs=1e-12)


def test_support_monotone_under_more_balls():
    rng = SeededRng(2)
    for _ in range(20):
        C = rng.in_ball(6, 3, 0.4)
        K5 = B.BallIntersectionBody.from_balls(C[:5])
        K6 = B.BallIntersectionBody.from_balls(C)
        U = rng.unit_vectors(50, 3)
        assert np.all(B.support_values(K6, U).values <= B.support_values(K5, U).values + 1e-12)


@pytest.mark.parametrize("n", [2, 3])
def test_active_set_agrees_with_dykstra(n):
    rng = SeededRng(3, n)
    for _ in range(10):
        K = B.random_ball_body(n, rng)
        U = rng.unit_vectors(5, n)
        a = B.support_values(K, U).values
        b = B.support_values(K, U, method="dykstra").values
        assert np.abs(a - b).max() <= 1e-6


def test_support_matches_exact_planar():
    rng = SeededRng(4)
    for _ in range(30):
        K = B.random_ball_body(2, rng)
        P = intersect_disks(K.centers, K.radii)
        assert np.abs(B.support_values(K, G2.directions).values - P.support(G2.directions)).max() <= 1e-9


def test_sample_support_examples():
    c = np.array([0.2, -0.1])
    S = B.sample_support(B.BallIntersectionBody.from_balls([c]), G2)
    assert np.allclose(S.values, G2.directions @ c + 1)
    L = B.sample_support(lens(0.6), G2)
    assert L.values.max() == pytest.approx(0.8, abs=1e-12)


def test_c_dual_of_balls():
    for r in (1.0, 0.5, 0.3):
        c = np.array([0.1, 0.2, -0.3])
        D = B.c_dual(B.sample_ball(G3, c, r))
        assert np.allclose(D.values, G3.directions @ c + (1 - r))
    D = B.c_dual(B.sample_ball(G3, np.zeros(3), 1.0))
    assert np.allclose(D.values, 0.0)


def test_minkowski_examples():
    K = B.sample_ball(G2, [0, 0], 0.5)
    T = B.sample_ball(G2, [0.4, 0.2], 0.5)
    assert np.array_equal(B.minkowski_combine(K, T, 0.0).values, K.values)
    assert np.allclose(B.minkowski_combine(K, K, 0.3).values, K.values)
    M = B.minkowski_combine(K, T, 0.5)
    assert np.allclose(M.values, B.sample_ball(G2, [0.2, 0.1], 0.5).values)
    with pytest.raises(GeometryError):
        B.minkowski_combine(K, T, 1.5)


def test_project_examples():
    E = np.array([[1.0, 0.0], [0.0, 0.0], [0.0, 1.0]])
    P = B.project(B.BallIntersectionBody.from_balls([[0.3, 0.5, -0.2]]), E)
    assert np.allclose(P.values, P.grid.directions @ np.array([0.3, -0.2]) + 1, atol=1e-12)
    P1 = B.project(lens(0.6, 3), np.array([[1.0], [0.0], [0.0]]))
    assert np.allclose(P1.values, 0.4, atol=1e-12)
    # sampled bodies project through the LP
    Ps = B.project(B.sample_ball(G3, [0.1, 0.0, 0.0], 0.5), E, m=64)
    assert np.abs(Ps.values - (Ps.grid.directions @ np.array([0.1, 0.0]) + 0.5)).max() <= 0.02


def test_section_examples():
    ball = B.BallIntersectionBody.from_balls([[0.0, 0.0, 0.0]])
    S, _, _ = B.section(ball, [1, 0, 0], 0.0)
    assert S.radii[0] == pytest.approx(1.0)
    S, _, _ = B.section(ball, [1, 0, 0], 0.6)
    assert S.radii[0] == pytest.approx(0.8)
    S, _, _ = B.section(ball, [1, 0, 0], 1.0)
    assert S.radii[0] == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(EmptyBodyError):
        B.section(ball, [1, 0, 0], 1.1)


def test_hausdorff_examples():
    K = B.sample_ball(G3, np.zeros(3), 1.0)
    assert B.hausdorff(K, K).value == 0.0
    assert B.hausdorff(K, B.sample_ball(G3, np.zeros(3), 0.5)).value == pytest.approx(0.5)
    c = np.array([0.3, 0.4, 0.0])
    assert B.hausdorff(K, B.sample_ball(G3, c, 1.0)).upper >= 0.5 - 1e-12
    assert B.hausdorff(K, B.sample_ball(G3, c, 1.0)).value == pytest.approx(0.5, abs=G3.mesh)


def test_contains_examples():
    A = SeededRng(5).in_ball(6, 3, 0.6)
    H = B.CHullBody.of(A)
    assert all(H.contains(a) for a in A)
    two = B.CHullBody.of([[0.0, 0.0], [1.0, 0.0]])
    assert two.classify([[0.5, 0.0]])[0] == "inside"
    assert not H.contains(A.mean(0) + [2.5, 0, 0] + 0.6)


def test_diameter_examples():
    assert B.diameter(B.sample_ball(G2, [0, 0], 0.3)).value == pytest.approx(0.6)
    assert B.diameter(B.sample_support(lens(0.6), G2)).value == pytest.approx(1.6, abs=1e-12)
    assert B.refined_diameter(lens(0.6, 3), G3) == pytest.approx(1.6, abs=1e-9)


def test_mean_width():
    assert B.mean_width(B.sample_ball(G3, [0.1, 0, 0], 0.3)) == pytest.approx(0.3)
    rng = SeededRng(6)
    for n, g in ((2, G2), (3, G3)):
        S = B.sample_support(B.random_ball_body(n, rng), g)
        assert B.mean_width(S) + B.mean_width(B.c_dual(S)) == pytest.approx(1.0, abs=1e-12)


def test_mc_volume_examples():
    rng = SeededRng(7)
    r = B.mc_volume(B.BallIntersectionBody.from_balls([[0.0, 0.0]]).contains_many, [0, 0], 1.0,
                    10 ** 6, rng)
    assert abs(r.estimate - math.pi) <= 3 * r.stderr + 1e-12
    half = B.BallIntersectionBody.from_balls([[0.0, 0.0, 0.0]], 0.5)
    r = B.mc_volume_body(half, 200000, rng)
    assert abs(r.estimate - math.pi / 6) <= 3 * r.stderr + 1e-9  # the bounding ball is exact here
    H = B.CHullBody.of([[0.0, 0.0], [1.0, 1.0]])
    r = B.mc_volume_body(H, 200000, rng)
    assert abs(r.estimate - (math.pi / 2 - 1)) <= 3 * r.stderr


def test_mc_volume_flags_degenerate():
    r = B.mc_volume(lambda X: np.zeros(len(X), bool), [0, 0], 1.0, 1000, SeededRng(0))
    assert r.degenerate and r.estimate == 0.0


def test_half_dual_sum_examples():
    ball = B.BallIntersectionBody.from_balls([[0.0, 0.0, 0.0]])
    assert B.half_dual_sum_membership(ball, ball, np.zeros(3))[0]
    p = np.array([0.2, 0.1, 0.0])
    Bp = B.BallIntersectionBody.from_balls([p])
    assert B.half_dual_sum_membership(Bp, Bp, p)[0]
    T = B.BallIntersectionBody.from_balls([[3.0, 0.0, 0.0]])
    assert B.half_dual_sum_membership(ball, T, [1.5, 0, 0])[0]
    assert not B.half_dual_sum_membership(ball, T, [0, 0, 0])[0]


@given(point_sets(2, 1, 6, radius=0.5), seeds)
def test_order_reversal(A, seed):
    rng = SeededRng(seed)
    Bset = np.vstack([A, rng.in_ball(3, 2, 0.5)])
    X = rng.in_ball(300, 2, 1.5)
    inB = B.BallIntersectionBody.from_balls(Bset).contains_many(X)
    inA = B.BallIntersectionBody.from_balls(A).contains_many(X)
    assert np.all(~inB | inA)  # B^c is inside A^c
    H = B.CHullBody.of(A)
    assert all(H.contains(a) for a in A)


@pytest.mark.parametrize("delta", [0.01, 0.05])
def test_continuity_modulus(delta):
    """(A + dB)^c is in A^c, which is in (A + dB)^c + eta B, checked on support values."""
    rng = SeededRng(8)
    eta = math.sqrt(2 * delta - delta ** 2)
    for _ in range(10):
        A = rng.in_ball(5, 2, 0.4)
        hA = intersect_disks(A, 1.0).support(G2.directions)
        hAd = intersect_disks(A, 1.0 - delta).support(G2.directions)  # (A + dB)^c
        assert np.all(hAd <= hA + 1e-12)
        assert np.all(hA <= hAd + eta + 1e-12)


def test_triangle_hull_diameter():
    eps, L = 0.2, 1.5
    # legs L, base 2 sin(2 eps)
    s = math.sin(2 * eps)
    height = math.sqrt(L ** 2 - s ** 2)
    A = np.array([[0.0, 0.0], [height, s], [height, -s]])
    P = spindle_hull(A)
    expected = math.sqrt(L ** 2 - math.sin(2 * eps) ** 2) + 2 * math.sin(eps) ** 2
    assert P.diameter() == pytest.approx(expected, abs=1e-4)


def test_inradius_primal_unequal_radii():
    K = B.BallIntersectionBody.from_balls([[0.0, 0.0], [0.9, 0.0]], [0.3, 0.7])
    r = B.inradius_primal(K)
    assert r.radius == pytest.approx(0.05, abs=1e-7)
    assert np.allclose(r.center, [0.25, 0.0], atol=1e-6)


@pytest.mark.parametrize("n", [2, 3])
def test_inradius_support_is_feasible(n):
    rng = SeededRng(9, n)
    for _ in range(5):
        K = B.random_ball_body(n, rng)
        H = B.CHullBody.of(K.centers)
        r = B.inradius_support(H)
        U = rng.unit_vectors(20000, n)
        assert (H.support(U) - U @ r.center - r.radius).min() >= -1e-9
        assert r.radius + B.outradius_body(K).radius == pytest.approx(1.0, abs=1e-6)


@pytest.mark.parametrize("kind", ["ball", "hull", "sampled"])
def test_json_round_trip(kind):
    rng = SeededRng(10)
    K = B.random_ball_body(3, rng)
    body = {"ball": K, "hull": B.CHullBody.of(K.centers), "sampled": B.sample_support(K, G3)}[kind]
    back = B.body_from_json(json.dumps(B.body_to_json(body)))
    a = B.sample_support(body, G3) if kind != "sampled" else body
    b = B.sample_support(back, G3) if kind != "sampled" else back
    assert B.hausdorff(a, b).value <= 1e-12


def test_json_rejects_garbage():
    with pytest.raises(GeometryError):
        B.body_from_json({"dim": 2})
    with pytest.raises(GeometryError):
        B.body_from_json({"dim": 2, "kind": "blob", "payload": {}})


@given(st.integers(2, 3), seeds, unit_vectors(3))
def test_support_points_lie_in_body(n, seed, u):
    assume(np.linalg.norm(u[:n]) > 0.1)
    K = B.random_ball_body(n, SeededRng(seed))
    res = B.support_values(K, u[None, :n] / np.linalg.norm(u[:n]))
    assert K.contains(res.points[0], eps=1e-9)
