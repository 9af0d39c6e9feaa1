import math

import numpy as np
import pytest
from hypothesis import given

from ballbodies import planar as PL
from ballbodies.body import BallIntersectionBody, c_dual, sample_support
from ballbodies.core import EmptyBodyError, GeometryError, SeededRng, fibonacci_grid
from ballbodies.lens import WholeSpaceError, one_lens_volume

from strategies import point_sets, seeds

G = fibonacci_grid(2, 720)
REULEAUX_AREA = (math.pi - math.sqrt(3)) / 2


def test_intersect_examples():
    D = PL.intersect_disks([[0.3, 0.1]], 1.0)
    assert D.is_disk and D.area() == pytest.approx(math.pi)
    L = PL.intersect_disks([[0.5, 0.0], [-0.5, 0.0]], 1.0)
    V = L.vertices
    assert len(V) == 2
    assert np.allclose(np.sort(V[:, 1]), [-math.sqrt(3) / 2, math.sqrt(3) / 2])
    assert np.allclose(V[:, 0], 0.0, atol=1e-12)
    with pytest.raises(EmptyBodyError):
        PL.intersect_disks([[1.1, 0.0], [-1.1, 0.0]], 1.0)


def test_arc_polygon_invariants():
    rng = SeededRng(1)
    for _ in range(50):
        P = PL.random_arc_polygon(rng, sub_unit=bool(rng.integers(0, 2)))
        C, r = P.arc_centers, P.arc_radii
        assert np.all(r <= 1.0 + 1e-15) and np.all(r > 0)
        starts, ends = P.start_points(), P.end_points()
        # every arc endpoint lies on its circle
        for k in np.flatnonzero(P.arc_mask):
            assert np.linalg.norm(starts[k] - P.centers[k]) == pytest.approx(P.radii[k], abs=1e-10)
            assert np.linalg.norm(ends[k] - P.centers[k]) == pytest.approx(P.radii[k], abs=1e-10)
        # closed boundary and nonnegative normal turning
        assert np.allclose(np.roll(starts, -1, 0), ends, atol=1e-10)
        assert np.all(P.dtheta >= 0) and P.dtheta.sum() == pytest.approx(2 * math.pi)


def test_spindle_hull_examples():
    p = PL.spindle_hull([[0.2, 0.3]])
    assert p.is_point and p.area() == 0.0
    s = math.sqrt(0.5)
    L = PL.spindle_hull([[-s, 0.0], [s, 0.0]])
    assert len(L.vertices) == 2
    assert L.area() == pytest.approx(math.pi / 2 - 1, abs=1e-12)
    T = np.array([[0.0, 0.0], [1.0, 0.0], [0.5, math.sqrt(3) / 2]])
    R = PL.spindle_hull(T)
    assert R.area() == pytest.approx(REULEAUX_AREA, abs=1e-12)
    assert np.allclose(np.sort(R.corners, axis=0), np.sort(T, axis=0), atol=1e-12)
    w = R.support(G.directions) + R.support(-G.directions)
    assert np.abs(w - 1).max() <= 1e-12
    with pytest.raises(WholeSpaceError):
        PL.spindle_hull([[-1.2, 0.0], [1.2, 0.0]])


@given(point_sets(2, 1, 8, radius=0.7))
def test_spindle_hull_vertices_come_from_input(A):
    H = PL.spindle_hull(A)
    for v in H.corners:
        assert np.linalg.norm(A - v, axis=1).min() <= 1e-8
    assert all(H.contains(a, eps=1e-9) for a in A)


@given(point_sets(2, 2, 6, radius=0.6), seeds)
def test_spindle_hull_idempotent(A, seed):
    H = PL.spindle_hull(A)
    more = np.vstack([A, H.boundary_samples(6)])
    assert PL.hausdorff_planar(PL.spindle_hull(more), H) <= 1e-9


def test_area_and_perimeter_examples():
    D = PL.ArcPolygon.disk([0, 0], 1.0)
    assert D.area() == pytest.approx(math.pi) and D.perimeter() == pytest.approx(2 * math.pi)
    for th in (0.5, math.pi / 2, 2.5):
        L = PL.lens_of_angle(th)
        assert L.area() == pytest.approx(th - math.sin(th), abs=1e-12)
        assert L.perimeter() == pytest.approx(2 * th, abs=1e-12)
    R = PL.reuleaux_triangle()
    assert R.area() == pytest.approx(REULEAUX_AREA, abs=1e-12)
    assert R.perimeter() == pytest.approx(math.pi, abs=1e-12)


def test_area_against_monte_carlo():
    rng = SeededRng(2)
    for _ in range(5):
        P = PL.random_arc_polygon(rng, sub_unit=True)
        X = rng.uniform(-1.5, 1.5, size=(200000, 2))
        inside = P.signed_distance(X) >= 0
        p = inside.mean()
        est, se = 9 * p, 9 * math.sqrt(p * (1 - p) / len(X))
        assert abs(est - P.area()) <= 4 * se


def test_dual_examples():
    p = np.array([0.2, -0.1])
    D = PL.c_dual_planar(PL.ArcPolygon.disk(p, 1.0))
    assert D.is_point and np.allclose(D.centers[0], p)
    L = PL.intersect_disks([[0.5, 0.0], [-0.5, 0.0]], 1.0)
    Ld = PL.c_dual_planar(L)
    assert np.allclose(np.sort(Ld.vertices[:, 0]), [-0.5, 0.5], atol=1e-12)
    R = PL.reuleaux_triangle()
    assert PL.hausdorff_planar(R, PL.c_dual_planar(R)) <= 1e-12


def test_dual_involution_and_grid_agreement():
    rng = SeededRng(3)
    for _ in range(50):
        P = PL.random_arc_polygon(rng)
        D = PL.c_dual_planar(P)
        assert PL.hausdorff_planar(PL.c_dual_planar(D), P) <= 1e-9
        K = BallIntersectionBody.from_balls(P.arc_centers)
        grid_dual = c_dual(sample_support(K, G))
        assert np.abs(grid_dual.values - D.support(G.directions)).max() <= 1e-9


def test_sub_unit_dual():
    # B(c, r) has dual B(c, 1 - r)
    D = PL.c_dual_planar(PL.ArcPolygon.disk([0.1, 0.0], 0.3))
    assert D.area() == pytest.approx(math.pi * 0.49, abs=1e-12)


def test_exposed_faces():
    """Every vertex of an arc-polygon is a unit-arc centre of the dual."""
    rng = SeededRng(4)
    for _ in range(20):
        P = PL.random_arc_polygon(rng)
        D = PL.c_dual_planar(P)
        for v in P.vertices:
            assert np.linalg.norm(D.arc_centers - v, axis=1).min() <= 1e-9


def test_mahler_examples():
    lo, hi = PL.mahler_bounds()
    assert PL.mahler_2d(PL.ArcPolygon.disk([0, 0], 0.5)) == pytest.approx(hi, abs=1e-12)
    assert PL.mahler_2d(PL.lens_of_angle(math.pi / 2)) == pytest.approx(lo, abs=1e-12)
    r = PL.mahler_2d(PL.reuleaux_triangle())
    assert r == pytest.approx(2 * math.sqrt(REULEAUX_AREA), abs=1e-12)
    assert lo < r < hi


def test_mahler_minimizer():
    x = np.linspace(1e-6, math.pi - 1e-6, 200001)
    g = np.sqrt(np.clip(x - np.sin(x), 0, None)) + np.sqrt(np.clip(math.pi - x - np.sin(x), 0, None))
    k = int(np.argmin(g))
    assert x[k] == pytest.approx(math.pi / 2, abs=1e-4)
    assert g[k] == pytest.approx(math.sqrt(2 * math.pi - 4), abs=1e-6)


def test_steiner_examples():
    c = np.array([0.3, -0.2])
    S = PL.steiner_2d(PL.ArcPolygon.disk(c, 0.6), [0.0, 1.0])
    assert S.area == pytest.approx(math.pi * 0.36, rel=1e-6)
    assert np.allclose(S.curvature, 1 / 0.6, rtol=1e-5)
    L = PL.lens_of_angle(1.2)  # symmetric about the x-axis
    S = PL.steiner_2d(L, [0.0, 1.0])
    assert S.area == pytest.approx(L.area(), rel=1e-9)
    assert np.abs(L.signed_distance(S.boundary)).max() <= 1e-9
    S = PL.steiner_2d(PL.reuleaux_triangle(), [0.0, 1.0])
    assert S.area == pytest.approx(REULEAUX_AREA, rel=1e-6)
    assert S.min_curvature >= 1 - 1e-6
    with pytest.raises(GeometryError):
        PL.steiner_2d(L, [0.0, 1.0], fibers=10)


def test_steiner_curvature_analytic_vs_fd():
    rng = SeededRng(5)
    for _ in range(10):
        P = PL.random_arc_polygon(rng)
        S = PL.steiner_2d(P, rng.unit_vectors(1, 2)[0], fibers=2048)
        core = slice(40, -40)
        diff = np.abs(S.curvature[core] - S.curvature_fd[core])
        assert np.median(diff) <= 1e-2


def test_shadow_examples():
    rng = SeededRng(6)
    A = rng.in_ball(4, 2, 0.4)
    v = np.array([1.0, 0.0])
    rows = PL.shadow_system_2d(A, np.full(4, 0.7), v, np.linspace(-1, 1, 9))
    assert np.ptp([r.area for r in rows]) <= 1e-12
    # two points carried along u so that their fiber midpoint reaches u-perp at t = 1
    a, b = np.array([-0.2, 0.5]), np.array([0.3, 0.1])
    mid = 0.5 * (a[1] + b[1])
    rows = PL.shadow_system_2d([a, b], [-mid, -mid], [0.0, 1.0], np.linspace(0, 2, 11))
    F = np.array([r.area for r in rows])
    assert np.ptp(F) <= 1e-12
    # separating linearly: area of the 1-lens at half-distance d(t)
    ts = np.linspace(0.0, 0.8, 9)
    rows = PL.shadow_system_2d([[-0.1, 0], [0.1, 0]], [-1.0, 1.0], [1.0, 0.0], ts)
    for t, r in zip(ts, rows):
        assert r.area == pytest.approx(one_lens_volume(2, 0.1 + t), abs=1e-9)


def test_shadow_infeasible_and_convex():
    rows = PL.shadow_system_2d([[-0.5, 0], [0.5, 0]], [-1.0, 1.0], [1.0, 0.0], [0.0, 0.6])
    assert math.isinf(rows[1].area)
    rng = SeededRng(7)
    for _ in range(20):
        A = rng.in_ball(5, 2, 0.35)
        alpha = rng.uniform(-1, 1, size=5)
        ts = np.linspace(-0.3, 0.3, 41)
        rows = PL.shadow_system_2d(A, alpha, rng.unit_vectors(1, 2)[0], ts)
        F = np.array([r.area for r in rows])
        Fd = np.sqrt(np.array([r.dual_area for r in rows]))
        ok = np.isfinite(F)
        F, Fd = F[ok], Fd[ok]
        assert np.all(F[2:] - 2 * F[1:-1] + F[:-2] >= -1e-8)
        assert np.all(Fd[2:] - 2 * Fd[1:-1] + Fd[:-2] <= 1e-8)


def test_naztel_body():
    N = PL.naztel_body()
    w = N.support(G.directions) + N.support(-G.directions)
    assert np.abs(w - 1).max() <= 1e-12
    assert int(N.arc_mask.sum()) == 4


def test_svg_output():
    svg = PL.arc_polygon_svg(PL.reuleaux_triangle())
    assert svg.count(" A ") == 3 and svg.startswith("<svg")
    assert svg == PL.arc_polygon_svg(PL.reuleaux_triangle())
    disk = PL.arc_polygon_svg(PL.ArcPolygon.disk([0, 0], 1.0))
    assert disk.count("<circle") == 1 and " A " not in disk
    assert 'width="420.00"' in disk  # 200 px per unit and a 10 px margin


def test_diameter_constant_width():
    assert PL.reuleaux_triangle().diameter() == pytest.approx(1.0, abs=1e-12)
    assert PL.lens_of_angle(math.pi / 2).diameter() == pytest.approx(math.sqrt(2), abs=1e-9)
