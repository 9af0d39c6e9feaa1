import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ballbodies import lens as LS
from ballbodies.body import BallIntersectionBody, CHullBody, mc_volume
from ballbodies.core import ConvergenceError, GeometryError, SeededRng
from ballbodies.planar import lens_of_angle

from strategies import seeds


def test_dual_examples():
    L = LS.KLens.axis_aligned(2, 1, 1.0)
    D = LS.klens_dual(L)
    assert D.k == 1 and D.d == 0.0
    assert abs(D.basis[:, 0] @ [1, 0]) < 1e-12
    L = LS.KLens.axis_aligned(3, 1, 0.6)
    D = LS.klens_dual(L)
    assert D.k == 2 and D.d == pytest.approx(0.8)
    DD = LS.klens_dual(D)
    assert DD.d == pytest.approx(0.6)
    assert np.allclose(DD.basis @ DD.basis.T, L.basis @ L.basis.T)


@given(st.integers(2, 5).flatmap(lambda n: st.tuples(st.just(n), st.integers(1, n - 1))),
       st.floats(0.0, 1.0))
def test_dual_radii_pair(nk, d):
    n, k = nk
    L = LS.KLens.axis_aligned(n, k, d)
    out, _ = LS.klens_radii(L)
    _, inn = LS.klens_radii(LS.klens_dual(L))
    assert out + inn == pytest.approx(1.0, abs=1e-12)


def test_contains_examples():
    L = LS.KLens.axis_aligned(3, 2, 0.5)
    assert LS.klens_contains(L, np.zeros(3))
    assert LS.klens_classify(L, [0.5, 0, 0]) == "boundary"
    U = LS.KLens.axis_aligned(3, 1, 1.0)
    X = SeededRng(1).in_ball(2000, 3, 1.3)
    assert np.array_equal(U.defects(X) <= 1e-12, np.linalg.norm(X, axis=1) <= 1.0 + 1e-12)


def test_radii_examples():
    assert LS.klens_radii(LS.KLens.axis_aligned(3, 1, 1.0)) == (1.0, 1.0)
    assert LS.klens_radii(LS.KLens.axis_aligned(3, 1, 0.0)) == (0.0, 0.0)
    o, i = LS.klens_radii(LS.KLens.axis_aligned(3, 1, 0.6))
    assert (o, i) == (pytest.approx(0.6), pytest.approx(0.2))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_codim_one_lens_is_two_balls(n):
    d = 0.55
    L = LS.KLens.axis_aligned(n, n - 1, math.sqrt(1 - d * d))
    e = np.eye(n)[-1]
    K = BallIntersectionBody.from_balls(np.vstack([d * e, -d * e]))
    X = SeededRng(2, n).in_ball(10 ** 4, n, 1.0)
    a = L.defects(X) <= 0
    b = K.contains_many(X, eps=0.0)
    # disagreements only in a thin band around the boundary
    bad = a != b
    assert np.abs(L.defects(X[bad])).max(initial=0.0) <= 1e-12


def test_one_lens_matches_chull_membership():
    rng = SeededRng(3)
    for n in (2, 3):
        for _ in range(5):
            x0, x1 = rng.in_ball(2, n, 0.8)
            L = LS.one_lens_as_klens(x0, x1)
            H = CHullBody.of([x0, x1])
            X = 0.5 * (x0 + x1) + rng.in_ball(2000, n, 0.9)
            ok = np.abs(L.defects(X)) > 1e-7
            assert np.array_equal((L.defects(X) <= 0)[ok], H.contains_many(X[ok], eps=0.0)[ok])
            ang = np.array([LS.one_lens_angle_contains(x, x0, x1, eps=0.0) for x in X[ok]])
            assert np.array_equal(ang, (L.defects(X) <= 0)[ok])


def test_volume_exact_values():
    assert LS.klens_volume(2, 1, 1.0).value == pytest.approx(math.pi, abs=1e-8)
    assert LS.klens_volume(2, 1, math.sqrt(0.5)).value == pytest.approx(math.pi / 2 - 1, abs=1e-8)
    assert LS.klens_volume(3, 1, 0.0).value == 0.0
    assert LS.klens_volume(3, 2, 1.0).value == pytest.approx(4 * math.pi / 3, abs=1e-8)
    with pytest.raises(GeometryError):
        LS.klens_volume(3, 3, 0.5)


def test_volume_planar_lens_area():
    for theta in (0.3, 1.0, 2.0, 3.0):
        d = math.sin(theta / 2)
        assert LS.klens_volume(2, 1, d).value == pytest.approx(theta - math.sin(theta), abs=1e-9)
        assert lens_of_angle(theta).area() == pytest.approx(theta - math.sin(theta), abs=1e-10)


def test_one_lens_volume_matches_klens():
    for n in (2, 3, 5):
        for d in (0.2, 0.7, 1.0):
            assert LS.one_lens_volume(n, d) == pytest.approx(LS.klens_volume(n, 1, d).value, abs=1e-8)


@pytest.mark.parametrize("n,k,d", [(3, 1, 0.6), (3, 2, 0.6), (4, 2, 0.9)])
def test_volume_monte_carlo(n, k, d):
    L = LS.KLens.axis_aligned(n, k, d)
    r = mc_volume(lambda X: L.defects(X) <= 0, np.zeros(n), d, 400000, SeededRng(4, n * 10 + k))
    assert abs(r.estimate - LS.klens_volume(n, k, d).value) <= 3 * r.stderr


def test_volume_convex_in_d_and_monotone_in_k():
    ds = np.linspace(0.05, 0.95, 19)
    for n in (2, 3, 4):
        v = np.array([LS.klens_volume(n, 1, d).value for d in ds])
        assert np.all(v[2:] - 2 * v[1:-1] + v[:-2] >= -1e-10)
        for k in range(1, n - 1):
            for d in (0.3, 0.8):
                assert LS.klens_volume(n, k, d).value <= LS.klens_volume(n, k + 1, d).value + 1e-12


def test_profile_derivatives():
    for n in (2, 3, 4):
        for d in (0.3, 0.7):
            p = LS.one_lens_profile(n, d)
            h = 1e-5
            fd = (LS.one_lens_profile(n, d + h).value - LS.one_lens_profile(n, d - h).value) / (2 * h)
            assert p.first == pytest.approx(fd, rel=1e-6)
            assert p.second > 0


def test_angle_predicate_examples():
    x0, x1 = np.array([-1.0, 0.0]), np.array([1.0, 0.0])
    assert LS.one_lens_angle_contains([0.0, 1.0], x0, x1)
    assert LS.one_lens_critical_angle(x0, x1) == pytest.approx(math.pi / 2)
    assert LS.one_lens_angle_contains([0.0, 0.0], x0, x1)
    assert not LS.one_lens_angle_contains([0.0, 50.0], x0, x1)
    with pytest.raises(LS.WholeSpaceError):
        LS.one_lens_angle_contains([0, 0], [-1.1, 0], [1.1, 0])


def test_apollonius_examples():
    s = math.sqrt(0.5)
    x0, x1 = np.array([-s, 0.0]), np.array([s, 0.0])
    assert LS.apollonius_boundary(x0, x1, x0) == 0.0
    assert LS.apollonius_boundary(x0, x1, [0.0, 0.0]) == pytest.approx(-0.5)
    P = lens_of_angle(math.pi / 2)
    top = np.array([0.0, P.support([[0.0, 1.0]])[0]])
    assert LS.apollonius_boundary(x0, x1, top) == pytest.approx(0.0, abs=1e-12)


@given(seeds)
def test_apollonius_vanishes_on_boundary(seed):
    rng = SeededRng(seed)
    x0, x1 = rng.in_ball(2, 2, 0.9)
    L = LS.one_lens_as_klens(x0, x1)
    # a boundary point: on the unit arc through x0 and x1
    m, e = 0.5 * (x0 + x1), (x1 - x0) / np.linalg.norm(x1 - x0)
    nrm = np.array([-e[1], e[0]])
    c = m - math.sqrt(1 - L.d ** 2) * nrm
    a0, a1 = np.arctan2(*(x0 - c)[::-1]), np.arctan2(*(x1 - c)[::-1])
    t = rng.uniform()
    ang = a0 + t * ((a1 - a0 + math.pi) % (2 * math.pi) - math.pi)
    y = c + np.array([math.cos(ang), math.sin(ang)])
    assert abs(LS.apollonius_boundary(x0, x1, y)) <= 1e-9
    assert abs(L.defect(y)) <= 1e-9


def test_adaptive_simpson():
    q = LS.adaptive_simpson(math.sin, 0.0, math.pi, 1e-12)
    assert q.value == pytest.approx(2.0, abs=1e-11)
    q = LS.adaptive_simpson(lambda x: math.sqrt(x), 0.0, 1.0, 1e-7)
    assert q.value == pytest.approx(2 / 3, abs=1e-6)


def test_adaptive_simpson_reports_depth_cap():
    # the endpoint singularity of sqrt needs more than 40 halvings at this tolerance
    with pytest.raises(ConvergenceError):
        LS.adaptive_simpson(lambda x: math.sqrt(x), 0.0, 1.0, 1e-12)
