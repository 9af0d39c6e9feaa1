import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ballbodies import lens as LS
from ballbodies import verify as V
from ballbodies.core import GeometryError, SeededRng

from strategies import seeds

SMALL = V.SuiteConfig(scale=0.02)
FAST = [t for t in V.REGISTRY if t not in ("iterative-hull", "klens-volume", "santalo-thereal")]


@pytest.mark.parametrize("tag", FAST)
def test_suite_small_scale_passes(tag):
    r = V.run_suite(tag, SMALL)
    assert r.tag == tag and r.instances > 0
    assert r.passed, r


def test_suite_deterministic():
    a = V.run_suite("skewed-lens", SMALL).to_json()
    b = V.run_suite("skewed-lens", SMALL).to_json()
    assert a == b
    c = V.run_suite("skewed-lens", V.SuiteConfig(seed=1, scale=0.02))
    assert json.loads(c.to_json())["seed"] == 1


def test_unknown_suite():
    with pytest.raises(KeyError, match="unknown suite"):
        V.run_suite("no-such-suite")


def test_report_json_handles_infinity():
    r = V.VerificationReport("x", 0, math.inf, 0.0, 0, True)
    assert json.loads(r.to_json())["worst_margin"] == 1e308


def test_report_only_never_fails():
    r = V.run_suite("KP-weaker-report", SMALL)
    assert r.report_only and r.passed


def test_run_all_pool_matches_serial():
    tags = ["mahler-plane", "schramm", "basin"]
    a = [r.to_json() for r in V.run_all(SMALL, tags)]
    b = [r.to_json() for r in V.run_all(SMALL, tags, workers=2)]
    assert a == b


# ------------------------------------------------------------ KP
@given(seeds, st.integers(2, 3), st.integers(2, 5))
@settings(max_examples=40)
def test_contraction_is_a_contraction(seed, n, N):
    rng = SeededRng(seed)
    Y = rng.in_ball(N, n, 0.6)
    X = V._contraction(Y, rng)
    DX = np.linalg.norm(X[:, None] - X[None], axis=2)
    DY = np.linalg.norm(Y[:, None] - Y[None], axis=2)
    assert np.all(DX <= DY + 1e-12)


def test_two_point_volume_monotone_in_distance():
    """N = 2: Vol(B(x,1) cap B(y,1)) depends only on |x - y| and decreases with it."""
    s = np.linspace(0.0, 1.99, 12)
    area = 2 * (np.arccos(s / 2) - (s / 2) * np.sqrt(1 - s * s / 4))
    vol = math.pi / 12 * (4 + s) * (2 - s) ** 2
    assert np.all(np.diff(area) < 0) and np.all(np.diff(vol) < 0)
    assert area[0] == pytest.approx(math.pi) and vol[0] == pytest.approx(4 * math.pi / 3)
    rng = SeededRng(3)
    Z = rng.in_ball(400000, 3, 1.0)
    y = np.array([s[5], 0.0, 0.0])
    mc = 4 * math.pi / 3 * float((np.linalg.norm(Z - y, axis=1) <= 1).mean())
    assert mc == pytest.approx(vol[5], abs=0.02)


def test_kp_experiment_margin_and_tags():
    r = V.kp_contraction_experiment(2, 3, 20, SeededRng(1), samples=5000)
    assert r.tag == "KP-gromov" and not r.report_only and r.worst_margin >= 0
    r = V.kp_contraction_experiment(2, 5, 5, SeededRng(1), samples=5000)
    assert r.tag == "KP-weaker-report" and r.report_only and r.passed
    with pytest.raises(GeometryError):
        V.kp_contraction_experiment(2, 1, 1, SeededRng(1))


# ------------------------------------------------------------ skewed lens
def test_skewed_lens_symmetric_pair():
    u0 = np.array([0.5, 0.2])
    ok, w = V.skewed_lens_intersection(u0, -u0, np.zeros(2))
    assert ok and max(w.defects) <= 1e-9


def test_skewed_lens_offset_example():
    ok, w = V.skewed_lens_intersection([-0.5, 0.0], [0.5, 0.0], [0.0, 0.3])
    assert ok
    # the witness lies in both lenses, checked against the exact pair hull
    p1, q1 = np.array([0.5, 0.3]), np.array([-0.5, -0.3])
    p2, q2 = np.array([-0.5, 0.3]), np.array([0.5, -0.3])
    assert LS.one_lens_as_klens(p1, q1).defect(w.point) <= 1e-9
    assert LS.one_lens_as_klens(p2, q2).defect(w.point) <= 1e-9


def test_skewed_lens_requires_origin_in_lens():
    with pytest.raises(GeometryError):
        V.skewed_lens_intersection([0.5, 0.0], [0.6, 0.0], [0.0, 0.0])


@given(seeds, st.integers(2, 3))
@settings(max_examples=40)
def test_skewed_lens_random(seed, n):
    u0, u1, z = V.random_skewed_triple(n, SeededRng(seed))
    ok, w = V.skewed_lens_intersection(u0, u1, z)
    assert ok


def test_regular_simplex_edges():
    for n in (2, 3, 4):
        S = V.regular_simplex(n, 0.7)
        D = np.linalg.norm(S[:, None] - S[None], axis=2)
        assert np.allclose(D[~np.eye(n + 1, dtype=bool)], 0.7)


def test_lens_angle_for_area():
    from ballbodies import planar as PL
    for area in (0.1, 0.8, 2.0):
        th = V.lens_angle_for_area(area)
        assert th - math.sin(th) == pytest.approx(area)
        assert PL.lens_of_angle(th).area() == pytest.approx(area, rel=1e-9)
