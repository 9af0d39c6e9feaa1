import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ballbodies import _kernels as K
from ballbodies import planar as PL
from ballbodies.core import SeededRng

from strategies import seeds

needs_numba = pytest.mark.skipif(K.numba_impl is None, reason="numba not installed")


def instance(seed, n, m):
    rng = SeededRng(seed)
    C = rng.in_ball(m, n, 0.5)
    r = rng.uniform(0.8, 1.0, size=m)
    return rng, C, r


@needs_numba
@given(seeds, st.integers(2, 4), st.integers(1, 9))
@settings(max_examples=40)
def test_support_backends_agree(seed, n, m):
    rng, C, r = instance(seed, n, m)
    D = rng.unit_vectors(30, n)
    hn, xn, _ = K.support_batch(C, r, D, impl=K.numpy_impl)
    hb, xb, _ = K.support_batch(C, r, D, impl=K.numba_impl)
    assert np.abs(hn - hb).max() <= 1e-10
    assert np.abs(xn - xb).max() <= 1e-7


@needs_numba
@given(seeds, st.integers(2, 3), st.integers(1, 7))
@settings(max_examples=40)
def test_farthest_backends_agree(seed, n, m):
    rng, C, r = instance(seed, n, m)
    X = rng.uniform(-1.0, 1.0, size=(30, n))
    dn, _ = K.farthest_batch(C, r, X, impl=K.numpy_impl)
    db, _ = K.farthest_batch(C, r, X, impl=K.numba_impl)
    assert np.abs(dn - db).max() <= 1e-10


@needs_numba
def test_membership_and_projection_backends_agree():
    rng, C, r = instance(1, 3, 6)
    X = rng.uniform(-1.0, 1.0, size=(5000, 3))
    assert np.array_equal(K.in_balls(X, C, r, 1e-12, impl=K.numpy_impl),
                          K.in_balls(X, C, r, 1e-12, impl=K.numba_impl))
    D = rng.unit_vectors(40, 3)
    h = K.support_batch(C, r, D)[0]
    assert np.array_equal(K.in_halfspaces(X, D, h, 1e-12, impl=K.numpy_impl),
                          K.in_halfspaces(X, D, h, 1e-12, impl=K.numba_impl))
    y = np.array([0.9, -0.8, 0.7])
    pn = K.dykstra_project(y, C, r, impl=K.numpy_impl)
    pb = K.dykstra_project(y, C, r, impl=K.numba_impl)
    assert np.abs(pn[0] - pb[0]).max() <= 1e-9


@pytest.mark.parametrize("impl", ["numpy_impl", "numba_impl"])
def test_support_against_planar_arcs(impl):
    """Planar support from the arc representation, an independent code path."""
    backend = getattr(K, impl)
    if backend is None:
        pytest.skip("numba not installed")
    rng, C, r = instance(7, 2, 5)
    P = PL.intersect_disks(C, r)
    D = rng.unit_vectors(200, 2)
    h = K.support_batch(C, r, D, impl=backend)[0]
    assert np.abs(h - P.support(D)).max() <= 1e-10


def test_lens_support_of_a_pair():
    Pa, Pb = np.array([[-0.5, 0.0]]), np.array([[0.5, 0.0]])
    D = np.array([[1.0, 0.0], [0.0, 1.0]])
    H, X = K.lens_support_np(Pa, Pb, D)
    assert np.allclose(H[0], [0.5, 1 - np.sqrt(0.75)])
    assert np.allclose(X[0, 1], [0.0, 1 - np.sqrt(0.75)])


def test_env_switch_selects_numpy():
    env = dict(os.environ, BALLBODIES_NO_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", "import ballbodies; print(ballbodies.backend_name())"],
                         env=env, capture_output=True, text=True, check=True).stdout.strip()
    assert out == "numpy"
