"""Shared hypothesis strategies."""

import numpy as np
from hypothesis import strategies as st

finite = st.floats(-3.0, 3.0, allow_nan=False, allow_infinity=False)


def vectors(n, lo=-3.0, hi=3.0):
    return st.lists(st.floats(lo, hi, allow_nan=False), min_size=n, max_size=n).map(np.array)


def unit_vectors(n):
    return vectors(n, -1.0, 1.0).filter(lambda v: np.linalg.norm(v) > 0.1).map(
        lambda v: v / np.linalg.norm(v))


def point_sets(n, count_min=1, count_max=8, radius=0.7):
    """Points in the cube [-radius, radius]^n scaled into the ball of that radius."""
    def shrink(P):
        P = np.asarray(P)
        nr = np.linalg.norm(P, axis=1, keepdims=True)
        return np.where(nr > radius, P * (radius / np.maximum(nr, 1e-300)), P)

    return st.lists(vectors(n, -radius, radius), min_size=count_min, max_size=count_max).map(
        lambda L: shrink(np.vstack(L)))


seeds = st.integers(0, 2 ** 31 - 1)
