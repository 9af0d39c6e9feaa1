"""Shared primitives: vectors, balls, rigid motions, direction grids, tolerances, RNG."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import ndtri


class GeometryError(ValueError):
    """Invalid input: bad dimension, non-unit direction, empty body, ..."""


class ConvergenceError(RuntimeError):
    """A numerical routine stopped before reaching its tolerance."""

    def __init__(self, message: str, residual: float = float("nan")):
        super().__init__(message)
        self.residual = residual


class EmptyBodyError(GeometryError):
    """Raised when an operation needs a non-empty body."""


def as_vector(x, dim: int | None = None) -> np.ndarray:
    v = np.asarray(x, dtype=float).reshape(-1)
    if v.size == 0:
        raise GeometryError("empty vector")
    if not np.all(np.isfinite(v)):
        raise GeometryError("vector has non-finite coordinates")
    if dim is not None and v.size != dim:
        raise GeometryError(f"expected dimension {dim}, got {v.size}")
    return v


def as_points(A, dim: int | None = None) -> np.ndarray:
    P = np.asarray(A, dtype=float)
    if P.ndim == 1:
        P = P.reshape(1, -1)
    if P.ndim != 2 or P.shape[0] == 0:
        raise GeometryError("point set must be a non-empty (m, n) array")
    if not np.all(np.isfinite(P)):
        raise GeometryError("point set has non-finite coordinates")
    if dim is not None and P.shape[1] != dim:
        raise GeometryError(f"expected dimension {dim}, got {P.shape[1]}")
    return P


@dataclass(frozen=True)
class ToleranceProfile:
    geom_eps: float = 1e-9
    solver_tol: float = 1e-9
    quad_tol: float = 1e-10
    mc_confidence_sigmas: float = 3.0

    def __post_init__(self):
        for name in ("geom_eps", "solver_tol", "quad_tol", "mc_confidence_sigmas"):
            if not getattr(self, name) > 0:
                raise GeometryError(f"{name} must be strictly positive")


DEFAULT_TOL = ToleranceProfile()


@dataclass(frozen=True)
class ClosedBall:
    center: np.ndarray
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", as_vector(self.center))
        if not (math.isfinite(self.radius) and self.radius >= 0):
            raise GeometryError("ball radius must be finite and >= 0")

    @property
    def dim(self) -> int:
        return self.center.size

    def contains(self, x, eps: float = DEFAULT_TOL.geom_eps) -> bool:
        return bool(np.linalg.norm(as_vector(x, self.dim) - self.center) <= self.radius + eps)


def reflect(x, u, eps: float = DEFAULT_TOL.geom_eps) -> np.ndarray:
    """Mirror ``x`` in the hyperplane orthogonal to the unit vector ``u``."""
    x = as_vector(x)
    u = as_vector(u, x.size)
    if abs(np.linalg.norm(u) - 1.0) > eps:
        raise GeometryError("reflection direction must be a unit vector")
    return x - 2.0 * np.dot(x, u) * u


@dataclass(frozen=True)
class RigidMotion:
    rotation: np.ndarray
    translation: np.ndarray

    def __post_init__(self):
        U = np.asarray(self.rotation, dtype=float)
        t = as_vector(self.translation)
        if U.shape != (t.size, t.size):
            raise GeometryError("rotation must be an n x n matrix matching the translation")
        if np.max(np.abs(U.T @ U - np.eye(t.size))) > 1e-12:
            raise GeometryError("rotation matrix is not orthogonal to 1e-12")
        object.__setattr__(self, "rotation", U)
        object.__setattr__(self, "translation", t)

    @classmethod
    def identity(cls, n: int) -> "RigidMotion":
        return cls(np.eye(n), np.zeros(n))

    @classmethod
    def random(cls, n: int, rng: "SeededRng") -> "RigidMotion":
        Q, R = np.linalg.qr(rng.normal(size=(n, n)))
        Q = Q * np.sign(np.diag(R))
        return cls(Q, rng.normal(size=n))


def apply_motion(g: RigidMotion, A) -> np.ndarray:
    P = as_points(A)
    if P.shape[1] != g.translation.size:
        raise GeometryError("motion and point set dimensions differ")
    return g.translation + P @ g.rotation.T


@dataclass(frozen=True)
class DirectionGrid:
    """Unit directions with a certified covering radius ``mesh`` (radians).

    ``neg_index[i]`` is the index of ``-directions[i]`` when the grid is
    closed under negation, otherwise ``None``.
    """

    dim: int
    directions: np.ndarray
    mesh: float
    neg_index: np.ndarray | None = field(default=None, compare=False)

    @property
    def size(self) -> int:
        return self.directions.shape[0]

    @property
    def symmetric(self) -> bool:
        return self.neg_index is not None

    def require_symmetric(self):
        if self.neg_index is None:
            raise GeometryError("operation needs a grid closed under negation")

    def matches(self, other: "DirectionGrid") -> bool:
        return (
            self is other
            or (self.directions.shape == other.directions.shape
                and np.array_equal(self.directions, other.directions))
        )

    def reflection_index(self, u, atol: float = 1e-12):
        """Index map i -> j with directions[j] = R_u directions[i], or None per entry."""
        u = as_vector(u, self.dim)
        R = self.directions - 2.0 * np.outer(self.directions @ u, u)
        idx, ang = nearest_directions(self.directions, R)
        return idx, ang <= atol


def nearest_directions(grid_dirs: np.ndarray, queries: np.ndarray, chunk: int = 4096):
    """Nearest grid direction (index, angle) for each unit query."""
    Q = np.atleast_2d(queries)
    idx = np.empty(Q.shape[0], dtype=np.int64)
    ang = np.empty(Q.shape[0])
    for s in range(0, Q.shape[0], chunk):
        G = Q[s:s + chunk] @ grid_dirs.T
        j = np.argmax(G, axis=1)
        idx[s:s + chunk] = j
        # arccos loses precision near 1; use the chord instead
        d = np.linalg.norm(Q[s:s + chunk] - grid_dirs[j], axis=1)
        ang[s:s + chunk] = 2.0 * np.arcsin(np.clip(d / 2.0, 0.0, 1.0))
    return idx, ang


def _kronecker_sphere(n: int, count: int) -> np.ndarray:
    # generalized golden-ratio (R_d) sequence pushed through the normal quantile
    d = n
    phi = 2.0
    for _ in range(64):
        phi = (1.0 + phi) ** (1.0 / (d + 1))
    alpha = (1.0 / phi) ** np.arange(1, d + 1)
    k = np.arange(1, count + 1)[:, None]
    U = np.mod(0.5 + alpha * k, 1.0)
    G = ndtri(np.clip(U, 1e-12, 1 - 1e-12))
    return G / np.linalg.norm(G, axis=1, keepdims=True)


def _fibonacci_s2(count: int) -> np.ndarray:
    golden = (1.0 + 5.0 ** 0.5) / 2.0
    k = np.arange(count) + 0.5
    z = 1.0 - 2.0 * k / count
    r = np.sqrt(np.clip(1.0 - z * z, 0.0, None))
    th = 2.0 * np.pi * k / golden
    return np.column_stack([r * np.cos(th), r * np.sin(th), z])


def fibonacci_grid(n: int, m: int, certify_samples: int = 20000, seed: int = 0) -> DirectionGrid:
    """Near-uniform directions in R^n.

    For n = 2 the grid is exactly the angles 2*pi*k/m with mesh pi/m.  For
    n >= 3 and even m the grid is a low-discrepancy half-set plus its
    negatives; the mesh is the largest nearest-grid angle over
    ``certify_samples`` random directions, inflated by 10 percent.
    """
    if n < 2:
        raise GeometryError("direction grids need n >= 2")
    if m < 2 * n:
        raise GeometryError(f"need at least {2 * n} directions in dimension {n}")
    if n == 2:
        th = 2.0 * np.pi * np.arange(m) / m
        D = np.column_stack([np.cos(th), np.sin(th)])
        D[np.abs(D) < 1e-15] = 0.0
        neg = (np.arange(m) + m // 2) % m if m % 2 == 0 else None
        return DirectionGrid(2, D, math.pi / m, neg)
    if m % 2 == 0:
        # n = 3: the z > 0 half of a full spherical Fibonacci set, mirrored
        half = _fibonacci_s2(m)[: m // 2] if n == 3 else _kronecker_sphere(n, m // 2)
        D = np.vstack([half, -half])
        neg = np.concatenate([np.arange(m // 2, m), np.arange(m // 2)])
    else:
        D = _fibonacci_s2(m) if n == 3 else _kronecker_sphere(n, m)
        neg = None
    D = D / np.linalg.norm(D, axis=1, keepdims=True)
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(n, m)))
    Q = rng.normal(size=(certify_samples, n))
    Q /= np.linalg.norm(Q, axis=1, keepdims=True)
    _, ang = nearest_directions(D, Q)
    return DirectionGrid(n, D, 1.1 * float(ang.max()), neg)


class SeededRng:
    """Counter-based reproducible stream: (seed, stream) fixes every draw."""

    def __init__(self, seed: int = 0, stream: int = 0):
        if seed < 0 or stream < 0:
            raise GeometryError("seed and stream must be non-negative")
        self.seed = int(seed) & 0xFFFFFFFFFFFFFFFF
        self.stream = int(stream) & 0xFFFFFFFFFFFFFFFF
        ss = np.random.SeedSequence(self.seed, spawn_key=(self.stream,))
        self.generator = np.random.Generator(np.random.PCG64(ss))

    def spawn(self, stream: int) -> "SeededRng":
        return SeededRng(self.seed, stream)

    def normal(self, size=None):
        return self.generator.normal(size=size)

    def uniform(self, low=0.0, high=1.0, size=None):
        return self.generator.uniform(low, high, size=size)

    def integers(self, low, high=None, size=None):
        return self.generator.integers(low, high, size=size)

    def unit_vectors(self, count: int, n: int) -> np.ndarray:
        X = self.normal(size=(count, n))
        return X / np.linalg.norm(X, axis=1, keepdims=True)

    def in_ball(self, count: int, n: int, radius: float = 1.0) -> np.ndarray:
        U = self.unit_vectors(count, n)
        r = radius * self.uniform(size=count) ** (1.0 / n)
        return U * r[:, None]


def unit_ball_volume(n: int) -> float:
    """kappa_n, exact table for n <= 3."""
    table = {0: 1.0, 1: 2.0, 2: math.pi, 3: 4.0 * math.pi / 3.0}
    if n in table:
        return table[n]
    return math.pi ** (n / 2.0) / math.gamma(n / 2.0 + 1.0)


def orthonormal_complement(E: np.ndarray) -> np.ndarray:
    """Columns spanning the orthogonal complement of the column span of E."""
    E = np.atleast_2d(np.asarray(E, dtype=float))
    n, k = E.shape
    Q, _ = np.linalg.qr(np.hstack([E, np.eye(n)]))
    return Q[:, k:n]
