"""k-lenses: c-hulls of k-dimensional spheres, their duals, radii, membership and volume."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (DEFAULT_TOL, ConvergenceError, GeometryError, as_vector,
                   orthonormal_complement, unit_ball_volume)


class WholeSpaceError(GeometryError):
    """The c-hull of the input is all of R^n (points farther apart than 2)."""


def kappa(n: int) -> float:
    return unit_ball_volume(n)


@dataclass(frozen=True)
class KLens:
    """L_k(center, E, d); ``basis`` holds an orthonormal basis of E as columns."""

    center: np.ndarray
    basis: np.ndarray
    d: float

    def __post_init__(self):
        c = as_vector(self.center)
        E = np.asarray(self.basis, dtype=float).reshape(c.size, -1)
        if E.shape[1] > c.size:
            raise GeometryError("subspace dimension exceeds ambient dimension")
        if E.shape[1] and np.max(np.abs(E.T @ E - np.eye(E.shape[1]))) > 1e-12:
            raise GeometryError("lens basis is not orthonormal to 1e-12")
        if not 0.0 <= self.d <= 1.0:
            raise GeometryError("lens parameter d must lie in [0, 1]")
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "basis", E)

    @property
    def n(self) -> int:
        return self.center.size

    @property
    def k(self) -> int:
        return self.basis.shape[1]

    @classmethod
    def axis_aligned(cls, n: int, k: int, d: float, center=None) -> "KLens":
        c = np.zeros(n) if center is None else center
        return cls(c, np.eye(n)[:, :k], d)

    def defect(self, x) -> float:
        """|y|^2 + 2 sqrt(1 - d^2) |P_{E^perp} y| - d^2 with y = x - center."""
        y = as_vector(x, self.n) - self.center
        perp = y - self.basis @ (self.basis.T @ y)
        return float(y @ y + 2.0 * math.sqrt(max(1.0 - self.d ** 2, 0.0))
                     * np.linalg.norm(perp) - self.d ** 2)

    def defects(self, X) -> np.ndarray:
        Y = np.atleast_2d(X) - self.center
        perp = Y - (Y @ self.basis) @ self.basis.T
        c = math.sqrt(max(1.0 - self.d ** 2, 0.0))
        return (Y * Y).sum(1) + 2.0 * c * np.linalg.norm(perp, axis=1) - self.d ** 2


def klens_dual(L: KLens) -> KLens:
    """The dual (n - k)-lens L_{n-k}(x, E^perp, sqrt(1 - d^2))."""
    Eperp = orthonormal_complement(L.basis) if L.k else np.eye(L.n)
    return KLens(L.center, Eperp, math.sqrt(max(1.0 - L.d ** 2, 0.0)))


def klens_contains(L: KLens, x, eps: float = DEFAULT_TOL.geom_eps) -> bool:
    return L.defect(x) <= eps


def klens_classify(L: KLens, x, eps: float = DEFAULT_TOL.geom_eps) -> str:
    v = L.defect(x)
    if v > eps:
        return "outside"
    return "boundary" if v >= -eps else "inside"


def klens_radii(L: KLens) -> tuple[float, float]:
    """(out-radius, in-radius) = (d, 1 - sqrt(1 - d^2))."""
    return L.d, 1.0 - math.sqrt(max(1.0 - L.d ** 2, 0.0))


@dataclass(frozen=True)
class QuadResult:
    value: float
    error: float
    evaluations: int


def adaptive_simpson(f, a: float, b: float, tol: float = DEFAULT_TOL.quad_tol,
                     max_depth: int = 40) -> QuadResult:
    """Adaptive Simpson with Richardson correction.

    ``tol`` is an absolute target; it is split in half at each bisection.
    Raises ConvergenceError when an interval at ``max_depth`` still misses
    its share of the tolerance by more than a factor of ten.
    """
    if b == a:
        return QuadResult(0.0, 0.0, 0)
    fa, fm, fb = f(a), f(0.5 * (a + b)), f(b)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    count = 3
    err_total = 0.0
    failed = 0.0
    stack = [(a, b, fa, fm, fb, whole, tol, 0)]
    total = 0.0
    while stack:
        lo, hi, flo, fmid, fhi, S, eps, depth = stack.pop()
        mid = 0.5 * (lo + hi)
        lm, rm = 0.5 * (lo + mid), 0.5 * (mid + hi)
        flm, frm = f(lm), f(rm)
        count += 2
        left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid)
        right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi)
        delta = left + right - S
        if depth >= max_depth or abs(delta) <= 15.0 * eps:
            if depth >= max_depth and abs(delta) > 150.0 * eps:
                failed = max(failed, abs(delta) / 15.0)
            total += left + right + delta / 15.0
            err_total += abs(delta) / 15.0
        else:
            stack.append((lo, mid, flo, flm, fmid, left, 0.5 * eps, depth + 1))
            stack.append((mid, hi, fmid, frm, fhi, right, 0.5 * eps, depth + 1))
    if failed:
        raise ConvergenceError("adaptive Simpson hit the depth cap", failed)
    return QuadResult(total, err_total, count)


@dataclass(frozen=True)
class LensVolumeResult:
    value: float
    error: float


def klens_volume(n: int, k: int, d: float, tol: float = DEFAULT_TOL.quad_tol) -> LensVolumeResult:
    """Volume of L_k(x, E, d) in R^n:

        k kappa_k kappa_{n-k} int_0^d (sqrt(1 - s^2) - sqrt(1 - d^2))^{n-k} s^{k-1} ds
    """
    if not 1 <= k <= n - 1:
        raise GeometryError("klens_volume needs 1 <= k <= n - 1")
    if not 0.0 <= d <= 1.0:
        raise GeometryError("d must lie in [0, 1]")
    if d == 0.0:
        return LensVolumeResult(0.0, 0.0)
    c = math.sqrt(max(1.0 - d * d, 0.0))
    const = k * kappa(k) * kappa(n - k)

    # s = sin(phi) removes the square-root endpoint singularity at d = 1
    def g(phi):
        return max(math.cos(phi) - c, 0.0) ** (n - k) * math.sin(phi) ** (k - 1) * math.cos(phi)

    q = adaptive_simpson(g, 0.0, math.asin(d), tol / const)
    return LensVolumeResult(const * q.value, const * q.error)


@dataclass(frozen=True)
class ProfileResult:
    value: float
    first: float
    second: float


def _cos_power_integral(p: int, d: float, tol: float) -> float:
    # int_0^d (sqrt(1 - t^2) - sqrt(1 - d^2))^p dt, with t = sin(phi)
    c = math.sqrt(max(1.0 - d * d, 0.0))
    return adaptive_simpson(lambda f: max(math.cos(f) - c, 0.0) ** p * math.cos(f),
                            0.0, math.asin(d), tol).value


def _profile_value(n: int, d: float, tol: float) -> float:
    return _cos_power_integral(n - 1, d, tol)


def _profile_first(n: int, d: float, tol: float) -> float:
    if d == 0.0 or n < 2:
        return 0.0 if n >= 2 else 1.0
    if d >= 1.0:
        return math.inf
    c = math.sqrt(1.0 - d * d)
    return (n - 1) * d / c * _cos_power_integral(n - 2, d, tol)


def one_lens_profile(n: int, d: float, tol: float = DEFAULT_TOL.quad_tol,
                     fd_step: float = 1e-4) -> ProfileResult:
    """F_n(d) = int_0^d (sqrt(1 - t^2) - sqrt(1 - d^2))^{n-1} dt with F' and F''.

    The 1-lens of parameter d in R^n has volume 2 kappa_{n-1} F_n(d).  F' is
    exact (differentiation under the integral); F'' is a central difference
    of F'.
    """
    if not 0.0 <= d <= 1.0:
        raise GeometryError("d must lie in [0, 1]")
    if n < 2:
        raise GeometryError("n must be at least 2")
    val = _profile_value(n, d, tol)
    first = _profile_first(n, d, tol)
    lo, hi = max(d - fd_step, 0.0), min(d + fd_step, 1.0 - 1e-12)
    second = (_profile_first(n, hi, tol) - _profile_first(n, lo, tol)) / (hi - lo) if hi > lo else math.nan
    return ProfileResult(val, first, second)


def one_lens_volume(n: int, d: float, tol: float = DEFAULT_TOL.quad_tol) -> float:
    return 2.0 * kappa(n - 1) * _profile_value(n, d, tol)


def one_lens_angle_contains(x, x0, x1, eps: float = DEFAULT_TOL.geom_eps) -> bool:
    """Membership in the c-hull of {x0, x1} through the angle at x."""
    x = as_vector(x)
    x0 = as_vector(x0, x.size)
    x1 = as_vector(x1, x.size)
    L = float(np.linalg.norm(x1 - x0))
    if L > 2.0 + eps:
        raise WholeSpaceError("points farther apart than 2: the c-hull is R^n")
    a, b = x0 - x, x1 - x
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na <= eps or nb <= eps:
        return True
    cosang = float(np.clip(a @ b / (na * nb), -1.0, 1.0))
    if cosang <= -1.0 + 1e-15:
        return True  # on the open segment
    theta = math.acos(cosang)
    theta0 = math.pi - math.asin(min(L / 2.0, 1.0))
    return theta >= theta0 - eps


def one_lens_critical_angle(x0, x1) -> float:
    L = float(np.linalg.norm(as_vector(x1) - as_vector(x0)))
    if L > 2.0:
        raise WholeSpaceError("points farther apart than 2: the c-hull is R^n")
    return math.pi - math.asin(L / 2.0)


def apollonius_boundary(x0, x1, y) -> float:
    """Residual 2h - ab with a, b the distances to x0, x1 and h the distance to the segment.

    It vanishes on the boundary of conv_c{x0, x1} and is <= 0 inside.  Far
    from the lens the angle at y is small and the residual is negative again,
    so the sign alone is not a membership test.
    """
    y = as_vector(y)
    x0 = as_vector(x0, y.size)
    x1 = as_vector(x1, y.size)
    if np.linalg.norm(x1 - x0) > 2.0:
        raise WholeSpaceError("points farther apart than 2: the c-hull is R^n")
    a = float(np.linalg.norm(y - x0))
    b = float(np.linalg.norm(y - x1))
    seg = x1 - x0
    L2 = float(seg @ seg)
    t = 0.0 if L2 == 0 else float(np.clip((y - x0) @ seg / L2, 0.0, 1.0))
    h = float(np.linalg.norm(y - (x0 + t * seg)))
    return 2.0 * h - a * b


def one_lens_as_klens(x0, x1) -> KLens:
    """conv_c{x0, x1} as the 1-lens L_1(midpoint, span(x1 - x0), |x1 - x0| / 2)."""
    x0 = as_vector(x0)
    x1 = as_vector(x1, x0.size)
    delta = float(np.linalg.norm(x1 - x0)) / 2.0
    if delta > 1.0:
        raise WholeSpaceError("points farther apart than 2: the c-hull is R^n")
    m = 0.5 * (x0 + x1)
    if delta == 0.0:
        return KLens(m, np.eye(x0.size)[:, :1], 0.0)
    e = (x1 - x0) / (2.0 * delta)
    return KLens(m, e[:, None], delta)
