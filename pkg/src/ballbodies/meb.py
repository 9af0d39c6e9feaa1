"""Minimum enclosing balls, circumradius functionals and ball-intersection emptiness."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .core import DEFAULT_TOL, GeometryError, as_points, as_vector


@dataclass(frozen=True)
class EnclosingBall:
    center: np.ndarray
    radius: float
    support: tuple[int, ...]

    @property
    def dim(self) -> int:
        return self.center.size


def circumradius_at(A, x) -> float:
    """R_A(x): radius of the smallest ball centred at x containing A."""
    P = as_points(A)
    x = as_vector(x, P.shape[1])
    return float(np.sqrt(((P - x) ** 2).sum(axis=1)).max())


def _circumball(P: np.ndarray, idx: list[int]):
    n = P.shape[1]
    if not idx:
        return np.full(n, np.nan), -1.0
    p0 = P[idx[0]]
    if len(idx) == 1:
        return p0.copy(), 0.0
    D = P[idx[1:]] - p0
    G = D @ D.T
    b = 0.5 * (D * D).sum(axis=1)
    try:
        lam = np.linalg.solve(G, b)
        if not np.all(np.isfinite(lam)):
            raise np.linalg.LinAlgError
    except np.linalg.LinAlgError:
        lam = np.linalg.lstsq(G, b, rcond=None)[0]
    c = p0 + lam @ D
    R = float(np.sqrt(((P[idx] - c) ** 2).sum(axis=1)).max())
    return c, R


def _mtf(P, order, end, support, eps):
    """Move-to-front Welzl recursion; recursion depth is bounded by n + 1."""
    n = P.shape[1]
    c, R = _circumball(P, support)
    if len(support) == n + 1:
        return c, R, list(support)
    best_support = list(support)
    i = 0
    while i < end:
        ids = order[i:end]
        if R < 0:
            out = np.array([0])
        else:
            d = np.sqrt(((P[ids] - c) ** 2).sum(axis=1))
            out = np.nonzero(d > R + eps)[0]
        if out.size == 0:
            break
        j = i + int(out[0])
        p = order[j]
        c, R, best_support = _mtf(P, order, j, support + [p], eps)
        order[1:j + 1] = order[0:j].copy()
        order[0] = p
        i = j + 1
    return c, R, best_support


def min_enclosing_ball(A, eps: float | None = None) -> EnclosingBall:
    """Smallest ball containing a finite point set (Welzl, move-to-front).

    The processing order is a fixed pseudo-random permutation so the result
    is deterministic.  Duplicated points are merged first; support indices
    refer to the first occurrence in the input.
    """
    P = as_points(A)
    _, first = np.unique(P, axis=0, return_index=True)
    first = np.sort(first)
    Q = P[first]
    scale = 1.0 + float(np.abs(Q).max())
    tol = (1e-12 * scale) if eps is None else eps
    perm = np.random.default_rng(0x5EED).permutation(Q.shape[0])
    order = perm.copy()
    c, R, sup = _mtf(Q, order, Q.shape[0], [], tol)
    if R < 0:  # single point
        c, R, sup = Q[0].copy(), 0.0, [0]
    # the support may carry points that are no longer on the sphere
    d = np.sqrt(((Q[sup] - c) ** 2).sum(axis=1))
    sup = [s for s, ds in zip(sup, d) if ds >= R - 1e-9 * scale]
    R = float(np.sqrt(((Q - c) ** 2).sum(axis=1)).max())
    return EnclosingBall(c, R, tuple(sorted(int(first[s]) for s in sup)))


def outradius(A) -> float:
    return min_enclosing_ball(A).radius


def dual_inradius(outrad_of_K: float) -> float:
    """In-radius of K^c from the out-radius of K; negative input is rejected."""
    if not (outrad_of_K >= 0 and math.isfinite(outrad_of_K)):
        raise GeometryError("out-radius must be finite and non-negative")
    if outrad_of_K > 1.0:
        raise GeometryError("out-radius exceeds 1: the c-dual is empty")
    return 1.0 - outrad_of_K


def jung_radius(diam: float, n: int) -> float:
    return math.sqrt(n / (2.0 * (n + 1))) * diam


@dataclass(frozen=True)
class EmptinessResult:
    empty: bool
    point: np.ndarray
    defect: float  # max_i (|x - a_i| - r_i) at ``point``; the minimum when empty


def intersection_defect(centers, radii, tol: float = DEFAULT_TOL.solver_tol,
                        iters: int = 800) -> EmptinessResult:
    """Minimize max_i (|x - a_i| - r_i); the intersection is empty iff the minimum is > 0.

    Subgradient descent from the centre of the enclosing ball of the centres,
    then an SLSQP polish of the epigraph form.  For equal radii the exact
    answer Outrad(centres) - r is used.  The minimum doubles as minus the
    in-radius when the intersection is not empty.
    """
    C = as_points(centers)
    r = np.asarray(radii, dtype=float).reshape(-1)
    if r.size != C.shape[0]:
        raise GeometryError("one radius per centre")
    meb = min_enclosing_ball(C)
    if np.ptp(r) == 0.0:
        defect = meb.radius - r[0]
        return EmptinessResult(bool(defect > tol), meb.center, float(defect))

    def phi(x):
        return float((np.sqrt(((C - x) ** 2).sum(axis=1)) - r).max())

    x = meb.center.copy()
    best_x, best = x.copy(), phi(x)
    step0 = max(meb.radius, 1e-3)
    for k in range(1, iters + 1):
        d = np.sqrt(((C - x) ** 2).sum(axis=1)) - r
        i = int(np.argmax(d))
        g = x - C[i]
        ng = np.linalg.norm(g)
        if ng == 0:
            break
        x = x - (step0 / math.sqrt(k)) * g / ng
        v = phi(x)
        if v < best:
            best, best_x = v, x.copy()
    n = C.shape[1]
    z0 = np.append(best_x, best)
    cons = {"type": "ineq",
            "fun": lambda z: z[-1] - (np.sqrt(((C - z[:n]) ** 2).sum(axis=1)) - r)}
    res = minimize(lambda z: z[-1], z0, constraints=[cons], method="SLSQP",
                   options={"ftol": 1e-15, "maxiter": 500})
    if res.success:
        v = phi(res.x[:n])
        if v < best:
            best, best_x = v, res.x[:n]
    return EmptinessResult(bool(best > tol), best_x, float(best))
