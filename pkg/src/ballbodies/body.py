"""n-dimensional ball bodies.

Two representations live side by side:

* ``BallIntersectionBody``: a finite intersection of balls of radius <= 1,
  with exact support values from an active-set solver, and exact farthest
  points from sphere-intersection enumeration.
* ``SupportSampledBody``: support values on a direction grid.  Duality,
  Minkowski combination, Hausdorff distance, widths and mean width are exact
  arithmetic on the grid.

``CHullBody`` is conv_c(A) for a finite A, handled through its dual A^c.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog, minimize, minimize_scalar, nnls

from . import _kernels as kern
from .core import (DEFAULT_TOL, ConvergenceError, DirectionGrid, EmptyBodyError, GeometryError,
                   SeededRng, as_points, as_vector, fibonacci_grid, orthonormal_complement,
                   unit_ball_volume)
from .meb import intersection_defect, min_enclosing_ball

PROVENANCE = ("primal-solved", "dual-formula", "combined", "projected", "imported")


# -------------------------------------------------------------- primal body
@dataclass(frozen=True)
class BallIntersectionBody:
    """The intersection of the balls B(centers[i], radii[i])."""

    centers: np.ndarray
    radii: np.ndarray
    empty: bool = field(default=False)
    defect: float = field(default=0.0)

    @classmethod
    def from_balls(cls, centers, radii=1.0) -> "BallIntersectionBody":
        C = as_points(centers)
        r = np.broadcast_to(np.asarray(radii, dtype=float), (C.shape[0],)).copy()
        if np.any(r < 0.0) or np.any(r > 1.0) or not np.all(np.isfinite(r)):
            raise GeometryError("ball radii must lie in [0, 1]")
        res = intersection_defect(C, r)
        return cls(C, r, bool(res.empty), float(res.defect))

    @property
    def dim(self) -> int:
        return self.centers.shape[1]

    @property
    def count(self) -> int:
        return self.centers.shape[0]

    def require_nonempty(self):
        if self.empty:
            raise EmptyBodyError(f"ball intersection is empty (defect {self.defect:.3g})")

    def classify(self, X, eps: float = DEFAULT_TOL.geom_eps) -> np.ndarray:
        """'inside' / 'boundary' / 'outside' per row, with a band of width eps."""
        X = np.atleast_2d(np.asarray(X, dtype=float))
        slack = (np.sqrt(((X[:, None, :] - self.centers[None]) ** 2).sum(-1)) - self.radii).max(1)
        return np.where(slack > eps, "outside", np.where(slack >= -eps, "boundary", "inside"))

    def contains(self, x, eps: float = DEFAULT_TOL.geom_eps) -> bool:
        return bool(kern.in_balls(as_vector(x, self.dim), self.centers, self.radii, eps)[0])

    def contains_many(self, X, eps: float = DEFAULT_TOL.geom_eps) -> np.ndarray:
        return kern.in_balls(as_points(X, self.dim), self.centers, self.radii, eps)

    def reflected(self, about=None) -> "BallIntersectionBody":
        """{2p - y : y in K}; the point p defaults to the origin."""
        p = np.zeros(self.dim) if about is None else as_vector(about, self.dim)
        return BallIntersectionBody(2.0 * p - self.centers, self.radii, self.empty, self.defect)

    def translated(self, t) -> "BallIntersectionBody":
        return BallIntersectionBody(self.centers + as_vector(t, self.dim), self.radii,
                                    self.empty, self.defect)


def c_dual_of_points(A) -> BallIntersectionBody:
    """A^c = the intersection of the unit balls centred at A."""
    return BallIntersectionBody.from_balls(A, 1.0)


@dataclass(frozen=True)
class SupportResult:
    values: np.ndarray
    points: np.ndarray
    status: np.ndarray
    kkt_residual: np.ndarray | None = None


def _kkt_residuals(K: BallIntersectionBody, U: np.ndarray, X: np.ndarray, band: float = 1e-8):
    res = np.empty(U.shape[0])
    for k, (u, x) in enumerate(zip(U, X)):
        d = x - K.centers
        nd = np.linalg.norm(d, axis=1)
        act = (nd >= K.radii - band) & (nd > 0)
        if not act.any():
            res[k] = np.linalg.norm(u)
            continue
        N = (d[act] / nd[act, None]).T
        _, rn = nnls(N, u)
        res[k] = rn
    return res


def support_values(K: BallIntersectionBody, U, method: str = "active_set",
                   tol: float = DEFAULT_TOL.solver_tol, certify: bool = False) -> SupportResult:
    """h_K on the unit rows of U.

    ``active_set`` (default) is exact: candidates are the tangent points of
    u on every sphere intersection of a small working set, and the most
    violated ball joins the set until none is violated.  ``dykstra`` is
    projected gradient ascent with Dykstra projections (slow, kept as an
    independent cross-check).
    """
    K.require_nonempty()
    U = as_points(U, K.dim)
    if np.any(np.abs(np.linalg.norm(U, axis=1) - 1.0) > 1e-9):
        raise GeometryError("support directions must be unit vectors")
    if method == "active_set":
        H, X, st = kern.support_batch(K.centers, K.radii, U)
        if np.any(st != kern.OK):
            bad = np.nonzero(st != kern.OK)[0]
            # degenerate configurations: fall back to the projection method
            for k in bad:
                h, x = _support_dykstra(K, U[k], tol)
                H[k], X[k], st[k] = h, x, kern.OK
    elif method == "dykstra":
        H = np.empty(U.shape[0])
        X = np.empty_like(U)
        st = np.zeros(U.shape[0], dtype=np.int64)
        for k in range(U.shape[0]):
            H[k], X[k] = _support_dykstra(K, U[k], tol)
    else:
        raise GeometryError(f"unknown support method {method!r}")
    kkt = _kkt_residuals(K, U, X) if certify else None
    return SupportResult(H, X, st, kkt)


def _support_dykstra(K: BallIntersectionBody, u: np.ndarray, tol: float,
                     max_iter: int = 100000) -> tuple[float, np.ndarray]:
    """Projected gradient ascent, step 1/sqrt(k), projections by Dykstra."""
    x0 = intersection_defect(K.centers, K.radii).point
    x, _ = kern.dykstra_project(x0, K.centers, K.radii)
    scale = max(float(K.radii.max()), 1e-3)
    best_x, best = x, float(x @ u)
    for k in range(1, max_iter + 1):
        y = x + (scale / math.sqrt(k)) * u
        x_new, _ = kern.dykstra_project(y, K.centers, K.radii, 2000, 1e-15)
        v = float(x_new @ u)
        if v > best:
            best, best_x = v, x_new
        step = np.linalg.norm(x_new - x)
        x = x_new
        if step <= tol and k > 10:
            break
    else:
        raise ConvergenceError("projected gradient hit the iteration cap", float(step))
    return best, best_x


def support_value(K: BallIntersectionBody, u, tol: float = DEFAULT_TOL.solver_tol,
                  method: str = "active_set") -> float:
    return float(support_values(K, np.atleast_2d(as_vector(u, K.dim)), method, tol).values[0])


def farthest_points(K: BallIntersectionBody, X) -> tuple[np.ndarray, np.ndarray]:
    """max_{y in K} |y - x| and the maximizer, for every row x of X."""
    K.require_nonempty()
    return kern.farthest_batch(K.centers, K.radii, as_points(X, K.dim))


def max_norm(K: BallIntersectionBody) -> float:
    return float(farthest_points(K, np.zeros((1, K.dim)))[0][0])


# ----------------------------------------------------------- c-hull bodies
@dataclass(frozen=True)
class CHullBody:
    """conv_c(A) = (A^c)^c for a finite set A with Outrad(A) <= 1."""

    points: np.ndarray
    dual: BallIntersectionBody

    @classmethod
    def of(cls, A) -> "CHullBody":
        P = as_points(A)
        D = c_dual_of_points(P)
        if D.empty:
            raise GeometryError("Outrad(A) > 1: the c-hull is the whole space")
        return cls(P, D)

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def support(self, U) -> np.ndarray:
        return self.support_with_points(U)[0]

    def support_with_points(self, U) -> tuple[np.ndarray, np.ndarray]:
        """The support point of K^c at u is x + u, with x the support point of K at -u."""
        U = as_points(U, self.dim)
        res = support_values(self.dual, -U)
        return 1.0 - res.values, res.points + U

    def max_distance_to_dual(self, X) -> np.ndarray:
        return farthest_points(self.dual, X)[0]

    def classify(self, X, eps: float = DEFAULT_TOL.geom_eps) -> np.ndarray:
        """Exact: x is in conv_c(A) iff every point of A^c is within 1 of x."""
        F = self.max_distance_to_dual(as_points(X, self.dim)) - 1.0
        return np.where(F > eps, "outside", np.where(F >= -eps, "boundary", "inside"))

    def contains(self, x, eps: float = DEFAULT_TOL.geom_eps) -> bool:
        return self.classify(np.atleast_2d(as_vector(x, self.dim)), eps)[0] != "outside"

    def contains_many(self, X, eps: float = DEFAULT_TOL.geom_eps, grid: DirectionGrid | None = None):
        X = as_points(X, self.dim)
        keep = np.ones(X.shape[0], dtype=bool)
        if grid is not None:
            # the grid half-spaces contain the body: a cheap exact rejection
            keep = kern.in_halfspaces(X, grid.directions, self.support(grid.directions), eps)
        out = np.zeros(X.shape[0], dtype=bool)
        if keep.any():
            out[keep] = self.max_distance_to_dual(X[keep]) <= 1.0 + eps
        return out


def chull_contains_grid(A, x, grid: DirectionGrid) -> str:
    """Outer grid test <x,u> <= 1 - h_{A^c}(-u) with a Lipschitz band."""
    H = CHullBody.of(A)
    x = as_vector(x, H.dim)
    h = H.support(grid.directions)
    L = float(np.linalg.norm(H.points, axis=1).max()) + 1.0
    slack = h - grid.directions @ x
    if slack.min() < -1e-12:
        return "outside"
    band = (L + np.linalg.norm(x)) * grid.mesh
    return "inside" if slack.min() > band else "boundary"


# --------------------------------------------------------- sampled bodies
@dataclass(frozen=True)
class SupportSampledBody:
    grid: DirectionGrid
    values: np.ndarray
    lipschitz_bound: float
    provenance: str = "imported"

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float).reshape(-1)
        if v.size != self.grid.size:
            raise GeometryError("one support value per grid direction")
        if not np.all(np.isfinite(v)):
            raise GeometryError("support values must be finite")
        if self.grid.symmetric and np.any(v + v[self.grid.neg_index] < -1e-9):
            raise GeometryError("negative width: the sampled body is empty")
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "lipschitz_bound",
                           float(max(self.lipschitz_bound, np.abs(v).max())))

    @property
    def dim(self) -> int:
        return self.grid.dim

    def widths(self) -> np.ndarray:
        self.grid.require_symmetric()
        return self.values + self.values[self.grid.neg_index]

    def to_json(self) -> dict:
        g = self.grid
        return {"dim": self.dim, "kind": "support_samples",
                "payload": {"directions": g.directions.tolist(), "mesh": g.mesh,
                            "neg_index": None if g.neg_index is None else g.neg_index.tolist(),
                            "values": self.values.tolist(), "lipschitz": self.lipschitz_bound,
                            "provenance": self.provenance}}


def _norm_bound(K) -> float:
    """An upper bound on max |x| over the body."""
    if isinstance(K, BallIntersectionBody):
        return max_norm(K)
    # conv_c(A) lies in B(y, 1) for every y in A^c
    y = intersection_defect(K.dual.centers, K.dual.radii).point
    return float(np.linalg.norm(y)) + 1.0


def sample_support(K, grid: DirectionGrid) -> SupportSampledBody:
    """Exact support values of a primal body or a c-hull on every grid direction."""
    if isinstance(K, BallIntersectionBody):
        vals = support_values(K, grid.directions).values
        return SupportSampledBody(grid, vals, max_norm(K), "primal-solved")
    if isinstance(K, CHullBody):
        return SupportSampledBody(grid, K.support(grid.directions), _norm_bound(K), "dual-formula")
    raise GeometryError("sample_support needs a BallIntersectionBody or a CHullBody")


def sample_ball(grid: DirectionGrid, center, radius: float) -> SupportSampledBody:
    c = as_vector(center, grid.dim)
    return SupportSampledBody(grid, grid.directions @ c + radius, float(np.linalg.norm(c) + radius),
                              "imported")


def c_dual(K: SupportSampledBody) -> SupportSampledBody:
    """h_{K^c}(u) = 1 - h_K(-u); exact and involutive on a symmetric grid."""
    K.grid.require_symmetric()
    vals = 1.0 - K.values[K.grid.neg_index]
    return SupportSampledBody(K.grid, vals, K.lipschitz_bound, "dual-formula")


def _same_grid(K, T):
    if not K.grid.matches(T.grid):
        raise GeometryError("bodies are sampled on different grids")


def minkowski_combine(K: SupportSampledBody, T: SupportSampledBody, lam: float) -> SupportSampledBody:
    if not 0.0 <= lam <= 1.0:
        raise GeometryError("lambda must lie in [0, 1]")
    _same_grid(K, T)
    vals = (1.0 - lam) * K.values + lam * T.values
    L = (1.0 - lam) * K.lipschitz_bound + lam * T.lipschitz_bound
    return SupportSampledBody(K.grid, vals, L, "combined")


@dataclass(frozen=True)
class BoundedValue:
    """A grid value and a certified bound on its distance to the continuous quantity."""

    value: float
    error_bound: float

    @property
    def upper(self) -> float:
        return self.value + self.error_bound


def hausdorff(K: SupportSampledBody, T: SupportSampledBody) -> BoundedValue:
    _same_grid(K, T)
    dev = float(np.abs(K.values - T.values).max())
    return BoundedValue(dev, (K.lipschitz_bound + T.lipschitz_bound) * K.grid.mesh)


def diameter(K: SupportSampledBody) -> BoundedValue:
    w = K.widths()
    return BoundedValue(float(w.max()), 2.0 * K.lipschitz_bound * K.grid.mesh)


def mean_width(K: SupportSampledBody) -> float:
    """Grid average of h (half the usual mean width)."""
    K.grid.require_symmetric()
    return float(K.values.mean())


def _sphere_maximize(f, u0: np.ndarray, radius: float = 0.05, iters: int = 2000) -> tuple[float, np.ndarray]:
    """Local maximum of f on the unit sphere near u0 (Nelder-Mead in the tangent plane, one restart)."""
    u0 = u0 / np.linalg.norm(u0)
    best_val, best_u = float(f(u0)), u0
    for scale in (radius, radius / 100.0):
        B = orthonormal_complement(best_u[:, None])

        def g(t, base=best_u, B=B):
            v = base + B @ t
            return -f(v / np.linalg.norm(v))
        k = B.shape[1]
        simplex = np.vstack([np.zeros(k), scale * np.eye(k)])
        res = minimize(g, np.zeros(k), method="Nelder-Mead",
                       options={"initial_simplex": simplex, "xatol": 1e-13, "fatol": 1e-16,
                                "maxiter": iters})
        v = best_u + B @ res.x
        if -res.fun >= best_val:
            best_val, best_u = float(-res.fun), v / np.linalg.norm(v)
    return best_val, best_u


def refined_diameter(K, grid: DirectionGrid, starts: int = 4) -> float:
    """max_u h(u) + h(-u) with exact supports, polished from the best grid directions."""
    S = sample_support(K, grid)
    w = S.widths()
    sup = K.support if isinstance(K, CHullBody) else (lambda U: support_values(K, U).values)

    def width(u):
        U = np.vstack([u, -u])
        h = sup(U)
        return float(h[0] + h[1])
    best = float(w.max())
    for k in np.argsort(-w)[:starts]:
        val, _ = _sphere_maximize(width, grid.directions[k], 2.0 * grid.mesh)
        best = max(best, val)
    return best


# ---------------------------------------------------- sections, projections
def section(K: BallIntersectionBody, normal, offset: float) -> tuple[BallIntersectionBody, np.ndarray, np.ndarray]:
    """K cap {<x, normal> = offset} in coordinates of the hyperplane.

    Returns (body, origin, basis): a hyperplane point is origin + basis @ y.
    """
    nu = as_vector(normal, K.dim)
    if abs(np.linalg.norm(nu) - 1.0) > 1e-12:
        raise GeometryError("hyperplane normal must be a unit vector")
    d = K.centers @ nu - offset
    if np.any(np.abs(d) > K.radii + 1e-12):
        raise EmptyBodyError("the hyperplane misses a ball: empty section")
    origin = offset * nu
    B = orthonormal_complement(nu[:, None])
    Cs = (K.centers - origin) @ B
    rs = np.sqrt(np.clip(K.radii ** 2 - d ** 2, 0.0, None))
    res = intersection_defect(Cs, rs)
    if res.empty:
        raise EmptyBodyError("empty section")
    return BallIntersectionBody(Cs, rs, False, float(res.defect)), origin, B


def project(K, basis, grid: DirectionGrid | None = None, m: int | None = None) -> SupportSampledBody:
    """P_E K sampled on a grid of E (coordinates w.r.t. the orthonormal ``basis``).

    Primal bodies and c-hulls use exact support values.  A sampled body is
    projected through its outer polytope {x : <x, u_i> <= h_i}, solved by LP.
    """
    E = np.asarray(basis, dtype=float)
    n = K.dim
    E = E.reshape(n, -1)
    k = E.shape[1]
    if np.max(np.abs(E.T @ E - np.eye(k))) > 1e-12:
        raise GeometryError("projection basis is not orthonormal")
    if k == 1:
        g = DirectionGrid(1, np.array([[1.0], [-1.0]]), 0.0, np.array([1, 0]))
    else:
        g = grid or fibonacci_grid(k, m or (64 if k == 2 else 400))
    W = g.directions @ E.T
    if isinstance(K, SupportSampledBody):
        vals = np.empty(g.size)
        for i, w in enumerate(W):
            res = linprog(-w, A_ub=K.grid.directions, b_ub=K.values, bounds=[(None, None)] * n,
                          method="highs", options=_LP_TIGHT)
            if not res.success:
                raise ConvergenceError("projection LP failed: " + res.message)
            vals[i] = -res.fun
        L = K.lipschitz_bound
    else:
        vals = (K.support(W) if isinstance(K, CHullBody) else support_values(K, W).values)
        L = _norm_bound(K)
    return SupportSampledBody(g, vals, L, "projected")


# ----------------------------------------------------------- radii helpers
@dataclass(frozen=True)
class OutradiusResult:
    radius: float
    center: np.ndarray
    lower: float

    @property
    def gap(self) -> float:
        return self.radius - self.lower


def outradius_union(bodies: list[BallIntersectionBody], tol: float = 1e-11,
                    max_iter: int = 500, seed: int = 0) -> OutradiusResult:
    """Out-radius of a union of ball intersections.

    Lower bound: MEB of sampled points; upper bound: the exact farthest
    point of the union from that MEB centre, which then joins the sample.
    """
    n = bodies[0].dim
    for B in bodies:
        B.require_nonempty()
    rng = SeededRng(seed, 11)
    U = np.vstack([np.eye(n), -np.eye(n), rng.unit_vectors(4 * n, n)])
    S = np.vstack([support_values(B, U).points for B in bodies])
    upper, c_best = math.inf, None
    for _ in range(max_iter):
        meb = min_enclosing_ball(S)
        far = [farthest_points(B, meb.center[None, :]) for B in bodies]
        j = int(np.argmax([f[0][0] for f in far]))
        F, y = float(far[j][0][0]), far[j][1][0]
        if F < upper:
            upper, c_best = F, meb.center
        if upper - meb.radius <= tol:
            return OutradiusResult(upper, c_best, meb.radius)
        S = np.vstack([S, y])
    raise ConvergenceError("out-radius bracket did not close", upper - meb.radius)


def outradius_body(K: BallIntersectionBody, tol: float = 1e-11) -> OutradiusResult:
    return outradius_union([K], tol)


@dataclass(frozen=True)
class InradiusResult:
    radius: float
    center: np.ndarray
    upper: float


_LP_TIGHT = {"primal_feasibility_tolerance": 1e-10, "dual_feasibility_tolerance": 1e-10}


def support_oracle(K):
    """U -> (h(U), support points) for a primal body or a c-hull."""
    if isinstance(K, CHullBody):
        return K.support_with_points
    if isinstance(K, BallIntersectionBody):
        def oracle(U):
            res = support_values(K, U)
            return res.values, res.points
        return oracle
    raise GeometryError("no exact support oracle for this body type")


def _slack_min_on_sphere(oracle, z: np.ndarray, r: float, u0: np.ndarray) -> tuple[float, np.ndarray]:
    """Local minimum of h(u) - <z, u> - r near u0; the support point is the gradient of h."""
    B = orthonormal_complement(u0[:, None])

    def fg(t):
        v = u0 + B @ t
        nv = np.linalg.norm(v)
        u = v / nv
        h, X = oracle(u[None, :])
        g = X[0] - z
        J = (B - np.outer(u, u @ B)) / nv
        return float(h[0] - u @ z - r), J.T @ g
    res = minimize(fg, np.zeros(B.shape[1]), jac=True, method="BFGS",
                   options={"gtol": 1e-12, "maxiter": 200})
    v = u0 + B @ res.x
    return float(res.fun), v / np.linalg.norm(v)


def inradius_support(K, grid: DirectionGrid | None = None, tol: float = 1e-9,
                     max_rounds: int = 60) -> InradiusResult:
    """Largest ball inside K, from exact support values only.

    LP on the grid half-spaces, then cutting planes at local minima of the
    slack h(u) - <c, u> - r over the sphere.  The returned radius is the LP
    radius shrunk by the most negative slack found; ``upper`` is the LP value.
    """
    oracle = support_oracle(K) if not callable(K) else K
    n = K.dim if not callable(K) else grid.dim
    grid = grid or fibonacci_grid(n, 64 if n == 2 else 600)
    D = grid.directions.copy()
    h = np.asarray(oracle(D)[0], dtype=float)
    # a denser probe set for the final check; local searches started from the
    # coarse grid alone can all land in the wrong basin
    probe = fibonacci_grid(n, 8 * grid.size).directions
    hp = np.asarray(oracle(probe)[0], dtype=float)

    def local_cuts(starts, z, r):
        found, worst = [], 0.0
        for u0 in starts:
            val, u = _slack_min_on_sphere(oracle, z, r, u0)
            worst = min(worst, val)
            if val < -tol:
                found.append(u)
        return found, worst

    cost = np.zeros(n + 1)
    cost[-1] = -1.0
    prev, worst = None, 0.0
    for _ in range(max_rounds):
        A = np.hstack([D, np.ones((D.shape[0], 1))])
        res = linprog(cost, A_ub=A, b_ub=h, bounds=[(None, None)] * n + [(0, None)], method="highs",
                      options=_LP_TIGHT)
        if not res.success:
            raise ConvergenceError("inradius LP failed: " + res.message)
        z, r = res.x[:n], res.x[n]
        stalled = prev is not None and abs(r - prev) <= 1e-14
        prev = r
        slack = h - D @ z - r
        found, worst = local_cuts(D[np.argsort(slack)[: 2 * n]], z, r)
        if not found or stalled:
            pslack = hp - probe @ z - r
            more, w2 = local_cuts(probe[np.argsort(pslack)[: 4 * n]], z, r)
            worst = min(worst, w2, float(pslack.min()))
            found += more
            if not more and (not found or worst > -1e-7):
                # the probe pass found nothing new: report the certified bracket
                return InradiusResult(max(r + worst, 0.0), z, r)
        F = np.array(found)
        D = np.vstack([D, F])
        h = np.concatenate([h, np.asarray(oracle(F)[0], dtype=float)])
    raise ConvergenceError("inradius cutting planes did not settle", worst)


def inradius_primal(K: BallIntersectionBody) -> InradiusResult:
    """max_x min_i (r_i - |x - a_i|), via the emptiness solver."""
    res = intersection_defect(K.centers, K.radii)
    return InradiusResult(-res.defect, res.point, -res.defect)


# ---------------------------------------------------------- dual half-sums
@dataclass(frozen=True)
class HalfDualSumWitness:
    x: np.ndarray
    z: np.ndarray
    max_defect: float


def half_dual_sum_membership(K: BallIntersectionBody, T: BallIntersectionBody, x,
                             eps: float = DEFAULT_TOL.geom_eps) -> tuple[bool, HalfDualSumWitness]:
    """x in (K^c + T^c)/2  iff  Outrad((K - x) u (x - T)) <= 1."""
    x = as_vector(x, K.dim)
    A = K.translated(-x)
    B = T.reflected(0.5 * x)  # {x - t}
    res = outradius_union([A, B])
    return res.radius <= 1.0 + eps, HalfDualSumWitness(x, res.center, res.radius)


# ------------------------------------------------------------ Monte Carlo
@dataclass(frozen=True)
class MCResult:
    estimate: float
    stderr: float
    hits: int
    samples: int
    degenerate: bool


def mc_volume(contains_many, center, radius: float, samples: int, rng: SeededRng,
              chunk: int = 200000) -> MCResult:
    """Hit-ratio volume estimate inside the ball B(center, radius)."""
    c = as_vector(center)
    n = c.size
    vol_ball = unit_ball_volume(n) * radius ** n
    hits = 0
    done = 0
    while done < samples:
        k = min(chunk, samples - done)
        X = c + rng.in_ball(k, n, radius)
        hits += int(np.count_nonzero(contains_many(X)))
        done += k
    p = hits / samples
    return MCResult(vol_ball * p, vol_ball * math.sqrt(p * (1.0 - p) / samples), hits, samples,
                    hits == 0)


def enclosing_ball(K) -> tuple[np.ndarray, float]:
    """A ball guaranteed to contain K: exact farthest point from a central point."""
    if isinstance(K, BallIntersectionBody):
        n = K.dim
        U = np.vstack([np.eye(n), -np.eye(n)])
        c = min_enclosing_ball(support_values(K, U).points).center
        return c, float(farthest_points(K, c[None, :])[0][0]) * (1 + 1e-12)
    if isinstance(K, CHullBody):
        # a ball of radius <= 1 is a ball-body, so the enclosing ball of A contains conv_c(A)
        m = min_enclosing_ball(K.points)
        return m.center, min(m.radius * (1 + 1e-12) + 1e-15, 1.0)
    raise GeometryError("unsupported body type")


def mc_volume_body(K, samples: int, rng: SeededRng, grid: DirectionGrid | None = None) -> MCResult:
    c, R = enclosing_ball(K)
    if isinstance(K, BallIntersectionBody):
        return mc_volume(K.contains_many, c, R, samples, rng)
    return mc_volume(lambda X: K.contains_many(X, grid=grid), c, R, samples, rng)


# ---------------------------------------------------------------- random
def random_ball_body(n: int, rng: SeededRng, count: int | None = None, spread: float = 0.45,
                     sub_unit: bool = False) -> BallIntersectionBody:
    """Non-empty intersection of a few balls with centres near the origin."""
    while True:
        m = int(count or rng.integers(2, 3 * n + 3))
        C = rng.in_ball(m, n, spread)
        r = rng.uniform(0.7, 1.0, size=m) if sub_unit else np.ones(m)
        K = BallIntersectionBody.from_balls(C, r)
        if not K.empty and K.defect < -0.05:
            return K


# ------------------------------------------------------------------ JSON
def body_to_json(K) -> dict:
    if isinstance(K, BallIntersectionBody):
        return {"dim": K.dim, "kind": "ball_intersection",
                "payload": {"centers": K.centers.tolist(), "radii": K.radii.tolist()}}
    if isinstance(K, CHullBody):
        return {"dim": K.dim, "kind": "point_cloud", "payload": {"points": K.points.tolist()}}
    if isinstance(K, SupportSampledBody):
        return K.to_json()
    raise GeometryError("unsupported body type")


def body_from_json(obj) -> object:
    """Inverse of body_to_json; a point cloud becomes its c-hull."""
    if isinstance(obj, str):
        obj = json.loads(obj)
    try:
        kind, dim, p = obj["kind"], int(obj["dim"]), obj["payload"]
    except (KeyError, TypeError, ValueError) as exc:
        raise GeometryError(f"malformed body JSON: {exc}") from None
    if kind == "ball_intersection":
        return BallIntersectionBody.from_balls(as_points(p["centers"], dim), p.get("radii", 1.0))
    if kind == "point_cloud":
        return CHullBody.of(as_points(p["points"], dim))
    if kind == "support_samples":
        D = as_points(p["directions"], dim)
        neg = p.get("neg_index")
        g = DirectionGrid(dim, D, float(p["mesh"]), None if neg is None else np.asarray(neg))
        return SupportSampledBody(g, np.asarray(p["values"], dtype=float), float(p.get("lipschitz", 0.0)),
                                  p.get("provenance", "imported"))
    raise GeometryError(f"unknown body kind {kind!r}")
