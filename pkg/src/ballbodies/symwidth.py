"""Symmetrizations, constant-width bodies and the three-dimensional Steiner counterexample."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass

import numpy as np

from .body import BallIntersectionBody, SupportSampledBody, c_dual, support_oracle
from .core import (DEFAULT_TOL, DirectionGrid, GeometryError, as_vector, nearest_directions,
                   orthonormal_complement)


# ---------------------------------------------------------- constant width
@dataclass(frozen=True)
class ConstantWidthBody:
    body: SupportSampledBody
    width_deviation: float

    @classmethod
    def certify(cls, K: SupportSampledBody, tol: float = DEFAULT_TOL.geom_eps) -> "ConstantWidthBody":
        dev = float(np.abs(K.widths() - 1.0).max())
        if dev > tol:
            raise GeometryError(f"width deviates from 1 by {dev:.3g}")
        return cls(K, dev)

    @property
    def grid(self) -> DirectionGrid:
        return self.body.grid

    @property
    def values(self) -> np.ndarray:
        return self.body.values


def constant_width_average(K: SupportSampledBody, tol: float = DEFAULT_TOL.geom_eps) -> ConstantWidthBody:
    """(K + K^c) / 2; on a symmetric grid it is a fixed point of the duality."""
    K.grid.require_symmetric()
    D = c_dual(K)
    vals = 0.5 * (K.values + D.values)
    S = SupportSampledBody(K.grid, vals, 0.5 * (K.lipschitz_bound + D.lipschitz_bound), "combined")
    return ConstantWidthBody.certify(S, tol)


def constant_width_oracle(K):
    """Exact support oracle of (K + K^c) / 2 for a primal body or a c-hull.

    The support point of K^c in direction u is x_K(-u) + u, so the support
    point of the average is the mean of the two.
    """
    base = support_oracle(K)

    def oracle(U):
        U = np.atleast_2d(U)
        h, X = base(np.vstack([U, -U]))
        m = U.shape[0]
        vals = 0.5 * (h[:m] + 1.0 - h[m:])
        pts = 0.5 * (X[:m] + X[m:] + U)
        return vals, pts
    return oracle


@dataclass(frozen=True)
class BasinParity:
    in_basin: bool
    average_deviation: float
    parity_deviation: float

    def __bool__(self) -> bool:
        return self.in_basin


def basin_parity_check(target: ConstantWidthBody, T: SupportSampledBody,
                       tol: float = 1e-9) -> BasinParity:
    """Does (T + T^c)/2 equal the target?  Same answer as: is h_T - h_K even?

    Both tests are computed; a disagreement between them is a bug, not a
    property of the input, so it raises.
    """
    if not target.grid.matches(T.grid):
        raise GeometryError("bodies are sampled on different grids")
    T.grid.require_symmetric()
    neg = T.grid.neg_index
    avg = 0.5 * (T.values + 1.0 - T.values[neg])
    a_dev = float(np.abs(avg - target.values).max())
    diff = T.values - target.values
    p_dev = float(np.abs(diff - diff[neg]).max())
    # for a width-1 target the two deviations differ by a factor of two
    if (a_dev <= tol) != (p_dev <= 2.0 * tol):
        raise AssertionError("basin tests disagree")
    return BasinParity(a_dev <= tol, a_dev, p_dev)


# ---------------------------------------------------------- symmetrals
def reflection_closed_grid(n: int, m: int, axis: int = -1, certify_samples: int = 20000,
                           seed: int = 0) -> DirectionGrid:
    """Grid closed under negation and under the reflection flipping coordinate ``axis``."""
    from .core import fibonacci_grid
    base = fibonacci_grid(n, m, certify_samples=certify_samples, seed=seed).directions
    F = base.copy()
    F[:, axis] *= -1.0
    D = np.vstack([base, F, -base, -F])
    D = np.unique(np.round(D, 15), axis=0)
    D /= np.linalg.norm(D, axis=1, keepdims=True)
    neg, ang = nearest_directions(D, -D)
    if ang.max() > 1e-12:
        raise GeometryError("grid is not closed under negation")
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(n, m, 7)))
    Q = rng.normal(size=(certify_samples, n))
    Q /= np.linalg.norm(Q, axis=1, keepdims=True)
    _, a = nearest_directions(D, Q)
    return DirectionGrid(n, D, 1.1 * float(a.max()), neg)


@dataclass(frozen=True)
class SymmetralResult:
    body: SupportSampledBody
    interpolation_error: float  # 0 when the grid is closed under R_u


def minkowski_symmetral(K: SupportSampledBody, u, with_error: bool = False):
    """h_out(w) = (h(w) + h(R_u w)) / 2, R_u the reflection in u-perp.

    On a grid closed under R_u this is exact.  Otherwise h(R_u w) is read at
    the nearest grid direction and the Lipschitz bound times that angle is
    recorded as the interpolation error.
    """
    u = as_vector(u, K.dim)
    u = u / np.linalg.norm(u)
    idx, ok = K.grid.reflection_index(u)
    err = 0.0
    if not np.all(ok):
        R = K.grid.directions - 2.0 * np.outer(K.grid.directions @ u, u)
        _, ang = nearest_directions(K.grid.directions, R)
        err = float(K.lipschitz_bound * ang.max())
    vals = 0.5 * (K.values + K.values[idx])
    out = SupportSampledBody(K.grid, vals, K.lipschitz_bound, "combined")
    return SymmetralResult(out, err) if with_error else out


@dataclass(frozen=True)
class SteinerSampled:
    """Steiner symmetral sampled on fibers x + R u with x in u-perp.

    ``lower``/``upper`` are the fiber ends of the input (NaN when the fiber
    misses the body); ``half_length`` is the half-length of the symmetral
    fiber, 0 on missing fibers.
    """

    direction: np.ndarray
    basis: np.ndarray  # columns span u-perp
    offset: np.ndarray  # point of u-perp the fiber grid is centred at
    coords: np.ndarray  # fiber coordinates in the basis
    lower: np.ndarray
    upper: np.ndarray
    half_length: np.ndarray
    missing: np.ndarray
    cell: float  # (n-1)-volume of one fiber cell, 0 when the grid is irregular

    @property
    def volume(self) -> float:
        return float(2.0 * self.half_length.sum() * self.cell)

    def fiber_points(self) -> np.ndarray:
        return self.offset + self.coords @ self.basis.T


def fiber_grid(n: int, half_extent: float, per_axis: int) -> tuple[np.ndarray, float]:
    """Cell-centred regular grid on the cube [-e, e]^(n-1); returns coords and cell volume."""
    step = 2.0 * half_extent / per_axis
    ax = -half_extent + (np.arange(per_axis) + 0.5) * step
    mesh = np.meshgrid(*([ax] * (n - 1)), indexing="ij")
    return np.column_stack([m.ravel() for m in mesh]), step ** (n - 1)


def _bisect(pred, inside: float, outside: float, iters: int) -> float:
    for _ in range(iters):
        mid = 0.5 * (inside + outside)
        if pred(mid):
            inside = mid
        else:
            outside = mid
    return 0.5 * (inside + outside)


def steiner_symmetral_nd(contains, u, center, radius: float, coords=None, per_axis: int = 24,
                         probes: int = 65, iters: int = 50, points=None) -> SteinerSampled:
    """Steiner symmetral of a body given only by a membership predicate.

    The body must lie in B(center, radius).  Each fiber is probed at
    ``probes`` evenly spaced heights to find an interior point, then both
    ends are located by bisection.  ``coords`` overrides the regular fiber
    grid (rows are coordinates in an orthonormal basis of u-perp);
    ``points`` does the same with points of R^n, projected along u.
    """
    u = as_vector(u)
    n = u.size
    if abs(np.linalg.norm(u) - 1.0) > 1e-12:
        raise GeometryError("direction must be a unit vector")
    c = as_vector(center, n)
    B = orthonormal_complement(u[:, None])
    offset = c - (c @ u) * u
    if points is not None:
        coords = (np.atleast_2d(np.asarray(points, dtype=float)) - offset) @ B
    if coords is None:
        coords, cell = fiber_grid(n, radius, per_axis)
    else:
        coords, cell = np.atleast_2d(np.asarray(coords, dtype=float)), 0.0
    base_t = c @ u
    lo = np.full(coords.shape[0], np.nan)
    hi = np.full(coords.shape[0], np.nan)
    ts = base_t + np.linspace(-radius, radius, probes)
    for k, q in enumerate(coords):
        p = offset + B @ q
        if np.linalg.norm(p - offset) > radius:
            continue
        inside = contains(p[None, :] + ts[:, None] * u[None, :])
        hit = np.nonzero(inside)[0]
        if hit.size == 0:
            continue

        def pred(t, p=p):
            return bool(contains((p + t * u)[None, :])[0])
        a_in, b_in = ts[hit[0]], ts[hit[-1]]
        lo[k] = _bisect(pred, a_in, base_t - radius, iters)
        hi[k] = _bisect(pred, b_in, base_t + radius, iters)
    missing = np.isnan(lo)
    half = np.where(missing, 0.0, 0.5 * (hi - lo))
    return SteinerSampled(u, B, offset, coords, lo, hi, half, missing, cell)


# ------------------------------------------------------------ Schramm
@dataclass(frozen=True)
class SchrammReport:
    radius: float  # sqrt(5/4 - R^2) - 1/2
    worst: float  # min over the grid of max(a(u), b(u))
    holds: bool


def schramm_ball_check(K: SupportSampledBody, R: float, tol: float = 1e-9) -> SchrammReport:
    """Certify B(0, sqrt(5/4 - R^2) - 1/2) inside K^c union -K along every grid ray.

    a(u) u lies in K^c and b(u) u lies in -K, with
    a(u) = sqrt(1 - R^2 + h_K(-u)^2) - h_K(-u) and b the same with h_{K^c}(u).
    """
    if not 0.0 < R < 1.0:
        raise GeometryError("R must lie in (0, 1)")
    K.grid.require_symmetric()
    D = c_dual(K)
    if K.values.max() > R + tol or D.values.max() > R + tol:
        raise GeometryError("K and its dual must lie in B(0, R)")
    hk = K.values[K.grid.neg_index]
    hd = D.values

    def g(t):
        return np.sqrt(1.0 - R * R + t * t) - t
    worst = float(np.maximum(g(hk), g(hd)).min())
    rho = math.sqrt(1.25 - R * R) - 0.5
    return SchrammReport(rho, worst, worst >= rho - tol)


# ------------------------------------------------------------ curvature
@dataclass(frozen=True)
class CurvaturePairing:
    direction: np.ndarray
    radii: np.ndarray  # principal radii of K at the support point of u, ascending
    dual_radii: np.ndarray  # principal radii of K^c at the support point of -u, ascending
    hessian_sum_error: float  # max |H_K(u) + H_{K^c}(-u) - (I - u u^T)|
    pair_error: float  # max_i |r_i + s_{n-i} - 1|
    fd_step: float
    smooth: bool

    @property
    def bound(self) -> float:
        return 10.0 * self.fd_step


def _fd_hessian(h, u: np.ndarray, step: float) -> np.ndarray:
    """Central-difference Hessian of the 1-homogeneous extension of h at u."""
    n = u.size

    def H(x):
        x = np.atleast_2d(x)
        r = np.linalg.norm(x, axis=1)
        return r * h(x / r[:, None])
    E = np.eye(n) * step
    pts = [u]
    for i in range(n):
        for j in range(i, n):
            pts += [u + E[i] + E[j], u + E[i] - E[j], u - E[i] + E[j], u - E[i] - E[j]]
    v = H(np.array(pts))
    M = np.empty((n, n))
    k = 1
    for i in range(n):
        for j in range(i, n):
            pp, pm, mp, mm = v[k:k + 4]
            M[i, j] = M[j, i] = (pp - pm - mp + mm) / (4.0 * step * step)
            k += 4
    return M


def _tangent_eigs(M: np.ndarray, u: np.ndarray) -> np.ndarray:
    B = orthonormal_complement(u[:, None])
    return np.sort(np.linalg.eigvalsh(B.T @ M @ B))


def curvature_pairing(h, u, fd_step: float = 1e-4, dual_h=None,
                      blowup: float = 1e3) -> CurvaturePairing:
    """Principal radii of K at u and of K^c at -u from finite-difference Hessians.

    ``h`` maps an (m, n) array of unit directions to support values.  The
    dual support defaults to 1 - h(-v); pass ``dual_h`` to test against an
    independently computed dual.  A Hessian entry above ``blowup`` marks the
    point as non-smooth; the report is still returned.
    """
    u = as_vector(u)
    u = u / np.linalg.norm(u)
    hd = dual_h if dual_h is not None else (lambda V: 1.0 - h(-np.atleast_2d(V)))
    HK = _fd_hessian(h, u, fd_step)
    HD = _fd_hessian(hd, -u, fd_step)
    target = np.eye(u.size) - np.outer(u, u)
    r = _tangent_eigs(HK, u)
    s = _tangent_eigs(HD, -u)
    smooth = bool(np.abs(HK).max() < blowup and np.abs(HD).max() < blowup)
    return CurvaturePairing(u, r, s, float(np.abs(HK + HD - target).max()),
                            float(np.abs(r + s[::-1] - 1.0).max()), fd_step, smooth)


def ellipse_support(b: float):
    """Support function of E = {x^2/b + y^2/b^2 <= 1}, whose largest curvature radius is 1."""
    if not 0.0 < b < 1.0:
        raise GeometryError("b must lie in (0, 1)")

    def h(U):
        U = np.atleast_2d(U)
        return np.sqrt(b * U[:, 0] ** 2 + b * b * U[:, 1] ** 2)
    return h


def ellipse_curvature_radius(b: float, U) -> np.ndarray:
    """Radius of curvature of E at the boundary point with outer normal u."""
    U = np.atleast_2d(U)
    return b ** 3 / (b * U[:, 0] ** 2 + b * b * U[:, 1] ** 2) ** 1.5


def smooth_planar_body(lam: float, b: float):
    """Support of (1 - lam) B(0, 1/2) + lam E, a smooth ball-body for lam < 1."""
    hE = ellipse_support(b)

    def h(U):
        return 0.5 * (1.0 - lam) + lam * hE(U)
    return h


@dataclass(frozen=True)
class EllipseDualProfile:
    b: float
    points: np.ndarray  # boundary of E^c near the south pole, from x - n_E(x)
    exponent: float
    coefficient: float
    series_coefficient: float  # (3/4)(2b/(1-b))^(1/3), from the Taylor expansion in t
    predicted_coefficient: float  # (3/2)(b/(2(1-b)))^(1/3)


def ellipse_dual_profile(b: float, ts=None) -> EllipseDualProfile:
    """Boundary of E^c near its south pole (0, b - 1), and a power-law fit of its profile.

    Points x(t) = (sqrt(b) cos t, b sin t) near t = pi/2 are moved one unit
    along the inner normal.  log(v - v0) is regressed on log|u|.  With
    t = pi/2 + e one has u ~ sqrt(b)(1-b) e^3 / 2 and v - v0 ~ 3b(1-b) e^4 / 8,
    which gives the exponent 4/3 and ``series_coefficient``.
    """
    if not 0.0 < b < 1.0:
        raise GeometryError("b must lie in (0, 1)")
    if ts is None:
        ts = math.pi / 2.0 + np.geomspace(3e-3, 3e-2, 40)
    ts = np.asarray(ts, dtype=float)
    a = math.sqrt(b)
    x = np.column_stack([a * np.cos(ts), b * np.sin(ts)])
    nrm = np.column_stack([np.cos(ts) / a, np.sin(ts) / b])
    nrm /= np.linalg.norm(nrm, axis=1, keepdims=True)
    y = x - nrm
    du = np.abs(y[:, 0])
    dv = y[:, 1] + (1.0 - b)
    keep = (du > 0) & (dv > 0)
    slope, icpt = np.polyfit(np.log(du[keep]), np.log(dv[keep]), 1)
    series = 0.75 * (2.0 * b / (1.0 - b)) ** (1.0 / 3.0)
    pred = 1.5 * (b / (2.0 * (1.0 - b))) ** (1.0 / 3.0)
    return EllipseDualProfile(b, y, float(slope), float(math.exp(icpt)), series, pred)


# ------------------------------------------------------ R^3 counterexample
PRINTED_PARAMETERS = {"x0": -0.2807, "y0": 0.2457, "z0": -0.4, "x": 0.4142, "y": 0.7268}


def psi_printed(s: float, t: float) -> float:
    """sqrt(s^2 + t^2)(1 + s^2): the expression the golden numbers were evaluated with."""
    return math.sqrt(s * s + t * t) * (1.0 + s * s)


def psi_curvature(s: float, t: float) -> float:
    """sqrt(1 + s^2 + t^2)(1 + s^2), the denominator of the e1 sectional curvature of a graph."""
    return math.sqrt(1.0 + s * s + t * t) * (1.0 + s * s)


@dataclass(frozen=True)
class CounterexampleReport:
    parameters: dict
    f_u: float
    g_u: float
    minus_f_d: float
    minus_g_d: float
    fiber_length: float  # f_u + g_d; negative when the lens misses the line over (x, y)
    fiber_ok: bool  # the fiber over (x, y) is the non-empty [-g_d, f_u]
    z0_window: list  # the z0 for which fiber_ok holds; the curvatures do not depend on z0
    grad_f_u: list
    grad_g_d: list
    grad_h: list
    psi_mid: float
    psi_f: float
    psi_g: float
    psi_average: float
    psi_mid_curvature: float
    psi_average_curvature: float
    kappa_f: float
    kappa_g: float
    kappa_h: float

    @property
    def certifies(self) -> bool:
        """kappa_h < 1 at a boundary point of the symmetral for some admissible z0."""
        return self.z0_window[0] < self.z0_window[1] and self.kappa_h < 1.0

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "CounterexampleReport":
        return cls(**json.loads(text))


def _cap(c, p):
    """Value, gradient and Hessian of sqrt(1 - |p - c|^2) at p."""
    d = np.asarray(p, dtype=float) - np.asarray(c, dtype=float)
    rho2 = 1.0 - d @ d
    if rho2 <= 0.0:
        raise GeometryError("point is outside the disk of the cap")
    rho = math.sqrt(rho2)
    grad = -d / rho
    hess = -(np.eye(2) / rho + np.outer(d, d) / rho ** 3)
    return rho, grad, hess


def _kappa_e1(grad, hess) -> float:
    return abs(hess[0, 0]) / psi_curvature(grad[0], grad[1])


def r3_counterexample(x0: float = PRINTED_PARAMETERS["x0"], y0: float = PRINTED_PARAMETERS["y0"],
                      z0: float = PRINTED_PARAMETERS["z0"], x: float = PRINTED_PARAMETERS["x"],
                      y: float = PRINTED_PARAMETERS["y"]) -> CounterexampleReport:
    """Closed-form check that S_{e3} of B(c0, 1) cap B(-c0, 1) has e1 sectional curvature < 1.

    f_u is the upper cap of B(c0, 1) and g_d the (negated) lower cap of
    B(-c0, 1); the symmetral fiber over w = (x, y) has half-length
    h = (f_u + g_d) / 2.  Gradients and Hessians do not depend on z0, so
    ``kappa_h`` is a property of (x0, y0, x, y); z0 only decides whether the
    fiber over w really is [-g_d, f_u].
    """
    w = (x, y)
    rf, gf, Hf = _cap((x0, y0), w)
    rg, gg, Hg = _cap((-x0, -y0), w)
    f_u, minus_f_d = z0 + rf, z0 - rf
    g_u, minus_g_d = -z0 + rg, -z0 - rg
    gh = 0.5 * (gf + gg)
    Hh = 0.5 * (Hf + Hg)
    ok = f_u <= g_u and minus_g_d >= minus_f_d and minus_g_d <= f_u
    window = [-0.5 * (rf + rg), -0.5 * abs(rf - rg)]
    psi_f, psi_g = psi_printed(*gf), psi_printed(*gg)
    return CounterexampleReport(
        parameters={"x0": x0, "y0": y0, "z0": z0, "x": x, "y": y},
        f_u=f_u, g_u=g_u, minus_f_d=minus_f_d, minus_g_d=minus_g_d,
        fiber_length=f_u - minus_g_d, fiber_ok=bool(ok), z0_window=window,
        grad_f_u=gf.tolist(), grad_g_d=gg.tolist(), grad_h=gh.tolist(),
        psi_mid=psi_printed(*gh), psi_f=psi_f, psi_g=psi_g, psi_average=0.5 * (psi_f + psi_g),
        psi_mid_curvature=psi_curvature(*gh),
        psi_average_curvature=0.5 * (psi_curvature(*gf) + psi_curvature(*gg)),
        kappa_f=_kappa_e1(gf, Hf), kappa_g=_kappa_e1(gg, Hg), kappa_h=_kappa_e1(gh, Hh),
    )


def recheck_counterexample(report: CounterexampleReport, tol: float = 1e-3) -> bool:
    """Recompute from the stored parameters and compare every numeric field."""
    fresh = asdict(r3_counterexample(**report.parameters))
    for key, val in asdict(report).items():
        if key == "parameters":
            continue
        a, b = np.asarray(val, dtype=float), np.asarray(fresh[key], dtype=float)
        if np.any(np.abs(a - b) > tol):
            return False
    return True


def admissible_z0(report: CounterexampleReport) -> float:
    """Midpoint of the z0 window."""
    return 0.5 * (report.z0_window[0] + report.z0_window[1])


def counterexample_lens(report: CounterexampleReport | None = None,
                        z0: float | None = None) -> BallIntersectionBody:
    """The lens B(c0, 1) cap B(-c0, 1) of the counterexample."""
    p = (report.parameters if report else PRINTED_PARAMETERS)
    c0 = np.array([p["x0"], p["y0"], p["z0"] if z0 is None else z0])
    return BallIntersectionBody.from_balls(np.vstack([c0, -c0]), 1.0)


__all__ = [
    "ConstantWidthBody", "constant_width_average", "constant_width_oracle", "BasinParity",
    "basin_parity_check", "reflection_closed_grid", "SymmetralResult", "minkowski_symmetral",
    "SteinerSampled", "fiber_grid", "steiner_symmetral_nd", "SchrammReport", "schramm_ball_check",
    "CurvaturePairing", "curvature_pairing", "ellipse_support", "ellipse_curvature_radius",
    "smooth_planar_body", "EllipseDualProfile", "ellipse_dual_profile", "PRINTED_PARAMETERS",
    "psi_printed", "psi_curvature", "CounterexampleReport", "r3_counterexample",
    "recheck_counterexample", "admissible_z0", "counterexample_lens",
]
