"""Exact planar ball bodies.

A convex planar body whose boundary is made of circular arcs of radius at
most 1 is stored by its boundary pieces, indexed by the outer normal
angle: piece i is the circle (c_i, rho_i) traversed over the normal angles
[theta_i, theta_i + dtheta_i].  A corner is a piece of radius 0 whose
"centre" is the corner point.  The pieces cover the circle of normals once,
so the support function is h(u) = <c_i, u> + rho_i on piece i.

With that representation the c-dual is exact and cheap: the piece
(c, rho, theta) becomes (c, 1 - rho, theta + pi).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import DEFAULT_TOL, EmptyBodyError, GeometryError, as_points, as_vector
from .lens import WholeSpaceError
from .meb import intersection_defect, min_enclosing_ball

TWO_PI = 2.0 * math.pi
WELD = 1e-10


def _unit(theta):
    return np.stack([np.cos(theta), np.sin(theta)], axis=-1)


def _wrap(theta):
    return np.mod(theta, TWO_PI)


@dataclass(frozen=True)
class ArcPolygon:
    """Convex planar body bounded by circular arcs of radius <= 1, CCW.

    ``centers[i]``, ``radii[i]`` describe piece i over the normal angles
    ``theta[i] .. theta[i] + dtheta[i]``.  Use the constructors below; the
    raw fields are normalized (sorted, merged, contiguous) by ``from_pieces``.
    """

    centers: np.ndarray
    radii: np.ndarray
    theta: np.ndarray
    dtheta: np.ndarray

    # ---------------------------------------------------------------- build
    @classmethod
    def from_pieces(cls, centers, radii, theta, dtheta, check: bool = True) -> "ArcPolygon":
        C = np.asarray(centers, dtype=float).reshape(-1, 2)
        r = np.asarray(radii, dtype=float).reshape(-1)
        t = _wrap(np.asarray(theta, dtype=float).reshape(-1))
        dt = np.asarray(dtheta, dtype=float).reshape(-1)
        if not (C.shape[0] == r.size == t.size == dt.size) or r.size == 0:
            raise GeometryError("pieces need matching centre, radius and angle arrays")
        if np.any(r < -1e-15) or np.any(r > 1.0 + 1e-12):
            raise GeometryError("piece radii must lie in [0, 1]")
        r = np.clip(r, 0.0, 1.0)
        keep = dt > 1e-14
        C, r, t, dt = C[keep], r[keep], t[keep], dt[keep]
        order = np.argsort(t, kind="stable")
        C, r, t, dt = C[order], r[order], t[order], dt[order]
        if abs(dt.sum() - TWO_PI) > 1e-9:
            raise GeometryError("pieces must cover every normal direction exactly once")
        # start at the smallest angle and make the angles contiguous
        t = t[0] + np.concatenate([[0.0], np.cumsum(dt)[:-1]])
        dt = dt * (TWO_PI / dt.sum())
        C, r, t, dt = _merge(C, r, t, dt)
        P = cls(C, r, _wrap(t), dt)
        if check:
            P._check_closed()
        return P

    @classmethod
    def disk(cls, center, radius: float) -> "ArcPolygon":
        c = as_vector(center, 2)
        if not 0.0 <= radius <= 1.0:
            raise GeometryError("disk radius must lie in [0, 1]")
        return cls(c[None, :], np.array([float(radius)]), np.zeros(1), np.array([TWO_PI]))

    @classmethod
    def point(cls, p) -> "ArcPolygon":
        return cls.disk(p, 0.0)

    def _check_closed(self):
        ends = self.centers + self.radii[:, None] * _unit(self.theta + self.dtheta)
        starts = np.roll(self.centers + self.radii[:, None] * _unit(self.theta), -1, axis=0)
        gap = float(np.abs(ends - starts).max()) if self.size > 1 else 0.0
        if gap > 1e-8:
            raise GeometryError(f"boundary pieces do not join up (gap {gap:.3g})")

    # ----------------------------------------------------------- structure
    @property
    def size(self) -> int:
        return self.radii.size

    @property
    def is_disk(self) -> bool:
        return self.size == 1

    @property
    def is_point(self) -> bool:
        return self.is_disk and self.radii[0] == 0.0

    def start_points(self) -> np.ndarray:
        return self.centers + self.radii[:, None] * _unit(self.theta)

    def end_points(self) -> np.ndarray:
        return self.centers + self.radii[:, None] * _unit(self.theta + self.dtheta)

    @property
    def arc_mask(self) -> np.ndarray:
        return self.radii > 0.0

    @property
    def vertices(self) -> np.ndarray:
        """Points where two arcs meet, CCW; empty for a disk, the point itself for a point body."""
        if self.is_point:
            return self.centers.copy()
        if self.is_disk:
            return np.zeros((0, 2))
        return self.start_points()[self.arc_mask]

    @property
    def arc_centers(self) -> np.ndarray:
        return self.centers[self.arc_mask]

    @property
    def arc_radii(self) -> np.ndarray:
        return self.radii[self.arc_mask]

    @property
    def arc_angles(self) -> np.ndarray:
        return self.dtheta[self.arc_mask]

    @property
    def corners(self) -> np.ndarray:
        """Boundary points with a non-trivial normal cone."""
        return self.centers[~self.arc_mask]

    # ------------------------------------------------------------- metrics
    def area(self) -> float:
        a, b = self.centers[:, 0], self.centers[:, 1]
        t0, t1 = self.theta, self.theta + self.dtheta
        r = self.radii
        # 1/2 closed integral of x dy - y dx along c + r u(t)
        val = r * (a * (np.sin(t1) - np.sin(t0)) - b * (np.cos(t1) - np.cos(t0))) + r * r * self.dtheta
        return float(0.5 * val.sum())

    def perimeter(self) -> float:
        return float((self.radii * self.dtheta).sum())

    def _piece_of(self, phi: np.ndarray) -> np.ndarray:
        rel = _wrap(phi - self.theta[0])
        starts = self.theta - self.theta[0]
        return np.clip(np.searchsorted(starts, rel, side="right") - 1, 0, self.size - 1)

    def support(self, U) -> np.ndarray:
        """h(u) for unit rows of U (a single vector gives a 0-d array)."""
        U = np.asarray(U, dtype=float)
        single = U.ndim == 1
        U = np.atleast_2d(U)
        i = self._piece_of(np.arctan2(U[:, 1], U[:, 0]))
        h = (self.centers[i] * U).sum(1) + self.radii[i]
        return h[0] if single else h

    def support_point(self, U) -> np.ndarray:
        U = np.atleast_2d(np.asarray(U, dtype=float))
        i = self._piece_of(np.arctan2(U[:, 1], U[:, 0]))
        return self.centers[i] + self.radii[i, None] * U

    def signed_distance(self, X) -> np.ndarray:
        """min_u (h(u) - <x, u>): distance to the boundary inside, minus the distance outside."""
        X = np.atleast_2d(np.asarray(X, dtype=float))
        out = np.full(X.shape[0], np.inf)
        for c, r, t, dt in zip(self.centers, self.radii, self.theta, self.dtheta):
            v = c - X  # slack(phi) = r + |v| cos(phi - alpha)
            alpha = np.arctan2(v[:, 1], v[:, 0])
            nv = np.linalg.norm(v, axis=1)
            s0 = r + v @ _unit(t)
            s1 = r + v @ _unit(t + dt)
            m = np.minimum(s0, s1)
            inside = _wrap(alpha + math.pi - t) <= dt
            m = np.where(inside, r - nv, m)
            out = np.minimum(out, m)
        return out

    def contains(self, x, eps: float = DEFAULT_TOL.geom_eps) -> bool:
        return bool(self.signed_distance(as_vector(x, 2))[0] >= -eps)

    def classify(self, x, eps: float = DEFAULT_TOL.geom_eps) -> str:
        s = float(self.signed_distance(as_vector(x, 2))[0])
        if s < -eps:
            return "outside"
        return "boundary" if s <= eps else "inside"

    def diameter(self) -> float:
        """max_u (h(u) + h(-u)); exact up to a 1-D golden-section polish."""
        phi = np.linspace(0.0, math.pi, 4097)
        U = _unit(phi)
        w = self.support(U) + self.support(-U)
        k = int(np.argmax(w))
        lo, hi = phi[max(k - 1, 0)], phi[min(k + 1, phi.size - 1)]
        f = lambda p: -(self.support(_unit(p)) + self.support(-_unit(p)))  # noqa: E731
        g = (math.sqrt(5.0) - 1.0) / 2.0
        a, b = lo, hi
        for _ in range(80):
            c1, c2 = b - g * (b - a), a + g * (b - a)
            if f(c1) < f(c2):
                b = c2
            else:
                a = c1
        return float(max(w[k], -f(0.5 * (a + b))))

    def translate(self, t) -> "ArcPolygon":
        return ArcPolygon(self.centers + as_vector(t, 2), self.radii, self.theta, self.dtheta)

    def rotate(self, psi: float) -> "ArcPolygon":
        R = np.array([[math.cos(psi), -math.sin(psi)], [math.sin(psi), math.cos(psi)]])
        P = ArcPolygon(self.centers @ R.T, self.radii, _wrap(self.theta + psi), self.dtheta)
        k = int(np.argmin(P.theta))
        return ArcPolygon(*(np.roll(a, -k, axis=0) for a in (P.centers, P.radii, P.theta, P.dtheta)))

    def boundary_samples(self, per_piece: int = 32) -> np.ndarray:
        pts = []
        for c, r, t, dt in zip(self.centers, self.radii, self.theta, self.dtheta):
            if r == 0.0:
                pts.append(c[None, :])
            else:
                s = t + dt * np.arange(per_piece) / per_piece
                pts.append(c + r * _unit(s))
        return np.vstack(pts)


def _merge(C, r, t, dt):
    """Join neighbouring pieces on the same circle; cyclic."""
    if r.size == 1:
        return C, r, t, dt
    same = (np.abs(C - np.roll(C, -1, axis=0)).max(axis=1) <= WELD) & (np.abs(r - np.roll(r, -1)) <= WELD)
    if same.all():
        return C[:1], r[:1], t[:1], np.array([TWO_PI])
    # rotate so that piece 0 does not continue piece m-1
    k = int(np.nonzero(~same)[0][-1]) + 1
    C, r, t, dt, same = (np.roll(a, -k, axis=0) for a in (C, r, t, dt, same))
    outC, outr, outt, outdt = [C[0]], [r[0]], [t[0]], [dt[0]]
    for i in range(1, r.size):
        if same[i - 1]:
            outdt[-1] += dt[i]
        else:
            outC.append(C[i])
            outr.append(r[i])
            outt.append(t[i])
            outdt.append(dt[i])
    return np.array(outC), np.array(outr), np.array(outt), np.array(outdt)


# -------------------------------------------------------------- operations
def _circle_window(ci, ri, cj, rj):
    """Arc of circle i lying in disk j as (start, length); None when empty."""
    D = cj - ci
    delta = float(np.hypot(D[0], D[1]))
    if delta <= 1e-15:
        return (0.0, TWO_PI) if ri <= rj + 1e-15 else None
    if ri == 0.0:
        return (0.0, TWO_PI) if delta <= rj + 1e-12 else None
    k = (ri * ri + delta * delta - rj * rj) / (2.0 * ri * delta)
    if k <= -1.0:
        return (0.0, TWO_PI)
    if k > 1.0:
        return None
    beta = math.acos(k)
    alpha = math.atan2(D[1], D[0])
    return (float(_wrap(alpha - beta)), 2.0 * beta)


def _linear_pieces(start, length):
    if length >= TWO_PI:
        return [(0.0, TWO_PI)]
    end = start + length
    if end <= TWO_PI:
        return [(start, end)]
    return [(start, TWO_PI), (0.0, end - TWO_PI)]


def _intersect_linear(A, B):
    out = []
    i = j = 0
    A, B = sorted(A), sorted(B)
    while i < len(A) and j < len(B):
        lo = max(A[i][0], B[j][0])
        hi = min(A[i][1], B[j][1])
        if hi > lo:
            out.append((lo, hi))
        if A[i][1] < B[j][1]:
            i += 1
        else:
            j += 1
    return out


def intersect_disks(centers, radii=1.0) -> ArcPolygon:
    """Exact intersection of planar disks with radii in (0, 1].

    Raises EmptyBodyError when the intersection is empty; a single common
    point yields a point body.
    """
    C = as_points(centers, 2)
    r = np.broadcast_to(np.asarray(radii, dtype=float), (C.shape[0],)).copy()
    if np.any(r <= 0.0) or np.any(r > 1.0):
        raise GeometryError("disk radii must lie in (0, 1]")
    key = np.round(np.column_stack([C, r]), 13)
    _, first = np.unique(key, axis=0, return_index=True)
    first = np.sort(first)
    C, r = C[first], r[first]
    m = C.shape[0]
    if m == 1:
        return ArcPolygon.disk(C[0], r[0])
    arcs = []
    for i in range(m):
        window = [(0.0, TWO_PI)]
        for j in range(m):
            if j == i:
                continue
            w = _circle_window(C[i], r[i], C[j], r[j])
            if w is None:
                window = []
                break
            window = _intersect_linear(window, _linear_pieces(*w))
            if not window:
                break
        # glue the piece through angle 0 back together
        if len(window) >= 2 and window[0][0] == 0.0 and window[-1][1] == TWO_PI:
            window = [(window[-1][0], window[0][1] + TWO_PI)] + window[1:-1]
        for lo, hi in window:
            if hi - lo > 1e-13:
                arcs.append((i, lo, hi - lo))
    if not arcs:
        res = intersection_defect(C, r)
        if res.defect > 1e-9:
            raise EmptyBodyError(f"disks have empty intersection (defect {res.defect:.3g})")
        return ArcPolygon.point(res.point)
    arcs.sort(key=lambda a: a[1])
    if len(arcs) == 1 and arcs[0][2] >= TWO_PI - 1e-13:
        return ArcPolygon.disk(C[arcs[0][0]], r[arcs[0][0]])
    cen, rad, th, dth = [], [], [], []
    for k, (i, s, L) in enumerate(arcs):
        cen.append(C[i])
        rad.append(r[i])
        th.append(s)
        dth.append(L)
        jn, sn, _ = arcs[(k + 1) % len(arcs)]
        gap = (sn - (s + L) + math.pi) % TWO_PI - math.pi
        if gap > 1e-13:
            p_end = C[i] + r[i] * _unit(s + L)
            p_next = C[jn] + r[jn] * _unit(sn)
            cen.append(0.5 * (p_end + p_next))
            rad.append(0.0)
            th.append(s + L)
            dth.append(gap)
        elif gap < 0.0:
            dth[-1] += gap  # rounding overlap
    dth = np.array(dth)
    return ArcPolygon.from_pieces(cen, rad, th, dth * (TWO_PI / dth.sum()))


def c_dual_planar(P: ArcPolygon) -> ArcPolygon:
    """P^c: piece (c, rho, theta) maps to (c, 1 - rho, theta + pi)."""
    if np.any(P.radii > 1.0 + 1e-12):
        raise GeometryError("arc radius exceeds 1: not a ball body")
    return ArcPolygon.from_pieces(P.centers, 1.0 - P.radii, P.theta + math.pi, P.dtheta)


def spindle_hull(A) -> ArcPolygon:
    """conv_c(A) for a finite planar set, computed as (A^c)^c."""
    P = as_points(A, 2)
    meb = min_enclosing_ball(P)
    if meb.radius > 1.0 + 1e-12:
        raise WholeSpaceError("out-radius exceeds 1: the c-hull is the whole plane")
    if meb.radius >= 1.0 - 1e-13:
        # A^c is the single point meb.center
        return ArcPolygon.disk(meb.center, 1.0)
    return c_dual_planar(intersect_disks(P, 1.0))


def hausdorff_planar(P: ArcPolygon, Q: ArcPolygon, samples: int = 4096) -> float:
    """sup |h_P - h_Q| over a fine circle of directions plus every piece break."""
    phi = np.concatenate([np.linspace(0.0, TWO_PI, samples, endpoint=False), P.theta, Q.theta,
                          P.theta + P.dtheta, Q.theta + Q.dtheta])
    U = _unit(phi)
    return float(np.abs(P.support(U) - Q.support(U)).max())


# ---------------------------------------------------------- named bodies
def lens_of_angle(theta: float, center=(0.0, 0.0)) -> ArcPolygon:
    """Symmetric lens bounded by two unit arcs of angle theta (vertices on the x-axis)."""
    if not 0.0 < theta <= math.pi:
        raise GeometryError("lens angle must lie in (0, pi]")
    half = math.sin(theta / 2.0)
    c = as_vector(center, 2)
    return spindle_hull([c + (-half, 0.0), c + (half, 0.0)])


def reuleaux_triangle() -> ArcPolygon:
    s = 1.0 / math.sqrt(3.0)
    return spindle_hull([[s, 0.0], [-s / 2.0, 0.5], [-s / 2.0, -0.5]])


def naztel_body() -> ArcPolygon:
    """Constant-width-1 body from quarter disks of radii R = 1 - 1/sqrt2 and r = 1/sqrt2.

    c-hull of ([0, inf)^2 cap B(0, R)) and ((-inf, 0]^2 cap B(0, r)); the
    quadrants are mirrored so that the large piece sits in the first one.
    """
    r = 1.0 / math.sqrt(2.0)
    R = 1.0 - r
    h = math.pi / 2.0
    q = math.pi / 4.0
    return ArcPolygon.from_pieces(
        centers=[[0.0, 0.0], [0.0, r], [r, 0.0], [0.0, 0.0], [0.0, r], [r, 0.0]],
        radii=[r, 0.0, 1.0, R, 1.0, 0.0],
        theta=[0.0, h, 3 * q, math.pi, 3 * h, 7 * q],
        dtheta=[h, q, q, h, q, q],
    )


def random_arc_polygon(rng, spread: float = 0.45, count: int | None = None,
                       sub_unit: bool = False) -> ArcPolygon:
    """Intersection of random disks near the origin (unit radii unless ``sub_unit``)."""
    while True:
        m = int(count or rng.integers(2, 9))
        C = rng.in_ball(m, 2, spread)
        r = rng.uniform(0.6, 1.0, size=m) if sub_unit else np.ones(m)
        try:
            P = intersect_disks(C, r)
        except EmptyBodyError:
            continue
        if P.area() > 1e-3:
            return P


# ------------------------------------------------------------------ Steiner
@dataclass(frozen=True)
class SampledPlanarBody:
    """Steiner symmetral sampled along a fiber grid.

    Coordinates ``xs`` run along u-perp; ``half_width[k]`` is half the fiber
    length.  ``curvature`` is the curvature of the upper boundary graph from
    exact derivatives of the fiber ends, ``curvature_fd`` the same from
    second differences of ``half_width``.
    """

    direction: np.ndarray
    xs: np.ndarray
    half_width: np.ndarray
    slope: np.ndarray
    curvature: np.ndarray
    curvature_fd: np.ndarray
    area: float
    boundary: np.ndarray

    @property
    def min_curvature(self) -> float:
        return float(self.curvature.min())

    def polygon_area(self) -> float:
        B = self.boundary
        return float(0.5 * abs(np.dot(B[:, 0], np.roll(B[:, 1], -1)) - np.dot(B[:, 1], np.roll(B[:, 0], -1))))


class _Graph:
    """One side of a body seen as a graph over the x-axis."""

    def __init__(self, P: ArcPolygon, upper: bool):
        rows = []
        lo_a, hi_a = (0.0, math.pi) if upper else (math.pi, TWO_PI)
        for c, r, t, dt in zip(P.centers, P.radii, P.theta, P.dtheta):
            if r == 0.0:
                continue
            for shift in (-TWO_PI, 0.0, TWO_PI):
                a, b = max(t + shift, lo_a), min(t + dt + shift, hi_a)
                if b - a > 1e-15:
                    x1, x2 = c[0] + r * math.cos(a), c[0] + r * math.cos(b)
                    lo, hi = min(x1, x2), max(x1, x2)
                    if hi - lo > 1e-15:
                        rows.append((lo, hi, c[0], c[1], r))
        rows.sort()
        self.table = np.array(rows)
        self.sign = 1.0 if upper else -1.0
        self.breaks = np.unique(np.concatenate([self.table[:, 0], self.table[:, 1]]))

    def eval(self, x):
        x = np.asarray(x, dtype=float)
        i = np.clip(np.searchsorted(self.table[:, 0], x, side="right") - 1, 0, len(self.table) - 1)
        a, b, r = self.table[i, 2], self.table[i, 3], self.table[i, 4]
        dx = x - a
        s = np.sqrt(np.maximum(r * r - dx * dx, 0.0))
        y = b + self.sign * s
        with np.errstate(divide="ignore", invalid="ignore"):
            y1 = -self.sign * dx / s
            y2 = -self.sign * r * r / s ** 3
        return y, y1, y2

    def integral(self, lo: float, hi: float) -> float:
        """Exact integral of the graph over [lo, hi] from the arc antiderivative."""
        total = 0.0
        for x0, x1, a, b, r in self.table:
            p, q = max(x0, lo), min(x1, hi)
            if q <= p:
                continue

            def F(x):
                z = np.clip((x - a) / r, -1.0, 1.0)
                return 0.5 * r * r * (z * math.sqrt(max(1.0 - z * z, 0.0)) + math.asin(z))
            total += b * (q - p) + self.sign * (F(q) - F(p))
        return total


def steiner_2d(P: ArcPolygon, u, fibers: int = 512) -> SampledPlanarBody:
    """Steiner symmetral of P in direction u, sampled on ``fibers`` fibers."""
    if fibers < 64:
        raise GeometryError("need at least 64 fibers")
    u = as_vector(u, 2)
    if abs(np.linalg.norm(u) - 1.0) > 1e-12:
        raise GeometryError("direction must be a unit vector")
    if P.area() <= 0.0:
        raise GeometryError("Steiner symmetrization needs a body with interior")
    psi = math.atan2(u[0], u[1])  # rotation taking u to e2
    Q = P.rotate(psi)
    top, bot = _Graph(Q, True), _Graph(Q, False)
    x_lo = -float(Q.support(np.array([-1.0, 0.0])))
    x_hi = float(Q.support(np.array([1.0, 0.0])))
    xs = x_lo + (np.arange(fibers) + 0.5) * (x_hi - x_lo) / fibers
    f, f1, f2 = top.eval(xs)
    g, g1, g2 = bot.eval(xs)
    w = 0.5 * (f - g)
    w1 = 0.5 * (f1 - g1)
    w2 = 0.5 * (f2 - g2)
    kappa = np.abs(w2) / (1.0 + w1 * w1) ** 1.5
    step = xs[1] - xs[0]
    kfd = np.full(fibers, np.nan)
    d1 = (w[2:] - w[:-2]) / (2.0 * step)
    d2 = (w[2:] - 2.0 * w[1:-1] + w[:-2]) / step ** 2
    kfd[1:-1] = np.abs(d2) / (1.0 + d1 * d1) ** 1.5
    area = top.integral(x_lo, x_hi) - bot.integral(x_lo, x_hi)
    # boundary polygon in the original frame, CCW
    xb = np.concatenate([[x_hi], xs[::-1], [x_lo], xs])
    yb = np.concatenate([[0.0], w[::-1], [0.0], -w[::1]])
    pts = np.column_stack([xb, yb])
    c, s = math.cos(-psi), math.sin(-psi)
    R = np.array([[c, -s], [s, c]])
    return SampledPlanarBody(u, xs, w, w1, kappa, kfd, float(area), pts @ R.T)


# ---------------------------------------------------------------- shadow
@dataclass(frozen=True)
class ShadowRow:
    t: float
    area: float
    dual_area: float


def shadow_system_2d(points, velocities, v, ts) -> list[ShadowRow]:
    """Areas of conv_c(A_t) and of A_t^c for A_t = {a_i + t alpha_i v}."""
    A = as_points(points, 2)
    alpha = np.asarray(velocities, dtype=float).reshape(-1)
    if alpha.size != A.shape[0]:
        raise GeometryError("one velocity per point")
    v = as_vector(v, 2)
    rows = []
    for t in np.asarray(ts, dtype=float).reshape(-1):
        At = A + t * alpha[:, None] * v
        if min_enclosing_ball(At).radius > 1.0 + 1e-12:
            rows.append(ShadowRow(float(t), math.inf, 0.0))
            continue
        D = intersect_disks(At, 1.0)
        rows.append(ShadowRow(float(t), c_dual_planar(D).area(), D.area()))
    return rows


def mahler_2d(P: ArcPolygon) -> float:
    return math.sqrt(max(P.area(), 0.0)) + math.sqrt(max(c_dual_planar(P).area(), 0.0))


def mahler_bounds() -> tuple[float, float]:
    return math.sqrt(TWO_PI - 4.0), math.sqrt(math.pi)


# -------------------------------------------------------------------- SVG
def _svg_frame(points: np.ndarray, scale: float, margin: float):
    lo, hi = points.min(axis=0), points.max(axis=0)
    W = (hi[0] - lo[0]) * scale + 2 * margin
    H = (hi[1] - lo[1]) * scale + 2 * margin

    def to_px(p):
        return ((p[0] - lo[0]) * scale + margin, (hi[1] - p[1]) * scale + margin)
    return W, H, to_px


def arc_polygon_svg(P: ArcPolygon, scale: float = 200.0, margin: float = 10.0,
                    stroke: str = "black") -> str:
    """Arcs become elliptical-arc commands (rx = ry = radius); y is flipped, so CCW arcs use sweep 1."""
    box = np.vstack([P.support_point(_unit(np.linspace(0, TWO_PI, 4, endpoint=False))),
                     P.boundary_samples(8)])
    W, H, px = _svg_frame(box, scale, margin)
    full = [k for k, r in enumerate(P.radii) if r > 0.0]
    if P.is_point:
        x, y = px(P.centers[0])
        body = f'<circle cx="{x:.4f}" cy="{y:.4f}" r="1.5" fill="{stroke}"/>'
    elif len(full) == 1 and P.dtheta[full[0]] >= TWO_PI - 1e-12:
        x, y = px(P.centers[full[0]])
        body = (f'<circle cx="{x:.4f}" cy="{y:.4f}" r="{P.radii[full[0]] * scale:.4f}" '
                f'fill="none" stroke="{stroke}"/>')
    else:
        segs = []
        start = None
        for c, r, t, dt in zip(P.centers, P.radii, P.theta, P.dtheta):
            if r == 0.0:
                continue
            pieces = 2 if dt > math.pi else 1  # SVG cannot draw a full circle in one command
            for k in range(pieces):
                a0 = t + dt * k / pieces
                a1 = t + dt * (k + 1) / pieces
                p0, p1 = c + r * _unit(a0), c + r * _unit(a1)
                if start is None:
                    start = px(p0)
                    segs.append(f"M {start[0]:.4f} {start[1]:.4f}")
                x1, y1 = px(p1)
                large = 1 if (a1 - a0) > math.pi else 0
                rr = r * scale
                segs.append(f"A {rr:.4f} {rr:.4f} 0 {large} 1 {x1:.4f} {y1:.4f}")
        segs.append("Z")
        body = f'<path d="{" ".join(segs)}" fill="none" stroke="{stroke}"/>'
    return (f'<svg xmlns="http://www.w3.org/2000/svg" width="{W:.2f}" height="{H:.2f}" '
            f'viewBox="0 0 {W:.2f} {H:.2f}">{body}</svg>')


def polyline_svg(points, scale: float = 200.0, margin: float = 10.0, stroke: str = "black") -> str:
    B = as_points(points, 2)
    W, H, px = _svg_frame(B, scale, margin)
    coords = " ".join(f"{x:.4f},{y:.4f}" for x, y in map(px, B))
    return (f'<svg xmlns="http://www.w3.org/2000/svg" width="{W:.2f}" height="{H:.2f}" '
            f'viewBox="0 0 {W:.2f} {H:.2f}"><polygon points="{coords}" fill="none" '
            f'stroke="{stroke}"/></svg>')
