"""c-extremal points, Caratheodory decompositions and the iterative c-hull."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import nnls

from .body import CHullBody, farthest_points
from .core import DEFAULT_TOL, GeometryError, as_points, as_vector, orthonormal_complement
from .lens import WholeSpaceError
from .meb import min_enclosing_ball
from .planar import ArcPolygon, spindle_hull


# ------------------------------------------------------------ extremality
@dataclass(frozen=True)
class ExtremalSet2D:
    """ext_c of a planar body: isolated points plus whole sub-unit arcs."""

    points: np.ndarray
    arcs: list = field(default_factory=list)  # (center, radius, theta, dtheta)


def extremal_points_2d(P: ArcPolygon) -> ExtremalSet2D:
    """Corners are extremal, and so is every point of an arc of radius < 1.

    Points inside a unit arc lie in an open 1-arc of the boundary and are
    not extremal.  The unit disk has none at all.
    """
    corners = P.corners
    arcs = [(c.copy(), float(r), float(t), float(dt))
            for c, r, t, dt in zip(P.centers, P.radii, P.theta, P.dtheta) if 0.0 < r < 1.0]
    return ExtremalSet2D(corners.copy(), arcs)


@dataclass(frozen=True)
class ExtremalityCertificate:
    point: np.ndarray
    extremal: bool
    # non-extremal: (arc centre, arc start, arc end) of an open unit arc through the point
    # extremal: (normal u, piece radius) with B(x - u, 1) supporting and radius < 1
    witness: tuple

    @property
    def status(self) -> str:
        return "extremal" if self.extremal else "non-extremal"


def certify_extremality_2d(P: ArcPolygon, x, eps: float = DEFAULT_TOL.geom_eps) -> ExtremalityCertificate:
    """Extremality of a boundary point of a planar body, with a witness."""
    x = as_vector(x, 2)
    if abs(float(P.signed_distance(x)[0])) > eps:
        raise GeometryError("point is not on the boundary")
    for c, r, t, dt in zip(P.centers, P.radii, P.theta, P.dtheta):
        if r == 0.0:
            if np.linalg.norm(x - c) <= eps:
                u = np.array([math.cos(t), math.sin(t)])
                return ExtremalityCertificate(x, True, (u, 0.0))
            continue
        v = x - c
        if abs(np.linalg.norm(v) - r) > eps:
            continue
        phi = math.atan2(v[1], v[0])
        rel = (phi - t) % (2.0 * math.pi)
        if rel > dt + eps / r and rel < 2.0 * math.pi - eps / r:
            continue
        if r < 1.0:
            return ExtremalityCertificate(x, True, (v / np.linalg.norm(v), float(r)))
        # unit arc: extremal only at its ends
        if dt >= 2.0 * math.pi - eps:
            # full unit circle: any short arc around x will do
            a = c + np.array([math.cos(phi - 0.5), math.sin(phi - 0.5)])
            b = c + np.array([math.cos(phi + 0.5), math.sin(phi + 0.5)])
            return ExtremalityCertificate(x, False, (c.copy(), a, b))
        margin = min(rel, dt - rel) if rel <= dt else -1.0
        if margin > eps:
            a = c + np.array([math.cos(t), math.sin(t)])
            b = c + np.array([math.cos(t + dt), math.sin(t + dt)])
            return ExtremalityCertificate(x, False, (c.copy(), a, b))
    raise GeometryError("no boundary piece contains the point")


# ----------------------------------------------------------- Caratheodory
@dataclass(frozen=True)
class Decomposition:
    point: np.ndarray
    indices: tuple  # rows of A
    boundary: bool
    exit_point: np.ndarray | None = None  # interior case: where the unit arc leaves the hull


def _separation(H: CHullBody, x: np.ndarray) -> np.ndarray:
    d, Y = farthest_points(H.dual, x[None, :])
    return (x - Y[0]) / d[0]


def _boundary_decompose(H: CHullBody, x: np.ndarray, band: float) -> list[int]:
    """x on the boundary: its farthest dual point y is at distance 1, and
    x - y lies in the cone of a - y over the points a of A on the sphere S(y, 1).
    A non-negative least-squares fit picks at most n generators.
    """
    n = x.size
    _, Y = farthest_points(H.dual, x[None, :])
    y = Y[0]
    dist = np.linalg.norm(H.points - y, axis=1)
    cand = np.nonzero(dist >= 1.0 - band)[0]
    if cand.size == 0:
        cand = np.argsort(-dist)[: n]
    G = (H.points[cand] - y).T
    lam, _ = nnls(G, x - y)
    support = cand[lam > 1e-12 * max(lam.max(), 1e-300)]
    if support.size > n:
        support = _reduce_cone(H.points[support] - y, x - y, support, n)
    return [int(i) for i in support]


def _reduce_cone(V, target, idx, n):
    """Conic Caratheodory: drop generators along null-space directions until at most n remain."""
    lam = nnls(V.T, target)[0]
    idx = list(idx)
    V = list(V)
    lam = list(lam)
    while len(idx) > n:
        M = np.array(V).T
        _, _, Vt = np.linalg.svd(M)
        mu = Vt[-1]
        if not np.any(mu > 0):
            mu = -mu
        ratios = [l / m if m > 1e-15 else np.inf for l, m in zip(lam, mu)]
        k = int(np.argmin(ratios))
        t = ratios[k]
        lam = [l - t * m for l, m in zip(lam, mu)]
        del idx[k], V[k], lam[k]
    return np.array(idx)


def _exit_along_arc(H: CHullBody, x0: np.ndarray, x: np.ndarray, iters: int = 60):
    """Follow a unit circle from x0 through x and return where it leaves conv_c(A)."""
    n = x.size
    chord = x - x0
    L = float(np.linalg.norm(chord))
    e1 = chord / L
    W = orthonormal_complement(e1[:, None])
    w = W[:, 0]
    s = math.sqrt(max(1.0 - 0.25 * L * L, 0.0))
    c = 0.5 * (x0 + x) + s * w
    # x0 = c + cos(a0) f1 + sin(a0) f2 in the plane of e1 and w
    f1, f2 = -w, e1
    def at(phi):
        return c + math.cos(phi) * f1 + math.sin(phi) * f2
    a0 = math.atan2((x0 - c) @ f2, (x0 - c) @ f1)
    a1 = math.atan2((x - c) @ f2, (x - c) @ f1)
    if a1 < a0:
        a1 += 2.0 * math.pi
    lo = a1
    step = max(a1 - a0, 1e-3)
    hi = lo
    while True:
        hi = min(hi + step, a0 + math.pi)
        if not H.contains(at(hi), eps=0.0) or hi >= a0 + math.pi:
            break
        lo = hi
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if H.contains(at(mid), eps=0.0):
            lo = mid
        else:
            hi = mid
    return at(lo)


def caratheodory_decompose(x, A, eps: float = 1e-9, band: float = 1e-7) -> Decomposition:
    """Indices S of A with x in conv_c(A[S]); |S| <= n + 1, and <= n on the boundary.

    Interior points follow a unit arc from the point of A farthest from x,
    through x, to the boundary; the exit point is decomposed and the start
    point added.  The result is re-verified by exact membership.
    """
    P = as_points(A)
    n = P.shape[1]
    x = as_vector(x, n)
    if min_enclosing_ball(P).radius >= 1.0:
        raise WholeSpaceError("Outrad(A) >= 1")
    H = CHullBody.of(P)
    far = float(H.max_distance_to_dual(x[None, :])[0])
    if far > 1.0 + eps:
        u = _separation(H, x)
        raise GeometryError(f"point is outside conv_c(A); separating direction {u.tolist()}")
    hit = np.nonzero(np.linalg.norm(P - x, axis=1) <= eps)[0]
    if hit.size:
        return Decomposition(x, (int(hit[0]),), True)
    if far >= 1.0 - eps:
        S = _boundary_decompose(H, x, band)
        dec = Decomposition(x, tuple(sorted(S)), True)
    else:
        k = int(np.argmax(np.linalg.norm(P - x, axis=1)))
        z = _exit_along_arc(H, P[k], x)
        S = _boundary_decompose(H, z, band)
        dec = Decomposition(x, tuple(sorted(set(S) | {k})), False, z)
    if not CHullBody.of(P[list(dec.indices)]).contains(x, eps=max(eps, 1e-8)):
        raise GeometryError("decomposition failed its membership re-check")
    return dec


# --------------------------------------------------------- iterative hull
def lens_distance(X, Pa, Pb) -> np.ndarray:
    """Exact distances from each row of X to conv_c{Pa[i], Pb[i]}; shape (points, pairs).

    In the meridian half-plane (a, rho) around the lens axis the lens is
    a^2 + (rho + s)^2 <= 1 with s = sqrt(1 - delta^2), a convex region whose
    nearest point is either the radial projection onto that circle or one
    of the two vertices.
    """
    X = np.atleast_2d(X)
    m = 0.5 * (Pa + Pb)
    half = 0.5 * (Pb - Pa)
    delta = np.linalg.norm(half, axis=1)
    if np.any(delta > 1.0):
        raise WholeSpaceError("a pair is farther apart than 2")
    e = np.divide(half, delta[:, None], out=np.zeros_like(half), where=delta[:, None] > 0)
    s = np.sqrt(np.clip(1.0 - delta ** 2, 0.0, None))
    Y = X[:, None, :] - m[None, :, :]
    a = np.einsum("xpn,pn->xp", Y, e)
    rho = np.sqrt(np.maximum((Y * Y).sum(-1) - a * a, 0.0))
    r = np.sqrt(a * a + (rho + s) ** 2)
    radial_ok = (rho + s) >= s * r
    d_arc = np.maximum(r - 1.0, 0.0)
    d_vert = np.sqrt((np.abs(a) - delta) ** 2 + rho ** 2)
    return np.where(r <= 1.0, 0.0, np.where(radial_ok, d_arc, d_vert))


def lens_surface_samples(p, q, arc_points: int = 16, turns: int = 12) -> np.ndarray:
    """Points on the boundary of conv_c{p, q}: unit arcs from p to q in several planes."""
    p = as_vector(p)
    q = as_vector(q, p.size)
    n = p.size
    L = float(np.linalg.norm(q - p))
    if L == 0.0:
        return p[None, :]
    if L > 2.0:
        raise WholeSpaceError("points farther apart than 2")
    e = (q - p) / L
    W = orthonormal_complement(e[:, None])
    s = math.sqrt(max(1.0 - 0.25 * L * L, 0.0))
    half = math.asin(min(0.5 * L, 1.0))
    ang = np.linspace(-half, half, arc_points)
    if n == 2:
        dirs = np.vstack([W[:, 0], -W[:, 0]])
    else:
        g = np.linspace(0.0, 2.0 * math.pi, turns, endpoint=False)
        if n == 3:
            dirs = np.outer(np.cos(g), W[:, 0]) + np.outer(np.sin(g), W[:, 1])
        else:
            rng = np.random.default_rng(0)
            C = rng.normal(size=(turns, W.shape[1]))
            dirs = (C / np.linalg.norm(C, axis=1, keepdims=True)) @ W.T
    m = 0.5 * (p + q)
    pts = []
    for w in dirs:
        c = m - s * w  # the arc bulges towards w
        pts.append(c + np.outer(np.cos(ang), w) + np.outer(np.sin(ang), e))
    return np.vstack(pts)


def _perp_frames(e: np.ndarray, turns: int) -> np.ndarray:
    """Unit vectors orthogonal to each row of e, shape (pairs, dirs, n)."""
    m, n = e.shape
    if n == 2:
        w = np.column_stack([-e[:, 1], e[:, 0]])
        return np.stack([w, -w], axis=1)
    k = np.argmin(np.abs(e), axis=1)
    a = np.zeros_like(e)
    a[np.arange(m), k] = 1.0
    w1 = a - (a * e).sum(1, keepdims=True) * e
    w1 /= np.linalg.norm(w1, axis=1, keepdims=True)
    g = np.linspace(0.0, 2.0 * math.pi, turns, endpoint=False)
    if n == 3:
        w2 = np.cross(e, w1)
    else:
        rnd = np.random.default_rng(0).normal(size=n)
        w2 = rnd - (e @ rnd)[:, None] * e - (w1 @ rnd)[:, None] * w1
        w2 /= np.linalg.norm(w2, axis=1, keepdims=True)
    return np.cos(g)[None, :, None] * w1[:, None, :] + np.sin(g)[None, :, None] * w2[:, None, :]


def lens_samples_batch(Pa, Pb, arc_points: int = 16, turns: int = 12) -> np.ndarray:
    """lens_surface_samples for many pairs at once (2-D: both arcs; 3-D: ``turns`` planes)."""
    half = Pb - Pa
    L = np.linalg.norm(half, axis=1)
    keep = L > 0
    Pa, Pb, L = Pa[keep], Pb[keep], L[keep]
    if np.any(L > 2.0):
        raise WholeSpaceError("a pair is farther apart than 2")
    e = (Pb - Pa) / L[:, None]
    W = _perp_frames(e, turns)                                   # (p, d, n)
    s = np.sqrt(np.clip(1.0 - 0.25 * L * L, 0.0, None))
    hw = np.arcsin(np.clip(0.5 * L, 0.0, 1.0))
    ang = np.linspace(-1.0, 1.0, arc_points)[None, :] * hw[:, None]  # (p, a)
    m = 0.5 * (Pa + Pb)
    C = m[:, None, :] - s[:, None, None] * W                       # (p, d, n)
    X = (C[:, :, None, :] + np.cos(ang)[:, None, :, None] * W[:, :, None, :]
         + np.sin(ang)[:, None, :, None] * e[:, None, None, :])
    return X.reshape(-1, Pa.shape[1])


@dataclass(frozen=True)
class HullRound:
    j: int
    samples: int  # points of A_j kept to generate the next round
    hausdorff: float  # max over test points of K of the distance to the sampled A_j
    inside: bool  # every sample of A_j passed the exact membership check of conv_c(A)


@dataclass(frozen=True)
class IterativeHull:
    rounds: list
    test_points: int

    def first_within(self, tol: float) -> int | None:
        for r in self.rounds:
            if r.hausdorff <= tol:
                return r.j
        return None


def _distance_to_union(X, pairs_a, pairs_b, chunk: int = 4000) -> np.ndarray:
    best = np.full(X.shape[0], np.inf)
    for s in range(0, pairs_a.shape[0], chunk):
        D = lens_distance(X, pairs_a[s:s + chunk], pairs_b[s:s + chunk])
        best = np.minimum(best, D.min(axis=1))
    return best


def _pairs(P):
    i, k = np.triu_indices(P.shape[0], 1)
    return P[i], P[k]


def _thin(P, cell: float):
    """One point per cubical cell of side ``cell``."""
    key = np.floor(P / cell).astype(np.int64)
    key -= key.min(0)
    span = key.max(0) + 1
    flat = np.ravel_multi_index(key.T, tuple(span)) if np.prod(span.astype(float)) < 2 ** 62 else None
    if flat is None:
        _, idx = np.unique(key, axis=0, return_index=True)
    else:
        _, idx = np.unique(flat, return_index=True)
    return P[np.sort(idx)]


def hull_test_points(A, count: int, rng) -> np.ndarray:
    """Points of conv_c(A): boundary support points plus uniform interior samples."""
    H = CHullBody.of(A)
    n = H.dim
    U = rng.unit_vectors(count // 2, n)
    _, B = H.support_with_points(U)
    lo = H.points.min(0)
    hi = H.points.max(0)
    # c-hulls stick out of the bounding box of A by at most 1 - sqrt(1 - (diam/2)^2)
    pad = 1.0 - math.sqrt(max(1.0 - (0.5 * float(np.linalg.norm(hi - lo))) ** 2, 0.0))
    inner = []
    while sum(len(i) for i in inner) < count - count // 2:
        X = rng.uniform(lo - pad, hi + pad, size=(4 * count, n))
        inner.append(X[H.contains_many(X)])
    inner = np.vstack(inner)[: count - count // 2]
    return np.vstack([B, inner])


def iterative_c_hull(A, rounds: int, rng, test_count: int = 800, arc_points: int = 24,
                     turns: int = 12, cell: float = 0.02, max_pairs: int = 60000,
                     membership_checks: int = 1000, outer_directions: int = 3000) -> IterativeHull:
    """A_0 = A, A_{j+1} = union of conv_c{x, y} over x, y in A_j, on samples.

    A_j is kept as a point sample of lens surfaces (thinned to one point per
    ``cell``).  Round j is measured by the exact distance from test points of
    conv_c(A) to the union of lenses over sample pairs of A_{j-1}, which is
    an inner approximation of A_j; when there are more than ``max_pairs``
    pairs, all pairs among the samples extreme in some random direction
    are kept and the rest is a random subset; either way the approximation
    only shrinks.
    A_1 is exact.
    """
    P = as_points(A)
    if min_enclosing_ball(P).radius >= 1.0:
        raise WholeSpaceError("Outrad(A) >= 1")
    H = CHullBody.of(P)
    T = hull_test_points(P, test_count, rng)
    out = []
    current = P
    for j in range(1, rounds + 1):
        pa, pb = _pairs(current)
        if pa.shape[0] > max_pairs:
            # all pairs among the outermost samples, plus random pairs
            U = rng.unit_vectors(outer_directions, P.shape[1])
            top = np.unique(np.argmax(current @ U.T, axis=0))
            oa, ob = _pairs(current[top])
            pick = rng.integers(0, pa.shape[0], size=max(max_pairs - oa.shape[0], 0))
            pa, pb = np.vstack([oa, pa[pick]]), np.vstack([ob, pb[pick]])
        dist = _distance_to_union(T, pa, pb)
        nxt = [current]
        for k in range(0, pa.shape[0], 2000):
            nxt.append(_thin(lens_samples_batch(pa[k:k + 2000], pb[k:k + 2000], arc_points, turns), cell))
        nxt = np.vstack([P, _thin(np.vstack(nxt), cell)])
        check = nxt[rng.integers(0, nxt.shape[0], size=min(membership_checks, nxt.shape[0]))]
        inside = bool(H.contains_many(check, eps=1e-9).all())
        out.append(HullRound(j, nxt.shape[0], float(dist.max()), inside))
        current = nxt
    return IterativeHull(out, T.shape[0])


__all__ = [
    "ExtremalSet2D", "extremal_points_2d", "ExtremalityCertificate", "certify_extremality_2d",
    "Decomposition", "caratheodory_decompose", "lens_distance", "lens_surface_samples", "lens_samples_batch",
    "HullRound", "IterativeHull", "hull_test_points", "iterative_c_hull",
]
