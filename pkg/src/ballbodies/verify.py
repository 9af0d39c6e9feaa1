"""Theorem-keyed verification suites.

Each suite draws its own random instances from a seeded stream, measures a
margin for every instance (positive means the inequality holds with room to
spare, equalities report minus the absolute error) and keeps the worst one.
A suite passes when the worst margin is at least minus its tolerance.
Suites marked report-only cover open conjectures and never fail.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from . import body as B
from . import hull_theory as HT
from . import lens as LS
from . import planar as PL
from . import symwidth as SW
from . import _kernels
from .core import GeometryError, SeededRng, fibonacci_grid, unit_ball_volume
from .meb import min_enclosing_ball


@dataclass(frozen=True)
class VerificationReport:
    tag: str
    instances: int
    worst_margin: float
    tolerance: float
    seed: int
    passed: bool
    report_only: bool = False
    details: dict = field(default_factory=dict)

    def to_json(self) -> str:
        d = asdict(self)
        d["worst_margin"] = _finite(d["worst_margin"])
        return json.dumps(d, sort_keys=True, default=_jsonable)


def _finite(x):
    return x if math.isfinite(x) else (1e308 if x > 0 else -1e308)


def _jsonable(o):
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, (np.floating, np.integer, np.bool_)):
        return o.item()
    raise TypeError(type(o).__name__)


@dataclass(frozen=True)
class SuiteConfig:
    seed: int = 0
    scale: float = 1.0  # multiplies every instance count
    dims: tuple = (2, 3)
    options: dict = field(default_factory=dict)

    def count(self, base: int) -> int:
        return max(1, int(round(base * self.scale)))

    def get(self, key, default):
        return self.options.get(key, default)


class _Margins:
    def __init__(self):
        self.worst = math.inf
        self.count = 0

    def add(self, m: float):
        self.worst = min(self.worst, float(m))
        self.count += 1

    def report(self, tag, tol, cfg, report_only=False, **details):
        worst = self.worst if self.count else 0.0
        passed = True if report_only else worst >= -tol
        return VerificationReport(tag, self.count, worst, tol, cfg.seed, passed, report_only, details)


# ------------------------------------------------------------- suites
def suite_r3_counterexample(cfg: SuiteConfig) -> VerificationReport:
    r = SW.r3_counterexample()
    m = _Margins()
    m.add(0.01 - abs(r.psi_mid - 6.313))
    m.add(0.01 - abs(r.psi_average - 5.9545))
    m.add(1.0 - r.kappa_h)
    m.add(0.0 if r.certifies else -1.0)
    return m.report("r3-counterexample", 0.0, cfg, psi_mid=r.psi_mid, psi_average=r.psi_average,
                    kappa_h=r.kappa_h, z0_window=r.z0_window)


def suite_mahler_plane(cfg: SuiteConfig) -> VerificationReport:
    rng = SeededRng(cfg.seed, 1)
    lo, hi = PL.mahler_bounds()
    m = _Margins()
    for _ in range(cfg.count(500)):
        A = rng.in_ball(int(rng.integers(2, 9)), 2, float(rng.uniform(0.05, 0.7)))
        try:
            P = PL.spindle_hull(A)
        except LS.WholeSpaceError:
            continue
        v = PL.mahler_2d(P)
        m.add(min(v - lo, hi - v))
    eq_lens = abs(PL.mahler_2d(PL.lens_of_angle(math.pi / 2.0)) - lo)
    eq_ball = abs(PL.mahler_2d(PL.ArcPolygon.disk([0.0, 0.0], 0.5)) - hi)
    m.add(1e-9 - eq_lens)
    m.add(1e-9 - eq_ball)
    return m.report("mahler-plane", 1e-12, cfg, lens_error=eq_lens, ball_error=eq_ball)


def _pair_lens_support(A: np.ndarray, U: np.ndarray) -> np.ndarray:
    """max over pairs of the exact support of conv_c{a, b}; equals h_{conv_c A} in the plane."""
    i, j = np.triu_indices(len(A), 1)
    H, _ = _kernels.lens_support_np(A[i], A[j], U)
    return H.max(axis=0)


def suite_duality_identities(cfg: SuiteConfig) -> VerificationReport:
    """h_K(u) + h_{K^c}(-u) = 1 against pairwise lens supports; exact grid linearity.

    In the plane the c-hull boundary is made of unit arcs between pairs, so the
    pairwise lens maximum is the exact support.  In higher dimension it is only
    a lower bound and the check is one-sided.
    """
    rng = SeededRng(cfg.seed, 2)
    m = _Margins()
    worst_id = worst_lin = worst_h = 0.0
    for n in cfg.dims:
        grid = fibonacci_grid(n, 64 if n == 2 else 200)
        bodies = []
        for _ in range(cfg.count(50)):
            K = B.random_ball_body(n, rng)
            hK = B.support_values(K, grid.directions).values
            hD = _pair_lens_support(K.centers, -grid.directions)
            gap = hK + hD - 1.0  # <= 0 always, = 0 in the plane
            err = float(np.abs(gap).max()) if n == 2 else float(max(0.0, gap.max()))
            worst_id = max(worst_id, err)
            m.add(1e-7 - err)
            bodies.append(B.SupportSampledBody(grid, hK, 2.0, "primal-solved"))
        for K, L in zip(bodies[::2], bodies[1::2]):
            lam = float(rng.uniform(0.0, 1.0))
            lhs = B.c_dual(B.minkowski_combine(K, L, lam)).values
            rhs = B.minkowski_combine(B.c_dual(K), B.c_dual(L), lam).values
            e1 = float(np.abs(lhs - rhs).max())
            e2 = abs(B.hausdorff(K, L).value - B.hausdorff(B.c_dual(K), B.c_dual(L)).value)
            worst_lin, worst_h = max(worst_lin, e1), max(worst_h, e2)
            m.add(4e-16 - e1)
            m.add(-e2)
    return m.report("duality-identities", 0.0, cfg, identity=worst_id, linearity=worst_lin,
                    hausdorff=worst_h)


def suite_klens_volume(cfg: SuiteConfig) -> VerificationReport:
    rng = SeededRng(cfg.seed, 3)
    samples = cfg.get("samples", 10 ** 6)
    m = _Margins()
    rows = []
    for n, k in ((2, 1), (3, 1), (3, 2), (4, 2)):
        for d in (0.3, 0.6, 0.9):
            L = LS.KLens.axis_aligned(n, k, d)
            vol = LS.klens_volume(n, k, d).value
            res = B.mc_volume(lambda X: L.defects(X) <= 0.0, np.zeros(n), d, samples, rng)
            z = abs(vol - res.estimate) / max(res.stderr, 1e-300)
            rows.append((n, k, d, vol, res.estimate, res.stderr))
            m.add(3.0 - z)
    e1 = abs(LS.klens_volume(2, 1, 1.0).value - math.pi)
    e2 = abs(LS.klens_volume(2, 1, math.sqrt(0.5)).value - (math.pi / 2.0 - 1.0))
    m.add(1e-8 - e1)
    m.add(1e-8 - e2)
    return m.report("klens-volume", 0.0, cfg, rows=rows, exact_errors=[e1, e2])


def _radius_instances(cfg, tag_stream):
    rng = SeededRng(cfg.seed, tag_stream)
    for n in cfg.dims:
        for _ in range(cfg.count(200)):
            yield n, B.random_ball_body(n, rng)


def suite_santalo_thereal(cfg: SuiteConfig) -> VerificationReport:
    """Outrad(K) + Inrad(K^c) = 1 and r <= Outrad <= sqrt(2r - r^2)."""
    m = _Margins()
    worst_sum = 0.0
    for n, K in _radius_instances(cfg, 4):
        R = B.outradius_body(K)
        r = B.inradius_primal(K).radius
        H = B.CHullBody.of(K.centers)
        rd = B.inradius_support(H).radius
        e = abs(R.radius + rd - 1.0)
        worst_sum = max(worst_sum, e)
        m.add(1e-6 - e)
        m.add(R.radius - r)
        m.add(math.sqrt(2.0 * r - r * r) - R.radius)
    return m.report("santalo-thereal", 1e-6, cfg, outrad_plus_inrad=worst_sum)


def suite_diam_sum(cfg: SuiteConfig) -> VerificationReport:
    """2 <= diam K + diam K^c <= 2 sqrt 2, with the grid error budget on the upper side."""
    m = _Margins()
    grids = {n: fibonacci_grid(n, 64 if n == 2 else 300) for n in cfg.dims}
    for n, K in _radius_instances(cfg, 5):
        g = grids[n]
        H = B.CHullBody.of(K.centers)
        d1 = B.refined_diameter(K, g)
        d2 = B.refined_diameter(H, g)
        L = B.max_norm(K) + 1.0 + float(np.linalg.norm(K.centers, axis=1).max())
        budget = 4.0 * L * g.mesh
        m.add(d1 + d2 + budget - 2.0)
        m.add(2.0 * math.sqrt(2.0) - (d1 + d2))
    return m.report("diam-sum", 1e-6, cfg)


def regular_simplex(n: int, edge: float) -> np.ndarray:
    E = np.eye(n + 1)
    E -= E.mean(0)
    Q, _ = np.linalg.qr(E.T)
    V = E @ Q[:, :n]
    return V * (edge / np.linalg.norm(V[0] - V[1]))


def suite_diam_diamhull(cfg: SuiteConfig) -> VerificationReport:
    rng = SeededRng(cfg.seed, 6)
    m = _Margins()
    eq = {}
    for n in cfg.dims:
        g = fibonacci_grid(n, 64 if n == 2 else 300)
        c = math.sqrt(2.0 * n / (n + 1.0))
        for _ in range(cfg.count(200)):
            A = rng.in_ball(int(rng.integers(2, n + 5)), n, float(rng.uniform(0.1, 0.8)))
            if min_enclosing_ball(A).radius >= 1.0:
                continue
            dA = max(np.linalg.norm(a - b) for a in A for b in A)
            dH = B.refined_diameter(B.CHullBody.of(A), g)
            m.add(c * dA - dH)
        S = regular_simplex(n, math.sqrt(2.0 * (n + 1.0) / n))
        # Outrad(S) = 1 exactly, so conv_c(S) is the unit ball about the centroid
        R = min_enclosing_ball(S).radius
        dH = 2.0 * R if abs(R - 1.0) <= 1e-12 else B.refined_diameter(B.CHullBody.of(S), g)
        dS = float(np.linalg.norm(S[0] - S[1]))
        eq[n] = abs(dH - c * dS)
        m.add(1e-6 - eq[n])
    return m.report("diam-diamhull", 1e-6, cfg, simplex_equality=eq)


def suite_santalo_volume(cfg: SuiteConfig) -> VerificationReport:
    rng = SeededRng(cfg.seed, 7)
    samples = cfg.get("samples", 40000)
    m = _Margins()
    for n in cfg.dims:
        g = fibonacci_grid(n, 64 if n == 2 else 200)
        kn = unit_ball_volume(n) ** (1.0 / n)
        for _ in range(cfg.count(20)):
            K = B.random_ball_body(n, rng)
            H = B.CHullBody.of(K.centers)
            v1 = B.mc_volume_body(K, samples, rng)
            v2 = B.mc_volume_body(H, samples, rng, grid=g)
            f = v1.estimate ** (1 / n) + v2.estimate ** (1 / n)
            s = math.hypot(v1.estimate ** (1 / n - 1) * v1.stderr / n,
                           v2.estimate ** (1 / n - 1) * v2.stderr / n)
            m.add(kn - f + 3.0 * s)
    # M*(K) + M*(K^c) = 1 on symmetric grids
    mw = 0.0
    for n in cfg.dims:
        g = fibonacci_grid(n, 64 if n == 2 else 200)
        for _ in range(cfg.count(10)):
            S = B.sample_support(B.random_ball_body(n, rng), g)
            mw = max(mw, abs(B.mean_width(S) + B.mean_width(B.c_dual(S)) - 1.0))
    m.add(1e-12 - mw)
    return m.report("santalo-volume", 0.0, cfg, mean_width_error=mw)


def suite_steiner_plane(cfg: SuiteConfig) -> VerificationReport:
    rng = SeededRng(cfg.seed, 8)
    m = _Margins()
    worst_area = worst_curv = 0.0
    for _ in range(cfg.count(100)):
        P = PL.random_arc_polygon(rng)
        u = rng.unit_vectors(1, 2)[0]
        S = PL.steiner_2d(P, u)
        rel = abs(S.area - P.area()) / P.area()
        worst_area = max(worst_area, rel)
        worst_curv = max(worst_curv, 1.0 - S.min_curvature)
        m.add(1e-6 - rel)
        m.add(S.min_curvature - (1.0 - 1e-6))
    # shadow systems: second differences of the hull area
    worst_dd = 0.0
    for _ in range(cfg.count(20)):
        k = int(rng.integers(2, 7))
        A = rng.in_ball(k, 2, 0.4)
        alpha = rng.uniform(-1.0, 1.0, size=k)
        v = rng.unit_vectors(1, 2)[0]
        rows = PL.shadow_system_2d(A, alpha, v, np.linspace(-0.3, 0.3, 61))
        F = np.array([r.area for r in rows])
        F = F[np.isfinite(F)]
        if F.size >= 3:
            dd = F[2:] - 2.0 * F[1:-1] + F[:-2]
            worst_dd = min(worst_dd, float(dd.min()))
            m.add(float(dd.min()) + 1e-8)
    return m.report("steiner-plane", 0.0, cfg, area_error=worst_area, curvature_deficit=worst_curv,
                    shadow_second_difference=worst_dd)


def lens_angle_for_area(V: float) -> float:
    """theta with theta - sin(theta) = V, the lens of unit arcs with that area."""
    from scipy.optimize import brentq

    if not 0.0 < V <= math.pi:
        raise GeometryError("area outside (0, pi]")
    return float(brentq(lambda t: t - math.sin(t) - V, 0.0, math.pi, xtol=1e-15))


def suite_borisenko_plane(cfg: SuiteConfig) -> VerificationReport:
    """Sampled check: no random planar ball-body beats the lens of equal area in perimeter."""
    rng = SeededRng(cfg.seed, 18)
    m = _Margins()
    for _ in range(cfg.count(200)):
        P = PL.random_arc_polygon(rng)
        m.add(2.0 * lens_angle_for_area(P.area()) - P.perimeter())
    return m.report("borisenko-plane", 1e-6, cfg)


def suite_extremal_subset(cfg: SuiteConfig) -> VerificationReport:
    rng = SeededRng(cfg.seed, 9)
    m = _Margins()
    for _ in range(cfg.count(200)):
        A = rng.in_ball(int(rng.integers(2, 10)), 2, float(rng.uniform(0.1, 0.7)))
        P = PL.spindle_hull(A)
        ext = HT.extremal_points_2d(P)
        bad = len(ext.arcs)
        for x in ext.points:
            if np.linalg.norm(A - x, axis=1).min() > 1e-9:
                bad += 1
        m.add(-float(bad))
    return m.report("extremal-subset", 0.0, cfg)


def suite_caratheodory(cfg: SuiteConfig) -> VerificationReport:
    rng = SeededRng(cfg.seed, 10)
    m = _Margins()
    sizes = []
    for n in cfg.dims:
        for _ in range(cfg.count(10)):
            A = rng.in_ball(int(rng.integers(n + 2, n + 6)), n, 0.6)
            H = B.CHullBody.of(A)
            X = rng.in_ball(400, n, 0.8)
            X = X[H.contains_many(X)][:5]
            for x in X:
                d = HT.caratheodory_decompose(x, A)
                sizes.append(len(d.indices))
                m.add(n + 1 - len(d.indices))
            for u in rng.unit_vectors(3, n):
                _, pts = H.support_with_points(u[None, :])
                d = HT.caratheodory_decompose(pts[0], A)
                m.add(n - len(d.indices))
    return m.report("caratheodory", 0.0, cfg, max_size=max(sizes) if sizes else 0)


def suite_iterative_hull(cfg: SuiteConfig) -> VerificationReport:
    rng = SeededRng(cfg.seed, 11)
    m = _Margins()
    out = {}
    for n in cfg.dims:
        rounds = 1
        while 2 ** rounds <= n:
            rounds += 1
        A = rng.in_ball(5, n, 0.6)
        it = HT.iterative_c_hull(A, rounds, rng, test_count=800 if n == 2 else 400,
                                 cell=0.02 if n == 2 else 0.03)
        last = it.rounds[-1]
        out[n] = [(r.j, r.hausdorff, r.inside) for r in it.rounds]
        m.add(1e-3 - last.hausdorff)
        m.add(0.0 if all(r.inside for r in it.rounds) else -1.0)
    return m.report("iterative-hull", 0.0, cfg, rounds=out)


def _contraction(Y: np.ndarray, rng: SeededRng, steps: int = 3) -> np.ndarray:
    """Composition of homotheties towards random points and projections onto random balls."""
    X = Y.copy()
    n = Y.shape[1]
    for _ in range(steps):
        if rng.uniform() < 0.5:
            p = rng.in_ball(1, n, 1.0)[0]
            X = p + rng.uniform(0.5, 1.0) * (X - p)
        else:
            c = rng.in_ball(1, n, 0.5)[0]
            r = rng.uniform(0.2, 0.6)
            d = np.linalg.norm(X - c, axis=1, keepdims=True)
            X = np.where(d > r, c + (X - c) * (r / np.maximum(d, 1e-300)), X)
    return X


def kp_contraction_experiment(n: int, N: int, trials: int, rng: SeededRng,
                              samples: int = 20000, seed: int = 0) -> VerificationReport:
    """Vol(cap B(y_i, 1)) <= Vol(cap B(x_i, 1)) when x is a contraction of y.

    The two volumes share their sample points (common random numbers) so the
    difference has small variance.  Proven for N <= n + 1; larger N is
    reported, never asserted.
    """
    if N < 2:
        raise GeometryError("need at least two points")
    m = _Margins()
    for _ in range(trials):
        Y = rng.in_ball(N, n, 0.6)
        X = _contraction(Y, rng)
        DX = np.linalg.norm(X[:, None] - X[None], axis=2)
        DY = np.linalg.norm(Y[:, None] - Y[None], axis=2)
        if np.any(DX > DY + 1e-12):
            raise AssertionError("map is not a contraction")
        c = 0.5 * (X[0] + Y[0])
        R = 1.0 + 0.5 * float(np.linalg.norm(X[0] - Y[0]))
        Z = c + rng.in_ball(samples, n, R)
        ix = (np.linalg.norm(Z[:, None] - X[None], axis=2) <= 1.0).all(1)
        iy = (np.linalg.norm(Z[:, None] - Y[None], axis=2) <= 1.0).all(1)
        vb = unit_ball_volume(n) * R ** n
        diff = ix.astype(float) - iy.astype(float)
        est = vb * diff.mean()
        se = vb * diff.std(ddof=1) / math.sqrt(samples) if diff.any() else 0.0
        m.add(est + 3.0 * se)
    tag = "KP-gromov" if N <= n + 1 else "KP-weaker-report"
    return m.report(tag, 0.0, SuiteConfig(seed=seed), report_only=N > n + 1, n=n, N=N)


def suite_kp_gromov(cfg: SuiteConfig) -> VerificationReport:
    rng = SeededRng(cfg.seed, 12)
    worst, count, details = math.inf, 0, []
    for n in cfg.dims:
        for N in range(2, n + 2):
            r = kp_contraction_experiment(n, N, cfg.count(300), rng, seed=cfg.seed)
            worst, count = min(worst, r.worst_margin), count + r.instances
            details.append((n, N, r.worst_margin))
    return VerificationReport("KP-gromov", count, worst, 0.0, cfg.seed, worst >= 0.0, False,
                              {"cases": details})


def suite_kp_beyond(cfg: SuiteConfig) -> VerificationReport:
    rng = SeededRng(cfg.seed, 13)
    details = []
    worst, count = math.inf, 0
    for n in cfg.dims:
        r = kp_contraction_experiment(n, n + 3, cfg.count(50), rng, seed=cfg.seed)
        worst, count = min(worst, r.worst_margin), count + r.instances
        details.append((n, n + 3, r.worst_margin))
    return VerificationReport("KP-weaker-report", count, worst, 0.0, cfg.seed, True, True,
                              {"cases": details})


@dataclass(frozen=True)
class SkewedLensWitness:
    point: np.ndarray
    outradius: float
    defects: tuple  # lens defects of the point, both <= 0 up to rounding


def skewed_lens_intersection(u0, u1, z, eps: float = 1e-9) -> tuple[bool, SkewedLensWitness]:
    """conv_c[u1 + z, u0 - z] meets conv_c[-u1 + z, -u0 - z] when 0 is in conv_c[u0, u1].

    The witness is the centre of the smallest ball containing K and -T for
    K = B(u1 + z) cap B(u0 - z) and T = B(u1 - z) cap B(u0 + z); it is then
    checked against both lenses directly.
    """
    u0, u1, z = (np.asarray(v, dtype=float) for v in (u0, u1, z))
    if not LS.one_lens_angle_contains(np.zeros_like(u0), u0, u1):
        raise GeometryError("0 is not in conv_c[u0, u1]")
    p1, q1 = u1 + z, u0 - z
    p2, q2 = -u1 + z, -u0 - z
    if np.linalg.norm(p1 - q1) > 2.0:
        pt = 0.5 * (p2 + q2)
        return True, SkewedLensWitness(pt, math.inf, (-math.inf, 0.0))
    if np.linalg.norm(p2 - q2) > 2.0:
        pt = 0.5 * (p1 + q1)
        return True, SkewedLensWitness(pt, math.inf, (0.0, -math.inf))
    K = B.BallIntersectionBody.from_balls(np.vstack([p1, q1]), 1.0)
    T = B.BallIntersectionBody.from_balls(np.vstack([u1 - z, u0 + z]), 1.0)
    ok, w = B.half_dual_sum_membership(K, T, np.zeros_like(u0))
    d1 = LS.one_lens_as_klens(p1, q1).defect(w.z)
    d2 = LS.one_lens_as_klens(p2, q2).defect(w.z)
    return bool(ok and d1 <= eps and d2 <= eps), SkewedLensWitness(w.z, w.max_defect, (d1, d2))


def random_skewed_triple(n: int, rng: SeededRng):
    while True:
        u0 = rng.in_ball(1, n, 1.0)[0]
        u1 = rng.in_ball(1, n, 1.0)[0]
        if np.linalg.norm(u1 - u0) > 2.0:
            continue
        if LS.one_lens_angle_contains(np.zeros(n), u0, u1):
            return u0, u1, rng.in_ball(1, n, 0.5)[0]


def suite_skewed_lens(cfg: SuiteConfig) -> VerificationReport:
    rng = SeededRng(cfg.seed, 14)
    m = _Margins()
    worst_def = -math.inf
    for n in cfg.dims:
        for _ in range(cfg.count(1000) // len(cfg.dims)):
            u0, u1, z = random_skewed_triple(n, rng)
            ok, w = skewed_lens_intersection(u0, u1, z)
            worst_def = max(worst_def, max(w.defects))
            m.add(0.0 if ok else -1.0)
    return m.report("skewed-lens", 0.0, cfg, worst_defect=worst_def)


def suite_constant_width(cfg: SuiteConfig) -> VerificationReport:
    rng = SeededRng(cfg.seed, 15)
    m = _Margins()
    dev = 0.0
    inrad = {}
    for n in cfg.dims:
        g = fibonacci_grid(n, 64 if n == 2 else 400)
        bound = 1.0 - math.sqrt(n / (2.0 * (n + 1.0)))
        low = math.inf
        for _ in range(cfg.count(20)):
            K = B.random_ball_body(n, rng)
            W = SW.constant_width_average(B.sample_support(K, g))
            dev = max(dev, W.width_deviation)
            m.add(1e-9 - W.width_deviation)
            r = B.inradius_support(SW.constant_width_oracle(K), grid=g).radius
            low = min(low, r)
            m.add(r - (bound - 1e-6))
        inrad[n] = (low, bound)
    R = PL.reuleaux_triangle()
    dR = PL.hausdorff_planar(R, PL.c_dual_planar(R))
    m.add(1e-9 - dR)
    return m.report("constant-width", 0.0, cfg, width_deviation=dev, inradius=inrad, reuleaux=dR)


def suite_curvature_pairing(cfg: SuiteConfig) -> VerificationReport:
    rng = SeededRng(cfg.seed, 16)
    m = _Margins()
    worst = 0.0
    for _ in range(cfg.count(50)):
        lam = float(rng.uniform(0.0, 0.95))
        b = float(rng.uniform(0.2, 0.9))
        h = SW.smooth_planar_body(lam, b)
        u = rng.unit_vectors(1, 2)[0]
        cp = SW.curvature_pairing(h, u)
        # independent radius: Minkowski-linear mix of the ball and the ellipse radii
        r_true = 0.5 * (1.0 - lam) + lam * SW.ellipse_curvature_radius(b, u)[0]
        e = max(cp.pair_error, abs(cp.radii[0] - r_true))
        worst = max(worst, e)
        m.add(1e-3 - e)
    prof = SW.ellipse_dual_profile(0.5)
    m.add(0.05 - abs(prof.exponent - 4.0 / 3.0))
    return m.report("curvature-pairing", 0.0, cfg, worst_error=worst, exponent=prof.exponent,
                    coefficient=prof.coefficient, series_coefficient=prof.series_coefficient,
                    printed_coefficient=prof.predicted_coefficient)


def suite_schramm(cfg: SuiteConfig) -> VerificationReport:
    g = fibonacci_grid(2, 720)
    m = _Margins()
    R = PL.reuleaux_triangle()
    S = B.SupportSampledBody(g, R.support(g.directions), 1.0)
    rep = SW.schramm_ball_check(S, 1.0 / math.sqrt(3.0) + 1e-12)
    m.add(rep.worst - rep.radius)
    rep2 = SW.schramm_ball_check(B.sample_ball(g, [0.0, 0.0], 0.5), 0.5)
    m.add(rep2.worst - rep2.radius)
    return m.report("schramm", 1e-9, cfg, reuleaux_radius=rep.radius)


def suite_basin(cfg: SuiteConfig) -> VerificationReport:
    rng = SeededRng(cfg.seed, 17)
    g = fibonacci_grid(3, 300)
    m = _Margins()
    half = SW.ConstantWidthBody.certify(B.sample_ball(g, np.zeros(3), 0.5))
    for _ in range(cfg.count(10)):
        K = B.random_ball_body(3, rng)
        S = B.sample_support(K, g)
        sym = B.SupportSampledBody(g, 0.5 * (S.values + S.values[g.neg_index]), S.lipschitz_bound)
        m.add(0.0 if SW.basin_parity_check(half, sym) else -1.0)
        W = SW.constant_width_average(S)
        shifted = B.SupportSampledBody(g, W.values + g.directions @ np.array([0.05, 0.0, 0.0]), 2.0)
        m.add(0.0 if not SW.basin_parity_check(W, shifted) else -1.0)
    return m.report("basin", 0.0, cfg)


REGISTRY = {
    "r3-counterexample": suite_r3_counterexample,
    "mahler-plane": suite_mahler_plane,
    "duality-identities": suite_duality_identities,
    "klens-volume": suite_klens_volume,
    "santalo-thereal": suite_santalo_thereal,
    "diam-sum": suite_diam_sum,
    "diam-diamhull": suite_diam_diamhull,
    "santalo-volume": suite_santalo_volume,
    "steiner-plane": suite_steiner_plane,
    "borisenko-plane": suite_borisenko_plane,
    "extremal-subset": suite_extremal_subset,
    "caratheodory": suite_caratheodory,
    "iterative-hull": suite_iterative_hull,
    "KP-gromov": suite_kp_gromov,
    "KP-weaker-report": suite_kp_beyond,
    "skewed-lens": suite_skewed_lens,
    "constant-width": suite_constant_width,
    "curvature-pairing": suite_curvature_pairing,
    "schramm": suite_schramm,
    "basin": suite_basin,
}


def run_suite(tag: str, config: SuiteConfig | None = None) -> VerificationReport:
    if tag not in REGISTRY:
        raise KeyError(f"unknown suite {tag!r}; known: {', '.join(sorted(REGISTRY))}")
    return REGISTRY[tag](config or SuiteConfig())


def run_all(config: SuiteConfig | None = None, tags=None, workers: int = 1) -> list[VerificationReport]:
    """Run suites in registry order; each suite owns its rng stream so a pool changes nothing."""
    tags = list(tags or REGISTRY)
    if workers <= 1:
        return [run_suite(t, config) for t in tags]
    from concurrent.futures import ProcessPoolExecutor

    with ProcessPoolExecutor(workers) as pool:
        return list(pool.map(run_suite, tags, [config] * len(tags)))
