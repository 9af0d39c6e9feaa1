"""Command-line front end.

Exit codes: 0 success, 1 invalid input or a failed verification suite,
2 numerical non-convergence.  Every random draw comes from --seed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import body as B
from . import lens as LS
from . import planar as PL
from . import symwidth as SW
from . import verify as V
from .meb import min_enclosing_ball
from .core import ConvergenceError, GeometryError, SeededRng, as_points, fibonacci_grid

DIGITS = 12


def fmt(x) -> float:
    """Round to 12 significant digits so output bytes are stable."""
    x = float(x)
    if not math.isfinite(x) or x == 0.0:
        return x
    return float(f"{x:.{DIGITS}g}")


def _clean(obj):
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = fmt(obj)
        return x if math.isfinite(x) else str(x)
    return obj


def dumps(obj) -> str:
    return json.dumps(_clean(obj), sort_keys=True, indent=1) + "\n"


def _write(path, text: str):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _read_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise GeometryError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise GeometryError(f"{path} is not valid JSON: {exc}") from None


def load_points(path, dim=None) -> np.ndarray:
    """A bare list of points, {"points": [...]}, or a point_cloud body."""
    obj = _read_json(path)
    if isinstance(obj, dict):
        if "payload" in obj:
            obj = obj["payload"].get("points")
        else:
            obj = obj.get("points")
    if obj is None:
        raise GeometryError(f"{path} holds no point list")
    return as_points(obj, dim)


def load_body(path, dim=None):
    obj = _read_json(path)
    if isinstance(obj, list) or (isinstance(obj, dict) and "kind" not in obj):
        return B.CHullBody.of(load_points(path, dim))
    K = B.body_from_json(obj)
    if dim is not None and K.dim != dim:
        raise GeometryError(f"body has dimension {K.dim}, expected {dim}")
    return K


def planar_of(K) -> PL.ArcPolygon:
    """Exact arc-polygon for a planar body given by balls or points."""
    if K.dim != 2:
        raise GeometryError("this command needs a planar body")
    if isinstance(K, B.BallIntersectionBody):
        return PL.intersect_disks(K.centers, K.radii)
    if isinstance(K, B.CHullBody):
        return PL.spindle_hull(K.points)
    raise GeometryError("support-sampled bodies have no exact planar form")


def _grid(args, n):
    return fibonacci_grid(n, args.grid or (256 if n == 2 else 400))


def _as_sampled(K, grid):
    if isinstance(K, B.SupportSampledBody):
        return K
    if isinstance(K, B.CHullBody):
        return B.SupportSampledBody(grid, K.support(grid.directions), 2.0, "c-hull")
    return B.sample_support(K, grid)


def _volume(K, args):
    if K.dim == 2 and not isinstance(K, B.SupportSampledBody):
        return {"volume": planar_of(K).area(), "volume_method": "exact-planar"}
    if isinstance(K, B.SupportSampledBody):
        raise GeometryError("volume needs a ball or point body")
    rng = SeededRng(args.seed, 0)
    g = _grid(args, K.dim) if isinstance(K, B.CHullBody) else None
    r = B.mc_volume_body(K, args.samples, rng, grid=g)
    return {"volume": r.estimate, "volume_stderr": r.stderr, "volume_method": "monte-carlo"}


# ------------------------------------------------------------ commands
def cmd_hull(args):
    A = load_points(args.inp, args.dim)
    H = B.CHullBody.of(A)
    out = B.body_to_json(H)
    R = min_enclosing_ball(A)
    out["outradius"] = R.radius
    if R.radius > 1.0:
        raise LS.WholeSpaceError("out-radius exceeds 1: the c-hull is the whole space")
    n = A.shape[1]
    if len(A) == 2:
        d = 0.5 * float(np.linalg.norm(A[1] - A[0]))
        out["lens"] = {"half_distance": d, "volume": LS.one_lens_volume(n, d)}
        if n == 2:
            out["lens"]["area"] = out["lens"]["volume"]
    out.update(_volume(H, args))
    _write(args.out, dumps(out))


def cmd_dual(args):
    K = load_body(args.inp, args.dim)
    if isinstance(K, B.BallIntersectionBody):
        if not np.allclose(K.radii, 1.0):
            D = B.c_dual(B.sample_support(K, _grid(args, K.dim)))
        else:
            D = B.CHullBody.of(K.centers)
    elif isinstance(K, B.CHullBody):
        D = B.BallIntersectionBody.from_balls(K.points, 1.0)
    else:
        D = B.c_dual(K)
    _write(args.out, dumps(B.body_to_json(D)))


def cmd_volume(args):
    K = load_body(args.inp, args.dim)
    _write(args.out, dumps(_volume(K, args)))


def cmd_radii(args):
    K = load_body(args.inp, args.dim)
    if isinstance(K, B.BallIntersectionBody):
        R = B.outradius_body(K)
        r = B.inradius_primal(K)
    elif isinstance(K, B.CHullBody):
        # same out-radius as A; in-radius from the out-radius of the dual A^c
        m = min_enclosing_ball(K.points)
        R = B.OutradiusResult(m.radius, m.center, m.radius)
        Rd = B.outradius_body(B.BallIntersectionBody.from_balls(K.points, 1.0))
        r = B.InradiusResult(1.0 - Rd.radius, Rd.center, 1.0 - Rd.lower)
    else:
        raise GeometryError("radii needs a ball or point body")
    _write(args.out, dumps({"outradius": R.radius, "outcenter": R.center,
                            "inradius": r.radius, "incenter": r.center}))


def cmd_diameter(args):
    K = load_body(args.inp, args.dim)
    g = _grid(args, K.dim)
    if isinstance(K, B.SupportSampledBody):
        d = B.diameter(K)
        out = {"diameter": d.value, "error_bound": d.error}
    else:
        out = {"diameter": B.refined_diameter(K, g)}
    _write(args.out, dumps(out))


def cmd_steiner(args):
    K = load_body(args.inp, args.dim)
    u = _direction(args, K.dim)
    if args.t_steps:
        if not isinstance(K, B.CHullBody) or K.dim != 2:
            raise GeometryError("a shadow sweep needs a planar point body with velocities")
        alpha = _velocities(args.inp, len(K.points))
        ts = np.linspace(args.t_min, args.t_max, args.t_steps)
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t", "area", "dual_area"])
        for row in PL.shadow_system_2d(K.points, alpha, u, ts):
            w.writerow([repr(fmt(row.t)), repr(fmt(row.area)), repr(fmt(row.dual_area))])
        _write(args.out, buf.getvalue())
        return
    if K.dim == 2 and not isinstance(K, B.SupportSampledBody):
        P = planar_of(K)
        S = PL.steiner_2d(P, u)
        out = {"area_before": P.area(), "area": S.area, "min_curvature": S.min_curvature,
               "in_class": S.min_curvature >= 1.0 - 1e-6}
    elif isinstance(K, B.BallIntersectionBody):
        c, R = B.enclosing_ball(K)
        S = SW.steiner_symmetral_nd(K.contains_many, u, c, R, per_axis=args.grid or 24)
        out = {"volume": S.volume, "missing_fibers": int(np.sum(S.missing))}
    else:
        raise GeometryError("steiner needs a ball body or planar points")
    out["direction"] = u
    _write(args.out, dumps(out))


def cmd_minkowski(args):
    if not args.inp or len(args.inp_all) != 2:
        raise GeometryError("minkowski needs exactly two --in bodies")
    K, T = (load_body(p, args.dim) for p in args.inp_all)
    if K.dim != T.dim:
        raise GeometryError("bodies differ in dimension")
    g = _grid(args, K.dim)
    lam = 0.5 if args.lam is None else args.lam
    M = B.minkowski_combine(_as_sampled(K, g), _as_sampled(T, g), lam)
    _write(args.out, dumps(B.body_to_json(M)))


def cmd_lens(args):
    n = args.dim or 3
    if args.inp:
        A = load_points(args.inp, args.dim)
        if len(A) != 2:
            raise GeometryError("lens --in needs exactly two points")
        n, d, k = A.shape[1], 0.5 * float(np.linalg.norm(A[1] - A[0])), 1
    else:
        k, d = args.k, args.radius
    if d is None:
        raise GeometryError("lens needs --radius or --in")
    res = LS.klens_volume(n, k, d)
    dual = LS.klens_volume(n, n - k, math.sqrt(max(0.0, 1.0 - d * d))) if k < n else None
    out = {"n": n, "k": k, "radius": d, "volume": res.value}
    if dual is not None:
        out["dual"] = {"k": n - k, "radius": math.sqrt(max(0.0, 1.0 - d * d)), "volume": dual.value}
    _write(args.out, dumps(out))


def cmd_verify(args):
    dims = (args.dim,) if args.dim else (2, 3)
    opts = {} if args.samples is None else {"samples": args.samples}
    cfg = V.SuiteConfig(seed=args.seed, scale=args.scale, dims=dims, options=opts)
    tags = list(V.REGISTRY) if args.suite in (None, "all") else args.suite.split(",")
    for t in tags:
        if t not in V.REGISTRY:
            raise GeometryError(f"unknown suite {t!r}")
    reports = V.run_all(cfg, tags, workers=args.workers)
    lines = "".join(json.dumps(_clean(json.loads(r.to_json())), sort_keys=True) + "\n"
                    for r in reports)
    if args.out:
        _write(args.out, lines)
    width = max(len(t) for t in tags)
    for r in reports:
        state = "report" if r.report_only else ("pass" if r.passed else "FAIL")
        print(f"{r.tag:<{width}}  {state:<6}  n={r.instances:<6d} worst={fmt(r.worst_margin):.6g}")
    return 0 if all(r.passed for r in reports) else 1


def cmd_counterexample(args):
    rep = SW.r3_counterexample(z0=args.z0) if args.z0 is not None else SW.r3_counterexample()
    SW.recheck_counterexample(rep, tol=args.tol or 1e-3)
    out = json.loads(rep.to_json())
    out["printed"] = {"psi_mid": 6.313, "psi_average": 5.9545}
    out["admissible_z0"] = SW.admissible_z0(rep)
    _write(args.out, dumps(out))


EXAMPLES = {
    "naztel": PL.naztel_body,
    "reuleaux": PL.reuleaux_triangle,
    "disk": lambda: PL.ArcPolygon.disk([0.0, 0.0], 1.0),
    "lens": lambda: PL.lens_of_angle(math.pi / 2.0),
}


def cmd_render(args):
    if args.example == "ellipse":
        b = 0.5
        t = np.linspace(0.0, 2.0 * math.pi, 721)
        E = np.column_stack([math.sqrt(b) * np.cos(t), b * np.sin(t)])
        svg = PL.polyline_svg(E)
    elif args.example:
        svg = PL.arc_polygon_svg(EXAMPLES[args.example]())
    else:
        if not args.inp:
            raise GeometryError("render needs --in or --example")
        K = load_body(args.inp, args.dim)
        if K.dim != 2:
            raise GeometryError("render is planar only")
        if isinstance(K, B.SupportSampledBody):
            svg = PL.polyline_svg(_support_polygon(K))
        else:
            svg = PL.arc_polygon_svg(planar_of(K))
    _write(args.out, svg + "\n")


def _support_polygon(K):
    """Vertices of the polygon cut out by the sampled supporting lines."""
    D, h = K.grid.directions, K.values
    order = np.argsort(np.arctan2(D[:, 1], D[:, 0]))
    D, h = D[order], h[order]
    D2, h2 = np.roll(D, -1, 0), np.roll(h, -1)
    det = D[:, 0] * D2[:, 1] - D[:, 1] * D2[:, 0]
    x = (h * D2[:, 1] - h2 * D[:, 1]) / det
    y = (D[:, 0] * h2 - D2[:, 0] * h) / det
    return np.column_stack([x, y])


def _direction(args, n):
    if args.direction is None:
        u = np.zeros(n)
        u[0] = 1.0
        return u
    try:
        u = np.array([float(s) for s in args.direction.split(",")])
    except ValueError:
        raise GeometryError("--direction takes comma separated numbers") from None
    if u.shape != (n,) or not np.linalg.norm(u) > 0:
        raise GeometryError(f"--direction needs {n} components, not all zero")
    return u / np.linalg.norm(u)


def _velocities(path, count):
    obj = _read_json(path)
    v = obj.get("velocities") if isinstance(obj, dict) else None
    if v is None and isinstance(obj, dict) and "payload" in obj:
        v = obj["payload"].get("velocities")
    if v is None:
        raise GeometryError("input needs a 'velocities' list for a shadow sweep")
    v = np.asarray(v, dtype=float)
    if v.shape != (count,):
        raise GeometryError("one velocity per point is required")
    return v


COMMANDS = {
    "hull": cmd_hull, "dual": cmd_dual, "volume": cmd_volume, "radii": cmd_radii,
    "diameter": cmd_diameter, "steiner": cmd_steiner, "minkowski": cmd_minkowski,
    "lens": cmd_lens, "verify": cmd_verify, "counterexample": cmd_counterexample,
    "render": cmd_render,
}


def _positive_int(s):
    v = int(s)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ballbodies", description="Ball-body geometry toolkit.")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("--in", dest="inp_all", action="append", default=[], metavar="PATH")
        s.add_argument("--out", default=None)
        s.add_argument("--dim", type=_positive_int, default=None)
        s.add_argument("--grid", type=_positive_int, default=None)
        s.add_argument("--samples", type=_positive_int, default=None)
        s.add_argument("--seed", type=int, default=0)
        s.add_argument("--tol", type=float, default=None)
        s.add_argument("--direction", default=None)
        s.add_argument("--lambda", dest="lam", type=float, default=None)
        s.add_argument("--t-min", type=float, default=-0.5)
        s.add_argument("--t-max", type=float, default=0.5)
        s.add_argument("--t-steps", type=_positive_int, default=None)
        if name == "verify":
            s.add_argument("--suite", default="all")
            s.add_argument("--scale", type=float, default=1.0)
            s.add_argument("--workers", type=_positive_int, default=1)
        if name == "lens":
            s.add_argument("--k", type=_positive_int, default=1)
            s.add_argument("--radius", type=float, default=None)
        if name == "counterexample":
            s.add_argument("--z0", type=float, default=None)
        if name == "render":
            s.add_argument("--example", choices=[*EXAMPLES, "ellipse"], default=None)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    args.inp = args.inp_all[0] if args.inp_all else None
    if args.command != "verify" and args.samples is None:
        args.samples = 200000
    if args.command not in ("render", "counterexample", "lens", "verify") and not args.inp:
        print(f"error: {args.command} needs --in", file=sys.stderr)
        return 1
    if args.tol is not None and not args.tol > 0:
        print("error: --tol must be positive", file=sys.stderr)
        return 1
    if args.lam is not None and not 0.0 <= args.lam <= 1.0:
        print("error: --lambda must lie in [0, 1]", file=sys.stderr)
        return 1
    try:
        code = COMMANDS[args.command](args)
    except ConvergenceError as exc:
        print(f"error: no convergence: {exc}", file=sys.stderr)
        return 2
    except (GeometryError, KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return code or 0


if __name__ == "__main__":
    sys.exit(main())
