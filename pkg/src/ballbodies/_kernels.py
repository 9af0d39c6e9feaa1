"""Hot loops, compiled with numba when available.

Every kernel exists twice: a numba ``@njit`` version with explicit loops and
a vectorized numpy version.  ``BALLBODIES_NO_NUMBA=1`` (or a missing numba)
selects the numpy path.  Both are importable side by side as
``numba_impl`` / ``numpy_impl`` so tests and the benchmark can compare them.
"""

from __future__ import annotations

import itertools
import math
import os
from types import SimpleNamespace

import numpy as np

try:  # pragma: no cover - exercised implicitly
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    numba = None
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and os.environ.get("BALLBODIES_NO_NUMBA", "0") not in ("1", "true", "yes")

# status codes returned by the support kernels
OK, STALLED, MAX_ROUNDS = 0, 1, 2


# ---------------------------------------------------------------- numpy path

def _frame_np(C, r, idx):
    """Sphere-intersection frame of the balls ``idx``.

    Returns (p, rho2, Q) with the intersection of the spheres equal to the
    (n - m)-sphere of centre p, squared radius rho2, in the affine plane
    orthogonal to the rows of Q.  rho2 = -inf flags dependent centres.
    """
    n = C.shape[1]
    a0 = C[idx[0]]
    m = len(idx)
    Q = np.zeros((max(m - 1, 0), n))
    beta = np.zeros(max(m - 1, 0))
    for j in range(1, m):
        d = C[idx[j]] - a0
        s = 0.5 * (d @ d + r[idx[0]] ** 2 - r[idx[j]] ** 2)
        v = d.copy()
        for k in range(j - 1):
            c = Q[k] @ d
            v -= c * Q[k]
            s -= c * beta[k]
        nv = math.sqrt(v @ v)
        if nv < 1e-12 * (1.0 + math.sqrt(d @ d)):
            return a0, -math.inf, Q
        Q[j - 1] = v / nv
        beta[j - 1] = s / nv
    p = a0 + beta @ Q if m > 1 else a0.copy()
    return p, r[idx[0]] ** 2 - beta @ beta, Q


def _complement_unit_np(Q, n):
    for e in np.eye(n):
        v = e - Q.T @ (Q @ e) if Q.shape[0] else e.copy()
        nv = np.linalg.norm(v)
        if nv > 0.5:
            return v / nv
    return np.zeros(n)


def _best_on_subsets_np(C, r, W, u, n, feas_tol):
    best_val, best_x = -math.inf, None
    CW, rW = C[W], r[W]
    for m in range(1, min(n, len(W)) + 1):
        for comb in itertools.combinations(range(len(W)), m):
            idx = [W[c] for c in comb]
            p, rho2, Q = _frame_np(C, r, idx)
            if rho2 < -1e-12:
                continue
            rho = math.sqrt(max(rho2, 0.0))
            Pu = u - Q.T @ (Q @ u) if Q.shape[0] else u.copy()
            npu = np.linalg.norm(Pu)
            if npu > 1e-13:
                x = p + rho * Pu / npu
            else:
                x = p + rho * _complement_unit_np(Q, n)
            if np.all(np.linalg.norm(CW - x, axis=1) <= rW + feas_tol):
                v = x @ u
                if v > best_val:
                    best_val, best_x = v, x
    return best_val, best_x


def support_batch_np(C, r, D, feas_tol=1e-10, max_rounds=64):
    N, n = C.shape
    M = D.shape[0]
    H = np.full(M, np.nan)
    X = np.full((M, n), np.nan)
    status = np.zeros(M, dtype=np.int64)
    tops = D @ C.T + r[None, :]
    for k in range(M):
        u = D[k]
        W = [int(np.argmin(tops[k]))]
        st = MAX_ROUNDS
        for _ in range(max_rounds):
            val, x = _best_on_subsets_np(C, r, W, u, n, feas_tol)
            if x is None:
                st = STALLED
                break
            viol = np.linalg.norm(C - x, axis=1) - r
            j = int(np.argmax(viol))
            if viol[j] <= feas_tol:
                H[k], X[k] = val, x
                st = OK
                break
            if j in W:
                H[k], X[k] = val, x
                st = STALLED
                break
            W.append(j)
        status[k] = st
    return H, X, status


def subset_table_np(C, r, max_size):
    N, n = C.shape
    rows = []
    for m in range(1, min(max_size, N) + 1):
        rows.extend(itertools.combinations(range(N), m))
    S = len(rows)
    P = np.zeros((S, n))
    rho = np.full(S, -1.0)
    Qs = np.zeros((S, max(n - 1, 1), n))
    nq = np.zeros(S, dtype=np.int64)
    E = np.zeros((S, n))
    for s, idx in enumerate(rows):
        p, rho2, Q = _frame_np(C, r, list(idx))
        if rho2 < -1e-12:
            continue
        P[s] = p
        rho[s] = math.sqrt(max(rho2, 0.0))
        Qs[s, : Q.shape[0]] = Q
        nq[s] = Q.shape[0]
        E[s] = _complement_unit_np(Q, n)
    return P, rho, Qs, nq, E


def farthest_batch_np(C, r, X, table, feas_tol=1e-10, chunk=256):
    """max over y in the ball intersection of |y - x|, for every row x of X."""
    P, rho, Qs, nq, E = table
    ok = rho >= 0
    P, rho, Qs, E = P[ok], rho[ok], Qs[ok], E[ok]
    M = X.shape[0]
    out = np.full(M, -np.inf)
    arg = np.full((M, C.shape[1]), np.nan)
    for s0 in range(0, M, chunk):
        Xc = X[s0:s0 + chunk]
        V = P[:, None, :] - Xc[None, :, :]                       # (S, m, n)
        proj = np.einsum("skn,sbn->sbk", Qs, V)                   # (S, m, q)
        PV = V - np.einsum("sbk,skn->sbn", proj, Qs)
        nv = np.linalg.norm(PV, axis=2, keepdims=True)
        dirn = np.where(nv > 1e-13, PV / np.where(nv > 1e-13, nv, 1.0), E[:, None, :])
        best = np.full(Xc.shape[0], -np.inf)
        bestp = np.full(Xc.shape, np.nan)
        for sign in (1.0, -1.0):
            Y = P[:, None, :] + sign * rho[:, None, None] * dirn  # (S, m, n)
            feas = np.ones(Y.shape[:2], dtype=bool)
            for i in range(C.shape[0]):
                feas &= np.linalg.norm(Y - C[i], axis=2) <= r[i] + feas_tol
            dist = np.where(feas, np.linalg.norm(Y - Xc[None, :, :], axis=2), -np.inf)
            j = np.argmax(dist, axis=0)
            dj = dist[j, np.arange(Xc.shape[0])]
            upd = dj > best
            best[upd] = dj[upd]
            bestp[upd] = Y[j[upd], np.arange(Xc.shape[0])[upd]]
        out[s0:s0 + chunk] = best
        arg[s0:s0 + chunk] = bestp
    return out, arg


def in_balls_np(X, C, r, eps, chunk=65536):
    M = X.shape[0]
    out = np.ones(M, dtype=bool)
    for s in range(0, M, chunk):
        Xc = X[s:s + chunk]
        d2 = (Xc * Xc).sum(1)[:, None] - 2.0 * Xc @ C.T + (C * C).sum(1)[None, :]
        out[s:s + chunk] = np.all(d2 <= (r + eps)[None, :] ** 2, axis=1)
    return out


def in_halfspaces_np(X, D, h, eps, chunk=8192):
    M = X.shape[0]
    out = np.ones(M, dtype=bool)
    for s in range(0, M, chunk):
        out[s:s + chunk] = np.all(X[s:s + chunk] @ D.T <= h[None, :] + eps, axis=1)
    return out


def dykstra_project_np(y, C, r, max_sweeps=100000, tol=1e-13):
    x = y.astype(float).copy()
    incr = np.zeros_like(C)
    for sweep in range(max_sweeps):
        x_prev = x.copy()
        change = 0.0
        for i in range(C.shape[0]):
            z = x + incr[i]
            d = z - C[i]
            nd = np.linalg.norm(d)
            xn = C[i] + d * (r[i] / nd) if nd > r[i] else z
            change += np.sum((incr[i] - (z - xn)) ** 2)
            incr[i] = z - xn
            x = xn
        if np.linalg.norm(x - x_prev) <= tol and change <= tol * tol:
            return x, sweep + 1
    return x, max_sweeps


def lens_support_np(Pa, Pb, D):
    """Support values and points of the c-hulls of pairs (Pa[i], Pb[i]) in directions D.

    Returns arrays of shape (pairs, dirs) and (pairs, dirs, n).
    """
    m = 0.5 * (Pa + Pb)
    half = 0.5 * (Pb - Pa)
    delta = np.linalg.norm(half, axis=1)
    e = np.divide(half, delta[:, None], out=np.zeros_like(half), where=delta[:, None] > 0)
    rho0 = np.sqrt(np.clip(1.0 - delta ** 2, 0.0, None))
    alpha = e @ D.T                                               # (p, d)
    W = D[None, :, :] - alpha[:, :, None] * e[:, None, :]
    beta = np.linalg.norm(W, axis=2)
    Wn = np.divide(W, beta[:, :, None], out=np.zeros_like(W), where=beta[:, :, None] > 1e-14)
    smooth = (np.abs(alpha) <= delta[:, None]) & (beta > 1e-14)
    Xs = m[:, None, :] - rho0[:, None, None] * Wn + D[None, :, :]
    ha = Pa @ D.T
    hb = Pb @ D.T
    Xv = np.where((ha >= hb)[:, :, None], Pa[:, None, :], Pb[:, None, :])
    X = np.where(smooth[:, :, None], Xs, Xv)
    H = np.einsum("pdn,dn->pd", X, D)
    return H, X


numpy_impl = SimpleNamespace(
    name="numpy",
    support_batch=support_batch_np,
    farthest_batch=lambda C, r, X, feas_tol=1e-10: farthest_batch_np(
        C, r, X, subset_table_np(C, r, C.shape[1]), feas_tol),
    in_balls=in_balls_np,
    in_halfspaces=in_halfspaces_np,
    dykstra_project=dykstra_project_np,
)


# ---------------------------------------------------------------- numba path

if HAVE_NUMBA:
    njit = numba.njit(cache=True, fastmath=False)

    @njit
    def _frame_nb(C, r, idx, m, p, Q, beta):
        n = C.shape[1]
        i0 = idx[0]
        for c in range(n):
            p[c] = C[i0, c]
        for j in range(1, m):
            ij = idx[j]
            dd = 0.0
            for c in range(n):
                dd += (C[ij, c] - C[i0, c]) ** 2
            s = 0.5 * (dd + r[i0] ** 2 - r[ij] ** 2)
            v = np.empty(n)
            for c in range(n):
                v[c] = C[ij, c] - C[i0, c]
            for k in range(j - 1):
                ck = 0.0
                for c in range(n):
                    ck += Q[k, c] * (C[ij, c] - C[i0, c])
                for c in range(n):
                    v[c] -= ck * Q[k, c]
                s -= ck * beta[k]
            nv = 0.0
            for c in range(n):
                nv += v[c] * v[c]
            nv = math.sqrt(nv)
            if nv < 1e-12 * (1.0 + math.sqrt(dd)):
                return -math.inf
            for c in range(n):
                Q[j - 1, c] = v[c] / nv
            beta[j - 1] = s / nv
        rho2 = r[i0] ** 2
        for k in range(m - 1):
            for c in range(n):
                p[c] += beta[k] * Q[k, c]
            rho2 -= beta[k] * beta[k]
        return rho2

    @njit
    def _project_out(Q, q, v, out):
        n = v.shape[0]
        for c in range(n):
            out[c] = v[c]
        for k in range(q):
            t = 0.0
            for c in range(n):
                t += Q[k, c] * v[c]
            for c in range(n):
                out[c] -= t * Q[k, c]
        s = 0.0
        for c in range(n):
            s += out[c] * out[c]
        return math.sqrt(s)

    @njit
    def _complement_unit_nb(Q, q, n, out):
        e = np.zeros(n)
        for a in range(n):
            for c in range(n):
                e[c] = 0.0
            e[a] = 1.0
            nv = _project_out(Q, q, e, out)
            if nv > 0.5:
                for c in range(n):
                    out[c] /= nv
                return
        for c in range(n):
            out[c] = 0.0

    @njit
    def _next_comb(comb, m, w):
        i = m - 1
        while i >= 0 and comb[i] == w - m + i:
            i -= 1
        if i < 0:
            return False
        comb[i] += 1
        for j in range(i + 1, m):
            comb[j] = comb[j - 1] + 1
        return True

    @njit
    def _support_one_nb(C, r, u, feas_tol, max_rounds, xout):
        N, n = C.shape
        W = np.empty(N, dtype=np.int64)
        best_i = 0
        best_top = math.inf
        for i in range(N):
            t = r[i]
            for c in range(n):
                t += C[i, c] * u[c]
            if t < best_top:
                best_top = t
                best_i = i
        W[0] = best_i
        w = 1
        p = np.empty(n)
        Q = np.zeros((n, n))
        beta = np.zeros(n)
        Pu = np.empty(n)
        x = np.empty(n)
        bx = np.empty(n)
        idx = np.empty(n, dtype=np.int64)
        comb = np.empty(n, dtype=np.int64)
        for _ in range(max_rounds):
            best_val = -math.inf
            found = False
            for m in range(1, min(n, w) + 1):
                for j in range(m):
                    comb[j] = j
                while True:
                    for j in range(m):
                        idx[j] = W[comb[j]]
                    rho2 = _frame_nb(C, r, idx, m, p, Q, beta)
                    if rho2 >= -1e-12:
                        rho = math.sqrt(max(rho2, 0.0))
                        npu = _project_out(Q, m - 1, u, Pu)
                        if npu > 1e-13:
                            for c in range(n):
                                x[c] = p[c] + rho * Pu[c] / npu
                        else:
                            _complement_unit_nb(Q, m - 1, n, Pu)
                            for c in range(n):
                                x[c] = p[c] + rho * Pu[c]
                        feas = True
                        for jj in range(w):
                            i = W[jj]
                            d2 = 0.0
                            for c in range(n):
                                d2 += (x[c] - C[i, c]) ** 2
                            if math.sqrt(d2) > r[i] + feas_tol:
                                feas = False
                                break
                        if feas:
                            val = 0.0
                            for c in range(n):
                                val += x[c] * u[c]
                            if val > best_val:
                                best_val = val
                                found = True
                                for c in range(n):
                                    bx[c] = x[c]
                    if not _next_comb(comb, m, w):
                        break
            if not found:
                return math.nan, STALLED
            jmax = -1
            vmax = -math.inf
            for i in range(N):
                d2 = 0.0
                for c in range(n):
                    d2 += (bx[c] - C[i, c]) ** 2
                v = math.sqrt(d2) - r[i]
                if v > vmax:
                    vmax = v
                    jmax = i
            for c in range(n):
                xout[c] = bx[c]
            if vmax <= feas_tol:
                return best_val, OK
            for jj in range(w):
                if W[jj] == jmax:
                    return best_val, STALLED
            W[w] = jmax
            w += 1
        return best_val, MAX_ROUNDS

    @njit
    def support_batch_nb(C, r, D, feas_tol=1e-10, max_rounds=64):
        M = D.shape[0]
        n = C.shape[1]
        H = np.empty(M)
        X = np.empty((M, n))
        status = np.empty(M, dtype=np.int64)
        xo = np.empty(n)
        for k in range(M):
            h, st = _support_one_nb(C, r, D[k], feas_tol, max_rounds, xo)
            H[k] = h
            status[k] = st
            for c in range(n):
                X[k, c] = xo[c]
        return H, X, status

    @njit
    def subset_table_nb(C, r, combos, sizes):
        S = combos.shape[0]
        n = C.shape[1]
        P = np.zeros((S, n))
        rho = np.full(S, -1.0)
        Qs = np.zeros((S, max(n - 1, 1), n))
        E = np.zeros((S, n))
        Q = np.zeros((n, n))
        beta = np.zeros(n)
        p = np.empty(n)
        e = np.empty(n)
        for s in range(S):
            m = sizes[s]
            rho2 = _frame_nb(C, r, combos[s], m, p, Q, beta)
            if rho2 < -1e-12:
                continue
            rho[s] = math.sqrt(max(rho2, 0.0))
            for c in range(n):
                P[s, c] = p[c]
            for k in range(m - 1):
                for c in range(n):
                    Qs[s, k, c] = Q[k, c]
            _complement_unit_nb(Q, m - 1, n, e)
            for c in range(n):
                E[s, c] = e[c]
        return P, rho, Qs, E

    @njit
    def farthest_table_nb(C, r, X, P, rho, Qs, sizes, E, feas_tol):
        M, n = X.shape
        S = P.shape[0]
        out = np.full(M, -math.inf)
        arg = np.full((M, n), math.nan)
        v = np.empty(n)
        pv = np.empty(n)
        y = np.empty(n)
        for k in range(M):
            for s in range(S):
                if rho[s] < 0:
                    continue
                q = sizes[s] - 1
                for c in range(n):
                    v[c] = P[s, c] - X[k, c]
                npv = _project_out(Qs[s], q, v, pv)
                for sgn in (1.0, -1.0):
                    for c in range(n):
                        if npv > 1e-13:
                            y[c] = P[s, c] + sgn * rho[s] * pv[c] / npv
                        else:
                            y[c] = P[s, c] + sgn * rho[s] * E[s, c]
                    feas = True
                    for i in range(C.shape[0]):
                        d2 = 0.0
                        for c in range(n):
                            d2 += (y[c] - C[i, c]) ** 2
                        if math.sqrt(d2) > r[i] + feas_tol:
                            feas = False
                            break
                    if feas:
                        d2 = 0.0
                        for c in range(n):
                            d2 += (y[c] - X[k, c]) ** 2
                        d = math.sqrt(d2)
                        if d > out[k]:
                            out[k] = d
                            for c in range(n):
                                arg[k, c] = y[c]
        return out, arg

    @njit
    def in_balls_nb(X, C, r, eps):
        M, n = X.shape
        out = np.ones(M, dtype=np.bool_)
        for k in range(M):
            for i in range(C.shape[0]):
                d2 = 0.0
                for c in range(n):
                    d2 += (X[k, c] - C[i, c]) ** 2
                if d2 > (r[i] + eps) ** 2:
                    out[k] = False
                    break
        return out

    @njit
    def in_halfspaces_nb(X, D, h, eps):
        M, n = X.shape
        out = np.ones(M, dtype=np.bool_)
        for k in range(M):
            for j in range(D.shape[0]):
                t = 0.0
                for c in range(n):
                    t += X[k, c] * D[j, c]
                if t > h[j] + eps:
                    out[k] = False
                    break
        return out

    @njit
    def dykstra_project_nb(y, C, r, max_sweeps=100000, tol=1e-13):
        N, n = C.shape
        x = y.copy()
        incr = np.zeros((N, n))
        z = np.empty(n)
        xp = np.empty(n)
        for sweep in range(max_sweeps):
            for c in range(n):
                xp[c] = x[c]
            change = 0.0
            for i in range(N):
                nd = 0.0
                for c in range(n):
                    z[c] = x[c] + incr[i, c]
                    nd += (z[c] - C[i, c]) ** 2
                nd = math.sqrt(nd)
                for c in range(n):
                    if nd > r[i]:
                        xn = C[i, c] + (z[c] - C[i, c]) * (r[i] / nd)
                    else:
                        xn = z[c]
                    newinc = z[c] - xn
                    change += (incr[i, c] - newinc) ** 2
                    incr[i, c] = newinc
                    x[c] = xn
            mv = 0.0
            for c in range(n):
                mv += (x[c] - xp[c]) ** 2
            if math.sqrt(mv) <= tol and change <= tol * tol:
                return x, sweep + 1
        return x, max_sweeps

    def _farthest_nb(C, r, X, feas_tol=1e-10):
        N, n = C.shape
        combos, sizes = _combo_arrays(N, n)
        P, rho, Qs, E = subset_table_nb(C, r, combos, sizes)
        return farthest_table_nb(C, r, np.ascontiguousarray(X, dtype=float), P, rho, Qs, sizes, E, feas_tol)

    numba_impl = SimpleNamespace(
        name="numba",
        support_batch=support_batch_nb,
        farthest_batch=_farthest_nb,
        in_balls=in_balls_nb,
        in_halfspaces=in_halfspaces_nb,
        dykstra_project=dykstra_project_nb,
    )
else:  # pragma: no cover
    numba_impl = None


def _combo_arrays(N, n):
    rows = []
    for m in range(1, min(n, N) + 1):
        rows.extend(itertools.combinations(range(N), m))
    combos = np.zeros((len(rows), n), dtype=np.int64)
    sizes = np.empty(len(rows), dtype=np.int64)
    for s, row in enumerate(rows):
        combos[s, : len(row)] = row
        sizes[s] = len(row)
    return combos, sizes


active = numba_impl if USE_NUMBA else numpy_impl


def backend_name() -> str:
    return active.name


def _f(a):
    return np.ascontiguousarray(a, dtype=float)


def support_batch(C, r, D, feas_tol=1e-10, max_rounds=64, impl=None):
    impl = impl or active
    return impl.support_batch(_f(C), _f(r), _f(np.atleast_2d(D)), feas_tol, max_rounds)


def farthest_batch(C, r, X, feas_tol=1e-10, impl=None):
    impl = impl or active
    return impl.farthest_batch(_f(C), _f(r), _f(np.atleast_2d(X)), feas_tol)


def in_balls(X, C, r, eps=0.0, impl=None):
    impl = impl or active
    return impl.in_balls(_f(np.atleast_2d(X)), _f(C), _f(r), float(eps))


def in_halfspaces(X, D, h, eps=0.0, impl=None):
    impl = impl or active
    return impl.in_halfspaces(_f(np.atleast_2d(X)), _f(D), _f(h), float(eps))


def dykstra_project(y, C, r, max_sweeps=100000, tol=1e-13, impl=None):
    impl = impl or active
    return impl.dykstra_project(_f(y), _f(C), _f(r), max_sweeps, tol)


lens_support = lens_support_np
