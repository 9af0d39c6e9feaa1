"""Time the numba kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 3]
"""
import argparse
import time

import numpy as np

from ballbodies import _kernels as K
from ballbodies.core import SeededRng


def best_of(fn, repeat):
    fn()  # warm-up (numba compiles here)
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def cases():
    rng = SeededRng(0)
    for n, m in ((2, 20), (3, 12), (3, 24)):
        C = rng.in_ball(m, n, 0.5)
        r = np.ones(m)
        D = rng.unit_vectors(2000, n)
        X = rng.uniform(-1.0, 1.0, size=(2000, n))
        Y = rng.uniform(-1.0, 1.0, size=(200000, n))
        yield f"support n={n} m={m}", lambda i, C=C, r=r, D=D: K.support_batch(C, r, D, impl=i)
        yield f"farthest n={n} m={m}", lambda i, C=C, r=r, X=X: K.farthest_batch(C, r, X, impl=i)
        yield f"in_balls n={n} m={m}", lambda i, C=C, r=r, Y=Y: K.in_balls(Y, C, r, 1e-12, impl=i)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if K.numba_impl is None:
        raise SystemExit("numba is not installed")
    print(f"{'kernel':24s} {'numpy s':>10s} {'numba s':>10s} {'speedup':>8s}")
    for name, fn in cases():
        a = best_of(lambda: fn(K.numpy_impl), args.repeat)
        b = best_of(lambda: fn(K.numba_impl), args.repeat)
        print(f"{name:24s} {a:10.4f} {b:10.4f} {a / b:8.1f}")


if __name__ == "__main__":
    main()
