"""Compare the numba kernels against the pure-numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import time
from math import comb

import numpy as np

from skewprolong import catalog
from skewprolong import exterior as ext
from skewprolong.kernels import numba_impl, numpy_impl
from skewprolong.pluecker import nlie_bracket


def _time(fn, repeat):
    fn()  # warm-up (and JIT compile)
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def cases(rng):
    n = 8
    a, b, out, s = ext.wedge_table(n, 2, 2)
    X = rng.standard_normal((200, comb(n, 2)))
    Y = rng.standard_normal((200, comb(n, 2)))
    yield "bilinear_apply wedge 2x2 n=8, 200 pairs", lambda impl: impl.bilinear_apply(a, b, out, s, X, Y, comb(n, 4))

    a3, b3, o3, s3 = ext.action_table(n, 3)
    Z = rng.standard_normal((comb(n, 3),))
    yield "bilinear_fix_right action on 3-forms n=8", lambda impl: impl.bilinear_fix_right(a3, b3, o3, s3, Z, comb(n, 2), comb(n, 3))

    V = rng.standard_normal((60, 120))
    yield "gram_schmidt 60x120", lambda impl: impl.gram_schmidt(V.copy(), 1e-10)

    B = nlie_bracket(catalog.model_form(catalog.build("spin7"), "cayley"))
    full = np.ascontiguousarray(B.full())
    xt = ext.basis_indices(8, 2)
    yt = ext.basis_indices(8, 3)
    yield "nlie_jacobi_residual Cayley 3-bracket", lambda impl: impl.nlie_jacobi_residual(full, 8, 3, xt, yt)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    if numba_impl is None:
        print("numba unavailable; nothing to compare")
        return
    rng = np.random.default_rng(args.seed)
    print(f"{'kernel':<44}{'numpy [ms]':>12}{'numba [ms]':>12}{'speedup':>10}{'max diff':>11}")
    for label, call in cases(rng):
        ref, jit = np.asarray(call(numpy_impl)), np.asarray(call(numba_impl))
        diff = float(np.max(np.abs(ref - jit), initial=0.0))
        t_np = _time(lambda: call(numpy_impl), args.repeat)
        t_nb = _time(lambda: call(numba_impl), args.repeat)
        print(f"{label:<44}{1e3 * t_np:>12.3f}{1e3 * t_nb:>12.3f}{t_np / t_nb:>10.1f}{diff:>11.1e}")


if __name__ == "__main__":
    main()
