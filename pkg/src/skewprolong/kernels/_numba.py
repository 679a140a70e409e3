"""numba implementations of the hot kernels (same contracts as ``_numpy``)."""

import numpy as np
from numba import njit


@njit(cache=True)
def bilinear_apply(a, b, out, sign, X, Y, n_out):
    m = X.shape[0]
    res = np.zeros((m, n_out))
    for r in range(m):
        for t in range(out.shape[0]):
            res[r, out[t]] += sign[t] * X[r, a[t]] * Y[r, b[t]]
    return res


@njit(cache=True)
def bilinear_fix_right(a, b, out, sign, y, n_a, n_out):
    M = np.zeros((n_out, n_a))
    for t in range(out.shape[0]):
        M[out[t], a[t]] += sign[t] * y[b[t]]
    return M


@njit(cache=True)
def bilinear_fix_left(a, b, out, sign, x, n_b, n_out):
    M = np.zeros((n_out, n_b))
    for t in range(out.shape[0]):
        M[out[t], b[t]] += sign[t] * x[a[t]]
    return M


@njit(cache=True)
def bilinear_adjoint(a, b, out, sign, Z, n_a, n_b):
    m = Z.shape[0]
    R = np.zeros((m, n_a, n_b))
    for r in range(m):
        for t in range(out.shape[0]):
            R[r, a[t], b[t]] += sign[t] * Z[r, out[t]]
    return R


@njit(cache=True)
def gram_schmidt(V, rtol):
    k, dim = V.shape
    Q = np.zeros((k, dim))
    if k == 0:
        return Q
    scale = 0.0
    for i in range(k):
        s = 0.0
        for j in range(dim):
            s += V[i, j] * V[i, j]
        if s > scale:
            scale = s
    scale = np.sqrt(scale)
    if scale == 0.0:
        return Q[:0]
    r = 0
    w = np.empty(dim)
    for i in range(k):
        for j in range(dim):
            w[j] = V[i, j]
        for _ in range(2):
            for q in range(r):
                c = 0.0
                for j in range(dim):
                    c += Q[q, j] * w[j]
                for j in range(dim):
                    w[j] -= c * Q[q, j]
        nw = 0.0
        for j in range(dim):
            nw += w[j] * w[j]
        nw = np.sqrt(nw)
        if nw > rtol * scale:
            for j in range(dim):
                Q[r, j] = w[j] / nw
            r += 1
    return Q[:r].copy()


@njit(cache=True)
def nlie_jacobi_residual(full, dim, arity, xtuples, ytuples):
    powers = np.empty(arity, dtype=np.int64)
    p = 1
    for i in range(arity - 1, -1, -1):
        powers[i] = p
        p *= dim
    worst = 0.0
    lhs = np.empty(dim)
    rhs = np.empty(dim)
    for xi in range(xtuples.shape[0]):
        prefix = 0
        for s in range(arity - 1):
            prefix += xtuples[xi, s] * powers[s]
        for yi in range(ytuples.shape[0]):
            yidx = 0
            for s in range(arity):
                yidx += ytuples[yi, s] * powers[s]
            for j in range(dim):
                lhs[j] = 0.0
                rhs[j] = 0.0
            for k in range(dim):
                c = full[yidx, k]
                if c != 0.0:
                    for j in range(dim):
                        lhs[j] += c * full[prefix + k, j]
            for i in range(arity):
                yv = ytuples[yi, i]
                base = yidx - yv * powers[i]
                for k in range(dim):
                    c = full[prefix + yv, k]
                    if c != 0.0:
                        row = base + k * powers[i]
                        for j in range(dim):
                            rhs[j] += c * full[row, j]
            for j in range(dim):
                d = abs(lhs[j] - rhs[j])
                if d > worst:
                    worst = d
    return worst
