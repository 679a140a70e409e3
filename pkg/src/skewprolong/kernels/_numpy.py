"""Vectorised numpy implementations of the hot kernels."""

import numpy as np


def bilinear_apply(a, b, out, sign, X, Y, n_out):
    """Row-wise ``B(X[r], Y[r])`` for a structure table; returns (m, n_out)."""
    X = np.atleast_2d(X)
    Y = np.atleast_2d(Y)
    m = X.shape[0]
    res = np.zeros((n_out, m))
    if len(out):
        np.add.at(res, out, (sign * X[:, a] * Y[:, b]).T)
    return res.T.copy()


def bilinear_fix_right(a, b, out, sign, y, n_a, n_out):
    """Matrix of ``x -> B(x, y)``, shape (n_out, n_a)."""
    M = np.zeros(n_out * n_a)
    np.add.at(M, out * n_a + a, sign * y[b])
    return M.reshape(n_out, n_a)


def bilinear_fix_left(a, b, out, sign, x, n_b, n_out):
    """Matrix of ``y -> B(x, y)``, shape (n_out, n_b)."""
    M = np.zeros(n_out * n_b)
    np.add.at(M, out * n_b + b, sign * x[a])
    return M.reshape(n_out, n_b)


def bilinear_adjoint(a, b, out, sign, Z, n_a, n_b):
    """For each row z of Z, the (n_a, n_b) array R[a, b] = sum sign * z[out].

    Row ``i`` of ``R`` is the adjoint of ``y -> B(e_i, y)`` applied to ``z``.
    """
    Z = np.atleast_2d(Z)
    m = Z.shape[0]
    R = np.zeros((n_a * n_b, m))
    if len(out):
        np.add.at(R, a * n_b + b, (sign * Z[:, out]).T)
    return R.T.reshape(m, n_a, n_b)


def gram_schmidt(V, rtol):
    """Orthonormal rows spanning the rows of V (modified Gram-Schmidt, two passes).

    A candidate is dropped when its residual norm falls below ``rtol`` times
    the largest input row norm.
    """
    V = np.asarray(V, dtype=float)
    if V.shape[0] == 0:
        return np.zeros((0, V.shape[1]))
    scale = np.max(np.linalg.norm(V, axis=1))
    if scale == 0.0:
        return np.zeros((0, V.shape[1]))
    Q = np.zeros_like(V)
    r = 0
    for v in V:
        w = v.copy()
        for _ in range(2):
            if r:
                w -= Q[:r].T @ (Q[:r] @ w)
        nw = np.linalg.norm(w)
        if nw > rtol * scale:
            Q[r] = w / nw
            r += 1
    return Q[:r].copy()


def nlie_jacobi_residual(full, dim, arity, xtuples, ytuples):
    """Largest violation of the generalised Jacobi identity over basis tuples.

    ``full`` has shape (dim**arity, dim); row ``sum_k i_k dim**(arity-1-k)``
    holds the bracket ``[e_{i_1}, ..., e_{i_arity}]``.
    """
    powers = dim ** np.arange(arity - 1, -1, -1)
    if len(xtuples) == 0 or len(ytuples) == 0:
        return 0.0
    prefix = (xtuples * powers[: arity - 1]).sum(axis=1)  # (mx,)
    yidx = (ytuples * powers).sum(axis=1)  # (my,)
    blocks = full[prefix[:, None] + np.arange(dim)[None, :]]  # (mx, dim, dim)
    inner = full[yidx]  # (my, dim)
    lhs = np.einsum("yk,xkj->xyj", inner, blocks)
    rhs = np.zeros_like(lhs)
    ks = np.arange(dim)
    for i in range(arity):
        w = full[prefix[:, None] + ytuples[None, :, i]]  # (mx, my, dim)
        base = yidx - ytuples[:, i] * powers[i]
        rows = full[base[:, None] + ks[None, :] * powers[i]]  # (my, dim, dim)
        rhs += np.einsum("xyk,ykj->xyj", w, rows)
    return float(np.max(np.abs(lhs - rhs)))
