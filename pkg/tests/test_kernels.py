from math import comb

import numpy as np
import pytest

from skewprolong import exterior as ext
from skewprolong.kernels import numba_impl, numpy_impl


def _dense_bilinear(a, b, out, s, n_a, n_b, n_out):
    B = np.zeros((n_out, n_a, n_b))
    np.add.at(B, (out, a, b), s)
    return B


def test_bilinear_apply_matches_dense(impl, rng):
    n = 6
    a, b, out, s = ext.wedge_table(n, 2, 1)
    B = _dense_bilinear(a, b, out, s, comb(n, 2), n, comb(n, 3))
    X = rng.standard_normal((5, comb(n, 2)))
    Y = rng.standard_normal((5, n))
    ref = np.einsum("oab,ra,rb->ro", B, X, Y)
    assert np.allclose(impl.bilinear_apply(a, b, out, s, X, Y, comb(n, 3)), ref)


def test_fixed_argument_matrices(impl, rng):
    n = 5
    a, b, out, s = ext.action_table(n, 3)
    na, nb = comb(n, 2), comb(n, 3)
    B = _dense_bilinear(a, b, out, s, na, nb, nb)
    x, y = rng.standard_normal(na), rng.standard_normal(nb)
    assert np.allclose(impl.bilinear_fix_right(a, b, out, s, y, na, nb), np.einsum("oab,b->oa", B, y))
    assert np.allclose(impl.bilinear_fix_left(a, b, out, s, x, nb, nb), np.einsum("oab,a->ob", B, x))


def test_bilinear_adjoint(impl, rng):
    n = 6
    a, b, out, s = ext.wedge_table(n, 1, 2)
    na, nb, no = n, comb(n, 2), comb(n, 3)
    B = _dense_bilinear(a, b, out, s, na, nb, no)
    Z = rng.standard_normal((3, no))
    assert np.allclose(impl.bilinear_adjoint(a, b, out, s, Z, na, nb), np.einsum("oab,ro->rab", B, Z))


def test_gram_schmidt_orthonormal_and_rank(impl, rng):
    V = rng.standard_normal((4, 9))
    V = np.vstack([V, V[0] + 2 * V[1], np.zeros(9)])
    Q = impl.gram_schmidt(V, 1e-10)
    assert Q.shape == (4, 9)
    assert np.allclose(Q @ Q.T, np.eye(4))
    assert np.allclose(V @ Q.T @ Q, V)


def test_gram_schmidt_empty(impl):
    assert impl.gram_schmidt(np.zeros((0, 3)), 1e-10).shape == (0, 3)
    assert impl.gram_schmidt(np.zeros((2, 3)), 1e-10).shape == (0, 3)


@pytest.mark.skipif(numba_impl is None, reason="numba not available")
def test_backends_agree_on_jacobi_residual(rng):
    n, m = 6, 3  # every 4-form on R^5 is decomposable, so use R^6
    T = rng.standard_normal(comb(n, 4))
    from skewprolong.exterior import KForm
    from skewprolong.pluecker import nlie_bracket

    full = np.ascontiguousarray(nlie_bracket(KForm(n, 4, T)).full())
    xt, yt = ext.basis_indices(n, m - 1), ext.basis_indices(n, m)
    r1 = numpy_impl.nlie_jacobi_residual(full, n, m, xt, yt)
    r2 = numba_impl.nlie_jacobi_residual(full, n, m, xt, yt)
    assert r1 == pytest.approx(r2, rel=1e-12, abs=1e-14)
    assert r1 > 1e-3
