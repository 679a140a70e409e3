from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from skewprolong.linalg import (
    EchelonBasis,
    ExactSpan,
    LinalgInputError,
    Subspace,
    exact_nullspace,
    exact_rank,
    integer_rows,
    nullspace,
    numerical_rank,
    rank_nullspace,
    realify_map,
    subspace_ops,
)

small_ints = st.integers(min_value=-4, max_value=4)


def int_matrices(max_rows=6, max_cols=6):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small_ints, min_size=c, max_size=c), min_size=r, max_size=r)
        )
    )


def test_rank_of_known_matrices():
    assert numerical_rank(np.eye(3)) == 3
    assert numerical_rank(np.zeros((2, 3))) == 0
    assert numerical_rank([[1, 2], [2, 4]]) == 1
    assert exact_rank([[1, 2], [2, 4]]) == 1
    assert exact_rank([[Fraction(1, 3), Fraction(1, 2)], [2, 3]]) == 1


def test_rank_nullspace_orthonormal():
    M = np.array([[1.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
    r, K = rank_nullspace(M)
    assert r == 2 and K.dim == 1
    assert np.allclose(M @ K.basis.T, 0)
    assert np.allclose(np.abs(K.basis[0]), [np.sqrt(0.5), np.sqrt(0.5), 0])


def test_nullspace_of_zero_matrix_is_everything():
    assert nullspace(np.zeros((2, 4))).shape == (4, 4)


def test_rejects_bad_input():
    with pytest.raises(LinalgInputError):
        numerical_rank([[np.nan]])
    with pytest.raises(LinalgInputError):
        rank_nullspace(np.eye(2), tol=0.0)
    with pytest.raises(LinalgInputError):
        numerical_rank(np.zeros((2, 2, 2)))
    with pytest.raises(LinalgInputError):
        subspace_ops(Subspace.full(2), None, "sum")
    with pytest.raises(LinalgInputError):
        subspace_ops(Subspace.full(2), Subspace.full(2), "bogus")


@given(int_matrices())
def test_exact_rank_matches_sympy(M):
    assert exact_rank(M) == sympy.Matrix(M).rank()


@given(int_matrices())
def test_float_rank_matches_exact_on_small_integers(M):
    assert numerical_rank(np.array(M, dtype=float)) == exact_rank(M)


@given(int_matrices())
def test_exact_nullspace_is_kernel(M):
    K = exact_nullspace(M)
    ncols = len(M[0])
    assert len(K) == ncols - exact_rank(M)
    for v in K:
        for row in M:
            assert sum(a * b for a, b in zip(row, v)) == 0


def test_integer_rows_scales_by_row():
    assert integer_rows([[Fraction(1, 2), Fraction(1, 3)], [4, 6]]) == [[3, 2], [2, 3]]


def test_echelon_basis_incremental():
    eb = EchelonBasis(3)
    assert eb.add([1, 2, 3])
    assert not eb.add([2, 4, 6])
    assert eb.add([0, 1, 0])
    assert eb.rank == 2
    assert eb.contains([1, 0, 3])
    assert not eb.contains([0, 0, 1])
    assert len(eb.nullspace()) == 1


def test_subspace_lattice_operations():
    A = Subspace.span([[1, 0, 0], [0, 1, 0]])
    B = Subspace.span([[0, 1, 0], [0, 0, 1]])
    assert A.intersect(B).equals(Subspace.span([[0, 1, 0]]))
    assert A.sum(B).equals(Subspace.full(3))
    assert A.complement().equals(Subspace.span([[0, 0, 1]]))
    assert A.contains([1, 1, 0]) and not A.contains([0, 0, 1])
    assert np.allclose(subspace_ops(A, [1, 2, 3], "project_vector"), [1, 2, 0])
    assert Subspace.zero(3).complement().dim == 3


@given(st.lists(st.lists(small_ints, min_size=5, max_size=5), min_size=1, max_size=4),
       st.lists(st.lists(small_ints, min_size=5, max_size=5), min_size=1, max_size=4))
def test_dimension_formula(U, W):
    A, B = Subspace.span(np.array(U, float)), Subspace.span(np.array(W, float))
    assert A.sum(B).dim + A.intersect(B).dim == A.dim + B.dim
    P = A.projector()
    assert np.allclose(P @ P, P) and np.allclose(P, P.T)


def test_exact_span_over_quadratic_field():
    # 1 and sqrt(3) are independent over Q but dependent over Q(sqrt 3)
    span = ExactSpan(2, 3)
    assert span.add([1, 0], [0, 1])  # (1, sqrt 3)
    assert not span.add([0, 3], [1, 0])  # sqrt(3) * (1, sqrt 3)
    assert span.contains([2, 0], [0, 2])
    assert not span.contains([1, 0], [0, 0])
    assert span.dim == 1
    A = span.annihilator()
    assert A.shape == (2, 4)
    assert np.allclose(span.to_float(), [[1, np.sqrt(3)]])


def test_realify_map_multiplication():
    # multiplication by sqrt(3) on Q(sqrt 3) = Q^2
    M = realify_map([[0]], [[1]], 3)
    assert M.tolist() == [[0, 3], [1, 0]]
    assert exact_rank(M.tolist()) == 2


def test_rational_span_rejects_irrational_part():
    with pytest.raises(LinalgInputError):
        ExactSpan(2, 1).add([1, 0], [0, 1])


def test_self_dual_forms_meet_unitary_algebra_in_kaehler_line():
    from skewprolong import catalog
    from skewprolong.exterior import KForm

    e = lambda *i: KForm.basis(4, *i).coeffs  # noqa: E731
    self_dual = Subspace.span([e(1, 2) + e(3, 4), e(1, 3) - e(2, 4), e(1, 4) + e(2, 3)])
    common = self_dual.intersect(catalog.build("u(2)").rep.subspace)
    assert common.dim == 1
    assert common.contains(e(1, 2) + e(3, 4))
