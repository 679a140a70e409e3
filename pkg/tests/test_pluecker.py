from math import comb

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from skewprolong import catalog
from skewprolong.exterior import KForm
from skewprolong.pluecker import (
    PlueckerError,
    classical_plucker_check,
    decompose_plc_form,
    dense_tensor,
    nlie_bracket,
    nlie_jacobi_check,
    plc_check,
    pluecker_report,
    r_algebra,
)


def brute_jacobi_residual(T: KForm) -> float:
    """Direct evaluation of the generalised Jacobi identity on all basis tuples."""
    B = nlie_bracket(T)
    m, n = B.arity, B.dim
    E = np.eye(n)
    worst = 0.0
    rng = np.random.default_rng(0)
    for _ in range(60):
        xs = [E[i] for i in rng.integers(0, n, m - 1)]
        ys = [E[i] for i in rng.integers(0, n, m)]
        lhs = B(*xs, B(*ys))
        rhs = sum(B(*ys[:i], B(*xs, ys[i]), *ys[i + 1:]) for i in range(m))
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return worst


def vol4_pair():
    return KForm.basis(8, 1, 2, 3, 4) + KForm.basis(8, 5, 6, 7, 8)


def cayley():
    return catalog.model_form(catalog.build("spin7"), "cayley")


def vectors(n, k):
    return st.lists(st.lists(st.integers(-3, 3), min_size=n, max_size=n), min_size=k, max_size=k)


@given(vectors(6, 3))
def test_simple_forms_satisfy_both_relations(vs):
    T = KForm.vector(vs[0]) ^ KForm.vector(vs[1]) ^ KForm.vector(vs[2])
    if T.is_zero(0.0):
        return
    assert classical_plucker_check(T)[0]
    assert plc_check(T)[0]


def test_known_forms():
    assert plc_check(vol4_pair())[0] and not classical_plucker_check(vol4_pair())[0]
    assert not plc_check(cayley())[0] and not classical_plucker_check(cayley())[0]
    T = catalog.model_form(catalog.build("adjoint-su(3)"), "cartan")
    assert plc_check(T)[0] and not classical_plucker_check(T)[0]


@pytest.mark.parametrize(
    "T",
    [KForm.volume(4), vol4_pair(), None, KForm.basis(6, 1, 2, 3) + KForm.basis(6, 1, 4, 5),
     KForm.basis(5, 1, 2, 3) + KForm.basis(5, 3, 4, 5)],
    ids=["vol4", "vol4+vol4", "cayley", "e123+e145", "e123+e345"],
)
def test_jacobi_kernel_matches_brute_force(T):
    T = cayley() if T is None else T
    ok, res = nlie_jacobi_check(nlie_bracket(T))
    brute = brute_jacobi_residual(T)
    assert ok == (brute < 1e-9)
    assert res >= brute - 1e-12


@pytest.mark.parametrize(
    "T",
    [KForm.volume(4), vol4_pair(), None, KForm.basis(6, 1, 2, 3) + KForm.basis(6, 1, 4, 5),
     KForm.basis(7, 1, 2, 3) + KForm.basis(7, 4, 5, 6)],
    ids=["vol4", "vol4+vol4", "cayley", "e123+e145", "e123+e456"],
)
def test_plc_iff_jacobi(T):
    T = cayley() if T is None else T
    assert plc_check(T)[0] == nlie_jacobi_check(nlie_bracket(T))[0]


def test_decomposition_of_two_volumes():
    rep = decompose_plc_form(vol4_pair())
    assert rep.decomposable and rep.trivial.dim == 0
    assert [f.subspace.dim for f in rep.factors] == [4, 4]
    total = sum((f.component for f in rep.factors), KForm.zero(8, 4))
    assert total.allclose(vol4_pair())
    assert rep.r_in_g


def test_decomposition_with_lie_factor():
    T = catalog.model_form(catalog.build("adjoint-su(3)"), "cartan")
    rep = pluecker_report(T)
    assert rep.satisfies_plc and not rep.decomposable
    assert [f.lie_cartan for f in rep.factors] == [True]


def test_report_for_failing_form():
    data = pluecker_report(cayley()).to_json()
    assert data["plc"] is False and data["classical"] is False and data["factors"] == []


def test_r_algebra_of_volume():
    assert r_algebra(KForm.volume(4)).dim == 6


def test_dense_tensor_antisymmetric():
    T = KForm(5, 3, np.arange(1.0, 11.0))
    D = dense_tensor(T)
    assert np.allclose(D, -np.swapaxes(D, 0, 1)) and np.allclose(D, -np.swapaxes(D, 1, 2))
    assert D[0, 1, 2] == 1.0


def test_bracket_evaluation():
    B = nlie_bracket(KForm.volume(3))
    assert np.allclose(B([1, 0, 0], [0, 1, 0]), [0, 0, 1])
    with pytest.raises(PlueckerError):
        B([1, 0, 0])


def test_input_errors():
    with pytest.raises(PlueckerError):
        plc_check(KForm.basis(4, 1, 2))
    with pytest.raises(PlueckerError):
        nlie_bracket(KForm.basis(4, 1, 2))
    with pytest.raises(PlueckerError):
        decompose_plc_form(cayley())
