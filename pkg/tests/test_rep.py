import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from skewprolong import catalog
from skewprolong import exterior as ext
from skewprolong.exterior import KForm
from skewprolong.linalg import Subspace
from skewprolong.rep import (
    AmbiguousSplit,
    LieSubalgebra,
    RepError,
    casimir,
    direct_sum,
    full_so,
    invariance_residual,
    irreducible_split,
    is_irreducible,
    isotropy_algebra,
    kernel_ideal,
    lie_closure,
    project,
    restrict,
)


def test_closure_of_two_rotations_is_so3():
    g = lie_closure([KForm.basis(3, 1, 2), KForm.basis(3, 2, 3)])
    assert g.dim == 3 and g.exact_dim() == 3
    assert g.closure_residual() < 1e-12


def test_closure_of_commuting_generators():
    g = lie_closure([KForm.basis(4, 1, 2), KForm.basis(4, 3, 4)])
    assert g.dim == 2


@pytest.mark.parametrize("m", [1, 2, 3])
def test_kaehler_isotropy_is_unitary(m):
    g = isotropy_algebra(catalog.kaehler_form(m))
    assert g.dim == m * m and g.exact_dim() == m * m


def test_isotropy_of_volume_is_everything():
    assert isotropy_algebra(KForm.volume(4)).dim == 6


def test_isotropy_of_zero_rejected():
    with pytest.raises(RepError):
        isotropy_algebra(KForm.zero(4, 2))


@given(st.lists(st.integers(-2, 2), min_size=10, max_size=10))
def test_isotropy_is_closed_and_annihilates(c):
    phi = KForm(5, 3, np.array(c, float))
    if phi.is_zero(0.0):
        return
    g = isotropy_algebra(phi)
    assert g.closure_residual() < 1e-9
    for x in g.forms():
        assert ext.form_action(x, phi).is_zero(1e-9)
    assert g.exact_dim() == g.dim


def test_full_so_and_casimir_on_vectors():
    for n in (3, 4, 5):
        g = full_so(n)
        assert g.dim == n * (n - 1) // 2
        assert np.allclose(casimir(g, 1), (n - 1) * np.eye(n))


def test_casimir_is_symmetric_and_commutes():
    g = catalog.build("su(3)").rep
    C = casimir(g, 2)
    assert np.allclose(C, C.T)
    for x in g.forms():
        A = ext.action_matrix(x.coeffs, g.n, 2)
        assert np.allclose(A @ C, C @ A, atol=1e-10)


def test_project_splits_orthogonally():
    g = catalog.build("u(2)").rep
    F = KForm(4, 2, np.arange(1.0, 7.0))
    Fg, Fp = project(g, F)
    assert (Fg + Fp).allclose(F)
    assert g.contains(Fg.coeffs)
    assert abs(Fg.inner(Fp)) < 1e-12


def test_direct_sum_and_splitting():
    so3 = full_so(3)
    g = direct_sum([so3, so3], extra_dims=1)
    assert g.n == 7 and g.dim == 6
    split = irreducible_split(g, seed=0)
    assert split.trivial.dim == 1
    assert [f.dim for f in split.factors] == [3, 3]
    assert all(split.irreducible)
    assert split.factors[0].equals(Subspace.span(np.eye(7)[:3]))
    ideal = kernel_ideal(g, split.factors[0])
    assert ideal.dim == 3
    h = restrict(ideal, split.factors[0])
    assert h.n == 3 and h.dim == 3


def test_kernel_ideal_rejects_non_invariant():
    g = full_so(3)
    with pytest.raises(RepError):
        kernel_ideal(g, Subspace.span([[1.0, 0, 0]]))


@pytest.mark.parametrize("name", ["u(2)", "sp(1)", "adjoint-so(4)", "sp(2)+sp(1)"])
@pytest.mark.parametrize("seed", [0, 7])
def test_split_is_orthogonal_invariant_and_complete(name, seed):
    g = catalog.build(name).rep
    split = irreducible_split(g, seed=seed)
    parts = [split.trivial] + list(split.factors)
    B = np.vstack([p.basis for p in parts])
    assert np.allclose(B @ B.T, np.eye(g.n), atol=1e-9)
    for W in split.factors:
        assert invariance_residual(g, W) < 1e-9


def test_split_deterministic_for_seed():
    g = catalog.build("adjoint-so(4)").rep
    a = irreducible_split(g, seed=3)
    b = irreducible_split(g, seed=3)
    for x, y in zip(a.factors, b.factors):
        assert np.array_equal(x.basis, y.basis)


def test_irreducibility_flags():
    assert is_irreducible(catalog.build("g2").rep)
    assert not is_irreducible(catalog.build("adjoint-so(4)").rep)
    assert not is_irreducible(LieSubalgebra(3, np.zeros((0, 3)), True))


def test_json_round_trip_keeps_exact_data():
    g = catalog.build("su(3)").rep
    h = LieSubalgebra.from_json(g.to_json())
    assert h.dim == g.dim and h.exact_dim() == g.exact_dim()
    assert h.subspace.equals(g.subspace)


def test_json_errors_name_the_basis_element():
    bad = {"n": 3, "basis": [{"n": 3, "p": 2, "terms": []}, {"n": 3, "p": 1, "terms": []}]}
    with pytest.raises(RepError, match="basis element 1"):
        LieSubalgebra.from_json(bad)
    with pytest.raises(RepError):
        LieSubalgebra.from_json({"basis": []})


def test_non_closed_span_rejected():
    with pytest.raises(ValueError):
        LieSubalgebra.from_span(3, [KForm.basis(3, 1, 2).coeffs, KForm.basis(3, 2, 3).coeffs])


def test_ambiguous_split_carries_gaps():
    exc = AmbiguousSplit("x", [1e-6])
    assert exc.gaps == [1e-6]
