from itertools import combinations
from math import comb

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from skewprolong import catalog
from skewprolong import exterior as ext
from skewprolong.exterior import KForm
from skewprolong.pluecker import dense_tensor
from skewprolong.prolong import (
    ProlongError,
    carca_sides,
    characteristic_form,
    classify_representation,
    colinearity_residual,
    eps_perp_analysis,
    exact_characteristic_form,
    exact_prolongation_dim,
    exact_wedge_kernel,
    is_adjoint_cartan,
    is_minimal,
    skew_prolongation,
    wedge_kernel,
)
from skewprolong.rep import LieSubalgebra, casimir, full_so, lie_closure


def dense_prolongation_dim(g: LieSubalgebra, p: int) -> int:
    """Nullity of T -> (pi_perp T(e_J, ., .))_J, built from dense antisymmetric arrays."""
    n = g.n
    perp = g.subspace.complement().basis
    pairs = ext.basis_indices(n, 2)
    cols = []
    for k in range(comb(n, p)):
        c = np.zeros(comb(n, p))
        c[k] = 1.0
        D = dense_tensor(KForm(n, p, c))
        parts = []
        for J in combinations(range(n), p - 2):
            M = D[J] if J else D
            parts.append(perp @ M[pairs[:, 0], pairs[:, 1]])
        cols.append(np.concatenate(parts))
    A = np.array(cols).T
    return comb(n, p) - np.linalg.matrix_rank(A, tol=1e-9)


@pytest.mark.parametrize(
    "name,p",
    [("so(4)", 3), ("u(2)", 3), ("sp(1)", 3), ("u(3)", 3), ("su(3)", 3), ("g2", 3),
     ("adjoint-su(2)", 3), ("adjoint-so(4)", 3), ("so(5)", 4), ("u(3)", 4)],
)
def test_prolongation_matches_dense_oracle(name, p):
    g = catalog.build(name).rep
    rep = skew_prolongation(g, p)
    assert rep.dim == dense_prolongation_dim(g, p)
    assert rep.exact_dim == rep.dim
    assert rep.residual < 1e-12


# frozen after the dense-array and exact-elimination routes agreed
TABLE = [
    ("so(5)", 3, 10, "full_lambda3"), ("so(5)", 4, 5, "full_lambdap"),
    ("u(3)", 3, 0, "zero"), ("su(3)", 3, 0, "zero"), ("sp(2)+sp(1)", 3, 0, "zero"),
    ("spin7", 3, 0, "zero"), ("g2", 3, 0, "zero"),
    ("adjoint-su(3)", 3, 1, "adjoint_cartan_line"), ("adjoint-so(5)", 3, 1, "adjoint_cartan_line"),
    ("adjoint-su(3)", 4, 0, "zero"), ("adjoint-so(4)", 3, 2, "reducible_composite"),
]


@pytest.mark.parametrize("name,p,dim,label", TABLE)
def test_prolongation_table(name, p, dim, label):
    rep = skew_prolongation(catalog.build(name).rep, p)
    assert (rep.dim, rep.classification) == (dim, label)
    assert rep.exact_confirmed


def test_adjoint_prolongation_is_the_cartan_form():
    en = catalog.build("adjoint-su(3)")
    rep = skew_prolongation(en.rep, 3)
    T = catalog.model_form(en, "cartan")
    assert colinearity_residual(rep.basis[0], T) < 1e-10
    assert is_adjoint_cartan(T, en.rep)
    assert not is_adjoint_cartan(KForm.basis(8, 1, 2, 3), en.rep)


def test_prolongation_errors():
    g = full_so(4)
    with pytest.raises(ProlongError):
        skew_prolongation(g, 5)
    with pytest.raises(ProlongError):
        skew_prolongation(LieSubalgebra(3, full_so(3).basis, False), 3)


def test_report_json():
    data = skew_prolongation(catalog.build("adjoint-su(2)").rep, 3).to_json()
    assert data["dim"] == 1 and data["exact_confirmed"] is True and len(data["basis"]) == 1


def test_eps_perp():
    rep = eps_perp_analysis(catalog.build("spin7").rep)
    assert rep.is_isomorphism and rep.dim_formula_holds and rep.exact_kernel_dim == 0
    g2 = eps_perp_analysis(catalog.build("g2").rep)
    assert g2.kernel_dim == 0 and not g2.is_isomorphism
    so5 = eps_perp_analysis(catalog.build("so(5)").rep)
    assert so5.kernel_dim == 10 and so5.dim_gperp == 0


def test_characteristic_forms():
    assert characteristic_form(catalog.build("so(5)").rep).is_zero(1e-10)
    u3 = catalog.build("u(3)")
    om = catalog.model_form(u3, "omega")
    T = characteristic_form(u3.rep)
    assert colinearity_residual(T, om ^ om) < 1e-10
    exact = exact_characteristic_form(u3.rep)
    assert np.allclose([float(x) for x in exact], T.coeffs)
    assert characteristic_form(catalog.build("spin7").rep).norm() > 1


@given(st.integers(0, 2**31 - 1))
def test_characteristic_form_is_basis_independent(seed):
    g = catalog.build("u(2)").rep
    Q, _ = np.linalg.qr(np.random.default_rng(seed).standard_normal((g.dim, g.dim)))
    h = LieSubalgebra(g.n, Q @ g.basis, True, g.tol)
    assert characteristic_form(h).allclose(characteristic_form(g), atol=1e-10)


@pytest.mark.parametrize("name", catalog.standard_names())
def test_minimality_agrees_with_identity_in_K(name):
    assert is_minimal(catalog.build(name).rep).consistent


@pytest.mark.parametrize("name", ["so(4)", "u(2)", "u(3)", "sp(1)", "g2", "adjoint-su(3)"])
def test_casimir_identity_for_random_two_forms(name):
    g = catalog.build(name).rep
    C1, C2, Tg = casimir(g, 1), casimir(g, 2), characteristic_form(g)
    rng = np.random.default_rng(1)
    for _ in range(5):
        F = KForm(g.n, 2, rng.standard_normal(comb(g.n, 2)))
        lhs, rhs = carca_sides(g, F, C1, C2, Tg)
        assert lhs.allclose(rhs, atol=1e-9)


def test_wedge_kernel_float_and_exact():
    om = catalog.kaehler_form(5)
    T = om ^ om
    kf, _ = wedge_kernel(T, 2)
    assert kf == 0 and exact_wedge_kernel([int(x) for x in T.coeffs], 10, 4, 2) == 0
    e = KForm.basis(5, 1, 2, 3)
    assert wedge_kernel(e, 2)[0] == exact_wedge_kernel([int(x) for x in e.coeffs], 5, 3, 2)


def test_classification_of_reducible_representation():
    rep = classify_representation(catalog.build("adjoint-so(4)").rep)
    assert rep.consistent and rep.global_dim == 2
    assert rep.labels == [["full_so", "adjoint_simple"], ["full_so", "adjoint_simple"]]
    su3 = classify_representation(catalog.build("u(3)").rep)
    assert su3.labels == [["vanishing_prolongation"]]


def test_classification_with_trivial_part():
    g = lie_closure([KForm.basis(5, 1, 2), KForm.basis(5, 2, 3)])
    rep = classify_representation(g)
    assert rep.splitting.trivial.dim == 2
    assert rep.labels == [["full_so", "adjoint_simple"]]
    assert rep.consistent


def test_exact_dim_missing_without_exact_data():
    g = catalog.build("so(4)").rep
    h = LieSubalgebra(g.n, g.basis, True, g.tol)
    assert exact_prolongation_dim(h, 3) is None


def test_so3_plus_so8_blocks():
    from skewprolong.rep import direct_sum

    rep = classify_representation(direct_sum([full_so(3), full_so(8)]))
    assert rep.labels == [["full_so", "adjoint_simple"], ["full_so"]]
    assert rep.global_dim == rep.direct_dim == rep.exact_dim == 1 + 56


def _diagonal_so3():
    rows = []
    for x in full_so(3).basis:
        F = ext.sharp_array(x, 3)
        B = np.zeros((6, 6))
        B[:3, :3] = F
        B[3:, 3:] = F
        rows.append(ext.flat_array(B))
    return lie_closure(rows, 6)


def test_diagonal_so3_has_no_prolongation():
    from skewprolong.rep import kernel_ideal

    g = _diagonal_so3()
    rep = classify_representation(g)
    assert [f.ideal_dim for f in rep.factors] == [0, 0]
    assert all(kernel_ideal(g, f.subspace).dim == 0 for f in rep.factors)
    assert rep.global_dim == rep.direct_dim == rep.exact_dim == 0
