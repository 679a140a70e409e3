import numpy as np
import pytest

from skewprolong import catalog
from skewprolong import exterior as ext
from skewprolong.catalog import CatalogError
from skewprolong.exterior import KForm
from skewprolong.holonomy3 import g_star
from skewprolong.pluecker import plc_check
from skewprolong.rep import is_irreducible, isotropy_algebra

# (n, dim g) computed independently from the isotropy / structure-constant
# constructions and cross-checked with exact rank; frozen here.
DIMS = {
    "so(4)": (4, 6), "so(5)": (5, 10), "so(6)": (6, 15),
    "u(2)": (4, 4), "u(3)": (6, 9), "su(3)": (6, 8),
    "sp(1)": (4, 3), "sp(2)": (8, 10), "sp(2)+sp(1)": (8, 13),
    "g2": (7, 14), "spin7": (8, 21),
    "adjoint-su(2)": (3, 3), "adjoint-su(3)": (8, 8),
    "adjoint-so(4)": (6, 6), "adjoint-so(5)": (10, 10),
}


@pytest.mark.parametrize("name", sorted(DIMS))
def test_dimensions_and_closure(name):
    en = catalog.build(name)
    assert (en.n, en.rep.dim) == DIMS[name]
    assert en.rep.exact_dim() == DIMS[name][1]
    assert en.rep.closure_residual() <= 1e-12


@pytest.mark.parametrize("name", sorted(DIMS))
def test_irreducibility_flag_matches_commutant(name):
    en = catalog.build(name)
    assert en.irreducible == is_irreducible(en.rep)


@pytest.mark.parametrize("name", sorted(DIMS))
def test_model_forms_are_invariant(name):
    en = catalog.build(name)
    for phi in en.model_forms.values():
        for x in en.rep.forms():
            assert ext.form_action(x, phi).is_zero(1e-10)


def test_faithful_matrix_presentation():
    g = catalog.build("g2").rep
    M = g.matrices().reshape(g.dim, -1)
    assert np.linalg.matrix_rank(M) == g.dim
    assert np.allclose(g.matrices(), -np.transpose(g.matrices(), (0, 2, 1)))


def test_unitary_equals_isotropy_of_kaehler_form():
    en = catalog.build("u(3)")
    assert en.rep.subspace.equals(isotropy_algebra(catalog.model_form(en, "omega")).subspace)


def test_spin7_and_g2_are_isotropy_algebras():
    assert isotropy_algebra(catalog.cayley_form()).dim == 21
    assert isotropy_algebra(catalog.associative_form()).dim == 14
    sp = catalog.build("sp(2)+sp(1)")
    assert sp.rep.subspace.equals(isotropy_algebra(catalog.model_form(sp, "quaternionic")).subspace)


def test_model_form_normalisations():
    assert catalog.model_form(catalog.build("u(3)"), "omega").allclose(
        KForm.basis(6, 1, 2) + KForm.basis(6, 3, 4) + KForm.basis(6, 5, 6)
    )
    phi = catalog.model_form(catalog.build("g2"), "associative")
    assert len(phi.terms()) == 7 and set(np.abs(list(phi.terms().values()))) == {1.0}
    Phi = catalog.model_form(catalog.build("spin7"), "cayley")
    assert len(Phi.terms()) == 14 and set(np.abs(list(Phi.terms().values()))) == {1.0}
    vol = catalog.model_form(catalog.build("adjoint-su(2)"), "cartan")
    assert vol.norm() > 0 and abs(abs(vol.coeffs[0]) - vol.norm()) < 1e-12


@pytest.mark.parametrize("name", ["adjoint-su(2)", "adjoint-su(3)", "adjoint-so(4)", "adjoint-so(5)"])
def test_cartan_forms(name):
    en = catalog.build(name)
    T = catalog.model_form(en, "cartan")
    assert plc_check(T)[0]
    assert g_star(T).subspace.equals(en.rep.subspace)


def test_name_grammar():
    assert catalog.parse_name("so(5)") == ("so", (5,))
    assert catalog.parse_name("SO5") == ("so", (5,))
    assert catalog.parse_name("sp(2)+sp(1)") == ("sp+sp1", (2,))
    assert catalog.parse_name("adjoint_su3") == ("adjoint-su", (3,))
    assert catalog.parse_name("spin7") == ("spin7", ())
    assert catalog.build("so", 5).rep.dim == 10
    assert catalog.build("sp(m)+sp(1)", 1).n == 4


@pytest.mark.parametrize("bad", ["foo", "spin8", "g3", "so", "u(2)+sp(1)"])
def test_unknown_names(bad):
    with pytest.raises(CatalogError):
        catalog.build(bad)


def test_out_of_range_params():
    with pytest.raises(CatalogError):
        catalog.build("so(13)")
    with pytest.raises(CatalogError):
        catalog.build("adjoint-su(4)")


def test_unavailable_form():
    with pytest.raises(CatalogError):
        catalog.model_form(catalog.build("so(4)"), "cayley")
    assert catalog.model_form(catalog.build("so(4)"), "volume").allclose(KForm.volume(4))


def test_block_sum():
    en = catalog.build("adjoint-su(2)++adjoint-su(2)")
    assert en.n == 6 and en.rep.dim == 6 and not en.irreducible
    assert sorted(en.model_forms) == ["cartan1", "cartan2"]


def test_to_json_fields():
    data = catalog.build("g2").to_json()
    assert {"name", "params", "n", "dim", "irreducible", "rep", "model_forms"} <= set(data)
