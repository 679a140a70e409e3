"""The regression matrix run by ``skewprolong verify``.

Each item returns a :class:`ItemResult` with a pass flag, a detail record and
the integers it computed under each backend, so that backend agreement can be
checked as an item of its own.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Callable

import numpy as np

from . import catalog
from . import exterior as ext
from .curvature import (
    bianchi_b1,
    contraction_gram,
    curvature_space,
    berger_algebra,
    omega_4form,
    omega_pairs,
    ricci_contraction,
    rt_tensor,
)
from .exterior import KForm
from .holonomy3 import classify_3form, g_star
from .linalg import DEFAULT_TOL
from .pluecker import nlie_bracket, nlie_jacobi_check, plc_check, pluecker_report
from .prolong import (
    carca_sides,
    characteristic_form,
    colinearity_residual,
    eps_perp_analysis,
    exact_characteristic_form,
    exact_prolongation_dim,
    exact_wedge_kernel,
    is_minimal,
    prolongation_space,
    wedge_kernel,
)
from .rep import casimir

BACKENDS = ("float", "exact", "both")

PROLONG_TABLE = [
    ("so(5)", 3, 10),
    ("u(3)", 3, 0),
    ("su(3)", 3, 0),
    ("sp(2)+sp(1)", 3, 0),
    ("spin7", 3, 0),
    ("g2", 3, 0),
    ("adjoint-su(3)", 3, 1),
    ("adjoint-so(5)", 3, 1),
    ("adjoint-su(3)", 4, 0),
]


@dataclass
class ItemResult:
    id: int
    title: str
    passed: bool
    detail: dict = field(default_factory=dict)
    integers: dict = field(default_factory=dict)  # key -> {"float": int, "exact": int|None}

    def to_json(self) -> dict:
        return {"id": self.id, "title": self.title, "passed": self.passed, "detail": self.detail}


def _dims_ok(values: dict, expected: int, backend: str) -> bool:
    f, e = values.get("float"), values.get("exact")
    if backend == "float":
        return f == expected
    if backend == "exact":
        return e == expected
    return f == expected and e == expected


def item_prolongation(backend, seed, tol) -> ItemResult:
    ints, rows, ok = {}, [], True
    for name, p, expected in PROLONG_TABLE:
        g = catalog.build(name).rep
        fdim = prolongation_space(g, p, tol).shape[0] if backend != "exact" else None
        edim = exact_prolongation_dim(g, p) if backend != "float" else None
        vals = {"float": fdim, "exact": edim}
        ints[f"prolong:{name}:p{p}"] = vals
        good = _dims_ok(vals, expected, backend)
        ok &= good
        rows.append({"rep": name, "p": p, "expected": expected, **vals, "ok": good})
    return ItemResult(1, "prolongation dimension table", ok, {"rows": rows}, ints)


def item_eps_perp(backend, seed, tol) -> ItemResult:
    ints, rows = {}, []
    winners = []
    for name in catalog.standard_names():
        g = catalog.build(name).rep
        rep = eps_perp_analysis(g, tol, exact=backend != "float")
        ints[f"epsperp:{name}:kernel"] = {"float": rep.kernel_dim, "exact": rep.exact_kernel_dim}
        if backend == "exact":
            kern = rep.exact_kernel_dim
            coker = g.n * rep.dim_gperp - (comb(g.n, 3) - kern)
        else:
            kern, coker = rep.kernel_dim, rep.coker_dim
        if backend == "both" and rep.exact_kernel_dim != rep.kernel_dim:
            kern = -1
        all_three = kern == 0 and coker == 0 and rep.dim_formula_holds
        if all_three:
            winners.append(name)
        rows.append({"rep": name, "kernel": kern, "coker": coker, "dim_gperp": rep.dim_gperp,
                     "formula": rep.dim_formula_holds})
    return ItemResult(2, "eps-perp isomorphism is unique to spin(7)", winners == ["spin7"],
                      {"winners": winners, "rows": rows}, ints)


def item_charforms(backend, seed, tol) -> ItemResult:
    detail, ok = {}, True
    zero_names = ["so(5)", "adjoint-su(2)", "adjoint-su(3)", "adjoint-so(4)", "adjoint-so(5)"]
    for name in zero_names:
        nrm = characteristic_form(catalog.build(name).rep).norm()
        detail[f"norm:{name}"] = nrm
        ok &= nrm <= 1e3 * tol
    u3 = catalog.build("u(3)")
    om = catalog.model_form(u3, "omega")
    col = colinearity_residual(characteristic_form(u3.rep), ext.wedge(om, om))
    detail["u(3) colinearity"] = col
    ok &= col <= tol
    if backend != "float":
        exact = exact_characteristic_form(u3.rep)
        oo = ext.wedge(om, om).coeffs
        ratio = {exact[i] / int(oo[i]) for i in range(len(oo)) if oo[i]}
        zero_off = all(exact[i] == 0 for i in range(len(oo)) if not oo[i])
        detail["u(3) exact ratio"] = [str(r) for r in ratio]
        ok &= len(ratio) == 1 and zero_off
    sp = characteristic_form(catalog.build("spin7").rep).norm()
    detail["norm:spin7"] = sp
    ok &= sp > 1e-3
    agree = {}
    for name in catalog.standard_names():
        m = is_minimal(catalog.build(name).rep, tol)
        agree[name] = m.consistent
        ok &= m.consistent
    detail["minimal agrees with 1_g in K"] = agree
    return ItemResult(3, "characteristic forms and minimality", ok, detail)


def item_casimir(backend, seed, tol) -> ItemResult:
    detail, ok = {}, True
    for name in catalog.standard_names():
        en = catalog.build(name)
        if not en.irreducible:
            continue
        g = en.rep
        mu = 2.0 * g.dim / g.n
        dev = float(np.max(np.abs(casimir(g, 1) - mu * np.eye(g.n))))
        detail[f"C1:{name}"] = dev
        ok &= dev <= tol
    for n in (5, 6):
        g = catalog.build(f"so({n})").rep
        C2 = casimir(g, 2)
        dev = float(np.max(np.abs(C2 - 2 * (n - 2) * np.eye(C2.shape[0]))))
        detail[f"C2:so({n})"] = dev
        ok &= dev <= tol
    return ItemResult(4, "Casimir normalisation", ok, detail)


def identity_residuals(seed: int = 0, trials: int = 100, n: int = 6) -> dict:
    """Worst residual of each pointwise identity over random trials."""
    rng = np.random.default_rng(seed)
    N, N3 = comb(n, 2), comb(n, 3)
    worst = {k: 0.0 for k in ("formal", "locomega", "b1_rt", "ricci_rt", "omega_bullet", "adjointness")}
    for _ in range(trials):
        a1, a2, a3 = (KForm(n, 2, rng.standard_normal(N)) for _ in range(3))
        lhs, rhs = ext.formal_identity_sides(a1, a2, a3)
        worst["formal"] = max(worst["formal"], float(np.max(np.abs(lhs.coeffs - rhs.coeffs))))
        T = KForm(n, 3, rng.standard_normal(N3))
        om = omega_4form(T)
        worst["locomega"] = max(worst["locomega"], float(np.max(np.abs(ext.contraction_array(om, 2) - omega_pairs(T)))))
        R = rt_tensor(T)
        worst["b1_rt"] = max(worst["b1_rt"], float(np.max(np.abs(bianchi_b1(R)))))
        ric = ricci_contraction(R)
        # full-contraction pairing of the 2-forms X _| T and Y _| T is twice the form pairing
        worst["ricci_rt"] = max(worst["ricci_rt"], float(np.max(np.abs(ric - 3 * 2 * contraction_gram(T)))))
        worst["omega_bullet"] = max(worst["omega_bullet"], float(np.max(np.abs(om.coeffs - 0.5 * ext.bullet(T, T).coeffs))))
        q = int(rng.integers(1, 4))
        p = q + int(rng.integers(0, n - q + 1))
        zeta = KForm(n, q, rng.standard_normal(comb(n, q)))
        Tp = KForm(n, p, rng.standard_normal(comb(n, p)))
        S = KForm(n, p - q, rng.standard_normal(comb(n, p - q)))
        diff = abs(ext.contract_adjoint(zeta, Tp).inner(S) - Tp.inner(ext.wedge(zeta, S)))
        worst["adjointness"] = max(worst["adjointness"], diff)
    return worst


def carca_residuals(seed: int = 0, trials: int = 100, names=None) -> dict:
    rng = np.random.default_rng(seed)
    out = {}
    for name in names or catalog.standard_names():
        g = catalog.build(name).rep
        C1, C2, Tg = casimir(g, 1), casimir(g, 2), characteristic_form(g)
        worst = 0.0
        for _ in range(trials):
            F = KForm(g.n, 2, rng.standard_normal(comb(g.n, 2)))
            lhs, rhs = carca_sides(g, F, C1, C2, Tg)
            worst = max(worst, float(np.max(np.abs(lhs.coeffs - rhs.coeffs))))
        out[name] = worst
    return out


def item_identities(backend, seed, tol) -> ItemResult:
    res = identity_residuals(seed)
    carca = carca_residuals(seed)
    ok = all(v <= tol for v in res.values()) and all(v <= tol for v in carca.values())
    return ItemResult(5, "pointwise identities (100 random trials each)", ok,
                      {**res, "carca": carca})


def item_curvature(backend, seed, tol) -> ItemResult:
    ints, detail, ok = {}, {}, True
    for n in (4, 5):
        g = catalog.build(f"so({n})").rep
        K = curvature_space(g, tol, exact=backend != "float")
        vals = {"float": K.dim if backend != "exact" else None, "exact": K.exact_dim}
        ints[f"kspace:so({n})"] = vals
        good = _dims_ok(vals, n * n * (n * n - 1) // 12, backend)
        detail[f"so({n})"] = vals
        ok &= good
    g = catalog.build("adjoint-su(3)").rep
    K = curvature_space(g, tol, exact=backend != "float")
    vals = {"float": K.dim if backend != "exact" else None, "exact": K.exact_dim}
    ints["kspace:adjoint-su(3)"] = vals
    ok &= _dims_ok(vals, 1, backend)
    if K.dim == 1:
        Q = K.elements()[0]
        ric = ricci_contraction(Q)
        if np.trace(ric) < 0:
            ric = -ric
        ev = np.linalg.eigvalsh(ric)
        detail["ricci eigenvalues"] = [float(ev[0]), float(ev[-1])]
        ok &= bool(ev[0] > 1e-6)
    berger, full = berger_algebra(g, K, tol)
    detail["berger dim"] = berger.dim
    ok &= full
    detail["adjoint-su(3)"] = vals
    return ItemResult(6, "curvature spaces and Berger algebra", ok, detail, ints)


def generic_rational_3form(n: int = 5, seed: int = 0) -> KForm:
    rng = np.random.default_rng(seed)
    while True:
        c = rng.integers(-3, 4, comb(n, 3)).astype(float)
        if np.count_nonzero(c) >= comb(n, 3) - 2:
            return KForm(n, 3, c)


def item_holonomy(backend, seed, tol) -> ItemResult:
    detail, ints, ok = {}, {}, True
    cartan = catalog.model_form(catalog.build("adjoint-su(3)"), "cartan")
    r = classify_3form(cartan, seed, tol)
    detail["cartan su(3)"] = r.labels
    ok &= r.labels == ["adjoint_cartan"]
    T5 = generic_rational_3form(5, seed)
    r5 = classify_3form(T5, seed, tol)
    detail["generic R^5"] = r5.labels
    ok &= r5.labels == ["full_so"] and r5.factors[0].algebra_dim == 10
    if backend != "float":
        gs = g_star(T5, tol, exact=True)
        ints["gstar:generic5"] = {"float": r5.gstar.dim, "exact": gs.exact_dim()}
        ok &= gs.exact_dim() == 10
    T7 = KForm.basis(7, 1, 2, 3) + KForm.basis(7, 4, 5, 6)
    r7 = classify_3form(T7, seed, tol)
    comps = sorted(tuple(sorted(f.component.terms(1e-9))) for f in r7.factors)
    detail["e123+e456 on R^7"] = {"trivial": r7.splitting.trivial.dim, "labels": r7.labels, "components": [list(map(list, c)) for c in comps]}
    ok &= r7.splitting.trivial.dim == 1 and r7.labels == ["full_so", "full_so"]
    ok &= comps == [((1, 2, 3),), ((4, 5, 6),)] and r7.split_residual <= tol
    return ItemResult(7, "holonomy of 3-forms", ok, detail, ints)


def plc_test_forms() -> dict:
    return {
        "vol4+vol4 in R^8": KForm.basis(8, 1, 2, 3, 4) + KForm.basis(8, 5, 6, 7, 8),
        "cayley": catalog.cayley_form(),
        "vol(R^4)": KForm.volume(4),
        "vol(R^5) degree 4 piece e1234": KForm.basis(5, 1, 2, 3, 4),
        "cartan su(3)": catalog.model_form(catalog.build("adjoint-su(3)"), "cartan"),
        "cartan su(2)": catalog.model_form(catalog.build("adjoint-su(2)"), "cartan"),
        "associative": catalog.associative_form(),
        "e123+e345": KForm.basis(5, 1, 2, 3) + KForm.basis(5, 3, 4, 5),
        "quaternionic sp(2)": catalog.quaternionic_form(2),
    }


def item_pluecker(backend, seed, tol) -> ItemResult:
    detail, ok = {}, True
    forms = plc_test_forms()
    vv = pluecker_report(forms["vol4+vol4 in R^8"], seed, tol)
    detail["vol4+vol4"] = vv.to_json()
    ok &= vv.satisfies_plc and len(vv.factors) == 2 and all(f.is_volume for f in vv.factors) and vv.decomposable
    cay_plc, _ = plc_check(forms["cayley"], tol)
    cay_jac, _ = nlie_jacobi_check(nlie_bracket(forms["cayley"]), tol)
    detail["cayley"] = {"plc": cay_plc, "jacobi": cay_jac}
    ok &= not cay_plc and not cay_jac
    vol_jac, _ = nlie_jacobi_check(nlie_bracket(forms["vol(R^4)"]), tol)
    detail["vol(R^4) jacobi"] = vol_jac
    ok &= vol_jac
    agree = {}
    for name, T in forms.items():
        a, _ = plc_check(T, tol)
        b, _ = nlie_jacobi_check(nlie_bracket(T), tol)
        agree[name] = {"plc": a, "jacobi": b}
        ok &= a == b
    detail["equivalence"] = agree
    return ItemResult(8, "Plücker-type relations and n-Lie brackets", ok, detail)


def item_multisymplectic(backend, seed, tol) -> ItemResult:
    g = catalog.build("u(5)").rep
    T = characteristic_form(g)
    fk, _ = wedge_kernel(T, 2, tol)
    ek = None
    if backend != "float":
        ek = exact_wedge_kernel(exact_characteristic_form(g), g.n, 4, 2)
    vals = {"float": fk if backend != "exact" else None, "exact": ek}
    return ItemResult(9, "alpha -> alpha ^ T^g is injective on Lambda^2 for u(5)",
                      _dims_ok(vals, 0, backend), vals, {"multisymp:u(5)": vals})


ITEMS: list[Callable] = [
    item_prolongation,
    item_eps_perp,
    item_charforms,
    item_casimir,
    item_identities,
    item_curvature,
    item_holonomy,
    item_pluecker,
    item_multisymplectic,
]


def run_verification(backend: str = "both", seed: int = 0, tol: float = DEFAULT_TOL) -> list[ItemResult]:
    if backend not in BACKENDS:
        raise ValueError(f"backend must be one of {BACKENDS}")
    results = [fn(backend, seed, tol) for fn in ITEMS]
    mismatches = {}
    if backend == "both":
        for r in results:
            for key, vals in r.integers.items():
                if vals.get("exact") is not None and vals.get("float") is not None and vals["float"] != vals["exact"]:
                    mismatches[key] = vals
    compared = sum(
        1 for r in results for v in r.integers.values()
        if v.get("exact") is not None and v.get("float") is not None
    )
    results.append(
        ItemResult(10, "float and exact backends agree on every integer", not mismatches,
                   {"compared": compared, "mismatches": mismatches})
    )
    return sorted(results, key=lambda r: r.id)
