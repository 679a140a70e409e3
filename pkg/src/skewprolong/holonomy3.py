"""The Lie algebra generated by the contractions of a 3-form, and the
splitting of the form along the irreducible pieces of that algebra."""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

from . import exterior as ext
from .curvature import contraction_gram, omega_4form
from .exterior import KForm
from .linalg import DEFAULT_TOL, Subspace
from .rep import IsotypicSplitting, LieSubalgebra, irreducible_split, lie_closure


class HolonomyError(ValueError):
    """Invalid 3-form input."""


def g_star(T: KForm, tol: float = DEFAULT_TOL, exact: bool | None = None) -> LieSubalgebra:
    """Lie closure of ``{e_i _| T}``."""
    if T.p != 3:
        raise HolonomyError(f"expected a 3-form, got degree {T.p}")
    C = ext.contraction_array(T, 1)
    if not np.any(C):
        return LieSubalgebra(T.n, np.zeros((0, comb(T.n, 2))), True, tol)
    return lie_closure(C, T.n, tol, exact=exact)


@dataclass(frozen=True, eq=False)
class HolonomyFactor:
    label: str
    subspace: Subspace
    component: KForm  # supported on the factor, as a form on R^n
    local_component: KForm  # the same form written on R^{dim factor}
    algebra_dim: int

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "dim": self.subspace.dim,
            "algebra_dim": self.algebra_dim,
            "component_norm": self.component.norm(),
            "component": self.component.to_json(),
        }


@dataclass(frozen=True, eq=False)
class HolonomyReport:
    gstar: LieSubalgebra
    splitting: IsotypicSplitting
    factors: list
    split_residual: float
    trivial_residual: float

    @property
    def labels(self) -> list[str]:
        return [f.label for f in self.factors]

    def to_json(self) -> dict:
        return {
            "gstar_dim": self.gstar.dim,
            "trivial_dim": self.splitting.trivial.dim,
            "factors": [f.to_json() for f in self.factors],
            "split_residual": self.split_residual,
            "trivial_residual": self.trivial_residual,
        }


def _factor_label(Tk: KForm, tol: float) -> tuple[str, int]:
    m = Tk.n
    h = g_star(Tk, tol, exact=False)
    if h.dim == comb(m, 2):
        return "full_so", h.dim
    C = ext.contraction_array(Tk, 1)
    span = Subspace.span(C, comb(m, 2), tol)
    scale = max(Tk.norm(), 1.0) ** 2
    if h.dim == m and span.dim == m and omega_4form(Tk).norm() <= 1e3 * tol * scale:
        return "adjoint_cartan", h.dim
    return "unclassified", h.dim


def classify_3form(T: KForm, seed: int = 0, tol: float = DEFAULT_TOL) -> HolonomyReport:
    if T.p != 3:
        raise HolonomyError(f"expected a 3-form, got degree {T.p}")
    if T.is_zero(0.0):
        raise HolonomyError("the zero form generates nothing")
    g = g_star(T, tol, exact=False)
    split = irreducible_split(g, seed, tol)
    factors = []
    total = np.zeros_like(T.coeffs)
    for W in split.factors:
        U = W.basis.T
        local = ext.restrict(T, U)
        comp = KForm(T.n, 3, ext.pushforward_matrix(U, 3) @ local.coeffs)
        total = total + comp.coeffs
        label, adim = _factor_label(local, tol)
        factors.append(HolonomyFactor(label, W, comp, local, adim))
    split_res = float(np.max(np.abs(total - T.coeffs), initial=0.0))
    triv_res = 0.0
    for v in split.trivial.basis:
        triv_res = max(triv_res, ext.interior(v, T).norm())
    return HolonomyReport(g, split, factors, split_res, triv_res)


def adjoint_gram_residual(Tk: KForm) -> float:
    """Deviation of the contraction Gram matrix from ``(3/n)|T|^2`` times the identity."""
    G = contraction_gram(Tk)
    target = 3.0 / Tk.n * Tk.norm() ** 2
    return float(np.max(np.abs(G - target * np.eye(Tk.n))))
