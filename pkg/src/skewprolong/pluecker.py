"""Plücker-type relations for p-forms and metric n-Lie brackets.

A p-form T satisfies the Plücker-type relations when ``[L*_zeta T, T] = 0``
for every (p-2)-form zeta, and the classical relations when
``L*_zeta T ^ T = 0`` for every (p-1)-form zeta (i.e. T is simple).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from math import comb

import numpy as np

from . import exterior as ext
from . import kernels
from .exterior import KForm
from .linalg import DEFAULT_TOL, Subspace
from .prolong import is_adjoint_cartan
from .rep import LieSubalgebra, irreducible_split, isotropy_algebra, lie_closure


class PlueckerError(ValueError):
    """Invalid input for a Plücker or n-Lie computation."""


def _scale(T: KForm) -> float:
    return max(1.0, T.norm())


def plc_residual(T: KForm) -> float:
    """``max |[L*_{e_J} T, T]|`` over increasing (p-2)-tuples J."""
    if T.p < 3:
        raise PlueckerError(f"Plücker-type relations need degree >= 3, got {T.p}")
    n, p = T.n, T.p
    C = ext.contraction_array(T, p - 2)
    a, b, out, s = ext.action_table(n, p)
    Y = np.broadcast_to(T.coeffs, (C.shape[0], T.coeffs.shape[0]))
    res = kernels.bilinear_apply(a, b, out, s, np.ascontiguousarray(C), np.ascontiguousarray(Y), comb(n, p))
    return float(np.max(np.abs(res), initial=0.0))


def plc_check(T: KForm, tol: float = DEFAULT_TOL) -> tuple[bool, float]:
    r = plc_residual(T)
    return r <= tol * _scale(T) ** 2, r


def classical_residual(T: KForm) -> float:
    """``max |L*_{e_J} T ^ T|`` over increasing (p-1)-tuples J."""
    if T.p < 2:
        raise PlueckerError("classical relations need degree >= 2")
    n, p = T.n, T.p
    C = ext.contraction_array(T, p - 1)  # rows are 1-forms
    if p + 1 > n:
        return 0.0
    a, b, out, s = ext.wedge_table(n, 1, p)
    Y = np.broadcast_to(T.coeffs, (C.shape[0], T.coeffs.shape[0]))
    res = kernels.bilinear_apply(a, b, out, s, np.ascontiguousarray(C), np.ascontiguousarray(Y), comb(n, p + 1))
    return float(np.max(np.abs(res), initial=0.0))


def classical_plucker_check(T: KForm, tol: float = DEFAULT_TOL) -> tuple[bool, float]:
    r = classical_residual(T)
    return r <= tol * _scale(T) ** 2, r


def r_algebra(T: KForm, tol: float = DEFAULT_TOL) -> LieSubalgebra:
    """Lie closure of all ``L*_zeta T``, zeta in Lambda^{p-2}."""
    C = ext.contraction_array(T, T.p - 2)
    if not np.any(C):
        return LieSubalgebra(T.n, np.zeros((0, comb(T.n, 2))), True, tol)
    return lie_closure(C, T.n, tol, exact=False)


@dataclass(frozen=True, eq=False)
class PlueckerFactor:
    subspace: Subspace
    component: KForm
    is_volume: bool
    lie_cartan: bool

    def to_json(self) -> dict:
        return {
            "dim": self.subspace.dim,
            "is_volume": self.is_volume,
            "lie_cartan": self.lie_cartan,
            "component_norm": self.component.norm(),
        }


@dataclass(frozen=True, eq=False)
class PlueckerReport:
    satisfies_plc: bool
    satisfies_classical: bool
    trivial: Subspace | None
    factors: list
    decomposable: bool
    worst_residual: float
    r_in_g: bool | None = None

    def to_json(self) -> dict:
        return {
            "plc": self.satisfies_plc,
            "classical": self.satisfies_classical,
            "trivial_dim": None if self.trivial is None else self.trivial.dim,
            "factors": [f.to_json() for f in self.factors],
            "decomposable": self.decomposable,
            "worst_residual": self.worst_residual,
            "r_in_g": self.r_in_g,
        }


def decompose_plc_form(T: KForm, seed: int = 0, tol: float = DEFAULT_TOL) -> PlueckerReport:
    """Split a form satisfying the Plücker-type relations into irreducible pieces."""
    ok, res = plc_check(T, tol)
    if not ok:
        raise PlueckerError(f"form violates the Plücker-type relations (residual {res:.3g})")
    cl, cres = classical_plucker_check(T, tol)
    r = r_algebra(T, tol)
    split = irreducible_split(r, seed, tol)
    factors = []
    for W in split.factors:
        U = W.basis.T
        local = ext.restrict(T, U)
        comp = KForm(T.n, T.p, ext.pushforward_matrix(U, T.p) @ local.coeffs)
        is_vol = T.p == W.dim
        cartan = False
        if T.p == 3 and not is_vol:
            h = r_algebra(local, tol)
            cartan = is_adjoint_cartan(local, h, tol)
        factors.append(PlueckerFactor(W, comp, is_vol, cartan))
    decomposable = bool(factors) and all(f.is_volume for f in factors)
    g = isotropy_algebra(T, tol, exact=False) if not T.is_zero(0.0) else None
    r_in_g = None if g is None else g.subspace.contains(r.subspace)
    return PlueckerReport(True, cl, split.trivial, factors, decomposable, max(res, cres), r_in_g)


def pluecker_report(T: KForm, seed: int = 0, tol: float = DEFAULT_TOL) -> PlueckerReport:
    """Plücker checks for any form; the splitting is filled in only when plc holds."""
    ok, res = plc_check(T, tol)
    if ok:
        return decompose_plc_form(T, seed, tol)
    cl, cres = classical_plucker_check(T, tol)
    return PlueckerReport(False, cl, None, [], False, max(res, cres))


# ---------------------------------------------------------------------------
# n-Lie brackets


def _perm_parity(perm) -> int:
    perm = list(perm)
    inv = sum(1 for i in range(len(perm)) for j in range(i + 1, len(perm)) if perm[i] > perm[j])
    return -1 if inv & 1 else 1


def dense_tensor(T: KForm) -> np.ndarray:
    """The fully antisymmetric array ``T[i_1, ..., i_p]``."""
    n, p = T.n, T.p
    D = np.zeros((n,) * p)
    idx = ext.basis_indices(n, p)
    for perm in permutations(range(p)):
        sgn = _perm_parity(perm)
        D[tuple(idx[:, list(perm)].T)] = sgn * T.coeffs
    return D


@dataclass(frozen=True, eq=False)
class NLieBracket:
    """``<[x_1, ..., x_m], y> = T(x_1, ..., x_m, y)`` for an (m+1)-form T."""

    form: KForm

    @property
    def arity(self) -> int:
        return self.form.p - 1

    @property
    def dim(self) -> int:
        return self.form.n

    def full(self) -> np.ndarray:
        """Bracket values on all basis tuples, shape (dim**arity, dim)."""
        return dense_tensor(self.form).reshape(self.dim ** self.arity, self.dim)

    def __call__(self, *xs) -> np.ndarray:
        if len(xs) != self.arity:
            raise PlueckerError(f"bracket takes {self.arity} arguments")
        D = dense_tensor(self.form)
        for x in xs:
            D = np.tensordot(np.asarray(x, dtype=float), D, axes=(0, 0))
        return D


def nlie_bracket(T: KForm) -> NLieBracket:
    if T.p < 3:
        raise PlueckerError("an n-Lie bracket needs a form of degree >= 3 (arity >= 2)")
    if T.n < T.p - 1:
        raise PlueckerError("dimension smaller than the arity")
    return NLieBracket(T)


def nlie_jacobi_check(B: NLieBracket, tol: float = DEFAULT_TOL) -> tuple[bool, float]:
    """Generalised Jacobi identity over all increasing basis tuples."""
    m, n = B.arity, B.dim
    full = np.ascontiguousarray(B.full())
    xt = ext.basis_indices(n, m - 1)
    if m - 1 == 0:
        xt = np.zeros((1, 0), dtype=np.int64)
    yt = ext.basis_indices(n, m)
    r = float(kernels.nlie_jacobi_residual(full, n, m, np.ascontiguousarray(xt), np.ascontiguousarray(yt)))
    return r <= tol * _scale(B.form) ** 2, r
