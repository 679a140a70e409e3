"""Skew-symmetric prolongations, the eps-perp map, characteristic forms and
the factor-by-factor classification of reducible representations."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb

import numpy as np

from . import exterior as ext
from .curvature import b1_of_products, identity_element, bianchi_b1, omega_4form
from .exterior import KForm
from .linalg import DEFAULT_TOL, Subspace, exact_rank, nullspace
from .rep import (
    IsotypicSplitting,
    LieSubalgebra,
    irreducible_split,
    is_irreducible,
    kernel_ideal,
    lie_closure,
    restrict,
)

# exact eliminations above this many matrix entries are skipped (reported as None)
EXACT_SIZE_LIMIT = 2_000_000

LABELS = ("zero", "adjoint_cartan_line", "full_lambda3", "full_lambdap", "reducible_composite", "unclassified")


class ProlongError(ValueError):
    """Invalid degree or input."""


@lru_cache(maxsize=None)
def contraction_operator(n: int, p: int) -> np.ndarray:
    """Stacked maps ``T -> L*_{e_J} T`` over increasing (p-2)-tuples J.

    Shape (C(n,p-2), C(n,2), C(n,p)); entries are 0 or +-1.
    """
    a, b, out, s = ext.wedge_table(n, p - 2, 2)
    M = np.zeros((comb(n, p - 2), comb(n, 2), comb(n, p)))
    M[a, b, out] = s
    M.setflags(write=False)
    return M


def _perp_basis(g: LieSubalgebra) -> np.ndarray:
    return g.subspace.complement().basis


def constraint_matrix(g: LieSubalgebra, p: int) -> np.ndarray:
    """Rows: the g-perp components of every ``L*_{e_J} T``; the kernel is the prolongation."""
    M = contraction_operator(g.n, p)
    P = _perp_basis(g)
    return np.einsum("kI,JIt->Jkt", P, M).reshape(-1, comb(g.n, p))


def exact_prolongation_dim(g: LieSubalgebra, p: int) -> int | None:
    """Dimension over the field of definition of g, by fraction-free elimination."""
    if g.exact is None:
        return None
    n = g.n
    span = g.exact
    r = span.r
    K = span.annihilator()  # rows act on realified 2-forms of length r*N
    cols = comb(n, p)
    if K.shape[0] == 0:
        return cols
    M = contraction_operator(n, p).astype(int)
    N = comb(n, 2)
    rows = []
    for CJ in M:
        if r == 1:
            blk = CJ.astype(object)
        else:
            blk = np.zeros((r * N, r * cols), dtype=object)
            blk[...] = 0
            for t in range(r):
                blk[t * N:(t + 1) * N, t * cols:(t + 1) * cols] = CJ
        rows.append(K.dot(blk))
    A = np.vstack(rows)
    if A.size > EXACT_SIZE_LIMIT:
        return None
    rank = exact_rank(A.tolist())
    return (r * cols - rank) // r


@dataclass(frozen=True, eq=False)
class ProlongationReport:
    p: int
    dim: int
    basis: list
    classification: str
    exact_dim: int | None = None
    residual: float = 0.0

    @property
    def exact_confirmed(self) -> bool | None:
        return None if self.exact_dim is None else self.exact_dim == self.dim

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "dim": self.dim,
            "classification": self.classification,
            "exact_dim": self.exact_dim,
            "exact_confirmed": self.exact_confirmed,
            "residual": self.residual,
            "basis": [f.to_json() for f in self.basis],
        }


def prolongation_space(g: LieSubalgebra, p: int, tol: float | None = None) -> np.ndarray:
    """Orthonormal basis (rows) of the p-forms all of whose (p-2)-fold contractions lie in g."""
    tol = g.tol if tol is None else tol
    if not 3 <= p <= g.n:
        raise ProlongError(f"degree p={p} outside 3..{g.n}")
    A = constraint_matrix(g, p)
    if A.shape[0] == 0:
        return np.eye(comb(g.n, p))
    return nullspace(A, tol)


def skew_prolongation(g: LieSubalgebra, p: int = 3, tol: float | None = None, exact: bool = True) -> ProlongationReport:
    tol = g.tol if tol is None else tol
    if not g.closed_verified:
        raise ProlongError("subalgebra is not verified closed")
    B = prolongation_space(g, p, tol)
    forms = [KForm(g.n, p, row) for row in B]
    residual = _membership_residual(g, B, p)
    label = _classify(g, p, B, tol)
    edim = exact_prolongation_dim(g, p) if exact else None
    return ProlongationReport(p, B.shape[0], forms, label, edim, residual)


def _membership_residual(g, B, p) -> float:
    if B.shape[0] == 0:
        return 0.0
    M = contraction_operator(g.n, p)
    C = np.einsum("JIt,rt->rJI", M, B)
    return float(np.max(np.abs(C - C @ g.basis.T @ g.basis)))


def _classify(g: LieSubalgebra, p: int, B: np.ndarray, tol: float) -> str:
    n, dim = g.n, B.shape[0]
    if dim == 0:
        return "zero"
    if g.dim == comb(n, 2) and dim == comb(n, p):
        return "full_lambda3" if p == 3 else "full_lambdap"
    irreducible = is_irreducible(g, tol)
    if not irreducible:
        return "reducible_composite"
    if dim == 1 and p == 3 and is_adjoint_cartan(KForm(n, 3, B[0]), g, tol):
        return "adjoint_cartan_line"
    return "unclassified"


def is_adjoint_cartan(T: KForm, g: LieSubalgebra, tol: float = DEFAULT_TOL) -> bool:
    """dim g = n, Omega^T = 0 and the contractions of T generate g."""
    if g.dim != g.n:
        return False
    scale = max(T.norm(), 1.0)
    if omega_4form(T).norm() > 1e3 * tol * scale ** 2:
        return False
    h = lie_closure(ext.contraction_array(T, 1), g.n, tol, exact=False)
    return h.dim == g.dim and g.subspace.contains(h.subspace)


# ---------------------------------------------------------------------------
# eps-perp


@dataclass(frozen=True)
class EpsPerpReport:
    kernel_dim: int
    rank: int
    coker_dim: int
    dim_gperp: int
    n: int
    exact_kernel_dim: int | None = None

    @property
    def is_isomorphism(self) -> bool:
        return self.kernel_dim == 0 and self.coker_dim == 0

    @property
    def dim_formula_holds(self) -> bool:
        return 6 * self.dim_gperp == (self.n - 1) * (self.n - 2)

    def to_json(self) -> dict:
        return {
            "kernel_dim": self.kernel_dim,
            "rank": self.rank,
            "coker_dim": self.coker_dim,
            "dim_gperp": self.dim_gperp,
            "is_isomorphism": self.is_isomorphism,
            "dim_formula_holds": self.dim_formula_holds,
            "exact_kernel_dim": self.exact_kernel_dim,
        }


def eps_perp_analysis(g: LieSubalgebra, tol: float | None = None, exact: bool = True) -> EpsPerpReport:
    """The map ``T -> (X -> pi_perp(X _| T))`` from Lambda^3 to R^n (x) g-perp."""
    tol = g.tol if tol is None else tol
    n = g.n
    kernel = prolongation_space(g, 3, tol).shape[0]
    rank = comb(n, 3) - kernel
    dperp = comb(n, 2) - g.dim
    ek = exact_prolongation_dim(g, 3) if exact else None
    return EpsPerpReport(kernel, rank, n * dperp - rank, dperp, n, ek)


# ---------------------------------------------------------------------------
# characteristic form


def characteristic_form(g: LieSubalgebra) -> KForm:
    """``T^g = sum_k x_k ^ x_k`` over an orthonormal basis of g."""
    n = g.n
    if n < 4 or g.dim == 0:
        return KForm.zero(n, 4)
    a, b, out, s = ext.wedge_table(n, 2, 2)
    from . import kernels

    rows = kernels.bilinear_apply(a, b, out, s, g.basis, g.basis, comb(n, 4))
    return KForm(n, 4, rows.sum(axis=0))


def exact_characteristic_form(g: LieSubalgebra) -> list | None:
    """T^g with Fraction coefficients, for rationally defined g (else None).

    Uses ``sum_{kl} (G^{-1})_{kl} g_k ^ g_l`` for any rational basis with Gram matrix G.
    """
    if g.exact is None or g.exact.d != 1:
        return None
    import sympy

    n = g.n
    gens = [list(u) for u, _ in g.exact.elements]
    if not gens or n < 4:
        return [Fraction(0)] * comb(n, 4)
    G = sympy.Matrix([[sum(x * y for x, y in zip(p, q)) for q in gens] for p in gens])
    Ginv = G.inv()
    a, b, out, s = ext.wedge_table(n, 2, 2)
    res = [Fraction(0)] * comb(n, 4)
    k = len(gens)
    for i in range(k):
        for j in range(k):
            c = Fraction(int(Ginv[i, j].p), int(Ginv[i, j].q))
            if c == 0:
                continue
            x, y = gens[i], gens[j]
            for ai, bi, oi, si in zip(a, b, out, s):
                if x[ai] and y[bi]:
                    res[oi] += c * int(si) * x[ai] * y[bi]
    return res


@dataclass(frozen=True)
class MinimalityReport:
    minimal: bool
    one_g_in_K: bool
    norm: float

    @property
    def consistent(self) -> bool:
        return self.minimal == self.one_g_in_K

    def to_json(self) -> dict:
        return {"minimal": self.minimal, "one_g_in_K": self.one_g_in_K, "norm": self.norm, "consistent": self.consistent}


def is_minimal(g: LieSubalgebra, tol: float | None = None) -> MinimalityReport:
    tol = g.tol if tol is None else tol
    T = characteristic_form(g)
    nrm = T.norm()
    b1 = bianchi_b1(identity_element(g))
    return MinimalityReport(nrm <= 1e3 * tol, float(np.max(np.abs(b1), initial=0.0)) <= 1e3 * tol, nrm)


def wedge_kernel(T: KForm, q: int = 2, tol: float = DEFAULT_TOL) -> tuple[int, int | None]:
    """Kernel dimension of ``alpha -> alpha ^ T`` on q-forms: (float, exact or None)."""
    M = ext.wedge_matrix(T, q)
    d = ext.dim_forms(T.n, q)
    if M.shape[0] == 0:
        return d, d
    kf = nullspace(M, tol).shape[0]
    return kf, None


def exact_wedge_kernel(coeffs, n: int, p: int, q: int = 2) -> int:
    """Exact kernel dimension of ``alpha -> alpha ^ T`` for rational coefficients of T."""
    a, b, out, s = ext.wedge_table(n, q, p)
    rows = [[Fraction(0)] * comb(n, q) for _ in range(comb(n, p + q))]
    for ai, bi, oi, si in zip(a, b, out, s):
        c = coeffs[bi]
        if c:
            rows[oi][ai] += int(si) * c
    return comb(n, q) - exact_rank(rows)


# ---------------------------------------------------------------------------
# reducible representations


@dataclass(frozen=True, eq=False)
class FactorReport:
    subspace: Subspace
    ideal_dim: int
    prolongation_dim: int
    labels: tuple
    prolongation_basis: np.ndarray  # rows are 3-forms on R^n

    def to_json(self) -> dict:
        return {
            "dim": self.subspace.dim,
            "ideal_dim": self.ideal_dim,
            "prolongation_dim": self.prolongation_dim,
            "labels": list(self.labels),
        }


@dataclass(frozen=True, eq=False)
class ClassificationReport:
    splitting: IsotypicSplitting
    factors: list
    global_dim: int
    direct_dim: int
    exact_dim: int | None

    @property
    def consistent(self) -> bool:
        ok = self.global_dim == self.direct_dim
        if self.exact_dim is not None:
            ok = ok and self.exact_dim == self.direct_dim
        return ok

    @property
    def labels(self) -> list:
        return [list(f.labels) for f in self.factors]

    def to_json(self) -> dict:
        return {
            "trivial_dim": self.splitting.trivial.dim,
            "factors": [f.to_json() for f in self.factors],
            "global_dim": self.global_dim,
            "direct_dim": self.direct_dim,
            "exact_dim": self.exact_dim,
            "consistent": self.consistent,
        }


def classify_representation(g: LieSubalgebra, seed: int = 0, tol: float | None = None, exact: bool = True) -> ClassificationReport:
    """Split V, and compute the 3-form prolongation of each factor's kernel ideal."""
    tol = g.tol if tol is None else tol
    split = irreducible_split(g, seed, tol)
    factors = []
    for W in split.factors:
        m = W.dim
        ideal = kernel_ideal(g, W, tol)
        h = restrict(ideal, W, tol)
        if m >= 3:
            B = prolongation_space(h, 3, tol)
        else:
            B = np.zeros((0, comb(m, 3)))
        labels = []
        if h.dim == comb(m, 2) and m >= 2:
            labels.append("full_so")
        if B.shape[0] == 1 and h.dim == m and is_adjoint_cartan(KForm(m, 3, B[0]), h, tol):
            labels.append("adjoint_simple")
        if B.shape[0] == 0:
            labels.append("vanishing_prolongation")
        pushed = B @ ext.pushforward_matrix(W.basis.T, 3).T if B.shape[0] else np.zeros((0, comb(g.n, 3)))
        factors.append(FactorReport(W, ideal.dim, B.shape[0], tuple(labels), pushed))
    total = sum(f.prolongation_dim for f in factors)
    direct = prolongation_space(g, 3, tol).shape[0] if g.n >= 3 else 0
    edim = exact_prolongation_dim(g, 3) if exact and g.n >= 3 else None
    return ClassificationReport(split, factors, total, direct, edim)


def carca_sides(g: LieSubalgebra, F: KForm, C1=None, C2=None, Tg=None) -> tuple[KForm, KForm]:
    """Both sides of ``L*_F T^g = 2 pi_g F + C^2 F - {C^1, F}``."""
    from .rep import casimir, project

    C1 = casimir(g, 1) if C1 is None else C1
    C2 = casimir(g, 2) if C2 is None else C2
    Tg = characteristic_form(g) if Tg is None else Tg
    Fm = ext.sharp(F)
    lhs = ext.contract_adjoint(F, Tg)
    rhs = 2.0 * project(g, F)[0] + KForm(g.n, 2, C2 @ F.coeffs) - ext.flat(C1 @ Fm + Fm @ C1)
    return lhs, rhs


def colinearity_residual(A: KForm, B: KForm) -> float:
    """Distance of A/|A| from the line through B (0 when A is a multiple of B)."""
    if A.is_zero(0.0) or B.is_zero(0.0):
        return 0.0 if A.is_zero(0.0) else float("inf")
    b = B.coeffs / B.norm()
    a = A.coeffs / A.norm()
    return float(np.linalg.norm(a - (a @ b) * b))
