"""Algebraic curvature tensors on Euclidean R^n.

An element Q of Lambda^2 (x) Lambda^2 is stored as the C(n,2) x C(n,2) array
``Q[I, J] = <Q(e_I), e_J>``; row I is the 2-form ``Q(e_I)``.  For vectors we
write ``Q(X, Y) = Q(X ^ Y)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb

import numpy as np

from . import exterior as ext
from . import kernels
from .exterior import KForm
from .linalg import DEFAULT_TOL, Subspace, exact_rank, nullspace, realify_map
from .rep import LieSubalgebra, _exact_bilinear


class CurvatureError(ValueError):
    """Malformed curvature input."""


@dataclass(frozen=True, eq=False)
class CurvatureElement:
    n: int
    coeffs: np.ndarray
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        N = comb(self.n, 2)
        Q = np.array(self.coeffs, dtype=float)
        if Q.shape != (N, N):
            raise CurvatureError(f"expected a {N}x{N} array for R^{self.n}")
        if not np.all(np.isfinite(Q)):
            raise CurvatureError("non-finite entries")
        Q.setflags(write=False)
        object.__setattr__(self, "coeffs", Q)

    @classmethod
    def identity(cls, n: int) -> "CurvatureElement":
        return cls(n, np.eye(comb(n, 2)))

    @classmethod
    def from_pair(cls, alpha: KForm, beta: KForm) -> "CurvatureElement":
        """``alpha (x) beta``: the element ``X ^ Y -> alpha(X, Y) beta``."""
        return cls(alpha.n, np.outer(alpha.coeffs, beta.coeffs))

    def scale(self) -> float:
        return max(1.0, float(np.max(np.abs(self.coeffs), initial=0.0)))

    @property
    def symmetric(self) -> bool:
        return bool(np.max(np.abs(self.coeffs - self.coeffs.T), initial=0.0) <= self.tol * self.scale())

    @property
    def bianchi(self) -> bool:
        return bool(np.max(np.abs(bianchi_b1(self)), initial=0.0) <= self.tol * self.scale())

    def evaluate(self, X, Y) -> KForm:
        """The 2-form ``Q(X, Y)``."""
        xy = ext.wedge(KForm.vector(X), KForm.vector(Y))
        return KForm(self.n, 2, xy.coeffs @ self.coeffs)

    def full_tensor(self) -> np.ndarray:
        """``R[a, b, c, d] = Q(e_a, e_b)(e_c, e_d)``."""
        P = _pair_tensor(self.n)
        return np.einsum("abI,IJ,cdJ->abcd", P, self.coeffs, P)

    def __add__(self, other):
        return CurvatureElement(self.n, self.coeffs + other.coeffs, self.tol)

    def __sub__(self, other):
        return CurvatureElement(self.n, self.coeffs - other.coeffs, self.tol)

    def __mul__(self, s):
        return CurvatureElement(self.n, float(s) * self.coeffs, self.tol)

    __rmul__ = __mul__

    def to_json(self) -> dict:
        pairs = ext.basis_indices(self.n, 2) + 1
        entries = []
        for I, J in zip(*np.nonzero(self.coeffs)):
            entries.append(
                {"I": pairs[I].tolist(), "J": pairs[J].tolist(), "coeff": float(self.coeffs[I, J])}
            )
        return {"n": self.n, "entries": entries}

    @classmethod
    def from_json(cls, data) -> "CurvatureElement":
        try:
            n = int(data["n"])
        except (KeyError, TypeError, ValueError):
            raise CurvatureError("curvature record needs integer 'n'") from None
        N = comb(n, 2)
        Q = np.zeros((N, N))
        for k, ent in enumerate(data.get("entries", [])):
            try:
                I = [int(x) - 1 for x in ent["I"]]
                J = [int(x) - 1 for x in ent["J"]]
                c = float(ent["coeff"])
            except (KeyError, TypeError, ValueError):
                raise CurvatureError(f"entry {k}: needs I, J and coeff") from None
            for P in (I, J):
                if len(P) != 2 or not (0 <= P[0] < P[1] < n):
                    raise CurvatureError(f"entry {k}: index pairs must be increasing within 1..{n}")
            Q[ext.index_of(n, I), ext.index_of(n, J)] += c
        return cls(n, Q)


@lru_cache(maxsize=None)
def _pair_tensor(n: int) -> np.ndarray:
    """``P[a, b, I] = (e_a ^ e_b)_I``."""
    N = comb(n, 2)
    P = np.zeros((n, n, N))
    for I, (a, b) in enumerate(ext.basis_indices(n, 2)):
        P[a, b, I] = 1.0
        P[b, a, I] = -1.0
    return P


@lru_cache(maxsize=None)
def b1_table(n: int):
    """Structure table of ``(alpha, beta) -> b_1(alpha (x) beta)`` into R^n (x) Lambda^3.

    ``(b_1 Q)_{e_j} = sum_i e_i ^ Q(e_i, e_j)``, which for ``Q = alpha (x) beta`` is
    ``-(e_j _| alpha) ^ beta``.  Output index is ``j * C(n,3) + K``.
    """
    pairs = ext.basis_indices(n, 2)
    wa, wb, wout, ws = ext.wedge_table(n, 1, 2)
    # lookup: for each (r, J) the wedge e_r ^ e_J
    N, C3 = comb(n, 2), comb(n, 3)
    lut_out = np.full((n, N), -1, dtype=np.int64)
    lut_sign = np.zeros((n, N))
    lut_out[wa, wb] = wout
    lut_sign[wa, wb] = ws
    a, b, out, sign = [], [], [], []
    for I, (p, q) in enumerate(pairs):
        # e_p _| e_pq = e_q,  e_q _| e_pq = -e_p
        for j, r, s in ((p, q, 1.0), (q, p, -1.0)):
            for J in range(N):
                if lut_out[r, J] < 0:
                    continue
                a.append(I)
                b.append(J)
                out.append(j * C3 + lut_out[r, J])
                sign.append(-s * lut_sign[r, J])
    return ext._table(a, b, out, sign)


def bianchi_b1(Q) -> np.ndarray:
    """``b_1 Q`` as an (n, C(n,3)) array; row j is the 3-form ``(b_1 Q)_{e_j}``."""
    if not isinstance(Q, CurvatureElement):
        raise CurvatureError("expected a CurvatureElement")
    n = Q.n
    a, b, out, s = b1_table(n)
    res = np.zeros(n * comb(n, 3))
    np.add.at(res, out, s * Q.coeffs[a, b])
    return res.reshape(n, comb(n, 3))


def b1_of_products(A, B, n: int) -> np.ndarray:
    """Row-wise ``b_1(A[r] (x) B[r])``, flattened to (m, n * C(n,3))."""
    a, b, out, s = b1_table(n)
    return kernels.bilinear_apply(a, b, out, s, np.atleast_2d(A), np.atleast_2d(B), n * comb(n, 3))


def ricci_contraction(Q: CurvatureElement) -> np.ndarray:
    """``Ric(Q)(X, Y) = sum_i <Q(X ^ e_i), Y ^ e_i>`` as an n x n matrix."""
    R = Q.full_tensor()
    return np.einsum("aibi->ab", R)


# ---------------------------------------------------------------------------
# tensors built from a 3-form


def _contractions(T: KForm) -> np.ndarray:
    """Rows ``e_i _| T`` (2-form coefficients), shape (n, C(n,2))."""
    if T.p != 3:
        raise CurvatureError(f"expected a 3-form, got degree {T.p}")
    return ext.contraction_array(T, 1)


def rt_tensor(T: KForm) -> CurvatureElement:
    """``R^T(X, Y) = [T_X, T_Y] + 2 T_{T_X Y}`` with ``T_X = X _| T``."""
    n = T.n
    C = _contractions(T)
    pairs = ext.basis_indices(n, 2)
    X, Y = pairs[:, 0], pairs[:, 1]
    br = ext.bracket_arrays(C[X], C[Y], n)
    # T_X Y is the vector T(X, Y, .); its contraction is sum_k T(X, Y, e_k) T_{e_k}
    txy = np.einsum("Ik,kJ->IJ", ext.contraction_array(T, 2), C)
    return CurvatureElement(n, br + 2.0 * txy)


def omega_4form(T: KForm) -> KForm:
    """``Omega^T = 1/2 sum_i T_{e_i} ^ T_{e_i}``."""
    C = _contractions(T)
    n = T.n
    if n < 4:
        return KForm.zero(n, 4)
    a, b, out, s = ext.wedge_table(n, 2, 2)
    rows = kernels.bilinear_apply(a, b, out, s, C, C, comb(n, 4))
    return KForm(n, 4, 0.5 * rows.sum(axis=0))


def omega_pairs(T: KForm) -> np.ndarray:
    """Right-hand side of the pairwise identity: ``-[T_X, T_Y] + T_{T_X Y}`` over basis pairs X < Y."""
    n = T.n
    C = _contractions(T)
    pairs = ext.basis_indices(n, 2)
    br = ext.bracket_arrays(C[pairs[:, 0]], C[pairs[:, 1]], n)
    txy = ext.contraction_array(T, 2) @ C
    return -br + txy


def contraction_gram(T: KForm) -> np.ndarray:
    """``G[a, b] = <e_a _| T, e_b _| T>``."""
    C = ext.contraction_array(T, 1)
    return C @ C.T


# ---------------------------------------------------------------------------
# curvature spaces


def _sym_pairs(k: int):
    ii, jj = np.triu_indices(k)
    return ii, jj


@dataclass(frozen=True, eq=False)
class CurvatureSpace:
    """``K(g)``: orthonormal basis (rows, flattened N*N) plus dimension data."""

    n: int
    basis: np.ndarray
    exact_dim: int | None

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def subspace(self) -> Subspace:
        N = comb(self.n, 2)
        return Subspace(N * N, self.basis)

    def elements(self) -> list[CurvatureElement]:
        N = comb(self.n, 2)
        return [CurvatureElement(self.n, row.reshape(N, N)) for row in self.basis]


def curvature_space(g: LieSubalgebra, tol: float | None = None, exact: bool = True) -> CurvatureSpace:
    """``{Q in S^2(g) : b_1 Q = 0}``, which is the space of g-valued curvature tensors.

    A curvature tensor is pair-symmetric and g-valued, so it lies in S^2(g); the
    search is parametrised by symmetric coefficient matrices on the basis of g.
    """
    tol = g.tol if tol is None else tol
    n, k, N = g.n, g.dim, comb(g.n, 2)
    if k == 0:
        return CurvatureSpace(n, np.zeros((0, N * N)), 0 if exact else None)
    G = g.basis
    ii, jj = _sym_pairs(k)
    cols = b1_of_products(G[ii], G[jj], n) + b1_of_products(G[jj], G[ii], n)
    K = nullspace(cols.T, tol)
    Qs = np.einsum("ps,sI,sJ->pIJ", K, G[ii], G[jj])
    Qs = Qs + np.transpose(Qs, (0, 2, 1))
    basis = Subspace.span(Qs.reshape(len(K), N * N), N * N, tol).basis if len(K) else np.zeros((0, N * N))
    edim = None
    if exact and g.exact is not None:
        edim = exact_curvature_dim(g)
    return CurvatureSpace(n, basis, edim)


def exact_curvature_dim(g: LieSubalgebra) -> int:
    """Dimension of K(g) over the field of definition of g, by exact elimination."""
    span = g.exact
    n, d = g.n, span.d
    table = b1_table(n)
    M = n * comb(n, 3)
    els = span.elements
    k = len(els)
    re_cols, ir_cols = [], []
    for s in range(k):
        for t in range(s, k):
            (us, ws), (ut, wt) = els[s], els[t]
            uu = _sym_b1(table, us, ut, M)
            if d == 1:
                re_cols.append(uu)
                ir_cols.append([0] * M)
                continue
            ww = _sym_b1(table, ws, wt, M)
            uw = _sym_b1(table, us, wt, M)
            wu = _sym_b1(table, ws, ut, M)
            re_cols.append([p + d * q for p, q in zip(uu, ww)])
            ir_cols.append([p + q for p, q in zip(uw, wu)])
    A = np.array(re_cols, dtype=object).T
    B = np.array(ir_cols, dtype=object).T
    r = exact_rank(realify_map(A, B, d).tolist())
    rank = r if d == 1 else r // 2
    return k * (k + 1) // 2 - rank


def _sym_b1(table, x, y, size):
    p = _exact_bilinear(table, x, y, size)
    q = _exact_bilinear(table, y, x, size)
    return [a + b for a, b in zip(p, q)]


def identity_element(g: LieSubalgebra) -> CurvatureElement:
    """``1_g``: the element ``X ^ Y -> pi_g(X ^ Y)``."""
    return CurvatureElement(g.n, g.basis.T @ g.basis, g.tol)


def berger_algebra(g: LieSubalgebra, K: CurvatureSpace | None = None, tol: float | None = None) -> tuple[LieSubalgebra, bool]:
    """Span of all ``R(X, Y)`` for R in K(g); returns it and whether it equals g."""
    tol = g.tol if tol is None else tol
    K = curvature_space(g, tol, exact=False) if K is None else K
    N = comb(g.n, 2)
    if K.dim == 0:
        span = np.zeros((0, N))
    else:
        span = K.basis.reshape(-1, N)
    B = Subspace.span(span, N, tol).basis if len(span) else np.zeros((0, N))
    sub = LieSubalgebra(g.n, B, False, tol)
    try:
        sub = sub.verified()
    except ValueError:
        pass
    return sub, sub.dim == g.dim
