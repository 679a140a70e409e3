"""Exterior algebra of Euclidean R^n in the lexicographic basis.

A p-form is stored by its coefficients on the basis forms ``e_I``, ``I`` a
strictly increasing p-tuple, in lexicographic order.  The ``e_I`` are declared
orthonormal and the coefficient on ``e_I`` is the value of the form on
``(e_{i_1}, ..., e_{i_p})``, so ``e_1 ^ e_2`` is ``e_12``.

2-forms and skew endomorphisms are identified by ``alpha(x, y) = g(F x, y)``
(:func:`sharp` / :func:`flat`).  With this convention the commutator of forms
``[alpha, gamma] = sum_i (e_i _| alpha) ^ (e_i _| gamma)`` restricts on
2-forms to the matrix commutator: ``sharp([a, b]) = [sharp a, sharp b]``.

Internally everything reduces to cached integer *structure tables* consumed
by :mod:`skewprolong.kernels`.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Mapping, Sequence

import numpy as np

from . import kernels


class FormError(ValueError):
    """Malformed or incompatible forms."""


# ---------------------------------------------------------------------------
# index tables


@lru_cache(maxsize=None)
def basis_indices(n: int, p: int) -> np.ndarray:
    """Increasing 0-based p-tuples of range(n), lexicographic; shape (C(n,p), p)."""
    if p < 0 or p > n:
        return np.zeros((0, max(p, 0)), dtype=np.int64)
    idx = np.array(list(combinations(range(n), p)), dtype=np.int64)
    return idx.reshape(comb(n, p), p)


@lru_cache(maxsize=None)
def _mask_lookup(n: int) -> np.ndarray:
    """Map bitmask -> position of that subset among subsets of equal size."""
    lookup = np.full(1 << n, -1, dtype=np.int64)
    for p in range(n + 1):
        for pos, tup in enumerate(basis_indices(n, p)):
            mask = 0
            for i in tup:
                mask |= 1 << int(i)
            lookup[mask] = pos
    return lookup


def index_of(n: int, indices: Sequence[int]) -> int:
    """Lexicographic position of the 0-based increasing tuple ``indices``."""
    mask = 0
    for i in indices:
        mask |= 1 << int(i)
    return int(_mask_lookup(n)[mask])


def _masks(n: int, p: int) -> np.ndarray:
    tuples = basis_indices(n, p)
    if tuples.shape[0] == 0:
        return np.zeros(0, dtype=np.int64)
    return np.sum(np.left_shift(1, tuples), axis=1)


def _popcount(x: int) -> int:
    return bin(x).count("1")


@lru_cache(maxsize=None)
def wedge_table(n: int, p: int, q: int):
    """Structure table of ``Lambda^p x Lambda^q -> Lambda^{p+q}``."""
    lookup = _mask_lookup(n)
    mp, mq = _masks(n, p), _masks(n, q)
    a, b, out, sign = [], [], [], []
    if p + q <= n:
        for i, mi in enumerate(mp):
            mi = int(mi)
            for j, mj in enumerate(mq):
                mj = int(mj)
                if mi & mj:
                    continue
                inv = 0
                m = mj
                while m:
                    low = m & -m
                    inv += _popcount(mi & ~((low << 1) - 1))
                    m ^= low
                a.append(i)
                b.append(j)
                out.append(lookup[mi | mj])
                sign.append(-1.0 if inv & 1 else 1.0)
    return _table(a, b, out, sign)


@lru_cache(maxsize=None)
def action_table(n: int, p: int):
    """Structure table of the commutator ``Lambda^2 x Lambda^p -> Lambda^p``."""
    lookup = _mask_lookup(n)
    pairs = basis_indices(n, 2)
    mp = _masks(n, p)
    a, b, out, sign = [], [], [], []
    for k, (i, j) in enumerate(pairs):
        i, j = int(i), int(j)
        for t, m in enumerate(mp):
            m = int(m)
            has_i, has_j = bool(m >> i & 1), bool(m >> j & 1)
            if has_i == has_j:
                continue
            # e_ij acts as  e_j ^ (e_i _| .)  -  e_i ^ (e_j _| .)
            src, dst, s = (i, j, 1) if has_i else (j, i, -1)
            rest = m & ~(1 << src)
            s *= -1 if _popcount(m & ((1 << src) - 1)) & 1 else 1
            s *= -1 if _popcount(rest & ((1 << dst) - 1)) & 1 else 1
            a.append(k)
            b.append(t)
            out.append(lookup[rest | (1 << dst)])
            sign.append(float(s))
    return _table(a, b, out, sign)


def _table(a, b, out, sign):
    return (
        np.asarray(a, dtype=np.int64),
        np.asarray(b, dtype=np.int64),
        np.asarray(out, dtype=np.int64),
        np.asarray(sign, dtype=np.float64),
    )


def dim_forms(n: int, p: int) -> int:
    return comb(n, p) if 0 <= p <= n else 0


# ---------------------------------------------------------------------------
# forms


@dataclass(frozen=True, eq=False)
class KForm:
    """A degree-p alternating form on R^n."""

    n: int
    p: int
    coeffs: np.ndarray

    def __post_init__(self):
        if self.n < 0 or self.p < 0:
            raise FormError(f"invalid (n, p) = ({self.n}, {self.p})")
        c = np.array(self.coeffs, dtype=float).reshape(-1)
        if c.shape[0] != dim_forms(self.n, self.p):
            raise FormError(
                f"a {self.p}-form on R^{self.n} needs {dim_forms(self.n, self.p)} "
                f"coefficients, got {c.shape[0]}"
            )
        if not np.all(np.isfinite(c)):
            raise FormError("non-finite coefficient")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    # constructors
    @classmethod
    def zero(cls, n: int, p: int) -> "KForm":
        return cls(n, p, np.zeros(dim_forms(n, p)))

    @classmethod
    def from_terms(cls, n: int, p: int, terms: Mapping[Sequence[int], float]) -> "KForm":
        """Build from ``{(i_1, ..., i_p): coeff}`` with 1-based indices in any order."""
        c = np.zeros(dim_forms(n, p))
        for idx, val in terms.items():
            idx = tuple(int(i) - 1 for i in idx)
            if len(idx) != p or len(set(idx)) != p or min(idx, default=0) < 0 or max(idx, default=-1) >= n:
                raise FormError(f"bad index tuple {tuple(i + 1 for i in idx)} for a {p}-form on R^{n}")
            perm = np.argsort(idx)
            s = _perm_sign(perm)
            c[index_of(n, sorted(idx))] += s * val
        return cls(n, p, c)

    @classmethod
    def basis(cls, n: int, *indices: int) -> "KForm":
        """``e_{i_1 ... i_p}`` from 1-based indices."""
        return cls.from_terms(n, len(indices), {tuple(indices): 1.0})

    @classmethod
    def volume(cls, n: int) -> "KForm":
        return cls(n, n, np.ones(1))

    @classmethod
    def vector(cls, x) -> "KForm":
        x = np.asarray(x, dtype=float)
        return cls(len(x), 1, x)

    # algebra
    def _compatible(self, other: "KForm"):
        if not isinstance(other, KForm):
            return NotImplemented
        if other.n != self.n or other.p != self.p:
            raise FormError(f"incompatible forms: ({self.n},{self.p}) vs ({other.n},{other.p})")

    def __add__(self, other):
        if self._compatible(other) is NotImplemented:
            return NotImplemented
        return KForm(self.n, self.p, self.coeffs + other.coeffs)

    def __sub__(self, other):
        if self._compatible(other) is NotImplemented:
            return NotImplemented
        return KForm(self.n, self.p, self.coeffs - other.coeffs)

    def __neg__(self):
        return KForm(self.n, self.p, -self.coeffs)

    def __mul__(self, s):
        if isinstance(s, KForm):
            return NotImplemented
        return KForm(self.n, self.p, float(s) * self.coeffs)

    __rmul__ = __mul__

    def __truediv__(self, s):
        return KForm(self.n, self.p, self.coeffs / float(s))

    def __xor__(self, other):
        return wedge(self, other)

    def inner(self, other: "KForm") -> float:
        self._compatible(other)
        return float(self.coeffs @ other.coeffs)

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def is_zero(self, tol: float = 1e-9) -> bool:
        return self.norm() <= tol

    def allclose(self, other: "KForm", atol: float = 1e-9) -> bool:
        self._compatible(other)
        return bool(np.max(np.abs(self.coeffs - other.coeffs), initial=0.0) <= atol)

    def terms(self, tol: float = 0.0) -> dict[tuple[int, ...], float]:
        """Nonzero coefficients keyed by 1-based index tuples."""
        return {
            tuple(int(i) + 1 for i in idx): float(c)
            for idx, c in zip(basis_indices(self.n, self.p), self.coeffs)
            if abs(c) > tol
        }

    def __repr__(self):
        body = " + ".join(
            f"{c:g}*e{''.join(map(str, idx)) if self.n < 10 else '_' + '.'.join(map(str, idx))}"
            for idx, c in self.terms().items()
        )
        return f"KForm(n={self.n}, p={self.p}, {body or '0'})"

    # serialisation
    def to_json(self) -> dict:
        return {
            "n": self.n,
            "p": self.p,
            "terms": [{"indices": list(idx), "coeff": c} for idx, c in self.terms().items()],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "KForm":
        try:
            n, p = int(data["n"]), int(data["p"])
            raw_terms = data.get("terms", [])
        except (KeyError, TypeError, ValueError) as exc:
            raise FormError(f"form record needs integer 'n' and 'p': {exc}") from None
        c = np.zeros(dim_forms(n, p))
        for k, term in enumerate(raw_terms):
            try:
                idx = [int(i) for i in term["indices"]]
                val = float(term["coeff"])
            except (KeyError, TypeError, ValueError):
                raise FormError(f"term {k}: needs 'indices' and numeric 'coeff'") from None
            if len(idx) != p:
                raise FormError(f"term {k}: expected {p} indices, got {len(idx)}")
            if any(j <= i for i, j in zip(idx, idx[1:])):
                raise FormError(f"term {k}: indices must be strictly increasing")
            if idx and (idx[0] < 1 or idx[-1] > n):
                raise FormError(f"term {k}: indices must lie in 1..{n}")
            if not np.isfinite(val):
                raise FormError(f"term {k}: non-finite coefficient")
            c[index_of(n, [i - 1 for i in idx])] += val
        return cls(n, p, c)


def _perm_sign(perm) -> int:
    perm = list(perm)
    s = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            s = -s
    return s


def _same_n(*forms: KForm) -> int:
    n = forms[0].n
    for f in forms[1:]:
        if f.n != n:
            raise FormError(f"ambient mismatch: R^{n} vs R^{f.n}")
    return n


# ---------------------------------------------------------------------------
# operations


def wedge(phi: KForm, psi: KForm) -> KForm:
    """Exterior product; the result is the (empty) zero form when p + q > n."""
    n = _same_n(phi, psi)
    p, q = phi.p, psi.p
    if p + q > n:
        return KForm.zero(n, p + q)
    a, b, out, s = wedge_table(n, p, q)
    c = kernels.bilinear_apply(a, b, out, s, phi.coeffs[None, :], psi.coeffs[None, :], dim_forms(n, p + q))
    return KForm(n, p + q, c[0])


def wedge_matrix(phi: KForm, q: int) -> np.ndarray:
    """Matrix of ``psi -> phi ^ psi`` on q-forms, shape (C(n,p+q), C(n,q))."""
    n, p = phi.n, phi.p
    if p + q > n:
        return np.zeros((0, dim_forms(n, q)))
    a, b, out, s = wedge_table(n, p, q)
    return kernels.bilinear_fix_left(a, b, out, s, phi.coeffs, dim_forms(n, q), dim_forms(n, p + q))


def contraction_array(T: KForm, q: int) -> np.ndarray:
    """All ``L*_{e_J} T`` for increasing q-tuples J, shape (C(n,q), C(n,p-q))."""
    n, p = T.n, T.p
    if q > p:
        raise FormError(f"cannot contract a {p}-form by a {q}-form")
    a, b, out, s = wedge_table(n, q, p - q)
    return kernels.bilinear_adjoint(
        a, b, out, s, T.coeffs[None, :], dim_forms(n, q), dim_forms(n, p - q)
    )[0]


def contract_adjoint(zeta: KForm, T: KForm) -> KForm:
    """``L*_zeta T``, the metric adjoint of ``zeta ^ .`` applied to T."""
    n = _same_n(zeta, T)
    if zeta.p > T.p:
        raise FormError(f"cannot contract a {T.p}-form by a {zeta.p}-form")
    return KForm(n, T.p - zeta.p, zeta.coeffs @ contraction_array(T, zeta.p))


def interior(x, T: KForm) -> KForm:
    """Interior product ``x _| T`` for a vector (array or 1-form) x."""
    if not isinstance(x, KForm):
        x = KForm.vector(x)
    return contract_adjoint(x, T)


def sharp(alpha: KForm) -> np.ndarray:
    """Skew matrix F with ``alpha(x, y) = g(F x, y)``."""
    if alpha.p != 2:
        raise FormError(f"sharp needs a 2-form, got degree {alpha.p}")
    return sharp_array(alpha.coeffs, alpha.n)


def sharp_array(coeffs, n: int) -> np.ndarray:
    """Batched :func:`sharp` on coefficient arrays of shape (..., C(n,2))."""
    coeffs = np.asarray(coeffs, dtype=float)
    pairs = basis_indices(n, 2)
    F = np.zeros(coeffs.shape[:-1] + (n, n))
    # F[j, i] = alpha(e_i, e_j)
    F[..., pairs[:, 1], pairs[:, 0]] = coeffs
    F[..., pairs[:, 0], pairs[:, 1]] = -coeffs
    return F


def flat(F) -> KForm:
    """2-form ``g(F ., .)`` of a skew-symmetric matrix."""
    F = np.asarray(F, dtype=float)
    if F.ndim != 2 or F.shape[0] != F.shape[1]:
        raise FormError("flat needs a square matrix")
    if not np.allclose(F, -F.T, atol=1e-12):
        raise FormError("flat needs a skew-symmetric matrix")
    return KForm(F.shape[0], 2, flat_array(F))


def flat_array(F) -> np.ndarray:
    """Batched 2-form coefficients ``alpha_ij = (F)_{ji}`` of (..., n, n) arrays."""
    F = np.asarray(F, dtype=float)
    n = F.shape[-1]
    pairs = basis_indices(n, 2)
    return F[..., pairs[:, 1], pairs[:, 0]]


def sharp_flat(x):
    """The isomorphism between 2-forms and skew maps, in whichever direction applies."""
    if isinstance(x, KForm):
        return sharp(x)
    return flat(x)


def form_action(alpha: KForm, gamma: KForm) -> KForm:
    """``[alpha, gamma] = sum_i (e_i _| alpha) ^ (e_i _| gamma)`` for a 2-form alpha."""
    if alpha.p != 2:
        raise FormError(f"first argument must be a 2-form, got degree {alpha.p}")
    n = _same_n(alpha, gamma)
    a, b, out, s = action_table(n, gamma.p)
    c = kernels.bilinear_apply(a, b, out, s, alpha.coeffs[None, :], gamma.coeffs[None, :], dim_forms(n, gamma.p))
    return KForm(n, gamma.p, c[0])


def action_matrix(alpha_coeffs, n: int, p: int) -> np.ndarray:
    """Matrix of ``gamma -> [alpha, gamma]`` on p-forms."""
    a, b, out, s = action_table(n, p)
    d = dim_forms(n, p)
    return kernels.bilinear_fix_left(a, b, out, s, np.asarray(alpha_coeffs, dtype=float), d, d)


def stabilizer_matrix(phi: KForm) -> np.ndarray:
    """Matrix of ``alpha -> [alpha, phi]`` from 2-forms to p-forms."""
    a, b, out, s = action_table(phi.n, phi.p)
    return kernels.bilinear_fix_right(
        a, b, out, s, phi.coeffs, dim_forms(phi.n, 2), dim_forms(phi.n, phi.p)
    )


def bracket_arrays(A, B, n: int) -> np.ndarray:
    """Row-wise commutators of 2-form coefficient arrays A, B of shape (m, C(n,2))."""
    a, b, out, s = action_table(n, 2)
    return kernels.bilinear_apply(
        a, b, out, s, np.atleast_2d(A).astype(float), np.atleast_2d(B).astype(float), dim_forms(n, 2)
    )


def alternation(eta: Sequence[KForm]) -> KForm:
    """``a(eta) = sum_i e_i ^ eta_{e_i}`` for eta in Lambda^1 (x) Lambda^p."""
    eta = list(eta)
    if not eta:
        raise FormError("empty input")
    n = _same_n(*eta)
    if len(eta) != n or len({f.p for f in eta}) != 1:
        raise FormError(f"expected {n} forms of a common degree")
    p = eta[0].p
    acc = KForm.zero(n, p + 1)
    for i, f in enumerate(eta):
        e = np.zeros(n)
        e[i] = 1.0
        acc = acc + wedge(KForm.vector(e), f)
    return acc


def sym_alternation(S, n: int) -> KForm:
    """Alternation ``S^2(Lambda^2) -> Lambda^4``: ``sum_k s_k b_k ^ b_k`` for ``S = sum s_k b_k b_k^T``."""
    S = np.asarray(S, dtype=float)
    N = dim_forms(n, 2)
    if S.shape != (N, N):
        raise FormError(f"expected a {N}x{N} array over Lambda^2(R^{n})")
    if 4 > n:
        return KForm.zero(n, 4)
    a, b, out, s = wedge_table(n, 2, 2)
    c = np.zeros(dim_forms(n, 4))
    np.add.at(c, out, s * S[a, b])
    return KForm(n, 4, c)


def trace_t(eta: Sequence[KForm]) -> KForm:
    """``t(eta) = sum_i e_i _| eta_{e_i}``."""
    eta = list(eta)
    if not eta:
        raise FormError("empty input")
    n = _same_n(*eta)
    if len(eta) != n or len({f.p for f in eta}) != 1:
        raise FormError(f"expected {n} forms of a common degree")
    p = eta[0].p
    if p == 0:
        raise FormError("trace of Lambda^1 (x) Lambda^0 is undefined")
    acc = np.zeros(dim_forms(n, p - 1))
    for i, f in enumerate(eta):
        acc += contraction_array(f, 1)[i]
    return KForm(n, p - 1, acc)


def bullet(T: KForm, phi: KForm) -> KForm:
    """``T . phi = sum_i (e_i _| T) ^ (e_i _| phi)``."""
    n = _same_n(T, phi)
    if T.p < 1 or phi.p < 1:
        raise FormError("both forms need degree at least 1")
    CT = contraction_array(T, 1)
    CP = contraction_array(phi, 1)
    p, q = T.p - 1, phi.p - 1
    if p + q > n:
        return KForm.zero(n, p + q)
    a, b, out, s = wedge_table(n, p, q)
    rows = kernels.bilinear_apply(a, b, out, s, CT, CP, dim_forms(n, p + q))
    return KForm(n, p + q, rows.sum(axis=0))


def restrict(T: KForm, U) -> KForm:
    """Pull back T along the columns of U (an n x m matrix), giving a form on R^m."""
    U = np.asarray(U, dtype=float)
    n, m = U.shape
    if n != T.n:
        raise FormError("restriction frame has the wrong ambient dimension")
    return KForm(m, T.p, pullback_matrix(U, T.p) @ T.coeffs)


def pullback_matrix(U, p: int) -> np.ndarray:
    """Matrix of the pullback ``Lambda^p(R^n) -> Lambda^p(R^m)`` along ``U`` (n x m).

    Entry (J, I) is the p x p minor ``det U[I, J]``.
    """
    U = np.asarray(U, dtype=float)
    n, m = U.shape
    rows, cols = basis_indices(m, p), basis_indices(n, p)
    if p == 0:
        return np.ones((1, 1))
    if len(rows) == 0 or len(cols) == 0:
        return np.zeros((len(rows), len(cols)))
    sub = U[cols[None, :, :, None], rows[:, None, None, :]]  # (J, I, p, p)
    return np.linalg.det(sub)


def pushforward_matrix(U, p: int) -> np.ndarray:
    """Matrix of ``Lambda^p(R^m) -> Lambda^p(R^n)`` along an isometric embedding ``U`` (n x m)."""
    return pullback_matrix(U, p).T


def formal_identity_sides(a1: KForm, a2: KForm, a3: KForm) -> tuple[KForm, KForm]:
    """Both sides of ``L*_{a1}(a2 ^ a3) = flat(F3 F1 F2 + F2 F1 F3) + <a1,a2> a3 + <a3,a1> a2``."""
    F1, F2, F3 = sharp(a1), sharp(a2), sharp(a3)
    lhs = contract_adjoint(a1, wedge(a2, a3))
    rhs = flat(F3 @ F1 @ F2 + F2 @ F1 @ F3) + a1.inner(a2) * a3 + a3.inner(a1) * a2
    return lhs, rhs
