"""Dense linear algebra: floating ranks/kernels, subspaces, and an exact backend.

The floating side works on numpy arrays with a relative rank tolerance.  The
exact side works on Python integers/``Fraction`` (fraction-free Bareiss
elimination for ranks, Gauss-Jordan for kernels) and, through
:class:`ExactSpan`, on subspaces defined over a real quadratic field
Q(sqrt d).  Quadratic data are *realified*: an element ``u + sqrt(d) w`` is the
rational vector ``(u, w)`` and a Q(sqrt d)-linear map ``A + sqrt(d) B``
becomes the rational block matrix ``[[A, d B], [B, A]]``, whose rank is twice
the rank over the field.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

import numpy as np

from . import kernels

DEFAULT_TOL = 1e-9


class LinalgInputError(ValueError):
    """Malformed input to a linear-algebra routine."""


# ---------------------------------------------------------------------------
# floating backend


def _as_finite(M) -> np.ndarray:
    M = np.asarray(M, dtype=float)
    if M.ndim == 1:
        M = M[None, :]
    if M.ndim != 2:
        raise LinalgInputError(f"expected a matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise LinalgInputError("matrix has non-finite entries")
    return M


def numerical_rank(M, tol: float = DEFAULT_TOL) -> int:
    M = _as_finite(M)
    if M.size == 0:
        return 0
    s = np.linalg.svd(M, compute_uv=False)
    if s[0] == 0.0:
        return 0
    return int(np.sum(s > tol * s[0]))


def rank_nullspace(M, tol: float = DEFAULT_TOL) -> tuple[int, "Subspace"]:
    """Rank of ``M`` and an orthonormal basis of its kernel.

    Singular values below ``tol * sigma_max`` count as zero.
    """
    if tol <= 0:
        raise LinalgInputError("tol must be positive")
    M = _as_finite(M)
    rows, cols = M.shape
    if rows == 0 or cols == 0 or not np.any(M):
        return 0, Subspace(cols, np.eye(cols), tol)
    _, s, vh = np.linalg.svd(M, full_matrices=True)
    rank = int(np.sum(s > tol * s[0]))
    return rank, Subspace(cols, vh[rank:].copy(), tol)


def nullspace(M, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal kernel basis as rows."""
    return rank_nullspace(M, tol)[1].basis


@dataclass(frozen=True, eq=False)
class Subspace:
    """A linear subspace of R^ambient_dim with an orthonormal row basis."""

    ambient_dim: int
    basis: np.ndarray
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        basis = np.asarray(self.basis, dtype=float).reshape(-1, self.ambient_dim)
        basis.setflags(write=False)
        object.__setattr__(self, "basis", basis)

    @classmethod
    def span(cls, vectors, ambient_dim: int | None = None, tol: float = DEFAULT_TOL):
        V = np.asarray(vectors, dtype=float)
        if ambient_dim is None:
            ambient_dim = V.shape[-1]
        V = V.reshape(-1, ambient_dim)
        if not np.all(np.isfinite(V)):
            raise LinalgInputError("non-finite spanning vectors")
        return cls(ambient_dim, kernels.gram_schmidt(np.ascontiguousarray(V), tol), tol)

    @classmethod
    def full(cls, n: int, tol: float = DEFAULT_TOL):
        return cls(n, np.eye(n), tol)

    @classmethod
    def zero(cls, n: int, tol: float = DEFAULT_TOL):
        return cls(n, np.zeros((0, n)), tol)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def __len__(self):
        return self.dim

    def _check(self, other: "Subspace"):
        if other.ambient_dim != self.ambient_dim:
            raise LinalgInputError(
                f"ambient dimension mismatch: {self.ambient_dim} vs {other.ambient_dim}"
            )

    def projector(self) -> np.ndarray:
        return self.basis.T @ self.basis

    def project(self, v) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        return (v @ self.basis.T) @ self.basis

    def complement(self) -> "Subspace":
        if self.dim == 0:
            return Subspace.full(self.ambient_dim, self.tol)
        return Subspace(self.ambient_dim, nullspace(self.basis, self.tol), self.tol)

    def sum(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace.span(
            np.vstack([self.basis, other.basis]), self.ambient_dim, max(self.tol, other.tol)
        )

    def intersect(self, other: "Subspace") -> "Subspace":
        self._check(other)
        tol = max(self.tol, other.tol)
        constraints = np.vstack([self.complement().basis, other.complement().basis])
        if constraints.shape[0] == 0:
            return Subspace.full(self.ambient_dim, tol)
        return Subspace(self.ambient_dim, nullspace(constraints, tol), tol)

    def contains(self, other) -> bool:
        """True when every basis vector (or the given vectors) lies in self within tol."""
        if isinstance(other, Subspace):
            self._check(other)
            V = other.basis
        else:
            V = np.atleast_2d(np.asarray(other, dtype=float))
        if V.shape[0] == 0:
            return True
        resid = V - self.project(V)
        scale = max(1.0, float(np.max(np.linalg.norm(V, axis=1))))
        return bool(np.max(np.linalg.norm(resid, axis=1)) <= 1e3 * self.tol * scale)

    def equals(self, other: "Subspace") -> bool:
        return self.dim == other.dim and self.contains(other) and other.contains(self)


def subspace_ops(A: Subspace, B, kind: str):
    """Dispatch for the lattice operations on subspaces.

    ``kind`` is one of ``intersect``, ``sum``, ``complement_in_ambient``
    (``B`` ignored), ``contains`` and ``project_vector`` (``B`` is a vector).
    """
    if kind == "complement_in_ambient":
        return A.complement()
    if kind == "project_vector":
        v = np.asarray(B, dtype=float)
        if v.shape[-1] != A.ambient_dim:
            raise LinalgInputError("vector length does not match ambient dimension")
        return A.project(v)
    if not isinstance(B, Subspace):
        raise LinalgInputError(f"{kind} needs a Subspace argument")
    if kind == "intersect":
        return A.intersect(B)
    if kind == "sum":
        return A.sum(B)
    if kind == "contains":
        return A.contains(B)
    raise LinalgInputError(f"unknown subspace operation {kind!r}")


# ---------------------------------------------------------------------------
# exact backend


def _fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, (float, np.floating)):
        if not np.isfinite(x):
            raise LinalgInputError("non-finite entry in exact input")
        return Fraction(float(x))
    return Fraction(x)


def integer_rows(M) -> list[list[int]]:
    """Scale each row of a rational matrix to integers (row spaces unchanged)."""
    out = []
    for row in M:
        fr = [_fraction(x) for x in row]
        den = 1
        for x in fr:
            den = lcm(den, x.denominator)
        ints = [int(x * den) for x in fr]
        g = 0
        for x in ints:
            g = gcd(g, x)
        if g > 1:
            ints = [x // g for x in ints]
        out.append(ints)
    return out


def exact_rank(M) -> int:
    """Rank over Q by fraction-free (Bareiss) elimination."""
    rows = [r for r in integer_rows(M) if any(r)]
    if not rows:
        return 0
    A = np.array(rows, dtype=object)
    m, ncols = A.shape
    r = 0
    prev = 1
    for c in range(ncols):
        if r == m:
            break
        col = A[r:, c]
        nz = np.nonzero(col != 0)[0]
        if len(nz) == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        pv = A[r, c]
        if r + 1 < m and c + 1 < ncols:
            f = A[r + 1 :, c].reshape(-1, 1)
            A[r + 1 :, c + 1 :] = (pv * A[r + 1 :, c + 1 :] - f * A[r, c + 1 :]) // prev
        A[r + 1 :, c] = 0
        prev = pv
        r += 1
    return r


class EchelonBasis:
    """Incrementally maintained reduced row-echelon basis over Q."""

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.pivots: list[int] = []
        self.rows: list[np.ndarray] = []

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, v) -> np.ndarray:
        w = np.array([_fraction(x) for x in v], dtype=object)
        for p, row in zip(self.pivots, self.rows):
            if w[p] != 0:
                w = w - w[p] * row
        return w

    def contains(self, v) -> bool:
        return not np.any(self.reduce(v) != 0)

    def add(self, v) -> bool:
        w = self.reduce(v)
        nz = np.nonzero(w != 0)[0]
        if len(nz) == 0:
            return False
        p = int(nz[0])
        w = w / w[p]
        for i, row in enumerate(self.rows):
            if row[p] != 0:
                self.rows[i] = row - row[p] * w
        self.pivots.append(p)
        self.rows.append(w)
        return True

    def nullspace(self) -> list[list[int]]:
        """Integer basis of the orthogonal complement of the row space."""
        pivset = set(self.pivots)
        free = [c for c in range(self.ncols) if c not in pivset]
        basis = []
        for fcol in free:
            v = [Fraction(0)] * self.ncols
            v[fcol] = Fraction(1)
            for p, row in zip(self.pivots, self.rows):
                v[p] = -row[fcol]
            basis.append(v)
        return integer_rows(basis)


def exact_nullspace(M, ncols: int | None = None) -> list[list[int]]:
    """Integer basis of ``{x : M x = 0}`` over Q."""
    M = list(M)
    if ncols is None:
        if not M:
            raise LinalgInputError("cannot infer column count of an empty matrix")
        ncols = len(M[0])
    eb = EchelonBasis(ncols)
    for row in M:
        eb.add(row)
    return eb.nullspace()


def realify_map(re, ir=None, d: int = 1):
    """Rational matrix of the Q(sqrt d)-linear map ``re + sqrt(d) ir``."""
    re = np.asarray(re, dtype=object)
    if d == 1:
        return re if ir is None else re + np.asarray(ir, dtype=object)
    if ir is None:
        ir = np.zeros_like(re)
    ir = np.asarray(ir, dtype=object)
    return np.block([[re, d * ir], [ir, re]])


def _int_array(v) -> np.ndarray:
    return np.array([int(x) for x in v], dtype=object)


@dataclass
class ExactSpan:
    """A subspace of Q(sqrt d)^ncoords given by an independent generator list.

    ``elements`` holds pairs ``(u, w)`` of integer vectors standing for
    ``u + sqrt(d) w`` (``w`` is all-zero when ``d == 1``).
    """

    ncoords: int
    d: int = 1
    elements: list = field(default_factory=list)

    def __post_init__(self):
        self._echelon = EchelonBasis(self.r * self.ncoords)
        old, self.elements = self.elements, []
        for u, w in old:
            self.add(u, w)

    @property
    def r(self) -> int:
        return 1 if self.d == 1 else 2

    @property
    def dim(self) -> int:
        return len(self.elements)

    def _rows(self, u, w):
        if self.d == 1:
            return [list(u)]
        return [list(u) + list(w), [self.d * x for x in w] + list(u)]

    def _scaled(self, u, w):
        w = [0] * self.ncoords if w is None else w
        both = integer_rows([list(u) + list(w)])[0]
        return _int_array(both[: self.ncoords]), _int_array(both[self.ncoords :])

    def add(self, u, w=None) -> bool:
        """Add ``u + sqrt(d) w``; returns False if it was already in the span."""
        u, w = self._scaled(u, w)
        if self.d == 1 and np.any(w != 0):
            raise LinalgInputError("irrational part supplied for a rational span")
        rows = self._rows(u, w)
        if not self._echelon.add(rows[0]):
            return False
        for extra in rows[1:]:
            self._echelon.add(extra)
        self.elements.append((u, w))
        return True

    def contains(self, u, w=None) -> bool:
        return self._echelon.contains(self._rows(*self._scaled(u, w))[0])

    def annihilator(self) -> np.ndarray:
        """Integer rows K with ``K @ realified(x) == 0`` iff x is in the span."""
        ns = self._echelon.nullspace()
        if not ns:
            return np.zeros((0, self.r * self.ncoords), dtype=object)
        return np.array(ns, dtype=object)

    def to_float(self) -> np.ndarray:
        s = np.sqrt(self.d)
        return np.array(
            [np.asarray(u, float) + s * np.asarray(w, float) for u, w in self.elements]
        ).reshape(-1, self.ncoords)

    @classmethod
    def from_rational(cls, vectors: Iterable[Sequence], ncoords: int | None = None) -> "ExactSpan":
        vecs = integer_rows(list(vectors))
        n = ncoords if ncoords is not None else len(vecs[0])
        span = cls(n, 1)
        for v in vecs:
            span.add(v)
        return span
