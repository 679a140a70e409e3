"""Lie subalgebras of so(n) given by 2-forms, and their representations on R^n.

A :class:`LieSubalgebra` carries an orthonormal basis of 2-forms (floating
point) and, when the algebra is defined over a quadratic field, an exact
:class:`~skewprolong.linalg.ExactSpan` used by the rational backend.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Sequence

import numpy as np

from . import exterior as ext
from .exterior import KForm
from .linalg import (
    DEFAULT_TOL,
    EchelonBasis,
    ExactSpan,
    LinalgInputError,
    Subspace,
    exact_nullspace,
    integer_rows,
    nullspace,
)


class RepError(ValueError):
    """Invalid representation input."""


class AmbiguousSplit(RuntimeError):
    """Eigenvalue clusters of a commutant element could not be separated reliably."""

    def __init__(self, message: str, gaps=()):
        super().__init__(message)
        self.gaps = list(gaps)


# ---------------------------------------------------------------------------
# exact brackets over Q(sqrt d)


def _exact_bilinear(table, x, y, size):
    a, b, out, s = table
    res = [0] * size
    for ai, bi, oi, si in zip(a, b, out, s):
        xa, yb = x[ai], y[bi]
        if xa and yb:
            res[oi] += int(si) * xa * yb
    return res


def exact_bracket(x, y, n: int, d: int = 1):
    """Bracket of exact 2-forms ``x = (u, w)`` meaning ``u + sqrt(d) w``."""
    table = ext.action_table(n, 2)
    N = comb(n, 2)
    (ux, wx), (uy, wy) = x, y
    u = _exact_bilinear(table, ux, uy, N)
    w = [0] * N
    if d != 1:
        ww = _exact_bilinear(table, wx, wy, N)
        uw = _exact_bilinear(table, ux, wy, N)
        wu = _exact_bilinear(table, wx, uy, N)
        u = [p + d * q for p, q in zip(u, ww)]
        w = [p + q for p, q in zip(uw, wu)]
    return u, w


def exact_closure(span: ExactSpan, n: int, max_rounds: int | None = None) -> ExactSpan:
    """Close an exact span of 2-forms under the bracket (in place); returns it."""
    d = span.d
    frontier = list(span.elements)
    rounds = 0
    limit = max_rounds if max_rounds is not None else comb(n, 2) + 1
    while frontier:
        rounds += 1
        if rounds > limit:
            raise RepError("exact closure did not terminate")
        new = []
        current = list(span.elements)
        for x in frontier:
            for y in current:
                z = exact_bracket(x, y, n, d)
                if any(z[0]) or any(z[1]):
                    if span.add(*z):
                        new.append(span.elements[-1])
        frontier = new
    return span


# ---------------------------------------------------------------------------
# the subalgebra type


@dataclass(frozen=True, eq=False)
class LieSubalgebra:
    """A subalgebra of so(n) with an orthonormal basis of 2-forms (rows of ``basis``)."""

    n: int
    basis: np.ndarray
    closed_verified: bool = False
    tol: float = DEFAULT_TOL
    exact: ExactSpan | None = field(default=None, repr=False)
    name: str = ""

    def __post_init__(self):
        N = comb(self.n, 2)
        B = np.asarray(self.basis, dtype=float).reshape(-1, N)
        if B.shape[0] and np.max(np.abs(B @ B.T - np.eye(B.shape[0]))) > 1e3 * self.tol:
            raise RepError("basis is not orthonormal")
        B.setflags(write=False)
        object.__setattr__(self, "basis", B)
        if self.exact is not None and self.exact.dim != B.shape[0]:
            raise RepError(
                f"exact span has dim {self.exact.dim}, floating basis has {B.shape[0]}"
            )

    @classmethod
    def from_span(cls, n: int, vectors, tol: float = DEFAULT_TOL, exact=None, name="", verify=True):
        V = np.asarray(vectors, dtype=float).reshape(-1, comb(n, 2))
        B = Subspace.span(V, comb(n, 2), tol).basis
        g = cls(n, B, False, tol, exact, name)
        if verify:
            g = g.verified()
        return g

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def subspace(self) -> Subspace:
        return Subspace(comb(self.n, 2), self.basis, self.tol)

    def forms(self) -> list[KForm]:
        return [KForm(self.n, 2, row) for row in self.basis]

    def matrices(self) -> np.ndarray:
        """Skew matrices of the basis, shape (dim, n, n)."""
        return ext.sharp_array(self.basis, self.n)

    def closure_residual(self) -> float:
        if self.dim == 0:
            return 0.0
        k = self.dim
        ii, jj = np.triu_indices(k, 1)
        if len(ii) == 0:
            return 0.0
        br = ext.bracket_arrays(self.basis[ii], self.basis[jj], self.n)
        resid = br - (br @ self.basis.T) @ self.basis
        return float(np.max(np.abs(resid)))

    def verified(self) -> "LieSubalgebra":
        res = self.closure_residual()
        if res > 1e3 * self.tol:
            raise RepError(f"span is not closed under the bracket (residual {res:.3g})")
        return LieSubalgebra(self.n, self.basis, True, self.tol, self.exact, self.name)

    def contains(self, alpha) -> bool:
        if isinstance(alpha, KForm):
            alpha = alpha.coeffs
        return self.subspace.contains(alpha)

    def exact_dim(self) -> int | None:
        return None if self.exact is None else self.exact.dim

    def with_name(self, name: str) -> "LieSubalgebra":
        return LieSubalgebra(self.n, self.basis, self.closed_verified, self.tol, self.exact, name)

    # serialisation
    def to_json(self) -> dict:
        out = {"n": self.n, "basis": [f.to_json() for f in self.forms()]}
        if self.name:
            out["name"] = self.name
        if self.exact is not None:
            out["exact"] = {
                "d": self.exact.d,
                "generators": [
                    {"re": [int(x) for x in u], "irr": [int(x) for x in w]}
                    for u, w in self.exact.elements
                ],
            }
        return out

    @classmethod
    def from_json(cls, data, tol: float = DEFAULT_TOL) -> "LieSubalgebra":
        try:
            n = int(data["n"])
            raw = data["basis"]
        except (KeyError, TypeError, ValueError):
            raise RepError("subalgebra record needs 'n' and 'basis'") from None
        forms = []
        for k, rec in enumerate(raw):
            try:
                f = KForm.from_json(rec)
            except ext.FormError as exc:
                raise RepError(f"basis element {k}: {exc}") from None
            if f.n != n or f.p != 2:
                raise RepError(f"basis element {k}: expected a 2-form on R^{n}")
            forms.append(f.coeffs)
        exact = None
        if "exact" in data:
            d = int(data["exact"].get("d", 1))
            exact = ExactSpan(comb(n, 2), d)
            for rec in data["exact"]["generators"]:
                exact.add(rec["re"], rec.get("irr"))
        elif forms and _is_rational(np.array(forms)):
            exact = ExactSpan.from_rational(_rationalize(np.array(forms)), comb(n, 2))
        V = np.array(forms).reshape(-1, comb(n, 2))
        g = cls.from_span(n, V, tol, None, data.get("name", ""), verify=False)
        if exact is not None and exact.dim == g.dim:
            g = LieSubalgebra(n, g.basis, False, tol, exact, g.name)
        return g.verified()


def _rationalize(A, max_den: int = 10**6):
    from fractions import Fraction

    return [[Fraction(float(x)).limit_denominator(max_den) for x in row] for row in np.atleast_2d(A)]


def _is_rational(A, max_den: int = 10**6) -> bool:
    A = np.atleast_2d(np.asarray(A, dtype=float))
    R = np.array([[float(x) for x in row] for row in _rationalize(A, max_den)])
    return bool(np.all(np.abs(R - A) <= 1e-13 * max(1.0, float(np.max(np.abs(A), initial=0)))))


# ---------------------------------------------------------------------------
# construction


def lie_closure(gens, n: int | None = None, tol: float = DEFAULT_TOL, exact: bool | None = None, name="") -> LieSubalgebra:
    """Smallest bracket-closed subspace of 2-forms containing ``gens``.

    ``gens`` may be KForms or coefficient rows.  With ``exact`` (default:
    whenever the generators are rational) the closure is also carried out
    over Q and attached to the result.
    """
    rows = []
    for g in gens:
        if isinstance(g, KForm):
            if g.p != 2:
                raise RepError("generators must be 2-forms")
            if n is not None and g.n != n:
                raise RepError("generators live on different spaces")
            n = g.n
            rows.append(g.coeffs)
        else:
            rows.append(np.asarray(g, dtype=float))
    if n is None:
        if not rows:
            raise RepError("need at least one generator")
        m = len(rows[0])
        n = int(round((1 + np.sqrt(1 + 8 * m)) / 2))
    N = comb(n, 2)
    V = np.array(rows, dtype=float).reshape(-1, N)
    Q = Subspace.span(V, N, tol).basis
    frontier = Q
    for _ in range(N + 1):
        if frontier.shape[0] == 0:
            break
        k, f = Q.shape[0], frontier.shape[0]
        ii = np.repeat(np.arange(f), k)
        jj = np.tile(np.arange(k), f)
        br = ext.bracket_arrays(frontier[ii], Q[jj], n)
        scale = max(1.0, float(np.max(np.abs(br), initial=0)))
        resid = br - (br @ Q.T) @ Q
        keep = np.linalg.norm(resid, axis=1) > tol * scale
        if not np.any(keep):
            frontier = np.zeros((0, N))
            break
        grown = Subspace.span(np.vstack([Q, resid[keep]]), N, tol).basis
        frontier = grown[Q.shape[0]:]
        Q = grown
    else:
        raise RepError("closure did not stabilise")
    espan = None
    if exact is None:
        exact = bool(rows) and _is_rational(V)
    if exact:
        espan = ExactSpan.from_rational(_rationalize(V), N) if rows else ExactSpan(N)
        exact_closure(espan, n)
        if espan.dim != Q.shape[0]:
            raise RepError(
                f"floating closure has dim {Q.shape[0]} but exact closure has dim {espan.dim}"
            )
    return LieSubalgebra(n, Q, False, tol, espan, name).verified()


def exact_subalgebra(n: int, generators, d: int = 1, tol: float = DEFAULT_TOL, name="", close=True) -> LieSubalgebra:
    """Subalgebra from exact generators ``(u, w)`` (integer/Fraction rows, ``u + sqrt(d) w``)."""
    N = comb(n, 2)
    span = ExactSpan(N, d)
    for u, w in generators:
        span.add(u, w)
    if close:
        exact_closure(span, n)
    g = LieSubalgebra.from_span(n, span.to_float(), tol, None, name, verify=False)
    return LieSubalgebra(n, g.basis, False, tol, span, name).verified()


def isotropy_algebra(phi: KForm, tol: float = DEFAULT_TOL, exact: bool | None = None, name="") -> LieSubalgebra:
    """``{alpha in Lambda^2 : [alpha, phi] = 0}``."""
    if phi.is_zero(0.0):
        raise RepError("isotropy of the zero form is all of so(n)")
    M = ext.stabilizer_matrix(phi)
    B = nullspace(M, tol) if M.shape[0] else np.eye(comb(phi.n, 2))
    espan = None
    if exact is None:
        exact = _is_rational(phi.coeffs)
    if exact:
        c = _rationalize(phi.coeffs[None, :])[0]
        a, b, out, s = ext.action_table(phi.n, phi.p)
        N, P = comb(phi.n, 2), comb(phi.n, phi.p)
        Mx = [[0] * N for _ in range(P)]
        for ai, bi, oi, si in zip(a, b, out, s):
            if c[bi]:
                Mx[oi][ai] += int(si) * c[bi]
        espan = ExactSpan.from_rational(exact_nullspace(Mx, N), N)
        if espan.dim != B.shape[0]:
            raise RepError(
                f"isotropy dimension disagrees: float {B.shape[0]}, exact {espan.dim}"
            )
    return LieSubalgebra(phi.n, B, False, tol, espan, name).verified()


def full_so(n: int, tol: float = DEFAULT_TOL) -> LieSubalgebra:
    N = comb(n, 2)
    eye = [[int(i == j) for j in range(N)] for i in range(N)]
    return LieSubalgebra(n, np.eye(N), True, tol, ExactSpan.from_rational(eye, N) if N else ExactSpan(0), f"so({n})")


def embed_forms(coeffs, n_small: int, n_big: int, offset: int, p: int = 2):
    """Push p-form coefficients from R^n_small into coordinates offset.. of R^n_big."""
    coeffs = np.asarray(coeffs)
    small = ext.basis_indices(n_small, p)
    target = np.array([ext.index_of(n_big, tup + offset) for tup in small], dtype=np.int64)
    out = np.zeros(coeffs.shape[:-1] + (comb(n_big, p),), dtype=coeffs.dtype)
    if coeffs.dtype == object:
        out[...] = 0
    out[..., target] = coeffs
    return out


def direct_sum(parts: Sequence[LieSubalgebra], extra_dims: int = 0, tol: float | None = None, name="") -> LieSubalgebra:
    """Block sum acting on R^{n_1} + R^{n_2} + ... (+ a trivial R^extra_dims)."""
    n_big = sum(g.n for g in parts) + extra_dims
    tol = tol if tol is not None else max(g.tol for g in parts)
    rows, offset = [], 0
    espan = None
    ds = {g.exact.d for g in parts if g.exact is not None and g.exact.d != 1}
    have_exact = all(g.exact is not None for g in parts) and len(ds) <= 1
    if have_exact:
        espan = ExactSpan(comb(n_big, 2), ds.pop() if ds else 1)
    for g in parts:
        rows.append(embed_forms(g.basis, g.n, n_big, offset))
        if espan is not None:
            for u, w in g.exact.elements:
                espan.add(
                    embed_forms(np.array(u, dtype=object), g.n, n_big, offset),
                    embed_forms(np.array(w, dtype=object), g.n, n_big, offset),
                )
        offset += g.n
    B = np.vstack(rows) if rows else np.zeros((0, comb(n_big, 2)))
    name = name or "+".join(g.name or f"g{i}" for i, g in enumerate(parts))
    return LieSubalgebra(n_big, B, False, tol, espan, name).verified()


# ---------------------------------------------------------------------------
# analysis


def project(g: LieSubalgebra, F) -> tuple[KForm, KForm]:
    """Orthogonal decomposition ``F = F_g + F_perp``."""
    if not isinstance(F, KForm):
        F = KForm(g.n, 2, F)
    if F.n != g.n or F.p != 2:
        raise RepError("expected a 2-form on the same space")
    Fg = (F.coeffs @ g.basis.T) @ g.basis
    return KForm(g.n, 2, Fg), KForm(g.n, 2, F.coeffs - Fg)


def casimir(g: LieSubalgebra, k: int) -> np.ndarray:
    """``C^k = -sum_x [x, [x, .]]`` on k-forms, over the orthonormal basis of g."""
    if not 0 <= k <= g.n:
        raise RepError(f"degree {k} out of range for R^{g.n}")
    d = comb(g.n, k)
    C = np.zeros((d, d))
    for x in g.basis:
        A = ext.action_matrix(x, g.n, k)
        C -= A @ A
    return 0.5 * (C + C.T)


@dataclass(frozen=True, eq=False)
class IsotypicSplitting:
    """``V = V_0 + V_1 + ... `` with g acting trivially on V_0 and irreducibly on each V_k."""

    trivial: Subspace
    factors: tuple
    irreducible: tuple

    @property
    def n(self) -> int:
        return self.trivial.ambient_dim

    @property
    def dims(self) -> list[int]:
        return [f.dim for f in self.factors]

    def to_json(self) -> dict:
        return {
            "trivial": self.trivial.basis.tolist(),
            "factors": [f.basis.tolist() for f in self.factors],
        }


def _sym_basis(m: int) -> np.ndarray:
    out = []
    for i in range(m):
        for j in range(i, m):
            S = np.zeros((m, m))
            S[i, j] = S[j, i] = 1.0 if i == j else np.sqrt(0.5)
            out.append(S)
    return np.array(out)


def symmetric_commutant(mats: np.ndarray, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Basis (k, m, m) of symmetric matrices commuting with every matrix in ``mats``."""
    m = mats.shape[-1]
    Sb = _sym_basis(m)
    if mats.shape[0] == 0:
        return Sb
    # column s of the constraint map: [A_x, S_s] stacked over x
    cols = np.einsum("xij,sjk->sxik", mats, Sb) - np.einsum("sij,xjk->sxik", Sb, mats)
    M = cols.reshape(Sb.shape[0], -1).T
    K = nullspace(M, tol)
    return np.einsum("ks,sij->kij", K, Sb)


def _split_block(mats, U, rng, tol, depth=0):
    """Recursively split span(U) (columns) into irreducible invariant pieces."""
    m = U.shape[1]
    A = np.einsum("ia,xij,jb->xab", U, mats, U)
    comm = symmetric_commutant(A, tol)
    if comm.shape[0] <= 1:
        return [U]
    last_gaps = []
    for _attempt in range(5):
        c = rng.standard_normal(comm.shape[0])
        S = np.einsum("k,kij->ij", c, comm)
        w, vecs = np.linalg.eigh(S)
        scale = max(float(np.max(np.abs(w))), 1e-300)
        gaps = np.diff(w) / scale
        last_gaps = gaps.tolist()
        if np.any((gaps > 1e-7) & (gaps < 1e-4)):
            continue
        cuts = np.nonzero(gaps >= 1e-4)[0]
        if len(cuts) == 0:
            continue
        pieces = np.split(np.arange(m), cuts + 1)
        out = []
        for idx in pieces:
            out.extend(_split_block(mats, U @ vecs[:, idx], rng, tol, depth + 1))
        return out
    raise AmbiguousSplit(
        "could not separate eigenvalue clusters of a commutant element", last_gaps
    )


def _canonical_order(factors):
    def key(U):
        P = np.sum(U * U, axis=1)
        first = int(np.argmax(P > 1e-6))
        return (first, U.shape[1])

    return sorted(factors, key=key)


def _canonical_frame(U):
    """A deterministic orthonormal frame for span(U): aligned with coordinates where possible."""
    P = U @ U.T
    Q = Subspace.span(P, U.shape[0], 1e-9).basis.T
    return Q


def irreducible_split(g: LieSubalgebra, seed: int = 0, tol: float | None = None) -> IsotypicSplitting:
    """Orthogonal decomposition of R^n into the trivial part and irreducible pieces."""
    tol = g.tol if tol is None else tol
    n = g.n
    mats = g.matrices()
    if g.dim:
        trivial = Subspace(n, nullspace(mats.reshape(-1, n), tol), tol)
    else:
        trivial = Subspace.full(n, tol)
    W = trivial.complement()
    if W.dim == 0:
        return IsotypicSplitting(trivial, (), ())
    rng = np.random.default_rng(seed)
    blocks = _split_block(mats, W.basis.T, rng, tol)
    blocks = [_canonical_frame(U) for U in blocks]
    factors = tuple(Subspace(n, U.T, tol) for U in _canonical_order(blocks))
    irred = tuple(_is_irreducible(mats, F.basis.T, tol) for F in factors)
    return IsotypicSplitting(trivial, factors, irred)


def _is_irreducible(mats, U, tol) -> bool:
    A = np.einsum("ia,xij,jb->xab", U, mats, U)
    return symmetric_commutant(A, tol).shape[0] == 1


def is_irreducible(g: LieSubalgebra, tol: float | None = None) -> bool:
    """True when g acts irreducibly on all of R^n."""
    tol = g.tol if tol is None else tol
    if g.dim == 0:
        return False
    return _is_irreducible(g.matrices(), np.eye(g.n), tol)


def invariance_residual(g: LieSubalgebra, W: Subspace) -> float:
    """Largest component of ``x w`` outside W, over basis x and w."""
    mats = g.matrices()
    if W.dim == 0 or g.dim == 0:
        return 0.0
    img = np.einsum("xij,wj->xwi", mats, W.basis).reshape(-1, g.n)
    return float(np.max(np.abs(img - W.project(img))))


def kernel_ideal(g: LieSubalgebra, W: Subspace, tol: float | None = None) -> LieSubalgebra:
    """Elements of g that act as zero on the orthogonal complement of the invariant subspace W."""
    tol = g.tol if tol is None else tol
    if W.ambient_dim != g.n:
        raise RepError("subspace lives in the wrong ambient space")
    if invariance_residual(g, W) > 1e3 * tol:
        raise RepError("subspace is not invariant")
    Wp = W.complement()
    N = comb(g.n, 2)
    if g.dim == 0:
        return LieSubalgebra(g.n, np.zeros((0, N)), True, tol)
    if Wp.dim == 0:
        return g
    mats = g.matrices()
    M = np.einsum("xij,wj->wix", mats, Wp.basis).reshape(-1, g.dim)
    C = nullspace(M, tol)
    B = C @ g.basis
    return LieSubalgebra.from_span(g.n, B, tol) if B.shape[0] else LieSubalgebra(g.n, np.zeros((0, N)), True, tol)


def restrict(g: LieSubalgebra, W: Subspace, tol: float | None = None) -> LieSubalgebra:
    """The image of g in so(W), written in the orthonormal frame of W."""
    tol = g.tol if tol is None else tol
    U = W.basis.T
    A = np.einsum("ia,xij,jb->xab", U, g.matrices(), U)
    m = W.dim
    rows = ext.flat_array(A) if g.dim else np.zeros((0, comb(m, 2)))
    return LieSubalgebra.from_span(m, rows, tol)
