"""Concrete orthogonal representations and their model forms.

Names accepted by :func:`build` (case-insensitive, parentheses optional):

    so(n)            R^n            3 <= n <= 12
    u(m), su(m)      R^{2m}         2 <= m <= 6
    sp(m)            R^{4m}         1 <= m <= 3
    sp(m)+sp(1)      R^{4m}         1 <= m <= 3
    g2               R^7
    spin7            R^8
    adjoint-su(k)    R^{k^2-1}      k in {2, 3}
    adjoint-so(k)    R^{k(k-1)/2}   3 <= k <= 5

Entries can be joined with ``++`` to get block sums, e.g. ``adjoint-su3++spin7``.

The exceptional and quaternionic algebras are built as isotropy algebras of
their model forms, so every sign table below is checked by the dimension of
the resulting algebra.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb

import numpy as np

from . import exterior as ext
from .exterior import KForm
from .linalg import DEFAULT_TOL, ExactSpan, exact_nullspace
from .rep import (
    LieSubalgebra,
    direct_sum,
    embed_forms,
    exact_subalgebra,
    full_so,
    isotropy_algebra,
)

MAX_AMBIENT = 12


class CatalogError(ValueError):
    """Unknown entry or unsupported parameters."""


@dataclass(frozen=True, eq=False)
class CatalogEntry:
    name: str
    params: tuple
    rep: LieSubalgebra
    model_forms: dict = field(default_factory=dict)
    irreducible: bool = True

    @property
    def n(self) -> int:
        return self.rep.n

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "params": list(self.params),
            "n": self.n,
            "dim": self.rep.dim,
            "irreducible": self.irreducible,
            "rep": self.rep.to_json(),
            "model_forms": {k: f.to_json() for k, f in sorted(self.model_forms.items())},
        }


# ---------------------------------------------------------------------------
# model forms


def e(n: int, *idx: int) -> KForm:
    return KForm.basis(n, *idx)


def kaehler_form(m: int) -> KForm:
    """``omega = e_12 + e_34 + ... + e_{2m-1,2m}``."""
    n = 2 * m
    return sum((e(n, 2 * i + 1, 2 * i + 2) for i in range(1, m)), e(n, 1, 2))


ASSOCIATIVE_TERMS = {
    (1, 2, 3): 1, (1, 4, 5): 1, (1, 6, 7): 1, (2, 4, 6): 1,
    (2, 5, 7): -1, (3, 4, 7): -1, (3, 5, 6): -1,
}

COASSOCIATIVE_TERMS = {
    (4, 5, 6, 7): 1, (2, 3, 6, 7): 1, (2, 3, 4, 5): 1, (1, 3, 5, 7): 1,
    (1, 3, 4, 6): -1, (1, 2, 5, 6): -1, (1, 2, 4, 7): -1,
}


def associative_form() -> KForm:
    return KForm.from_terms(7, 3, ASSOCIATIVE_TERMS)


def cayley_form() -> KForm:
    """``e_0 ^ phi + *phi`` on R^8 with e_0 the first coordinate."""
    terms = {(1,) + tuple(i + 1 for i in k): v for k, v in ASSOCIATIVE_TERMS.items()}
    terms.update({tuple(i + 1 for i in k): v for k, v in COASSOCIATIVE_TERMS.items()})
    return KForm.from_terms(8, 4, terms)


def _right_mult(m: int) -> list[np.ndarray]:
    """Right multiplication by i, j, k on H^m = R^{4m}, as integer skew matrices."""
    base = {
        "i": [[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]],
        "j": [[0, 0, -1, 0], [0, 0, 0, -1], [1, 0, 0, 0], [0, 1, 0, 0]],
        "k": [[0, 0, 0, -1], [0, 0, 1, 0], [0, -1, 0, 0], [1, 0, 0, 0]],
    }
    return [np.kron(np.eye(m, dtype=int), np.array(base[q], dtype=int)) for q in "ijk"]


def quaternionic_form(m: int) -> KForm:
    """``sum_q omega_q ^ omega_q`` over the three right complex structures."""
    acc = KForm.zero(4 * m, 4)
    for R in _right_mult(m):
        w = ext.flat(R)
        acc = acc + ext.wedge(w, w)
    return acc


def cartan_form_from_structure(c: np.ndarray) -> KForm:
    """``T(x, y, z) = <[x, y], z>`` for structure constants ``[x_a, x_b] = c[a, b, k] x_k``."""
    dim = c.shape[0]
    idx = ext.basis_indices(dim, 3)
    return KForm(dim, 3, c[idx[:, 0], idx[:, 1], idx[:, 2]])


# ---------------------------------------------------------------------------
# generators


def _pair_row(n: int, i: int, j: int) -> list[int]:
    """Integer coefficients of e_ij (1-based, any order)."""
    row = [0] * comb(n, 2)
    a, b = sorted((i - 1, j - 1))
    row[ext.index_of(n, (a, b))] = 1 if i < j else -1
    return row


def _add(*rows, signs=None):
    signs = signs or [1] * len(rows)
    return [sum(s * r[k] for s, r in zip(signs, rows)) for k in range(len(rows[0]))]


def _unitary_offdiag(m: int) -> list[list[int]]:
    n = 2 * m
    out = []
    for j in range(1, m + 1):
        for k in range(j + 1, m + 1):
            a, b, c, d = 2 * j - 1, 2 * j, 2 * k - 1, 2 * k
            out.append(_add(_pair_row(n, a, c), _pair_row(n, b, d)))
            out.append(_add(_pair_row(n, a, d), _pair_row(n, b, c), signs=[1, -1]))
    return out


def unitary_generators(m: int) -> list[list[int]]:
    n = 2 * m
    return _unitary_offdiag(m) + [_pair_row(n, 2 * j - 1, 2 * j) for j in range(1, m + 1)]


def special_unitary_generators(m: int) -> list[list[int]]:
    n = 2 * m
    diag = [
        _add(_pair_row(n, 2 * j - 1, 2 * j), _pair_row(n, 2 * j + 1, 2 * j + 2), signs=[1, -1])
        for j in range(1, m)
    ]
    return _unitary_offdiag(m) + diag


def _commutant_rows(mats: list[np.ndarray], n: int) -> list[list[int]]:
    """Integer basis of the 2-forms whose skew maps commute with every matrix in ``mats``."""
    N = comb(n, 2)
    E = ext.sharp_array(np.eye(N), n).round().astype(int)  # (N, n, n)
    cols = []
    for s in range(N):
        cols.append(np.concatenate([(E[s] @ R - R @ E[s]).ravel() for R in mats]))
    M = np.array(cols, dtype=int).T
    return exact_nullspace(M.tolist(), N)


def _su_structure() -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Structure constants of su(3) in the Gell-Mann basis, split as ``u + sqrt(3) w``."""
    u = np.zeros((8, 8, 8), dtype=object)
    w = np.zeros((8, 8, 8), dtype=object)
    half = Fraction(1, 2)
    table = [
        ((1, 2, 3), 1, 0), ((1, 4, 7), half, 0), ((2, 4, 6), half, 0), ((2, 5, 7), half, 0),
        ((3, 4, 5), half, 0), ((1, 5, 6), -half, 0), ((3, 6, 7), -half, 0),
        ((4, 5, 8), 0, half), ((6, 7, 8), 0, half),
    ]
    u[...] = 0
    w[...] = 0
    for (a, b, c), ru, rw in table:
        a, b, c = a - 1, b - 1, c - 1
        for (x, y, z), s in (
            ((a, b, c), 1), ((b, c, a), 1), ((c, a, b), 1),
            ((b, a, c), -1), ((a, c, b), -1), ((c, b, a), -1),
        ):
            u[x, y, z] = s * ru
            w[x, y, z] = s * rw
    c = u.astype(float) + np.sqrt(3.0) * w.astype(float)
    return c, u, w


def _so_structure(k: int) -> np.ndarray:
    """Structure constants of so(k) in the basis e_ij (orthonormal for the form inner product)."""
    N = comb(k, 2)
    B = np.eye(N)
    c = np.zeros((N, N, N))
    for a in range(N):
        c[a] = ext.bracket_arrays(np.repeat(B[a : a + 1], N, axis=0), B, k)
    return c


def _adjoint_exact(u: np.ndarray, w: np.ndarray, d: int, name: str) -> LieSubalgebra:
    """The image of ad, with ``(ad x_a)(x_b) = c[a, b, :]`` and ``x_a`` orthonormal in R^dim."""
    dim = u.shape[0]
    pairs = ext.basis_indices(dim, 2)
    gens = []
    for a in range(dim):
        # coefficient on e_ij is g(F e_i, e_j) = c[a, i, j]
        gu = [u[a, i, j] for i, j in pairs]
        gw = [w[a, i, j] for i, j in pairs]
        gens.append((gu, gw))
    return exact_subalgebra(dim, gens, d, name=name, close=False)


# ---------------------------------------------------------------------------
# builders


def _check(cond, msg):
    if not cond:
        raise CatalogError(msg)


def _so(n):
    _check(3 <= n <= MAX_AMBIENT, f"so(n) needs 3 <= n <= {MAX_AMBIENT}")
    return CatalogEntry(f"so({n})", (n,), full_so(n), {"volume": KForm.volume(n)})


def _u(m):
    _check(2 <= 2 * m <= MAX_AMBIENT and m >= 2, "u(m) needs 2 <= m <= 6")
    n = 2 * m
    g = exact_subalgebra(n, [(r, [0] * comb(n, 2)) for r in unitary_generators(m)], 1, name=f"u({m})", close=False)
    return CatalogEntry(f"u({m})", (m,), g, {"omega": kaehler_form(m)})


def _su(m):
    _check(2 <= 2 * m <= MAX_AMBIENT and m >= 2, "su(m) needs 2 <= m <= 6")
    n = 2 * m
    g = exact_subalgebra(n, [(r, [0] * comb(n, 2)) for r in special_unitary_generators(m)], 1, name=f"su({m})", close=False)
    forms = {"omega": kaehler_form(m)}
    return CatalogEntry(f"su({m})", (m,), g, forms)


def _sp(m):
    _check(1 <= m and 4 * m <= MAX_AMBIENT, "sp(m) needs 1 <= m <= 3")
    n = 4 * m
    rows = _commutant_rows(_right_mult(m), n)
    g = exact_subalgebra(n, [(r, [0] * comb(n, 2)) for r in rows], 1, name=f"sp({m})", close=False)
    return CatalogEntry(f"sp({m})", (m,), g, {"quaternionic": quaternionic_form(m)})


def _sp_sp1(m):
    _check(1 <= m and 4 * m <= MAX_AMBIENT, "sp(m)+sp(1) needs 1 <= m <= 3")
    n = 4 * m
    rows = _commutant_rows(_right_mult(m), n)
    rows += [[int(x) for x in ext.flat_array(R)] for R in _right_mult(m)]
    g = exact_subalgebra(n, [(r, [0] * comb(n, 2)) for r in rows], 1, name=f"sp({m})+sp(1)", close=False)
    return CatalogEntry(f"sp({m})+sp(1)", (m,), g, {"quaternionic": quaternionic_form(m)})


def _g2():
    phi = associative_form()
    g = isotropy_algebra(phi, exact=True, name="g2")
    return CatalogEntry("g2", (), g, {"associative": phi})


def _spin7():
    Phi = cayley_form()
    g = isotropy_algebra(Phi, exact=True, name="spin7")
    return CatalogEntry("spin7", (), g, {"cayley": Phi})


def _adjoint_su(k):
    _check(k in (2, 3), "adjoint-su(k) needs k in {2, 3}")
    if k == 2:
        u = np.zeros((3, 3, 3), dtype=object)
        u[...] = 0
        for (a, b, c), s in (((0, 1, 2), 1), ((1, 2, 0), 1), ((2, 0, 1), 1),
                             ((1, 0, 2), -1), ((0, 2, 1), -1), ((2, 1, 0), -1)):
            u[a, b, c] = s
        w = np.zeros_like(u)
        w[...] = 0
        c, d = u.astype(float), 1
    else:
        c, u, w = _su_structure()
        d = 3
    name = f"adjoint-su({k})"
    g = _adjoint_exact(u, w, d, name)
    return CatalogEntry(name, (k,), g, {"cartan": cartan_form_from_structure(c)})


def _adjoint_so(k):
    _check(3 <= k <= 5, "adjoint-so(k) needs 3 <= k <= 5")
    c = _so_structure(k)
    u = np.rint(c).astype(int).astype(object)
    w = np.zeros_like(u)
    w[...] = 0
    name = f"adjoint-so({k})"
    g = _adjoint_exact(u, w, 1, name)
    return CatalogEntry(name, (k,), g, {"cartan": cartan_form_from_structure(c)}, irreducible=(k != 4))


_BUILDERS = {
    "so": (_so, 1),
    "u": (_u, 1),
    "su": (_su, 1),
    "sp": (_sp, 1),
    "sp+sp1": (_sp_sp1, 1),
    "g2": (_g2, 0),
    "spin7": (_spin7, 0),
    "adjoint-su": (_adjoint_su, 1),
    "adjoint-so": (_adjoint_so, 1),
}

_NAME_RE = re.compile(
    r"^(?P<fam>adjoint-su|adjoint-so|so|su|u|sp|g|spin)\(?(?P<k>\d+)?\)?(?P<tail>\+sp\(?1\)?)?$"
)


def parse_name(name: str) -> tuple[str, tuple]:
    """Normalise a catalog name to ``(family, params)``."""
    s = name.strip().lower().replace(" ", "").replace("_", "-")
    mt = _NAME_RE.match(s)
    if not mt:
        raise CatalogError(f"unknown catalog entry {name!r}")
    fam, k, tail = mt.group("fam"), mt.group("k"), mt.group("tail")
    if fam == "g":
        if k != "2" or tail:
            raise CatalogError(f"unknown catalog entry {name!r}")
        return "g2", ()
    if fam == "spin":
        if k != "7" or tail:
            raise CatalogError(f"unknown catalog entry {name!r}")
        return "spin7", ()
    if tail:
        if fam != "sp":
            raise CatalogError(f"unknown catalog entry {name!r}")
        fam = "sp+sp1"
    if k is None:
        raise CatalogError(f"{name!r} needs a numeric parameter")
    return fam, (int(k),)


@lru_cache(maxsize=None)
def _build_cached(fam: str, params: tuple) -> CatalogEntry:
    fn, nargs = _BUILDERS[fam]
    if len(params) != nargs:
        raise CatalogError(f"{fam} takes {nargs} parameter(s)")
    return fn(*params)


def build(name: str, *params: int) -> CatalogEntry:
    """Build a catalog entry, e.g. ``build("so", 5)``, ``build("so(5)")`` or ``build("adjoint-su3++spin7")``."""
    if "++" in name:
        if params:
            raise CatalogError("block sums take no extra parameters")
        return block_sum([build(part) for part in name.split("++")])
    if params:
        fam = name.strip().lower()
        if fam == "sp(m)+sp(1)":
            fam = "sp+sp1"
        if fam not in _BUILDERS:
            raise CatalogError(f"unknown catalog family {name!r}")
        return _build_cached(fam, tuple(int(p) for p in params))
    fam, params = parse_name(name)
    return _build_cached(fam, params)


def block_sum(entries: list[CatalogEntry]) -> CatalogEntry:
    """Block-diagonal sum of catalog entries on the orthogonal sum of their spaces."""
    g = direct_sum([en.rep for en in entries])
    n_big, offset, forms = g.n, 0, {}
    for i, en in enumerate(entries):
        for key, f in en.model_forms.items():
            forms[f"{key}{i + 1}"] = KForm(n_big, f.p, embed_forms(f.coeffs, en.n, n_big, offset, f.p))
        offset += en.n
    name = "++".join(en.name for en in entries)
    return CatalogEntry(name, tuple(p for en in entries for p in en.params), g.with_name(name), forms, irreducible=False)


def model_form(entry: CatalogEntry, which: str) -> KForm:
    key = which.lower()
    aliases = {"kaehler": "omega", "kahler": "omega", "phi": "associative", "cayley4": "cayley"}
    key = aliases.get(key, key)
    if key == "volume":
        return KForm.volume(entry.n)
    if key not in entry.model_forms:
        raise CatalogError(
            f"{entry.name} has no {which!r} form (available: {', '.join(sorted(entry.model_forms)) or 'volume'})"
        )
    return entry.model_forms[key]


def standard_names() -> list[str]:
    """The entries exercised by the regression and verification suites."""
    return [
        "so(4)", "so(5)", "so(6)", "u(2)", "u(3)", "su(3)", "sp(1)", "sp(2)", "sp(2)+sp(1)",
        "g2", "spin7", "adjoint-su(2)", "adjoint-su(3)", "adjoint-so(4)", "adjoint-so(5)",
    ]
