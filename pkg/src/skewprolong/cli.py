"""Command-line front end.

Every verb takes one input (``--rep`` for representations, ``--form`` for
forms), prints a human-readable summary or a JSON report (``--json``), and
exits with 0 on success, 1 when a check fails or a splitting is ambiguous and
2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from math import comb
from pathlib import Path

import numpy as np

from . import catalog
from .curvature import berger_algebra, curvature_space, identity_element, ricci_contraction
from .exterior import FormError, KForm
from .holonomy3 import HolonomyError, classify_3form
from .linalg import DEFAULT_TOL, LinalgInputError
from .pluecker import PlueckerError, nlie_bracket, nlie_jacobi_check, pluecker_report
from .prolong import (
    ProlongError,
    characteristic_form,
    classify_representation,
    eps_perp_analysis,
    is_minimal,
    skew_prolongation,
)
from .rep import AmbiguousSplit, LieSubalgebra, RepError, casimir, is_irreducible
from .verify import BACKENDS, run_verification

SCHEMA = "1"

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(ValueError):
    """Bad command-line input or malformed input file."""


# ---------------------------------------------------------------------------
# input loading


def _read_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None


def _split_source(source: str, what: str) -> tuple[str, str]:
    kind, sep, rest = source.partition(":")
    if not sep or kind not in ("catalog", "file") or not rest:
        raise InputError(f"{what} must be catalog:NAME or file:PATH, got {source!r}")
    return kind, rest


def load_rep(source: str, tol: float = DEFAULT_TOL) -> LieSubalgebra:
    """``catalog:NAME`` or ``file:PATH`` (a subalgebra record or a catalog dump)."""
    kind, rest = _split_source(source, "--rep")
    if kind == "catalog":
        return catalog.build(rest).rep
    data = _read_json(rest)
    if isinstance(data, dict) and "rep" in data:
        data = data["rep"]
    try:
        return LieSubalgebra.from_json(data, tol)
    except (RepError, FormError) as exc:
        raise InputError(f"{rest}: {exc}") from None
    except ValueError as exc:
        raise InputError(f"{rest}: not a subalgebra ({exc})") from None


def load_form(source: str) -> KForm:
    """``catalog:ENTRY[:which]``, ``file:PATH`` or ``file:PATH:which`` for a catalog dump."""
    kind, rest = _split_source(source, "--form")
    if kind == "catalog":
        name, _, which = rest.partition(":")
        entry = catalog.build(name)
        if not which:
            if len(entry.model_forms) != 1:
                raise InputError(
                    f"{entry.name} has several forms; pick one of {', '.join(sorted(entry.model_forms))}"
                )
            which = next(iter(entry.model_forms))
        return catalog.model_form(entry, which)
    path, which = rest, ""
    if not Path(path).exists() and ":" in rest:
        path, _, which = rest.rpartition(":")
    data = _read_json(path)
    if isinstance(data, dict) and "model_forms" in data:
        forms = data["model_forms"]
        if not which:
            if len(forms) != 1:
                raise InputError(f"{path}: several forms in dump; use file:{path}:NAME")
            which = next(iter(forms))
        if which not in forms:
            raise InputError(f"{path}: no form named {which!r}")
        data = forms[which]
    try:
        return KForm.from_json(data)
    except FormError as exc:
        raise InputError(f"{path}: {exc}") from None


# ---------------------------------------------------------------------------
# verbs; each returns (exit status, report dict)


def _exact(args) -> bool:
    return args.backend in ("exact", "both")


def _need(args, attr: str, flag: str):
    val = getattr(args, attr)
    if val is None:
        raise InputError(f"{args.verb} needs {flag}")
    return val


def cmd_prolong(args) -> tuple[int, dict]:
    g = load_rep(_need(args, "rep", "--rep"), args.tol)
    p = args.p if args.p is not None else 3
    if not 3 <= p <= g.n:
        raise InputError(f"--p must lie in 3..{g.n}")
    rep = skew_prolongation(g, p, args.tol, exact=_exact(args))
    out = rep.to_json()
    status = EXIT_OK
    if args.backend == "both" and rep.exact_dim is not None and rep.exact_dim != rep.dim:
        status = EXIT_FAIL
    return status, out


def cmd_kspace(args) -> tuple[int, dict]:
    g = load_rep(_need(args, "rep", "--rep"), args.tol)
    K = curvature_space(g, args.tol, exact=_exact(args))
    berger, equal = berger_algebra(g, K, args.tol)
    out = {"dim": K.dim, "exact_dim": K.exact_dim, "g_dim": g.dim, "berger_dim": berger.dim, "berger_equals_g": equal}
    if K.dim == 1:
        R = K.elements()[0]
        ric = ricci_contraction(R)
        if np.trace(ric) < 0:
            ric = -ric
        out["ricci_eigenvalues"] = sorted(float(x) for x in np.linalg.eigvalsh(ric))
    out["identity_in_K"] = bool(K.dim and K.subspace.contains(identity_element(g).coeffs.reshape(1, -1)))
    status = EXIT_FAIL if args.backend == "both" and K.exact_dim not in (None, K.dim) else EXIT_OK
    return status, out


def cmd_holonomy(args) -> tuple[int, dict]:
    T = load_form(_need(args, "form", "--form"))
    if T.p != 3:
        raise InputError(f"holonomy needs a 3-form, got degree {T.p}")
    rep = classify_3form(T, args.seed, args.tol)
    out = rep.to_json()
    out["labels"] = rep.labels
    return EXIT_OK, out


def cmd_pluecker(args) -> tuple[int, dict]:
    T = load_form(_need(args, "form", "--form"))
    rep = pluecker_report(T, args.seed, args.tol)
    out = rep.to_json()
    if T.p >= 3 and T.n >= T.p - 1:
        ok, res = nlie_jacobi_check(nlie_bracket(T), args.tol)
        out["jacobi"] = ok
        out["jacobi_residual"] = res
    return EXIT_OK, out


def cmd_charform(args) -> tuple[int, dict]:
    g = load_rep(_need(args, "rep", "--rep"), args.tol)
    T = characteristic_form(g)
    m = is_minimal(g, args.tol)
    out = {"norm": T.norm(), "form": T.to_json()}
    out.update(m.to_json())
    return (EXIT_OK if m.consistent else EXIT_FAIL), out


def _scalar(C: np.ndarray, tol: float):
    if C.size == 0:
        return None
    c = float(np.mean(np.diag(C)))
    return c if np.max(np.abs(C - c * np.eye(C.shape[0]))) <= 1e3 * tol * max(1.0, abs(c)) else None


def cmd_casimir(args) -> tuple[int, dict]:
    g = load_rep(_need(args, "rep", "--rep"), args.tol)
    out = {"n": g.n, "g_dim": g.dim, "irreducible": is_irreducible(g, args.tol)}
    degrees = [args.p] if args.p is not None else [1, 2]
    for k in degrees:
        if not 0 <= k <= g.n:
            raise InputError(f"--p must lie in 0..{g.n}")
        C = casimir(g, k)
        out[f"C{k}"] = {
            "scalar": _scalar(C, args.tol),
            "eigenvalues": sorted({round(float(x), 9) for x in np.linalg.eigvalsh(C)}),
        }
    out["expected_C1"] = 2 * g.dim / g.n
    return EXIT_OK, out


def cmd_epsperp(args) -> tuple[int, dict]:
    g = load_rep(_need(args, "rep", "--rep"), args.tol)
    if g.n < 3:
        raise InputError("epsperp needs n >= 3")
    rep = eps_perp_analysis(g, args.tol, exact=_exact(args))
    status = EXIT_OK
    if args.backend == "both" and rep.exact_kernel_dim not in (None, rep.kernel_dim):
        status = EXIT_FAIL
    return status, rep.to_json()


def cmd_classify(args) -> tuple[int, dict]:
    g = load_rep(_need(args, "rep", "--rep"), args.tol)
    rep = classify_representation(g, args.seed, args.tol, exact=_exact(args))
    out = rep.to_json()
    out["labels"] = rep.labels
    return (EXIT_OK if rep.consistent else EXIT_FAIL), out


def cmd_verify(args) -> tuple[int, dict]:
    results = run_verification(args.backend, args.seed, args.tol)
    ok = all(r.passed for r in results)
    return (EXIT_OK if ok else EXIT_FAIL), {"backend": args.backend, "passed": ok, "items": [r.to_json() for r in results]}


def cmd_catalog(args) -> tuple[int, dict]:
    if args.action == "list":
        entries = []
        for name in catalog.standard_names():
            en = catalog.build(name)
            entries.append({"name": en.name, "n": en.n, "dim": en.rep.dim, "forms": sorted(en.model_forms)})
        return EXIT_OK, {"entries": entries}
    if not args.name:
        raise InputError("catalog dump needs an entry name")
    return EXIT_OK, {"entry": catalog.build(args.name).to_json()}


VERBS = {
    "prolong": cmd_prolong,
    "kspace": cmd_kspace,
    "holonomy": cmd_holonomy,
    "pluecker": cmd_pluecker,
    "charform": cmd_charform,
    "casimir": cmd_casimir,
    "epsperp": cmd_epsperp,
    "classify": cmd_classify,
    "verify": cmd_verify,
    "catalog": cmd_catalog,
}


# ---------------------------------------------------------------------------
# output


def _default(obj):
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    return str(obj)


REPORT_DECIMALS = 10


def _clean(obj):
    """Round floats so that reports do not depend on last-bit noise; drop zero form terms."""
    if isinstance(obj, dict):
        if "terms" in obj and "p" in obj:
            terms = [t for t in obj["terms"] if round(float(t["coeff"]), REPORT_DECIMALS) != 0]
            obj = {**obj, "terms": terms}
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (float, np.floating)):
        x = round(float(obj), REPORT_DECIMALS)
        return 0.0 if x == 0 else x
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


def _human(report: dict, out) -> None:
    verb = report.get("verb")
    if verb == "verify":
        for item in report["items"]:
            mark = "PASS" if item["passed"] else "FAIL"
            print(f"[{mark}] {item['id']:2d}  {item['title']}", file=out)
        print(f"status: {report['status']}", file=out)
        return
    if verb == "catalog" and "entries" in report:
        for en in report["entries"]:
            print(f"{en['name']:<16} n={en['n']:<3} dim={en['dim']:<4} forms={','.join(en['forms']) or '-'}", file=out)
        return
    for key, val in report.items():
        if key in ("schema", "basis", "form", "entry", "items"):
            continue
        if isinstance(val, (dict, list)):
            val = json.dumps(val, default=_default)
            if len(val) > 200:
                val = val[:197] + "..."
        print(f"{key}: {val}", file=out)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--rep", help="catalog:NAME or file:PATH")
    common.add_argument("--form", help="catalog:ENTRY[:which] or file:PATH[:which]")
    common.add_argument("--p", type=int, default=None, help="form degree")
    common.add_argument("--tol", type=float, default=DEFAULT_TOL, help="numerical tolerance (default %(default)g)")
    common.add_argument("--backend", choices=BACKENDS, default="both")
    common.add_argument("--seed", type=int, default=0, help="seed for all randomness (default 0)")
    common.add_argument("--json", action="store_true", help="emit a JSON report")

    ap = argparse.ArgumentParser(prog="skewprolong", description="Skew-symmetric prolongations of orthogonal representations.")
    sub = ap.add_subparsers(dest="verb", required=True)
    helps = {
        "prolong": "skew-symmetric prolongation of degree --p",
        "kspace": "space of curvature tensors with values in g",
        "holonomy": "Lie algebra generated by the contractions of a 3-form",
        "pluecker": "Plücker-type relations and n-Lie Jacobi check of a form",
        "charform": "characteristic 4-form and minimality",
        "casimir": "Casimir operators on forms of degree --p (default 1 and 2)",
        "epsperp": "kernel and cokernel of the contraction map onto g-perp",
        "classify": "irreducible splitting and prolongation of each factor",
        "verify": "run the full verification matrix",
    }
    for verb, text in helps.items():
        sub.add_parser(verb, parents=[common], help=text)
    cat = sub.add_parser("catalog", parents=[common], help="list or dump catalog entries")
    cat.add_argument("action", choices=("list", "dump"))
    cat.add_argument("name", nargs="?")
    return ap


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    report = {"schema": SCHEMA, "verb": args.verb}
    try:
        if not args.tol > 0:
            raise InputError("--tol must be positive")
        if args.rep and args.form:
            raise InputError("give exactly one of --rep and --form")
        status, body = VERBS[args.verb](args)
        report.update(body)
        report["status"] = "ok" if status == EXIT_OK else "fail"
    except AmbiguousSplit as exc:
        status = EXIT_FAIL
        report.update({"status": "ambiguous", "error": str(exc)})
    except (InputError, catalog.CatalogError, FormError, RepError, ProlongError,
            HolonomyError, PlueckerError, LinalgInputError) as exc:
        status = EXIT_INPUT
        report.update({"status": "input_error", "error": str(exc)})
    if args.verb != "catalog":  # dumps keep full precision for reloading
        report = _clean(report)
    if args.json:
        print(json.dumps(report, default=_default, indent=2), file=out)
    elif report["status"] in ("ambiguous", "input_error"):
        print(f"{report['status']}: {report['error']}", file=sys.stderr if out is sys.stdout else out)
    else:
        _human(report, out)
    return status


if __name__ == "__main__":
    sys.exit(main())
