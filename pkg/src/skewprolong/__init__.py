"""Skew-symmetric prolongations of orthogonal Lie algebra representations."""

from .catalog import CatalogEntry, build, model_form
from .curvature import CurvatureElement, curvature_space
from .exterior import KForm
from .holonomy3 import classify_3form, g_star
from .linalg import DEFAULT_TOL, Subspace
from .pluecker import nlie_bracket, nlie_jacobi_check, plc_check, pluecker_report
from .prolong import (
    characteristic_form,
    classify_representation,
    eps_perp_analysis,
    is_minimal,
    skew_prolongation,
)
from .rep import LieSubalgebra, casimir, irreducible_split, isotropy_algebra, lie_closure

__version__ = "0.1.0"

__all__ = [
    "CatalogEntry", "CurvatureElement", "DEFAULT_TOL", "KForm", "LieSubalgebra", "Subspace",
    "build", "casimir", "characteristic_form", "classify_3form", "classify_representation",
    "curvature_space", "eps_perp_analysis", "g_star", "irreducible_split", "is_minimal",
    "isotropy_algebra", "lie_closure", "model_form", "nlie_bracket", "nlie_jacobi_check",
    "plc_check", "pluecker_report", "skew_prolongation",
]
