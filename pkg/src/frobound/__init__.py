"""Exact explicit-formula bounds for curves over finite fields.

The main entry points are re-exported here; see the submodules for details.
"""

from .bounds_engine import (
    BoundCertificate,
    Regime,
    bound_for_regime,
    bound_u0_minus_one,
    bound_u0_one,
    bound_u0_zero,
    check_conditions,
    exclusion_certificate,
    explicit_formula_identity,
)
from .cosine_poly import CosinePoly, PowerPoly, is_nonneg_on, sturm_count, zeros_on
from .exactnum import QField, parse_qfield
from .family import family_coefficients, family_identity_check, family_threshold
from .optimizer import LPProblem, minimal_degree_search, optimize, solve_lp
from .theta_sets import ThetaSet, complement_of_interval
from .zeta import WeilPoly, point_counts

__version__ = "0.1.0"

__all__ = [
    "BoundCertificate",
    "CosinePoly",
    "LPProblem",
    "PowerPoly",
    "QField",
    "Regime",
    "ThetaSet",
    "WeilPoly",
    "bound_for_regime",
    "bound_u0_minus_one",
    "bound_u0_one",
    "bound_u0_zero",
    "check_conditions",
    "complement_of_interval",
    "exclusion_certificate",
    "explicit_formula_identity",
    "family_coefficients",
    "family_identity_check",
    "family_threshold",
    "is_nonneg_on",
    "minimal_degree_search",
    "optimize",
    "parse_qfield",
    "point_counts",
    "solve_lp",
    "sturm_count",
    "zeros_on",
]
