"""lipsat: exact membership tests in saturated Jacobian ideals of plane-curve
germs along pairs of polar branches, with certificate output.

The layers, bottom up: exact coefficient fields (algebra), truncation-aware
Puiseux series (series), sparse bivariate polynomials (polynomials),
Newton-Puiseux expansion (puiseux), polar-pair geometry (polar), the
membership engine and its checks (saturation), monomial criteria (criteria),
input grammars (parsing), and certificates/CLI (certificates, cli).
"""

from .algebra import Cyclotomic, Field, FieldElem
from .criteria import (
    MonomialVerdictRow,
    WeightSystem,
    engine_applicable,
    fr_monomial,
    j0_bounds,
    lipsat_monomial,
    wedge_table,
)
from .errors import (
    DivisionByZero,
    HypothesisUnmet,
    IndeterminateOrder,
    InternalCriterionMismatch,
    LipsatError,
    NotAFiberPair,
    NotAUnit,
    NotIsolated,
    ParseError,
    PrecisionExceeded,
    UnknownSymbol,
    UnsupportedExtension,
)
from .parsing import parse_pair_line, parse_pairs_file, parse_poly, parse_series
from .polar import (
    CurveExpansion,
    PairCurve,
    PairGeometry,
    PolarPair,
    contact_matrix,
    exceptional_lines,
    generic_direction,
    germ_check,
    hp_data,
    hp_report,
    normalize_direction,
    packets,
    pair_geometry,
    pair_of_sheets,
    pair_tangent_report,
    polar_expansion,
    polar_pairs,
    polar_poly,
    shared_component_check,
    sheet_leading_data,
    tangent_of_branch,
    tangent_ratio_check,
)
from .polynomials import Polynomial, ring
from .puiseux import Branch, default_precision, newton_puiseux
from .saturation import (
    MembershipReport,
    PairCheckResult,
    PairVector,
    SaturationReport,
    check_derivative_vector,
    check_family,
    check_fiber_pair,
    check_pair,
    check_saturation_polar,
    det_vector,
    fiber_self_check,
    module_membership,
    pair_module,
)
from .series import INF, OrderValue, PuiseuxSeries

__version__ = "0.1.0"

__all__ = [
    "Branch",
    "Cyclotomic",
    "CurveExpansion",
    "DivisionByZero",
    "Field",
    "FieldElem",
    "HypothesisUnmet",
    "INF",
    "IndeterminateOrder",
    "InternalCriterionMismatch",
    "LipsatError",
    "MembershipReport",
    "MonomialVerdictRow",
    "NotAFiberPair",
    "NotAUnit",
    "NotIsolated",
    "OrderValue",
    "PairCheckResult",
    "PairCurve",
    "PairGeometry",
    "PairVector",
    "ParseError",
    "PolarPair",
    "Polynomial",
    "PrecisionExceeded",
    "PuiseuxSeries",
    "SaturationReport",
    "UnknownSymbol",
    "UnsupportedExtension",
    "WeightSystem",
    "check_derivative_vector",
    "check_family",
    "check_fiber_pair",
    "check_pair",
    "check_saturation_polar",
    "contact_matrix",
    "default_precision",
    "det_vector",
    "engine_applicable",
    "exceptional_lines",
    "fiber_self_check",
    "fr_monomial",
    "generic_direction",
    "germ_check",
    "hp_data",
    "hp_report",
    "j0_bounds",
    "lipsat_monomial",
    "module_membership",
    "newton_puiseux",
    "normalize_direction",
    "packets",
    "pair_geometry",
    "pair_module",
    "pair_of_sheets",
    "pair_tangent_report",
    "parse_pair_line",
    "parse_pairs_file",
    "parse_poly",
    "parse_series",
    "polar_expansion",
    "polar_pairs",
    "polar_poly",
    "ring",
    "shared_component_check",
    "sheet_leading_data",
    "tangent_of_branch",
    "tangent_ratio_check",
    "wedge_table",
]
