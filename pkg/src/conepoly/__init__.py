"""Exact computations with cone polynomials over finite point sets in P^n."""

from .algebra import HomogPoly, LinearForm, directional_derivative, monomial_at, monomial_index, multiply
from .estimators import ConeSpanEstimator, PointFunctional
from .geometry import PlaneSpan, PointConfiguration, ProjectivePoint, linear_form_for, moment_points, random_points
from .linalg import ExactMatrix, permanent, rank_exact, rank_mod_p
from .spans import (
    SpanReport,
    apply_point_functional,
    build_M,
    coefficient_spanning_set,
    cone_polynomial,
    cone_span_dimension_sampled,
    expected_dimension,
    lemma2_witness,
    m_matrix_dimension,
    restriction_rank_check,
    span_dimension,
    vanishing_dimension,
)

__version__ = "0.1.0"

__all__ = [
    "HomogPoly",
    "LinearForm",
    "directional_derivative",
    "monomial_at",
    "monomial_index",
    "multiply",
    "ConeSpanEstimator",
    "PointFunctional",
    "PlaneSpan",
    "PointConfiguration",
    "ProjectivePoint",
    "linear_form_for",
    "moment_points",
    "random_points",
    "ExactMatrix",
    "permanent",
    "rank_exact",
    "rank_mod_p",
    "SpanReport",
    "apply_point_functional",
    "build_M",
    "coefficient_spanning_set",
    "cone_polynomial",
    "cone_span_dimension_sampled",
    "expected_dimension",
    "lemma2_witness",
    "m_matrix_dimension",
    "restriction_rank_check",
    "span_dimension",
    "vanishing_dimension",
]
