"""scikit-learn style wrappers.

``X`` is always a ``(d, n + 1)`` array of exact point coordinates, one row per
point of the configuration.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .algebra import HomogPoly, as_scalar, num_monomials
from .geometry import DEFAULT_BOUND, PointConfiguration
from .spans import DEFAULT_SATURATION, apply_point_functional, span_dimension

__all__ = ["check_points", "check_forms", "ConeSpanEstimator", "PointFunctional"]


def check_points(X) -> PointConfiguration:
    """Validate a point array and wrap it as a configuration.

    Entries must be exact: Python or numpy integers, or Fractions.
    """
    if isinstance(X, PointConfiguration):
        return X
    arr = np.asarray(X, dtype=object)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2D array of points, got {arr.ndim}D")
    if arr.shape[0] < 1 or arr.shape[1] < 3:
        raise ValueError("need at least one point in P^n with n >= 2")
    try:
        rows = [tuple(as_scalar(v) for v in row) for row in arr]
    except TypeError as exc:
        raise ValueError(f"point coordinates must be exact rationals: {exc}") from None
    return PointConfiguration(arr.shape[1] - 1, tuple(rows))


def check_forms(F, nvars: int, degree: int) -> np.ndarray:
    arr = np.asarray(F, dtype=object)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    if arr.ndim != 2:
        raise ValueError("expected a 2D array of coefficient rows")
    width = num_monomials(nvars, degree)
    if arr.shape[1] != width:
        raise ValueError(f"rows need {width} coefficients for degree {degree} in {nvars} variables")
    return arr


class ConeSpanEstimator(BaseEstimator):
    """Dimension of the span of cone polynomials for a point configuration.

    Parameters
    ----------
    method : {"m_matrix", "sampling", "coefficient_extraction"}
        ``m_matrix`` is only available in the plane (n = 2).
    field : {"exact", "mod"}
    seed : int
    saturation : int
        Consecutive non-improving samples before sampling stops.
    bound : int
        Coordinate bound for sampled planes.

    Attributes
    ----------
    configuration_ : PointConfiguration
    report_ : SpanReport
    dimension_ : int
    expected_ : int or None
    """

    def __init__(self, method="m_matrix", field="exact", seed=0, saturation=DEFAULT_SATURATION, bound=DEFAULT_BOUND):
        self.method = method
        self.field = field
        self.seed = seed
        self.saturation = saturation
        self.bound = bound

    def fit(self, X, y=None):
        S = check_points(X)
        self.configuration_ = S
        self.n_features_in_ = S.n + 1
        self.report_ = span_dimension(
            S, method=self.method, field=self.field, seed=self.seed,
            saturation=self.saturation, bound=self.bound,
        )
        self.dimension_ = self.report_.dimension
        self.expected_ = self.report_.expected
        return self

    def score(self, X=None, y=None) -> float:
        """1.0 when the computed dimension equals the conjectured one."""
        check_is_fitted(self, "report_")
        return float(bool(self.report_.matches))


class PointFunctional(TransformerMixin, BaseEstimator):
    """The map f -> (P_1 . grad) ... (P_d . grad) f on degree-d forms.

    ``fit`` takes the points; ``transform`` takes coefficient rows in
    descending-lex monomial order and returns one exact value per row.
    """

    def fit(self, X, y=None):
        self.configuration_ = check_points(X)
        self.n_features_in_ = self.configuration_.n + 1
        return self

    def transform(self, F):
        check_is_fitted(self, "configuration_")
        S = self.configuration_
        arr = check_forms(F, S.n + 1, S.d)
        out = np.empty((arr.shape[0], 1), dtype=object)
        for i, row in enumerate(arr):
            f = HomogPoly((("x", S.n + 1),), (S.d,), list(row))
            out[i, 0] = apply_point_functional(S, f)
        return out
