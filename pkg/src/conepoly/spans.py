"""Cone polynomials, their span V(n, d), and the two linear restrictions.

A cone polynomial for ``S = {P_1, ..., P_d}`` in P^n is a product of ``d``
linear forms, the i-th vanishing at ``P_i`` and at a common (n-2)-plane.
"""

from __future__ import annotations

import json
import os
import random
from dataclasses import asdict, dataclass
from itertools import permutations
from math import comb
from typing import Optional

from .algebra import (
    PRIME_ENV_VAR,
    DegreeError,
    HomogPoly,
    LinearForm,
    StructureError,
    default_prime,
    directional_derivative,
    multiply,
)
from .geometry import (
    DEFAULT_BOUND,
    GeometryError,
    GenericityError,
    PlaneSpan,
    PointConfiguration,
    evaluation_matrix,
    is_generic,
    linear_form_for,
    moment_points,
    random_plane,
)
from .linalg import ExactMatrix, IncrementalRank, SizeError, permanent, random_prime, rank_exact, rank_mod_p

__all__ = [
    "DegenerateSampleError",
    "InvariantViolationError",
    "UnsupportedDimensionError",
    "ConeSample",
    "SpanReport",
    "METHODS",
    "EXACT_RANK_DMAX",
    "CLOSED_FORM_DMAX",
    "ambient_dimension",
    "expected_dimension",
    "cone_polynomial",
    "sample_cone_polynomials",
    "apply_point_functional",
    "pairing_matrix",
    "vanishing_dimension",
    "cone_span_dimension_sampled",
    "build_M",
    "m_matrix_dimension",
    "coefficient_spanning_set",
    "coefficient_dimension",
    "lemma2_witness",
    "witness_polynomial",
    "restriction_rank_check",
    "span_dimension",
    "DEFAULT_SATURATION",
]

METHODS = ("sampling", "m_matrix", "coefficient_extraction")
EXACT_RANK_DMAX = 13
CLOSED_FORM_DMAX = 9
DEFAULT_SATURATION = 15


class DegenerateSampleError(GeometryError):
    """A point of the configuration lies on the chosen plane."""


class InvariantViolationError(AssertionError):
    """A proven identity failed; indicates a bug, never a valid outcome."""


class UnsupportedDimensionError(ValueError):
    pass


@dataclass(frozen=True)
class ConeSample:
    plane: PlaneSpan
    forms: tuple
    poly: HomogPoly


@dataclass(frozen=True)
class SpanReport:
    n: int
    d: int
    method: str
    dimension: int
    certified: bool
    expected: Optional[int]
    samples_used: int

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @property
    def matches(self) -> Optional[bool]:
        return None if self.expected is None else self.dimension == self.expected


def ambient_dimension(n: int, d: int) -> int:
    """Number of degree-d monomials in n + 1 variables."""
    return comb(d + n, n)


def expected_dimension(n: int, d: int) -> Optional[int]:
    """Conjectured dim V(2, d); None outside the plane case.

    Full vanishing dimension for even d and d = 1, one less for d = 3 mod 4,
    two less for d = 1 mod 4 with d >= 5.
    """
    if n != 2 or d < 1:
        return None
    base = ambient_dimension(2, d) - d
    if d % 2 == 0 or d == 1:
        return base
    return base - 1 if d % 4 == 3 else base - 2


def _check_config(S: PointConfiguration, d: int) -> None:
    if d != S.d:
        raise DegreeError(f"degree {d} does not match the {S.d} points of the configuration")


def cone_polynomial(S: PointConfiguration, plane: PlaneSpan) -> ConeSample:
    """Product of the forms ``det[v, P_i, Q_1, ..., Q_{n-1}]``."""
    if plane.n != S.n:
        raise GeometryError("plane and configuration live in different spaces")
    forms = tuple(linear_form_for(P, plane) for P in S.points)
    for i, form in enumerate(forms):
        if form.degenerate:
            raise DegenerateSampleError(f"point {i} lies on the plane")
    poly = forms[0].as_poly()
    for form in forms[1:]:
        poly = multiply(poly, form.as_poly())
    return ConeSample(plane, forms, poly)


def sample_cone_polynomials(S: PointConfiguration, count: int, seed: int = 0, bound: int = DEFAULT_BOUND):
    """Yield ``count`` cone samples over seeded random planes."""
    rng = random.Random(f"planes:{seed}:{S.n}:{S.d}")
    for _ in range(count):
        yield cone_polynomial(S, random_plane(S.n, rng, bound, avoid=S.points))


def apply_point_functional(S, f: HomogPoly):
    """Apply ``(P_1 . grad) ... (P_d . grad)`` to a degree-d form; returns a scalar.

    ``S`` is a configuration or any sequence of direction vectors (repeats allowed).
    """
    directions = [tuple(P) for P in (S.points if isinstance(S, PointConfiguration) else S)]
    if len(f.groups) != 1:
        raise StructureError("the point functional acts on single-group forms")
    if f.degree != len(directions):
        raise DegreeError(f"form has degree {f.degree}, got {len(directions)} directions")
    for w in directions:
        f = directional_derivative(f, w)
    return f.coeffs[0]


def pairing_matrix(S: PointConfiguration, forms) -> list[list]:
    """``A[i][j] = (P_i . grad) L_j``."""
    directions = [tuple(P) for P in (S.points if isinstance(S, PointConfiguration) else S)]
    return [[LinearForm.derivative(L, w) for L in forms] for w in directions]


def vanishing_dimension(S: PointConfiguration, d: int) -> int:
    """Dimension of degree-d forms vanishing on S."""
    if d < 1:
        raise DegreeError("degree must be positive")
    return ambient_dimension(S.n, d) - rank_exact(evaluation_matrix(S.points, d))


def _rank(rows, field: str, seed: int) -> tuple[int, bool]:
    """Rank and whether it is certified exact."""
    if field == "exact":
        return rank_exact(rows), True
    if field != "mod":
        raise ValueError("field must be 'exact' or 'mod'")
    return max(rank_mod_p(rows, p) for p in _primes(seed)), False


def _primes(seed: int) -> tuple[int, int]:
    # an explicit CONEPOLY_PRIME replaces the first random prime
    rng = random.Random(f"primes:{seed}")
    first, second = random_prime(rng), random_prime(rng)
    if os.environ.get(PRIME_ENV_VAR):
        first = default_prime()
    return first, second


def cone_span_dimension_sampled(
    S: PointConfiguration,
    d: int,
    seed: int = 0,
    saturation: int = DEFAULT_SATURATION,
    bound: int = DEFAULT_BOUND,
    field: str = "exact",
) -> SpanReport:
    """Estimate dim V(n, d) by stacking cone polynomials over random planes.

    Stops after ``saturation`` consecutive samples leave the rank unchanged,
    or after ``C(d+n, n) + 25`` samples.
    """
    _check_config(S, d)
    if not is_generic(S):
        raise GenericityError("configuration fails the genericity screen")
    n = S.n
    ambient = ambient_dimension(n, d)
    ceiling = ambient - d
    p = _primes(seed)[0] if field == "mod" else None
    tracker = IncrementalRank(ambient, field=field, p=p)
    used = stale = 0
    for sample in sample_cone_polynomials(S, ambient + 25, seed=seed, bound=bound):
        used += 1
        before = tracker.rank
        if tracker.add(sample.poly.coeffs):
            stale = 0
            if tracker.rank > ceiling or tracker.rank < before:
                raise InvariantViolationError("cone span exceeded the vanishing space")
        else:
            stale += 1
            if stale >= saturation:
                break
    return SpanReport(n, d, "sampling", tracker.rank, field == "exact", expected_dimension(n, d), used)


def _bilinear_det_form(P, n: int) -> HomogPoly:
    """``det[x, P, y^(1), ..., y^(n-1)]`` as a multilinear polynomial."""
    groups = [("x", n + 1)] + [(f"y{j + 1}", n + 1) for j in range(n - 1)]
    size = n + 1
    terms = {}
    # rows r0 (for x), r2.. (for the y groups); P occupies the remaining row
    for rows in permutations(range(size)):
        sign = _perm_sign(rows)
        coeff = sign * P[rows[1]]
        if not coeff:
            continue
        key = [tuple(1 if k == rows[0] else 0 for k in range(size))]
        for j in range(n - 1):
            key.append(tuple(1 if k == rows[2 + j] else 0 for k in range(size)))
        terms[tuple(key)] = terms.get(tuple(key), 0) + coeff
    return HomogPoly.from_terms(groups, (1,) * n, terms)


def _perm_sign(perm) -> int:
    sign = 1
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
            sign = -sign
    return sign


def _generic_product(S: PointConfiguration) -> HomogPoly:
    forms = [_bilinear_det_form(P.coords, S.n) for P in S.points]
    poly = forms[0]
    for g in forms[1:]:
        poly = multiply(poly, g)
    return poly


def build_M(S: PointConfiguration) -> ExactMatrix:
    """Coefficient matrix of ``prod_i det[x, P_i, y]`` (rows: x-monomials, cols: y-monomials)."""
    if S.n != 2:
        raise UnsupportedDimensionError("M(d) is defined for n = 2; use coefficient_spanning_set")
    poly = _generic_product(S)
    N = poly.sizes[0]
    return ExactMatrix(N, N, poly.coeffs)


def coefficient_spanning_set(S: PointConfiguration, d: int) -> list[HomogPoly]:
    """Coefficients in x of ``prod_i det[x, P_i, y^(1), ..., y^(n-1)]``.

    One polynomial per monomial in the plane variables; zero ones are dropped.
    """
    _check_config(S, d)
    return [f for f in _generic_product(S).coefficients_in("x") if not f.is_zero()]


def m_matrix_dimension(S: PointConfiguration, field: str = "exact", seed: int = 0) -> SpanReport:
    M = build_M(S)
    dim, certified = _rank(M, field, seed)
    return SpanReport(2, S.d, "m_matrix", dim, certified, expected_dimension(2, S.d), 0)


def coefficient_dimension(S: PointConfiguration, field: str = "exact", seed: int = 0) -> SpanReport:
    polys = coefficient_spanning_set(S, S.d)
    dim, certified = _rank([f.coeffs for f in polys], field, seed)
    return SpanReport(S.n, S.d, "coefficient_extraction", dim, certified, expected_dimension(S.n, S.d), len(polys))


def span_dimension(
    S: PointConfiguration,
    method: str = "m_matrix",
    field: str = "exact",
    seed: int = 0,
    saturation: int = DEFAULT_SATURATION,
    bound: int = DEFAULT_BOUND,
) -> SpanReport:
    """Dispatch to one of the three dimension methods."""
    method = method.replace("-", "_")
    if method == "m_matrix":
        return m_matrix_dimension(S, field=field, seed=seed)
    if method in ("coefficient_extraction", "coeff"):
        return coefficient_dimension(S, field=field, seed=seed)
    if method == "sampling":
        return cone_span_dimension_sampled(S, S.d, seed=seed, saturation=saturation, bound=bound, field=field)
    raise ValueError(f"unknown method {method!r}; choose from {METHODS}")


# -- the witness for the first restriction --------------------------------------


def _det3(a, b, c):
    return (
        a[0] * (b[1] * c[2] - b[2] * c[1])
        - a[1] * (b[0] * c[2] - b[2] * c[0])
        + a[2] * (b[0] * c[1] - b[1] * c[0])
    )


def witness_polynomial(S: PointConfiguration) -> HomogPoly:
    """``prod_i det[phi(v), phi(P_i), phi(P_{i+1})]`` with indices mod d.

    ``phi`` keeps the first three coordinates; the result vanishes on S.
    """
    m = S.n + 1
    pts = [P.coords[:3] for P in S.points]
    d = len(pts)
    poly = None
    for i in range(d):
        b, c = pts[i], pts[(i + 1) % d]
        coeffs = [b[1] * c[2] - b[2] * c[1], b[2] * c[0] - b[0] * c[2], b[0] * c[1] - b[1] * c[0]]
        form = HomogPoly.linear(coeffs + [0] * (m - 3))
        poly = form if poly is None else multiply(poly, form)
    return poly


def _closed_form(d: int) -> int:
    total = 0
    for sigma in permutations(range(1, d + 1)):
        last = sigma[-1]
        term = (d - 1) * (d - last) * (last - 1)
        if not term:
            continue
        for i in range(1, d):
            s = sigma[i - 1]
            term *= (s - i) * (s - i - 1)
            if not term:
                break
        total += term
    return total


def lemma2_witness(d: int, n: int = 2, method: str = "permanent"):
    """Point functional of the witness form on the moment curve.

    ``symbolic`` expands the witness and differentiates; ``permanent`` takes
    the permanent of the pairing matrix; ``closed_form`` sums the Vandermonde
    product over all permutations (d <= 9).
    """
    if d < 3:
        raise ValueError("the witness needs d >= 3")
    if method == "closed_form":
        if d > CLOSED_FORM_DMAX:
            raise SizeError(f"closed form enumeration limited to d <= {CLOSED_FORM_DMAX}")
        return _closed_form(d)
    S = moment_points(d, n)
    if method == "symbolic":
        return apply_point_functional(S, witness_polynomial(S))
    if method == "permanent":
        phi = [P.coords[:3] for P in S.points]
        B = [[_det3(phi[i], phi[j], phi[(j + 1) % d]) for j in range(d)] for i in range(d)]
        return permanent(B, "ryser")
    raise ValueError(f"unknown witness method {method!r}")


def restriction_rank_check(S: PointConfiguration, d: int, trials: int = 20, seed: int = 0) -> int:
    """Certify dim V(n, d) <= C(d+n, n) - d - 1 for odd d >= 3.

    Checks that the point functional kills ``trials`` cone polynomials and
    that it is nonzero on the witness form for S.
    """
    _check_config(S, d)
    if d < 3 or d % 2 == 0:
        raise ValueError("the first restriction needs odd d >= 3")
    for k, sample in enumerate(sample_cone_polynomials(S, trials, seed=seed)):
        value = apply_point_functional(S, sample.poly)
        if value != 0:
            raise InvariantViolationError(f"functional is {value} on cone sample {k}")
    witness = apply_point_functional(S, witness_polynomial(S))
    if witness == 0:
        raise InvariantViolationError("witness form is annihilated; configuration not generic enough")
    return ambient_dimension(S.n, d) - d - 1
