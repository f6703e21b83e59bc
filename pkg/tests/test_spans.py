import random
from math import comb

import pytest

from conepoly.algebra import DegreeError, HomogPoly, LinearForm, multiply
from conepoly.geometry import PlaneSpan, PointConfiguration, moment_points, random_points
from conepoly.linalg import SizeError, permanent, rank_exact
from conepoly.spans import (
    DegenerateSampleError,
    UnsupportedDimensionError,
    apply_point_functional,
    build_M,
    coefficient_dimension,
    coefficient_spanning_set,
    cone_polynomial,
    cone_span_dimension_sampled,
    expected_dimension,
    lemma2_witness,
    m_matrix_dimension,
    pairing_matrix,
    restriction_rank_check,
    sample_cone_polynomials,
    span_dimension,
    vanishing_dimension,
    witness_polynomial,
)
from oracles import cone_poly_by_determinants, term_list, witness_permutation_sum


def test_expected_dimension_formula():
    # even, 3 mod 4, 1 mod 4
    assert expected_dimension(2, 2) == 4
    assert expected_dimension(2, 3) == 6
    assert expected_dimension(2, 5) == 14
    assert expected_dimension(2, 7) == 28
    assert expected_dimension(2, 9) == 44
    assert expected_dimension(2, 1) == 2
    assert expected_dimension(3, 3) is None


def test_cone_polynomial_vanishes_on_points():
    S = random_points(5, 3, seed=2)
    for sample in sample_cone_polynomials(S, 3, seed=1):
        for P in S:
            assert sample.poly.evaluate(P.coords) == 0
        assert sample.poly.degree == 5


def test_cone_polynomial_single_point():
    S = PointConfiguration(2, ((1, 2, 3),))
    sample = cone_polynomial(S, PlaneSpan(((0, 0, 1),)))
    assert sample.poly.degree == 1 and not sample.poly.is_zero()
    assert sample.poly.evaluate((1, 2, 3)) == 0


def test_cone_polynomial_matches_naive_expansion():
    S = moment_points(3, 2)
    sample = cone_polynomial(S, PlaneSpan(((1, 0, 0),)))
    expected = cone_poly_by_determinants([list(P.coords) for P in S], [[1, 0, 0]])
    assert term_list(sample.poly) == expected


def test_cone_polynomial_degenerate_plane():
    S = moment_points(3, 2)
    with pytest.raises(DegenerateSampleError):
        cone_polynomial(S, PlaneSpan(((2, 4, 8),)))


@pytest.mark.parametrize("d", [3, 5, 7])
def test_functional_kills_cone_polynomials_for_odd_d(d):
    S = random_points(d, 2, seed=d)
    for sample in sample_cone_polynomials(S, 5, seed=0):
        assert apply_point_functional(S, sample.poly) == 0
    S3 = random_points(d, 3, seed=d)
    for sample in sample_cone_polynomials(S3, 3, seed=0):
        assert apply_point_functional(S3, sample.poly) == 0


def test_functional_on_square():
    x1sq = HomogPoly.from_terms([("x", 3)], (2,), {(2, 0, 0): 1})
    assert apply_point_functional([(1, 0, 0), (1, 0, 0)], x1sq) == 2


def test_functional_degree_mismatch():
    S = random_points(3, 2, seed=0)
    with pytest.raises(DegreeError):
        apply_point_functional(S, HomogPoly.linear([1, 0, 0]))


def test_functional_is_order_independent():
    S = random_points(4, 2, seed=4)
    f = next(iter(sample_cone_polynomials(S, 1)))
    rev = PointConfiguration(2, tuple(reversed(S.points)))
    assert apply_point_functional(S, f.poly) == apply_point_functional(rev, f.poly)


def test_functional_equals_permanent_of_pairing():
    rng = random.Random(17)
    for _ in range(20):
        d = rng.randint(1, 7)
        n = rng.randint(2, 3)
        pts = [[rng.randint(-6, 6) for _ in range(n + 1)] for _ in range(d)]
        forms = [LinearForm([rng.randint(-6, 6) for _ in range(n + 1)]) for _ in range(d)]
        f = forms[0].as_poly()
        for L in forms[1:]:
            f = multiply(f, L.as_poly())
        assert apply_point_functional(pts, f) == permanent(pairing_matrix(pts, forms), "ryser")


def test_vanishing_dimension_examples():
    assert vanishing_dimension(PointConfiguration(2, ((1, 2, 3),)), 1) == 2
    S = random_points(6, 2, seed=3)
    assert vanishing_dimension(S, 6) == comb(8, 2) - 6
    # a doubled point imposes one condition
    assert vanishing_dimension(PointConfiguration(2, ((1, 2, 3),)), 2) == 5


@pytest.mark.parametrize("d,expected", [(2, 4), (3, 6), (5, 14)])
def test_sampled_dimension_plane(d, expected):
    report = cone_span_dimension_sampled(random_points(d, 2, seed=0), d, seed=0)
    assert report.dimension == expected
    assert report.method == "sampling" and report.certified


def test_sampled_dimension_mod_field():
    report = cone_span_dimension_sampled(random_points(5, 2, seed=0), 5, seed=0, field="mod")
    assert report.dimension == 14 and not report.certified


def test_build_M_single_point():
    M = build_M(moment_points(1, 2))
    assert M.tolist() == [[0, -1, 1], [1, 0, -1], [-1, 1, 0]]
    assert rank_exact(M) == 2


@pytest.mark.parametrize("d", range(1, 7))
def test_M_symmetry(d):
    M = build_M(random_points(d, 2, seed=d))
    assert M.transpose() == M.scale((-1) ** d)


def test_build_M_requires_plane():
    with pytest.raises(UnsupportedDimensionError):
        build_M(random_points(3, 3, seed=0))


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_coefficient_set_matches_M(d):
    S = random_points(d, 2, seed=d)
    polys = coefficient_spanning_set(S, d)
    assert rank_exact([f.coeffs for f in polys]) == rank_exact(build_M(S))
    for f in polys:
        for P in S:
            assert f.evaluate(P.coords) == 0


def test_coefficient_set_n3_agrees_with_sampling():
    S = random_points(3, 3, seed=0)
    coeff = coefficient_dimension(S)
    sampled = cone_span_dimension_sampled(S, 3, seed=0)
    assert coeff.dimension == sampled.dimension == 16
    for f in coefficient_spanning_set(S, 3):
        for P in S:
            assert f.evaluate(P.coords) == 0


def test_span_dimension_dispatch():
    S = random_points(4, 2, seed=1)
    dims = {m: span_dimension(S, method=m).dimension for m in ("m_matrix", "sampling", "coefficient_extraction", "m-matrix", "coeff")}
    assert set(dims.values()) == {11}
    with pytest.raises(ValueError):
        span_dimension(S, method="bogus")


def test_witness_d3_is_eight():
    assert witness_permutation_sum(3) == 8
    for method in ("symbolic", "permanent", "closed_form"):
        assert lemma2_witness(3, 2, method) == 8


@pytest.mark.parametrize("d", range(3, 8))
def test_witness_methods_agree(d):
    values = {lemma2_witness(d, 2, m) for m in ("symbolic", "permanent", "closed_form")}
    assert len(values) == 1
    assert lemma2_witness(d, 3, "symbolic") == values.pop()


def test_witness_positive():
    for d in range(3, 10):
        assert lemma2_witness(d, 2, "permanent") > 0
    assert lemma2_witness(8, 2, "closed_form") == witness_permutation_sum(8)


def test_witness_errors():
    with pytest.raises(ValueError):
        lemma2_witness(2, 2)
    with pytest.raises(SizeError):
        lemma2_witness(10, 2, "closed_form")


def test_witness_polynomial_vanishes_on_points():
    S = random_points(5, 3, seed=8)
    f0 = witness_polynomial(S)
    for P in S:
        assert f0.evaluate(P.coords) == 0


@pytest.mark.parametrize("n,d,bound,sampled", [(2, 3, 6, 6), (2, 5, 15, 14), (3, 3, 16, 16)])
def test_restriction_rank_check(n, d, bound, sampled):
    S = random_points(d, n, seed=0)
    assert restriction_rank_check(S, d, trials=10) == bound
    report = cone_span_dimension_sampled(S, d, seed=0)
    assert report.dimension == sampled <= bound


def test_restriction_requires_odd():
    with pytest.raises(ValueError):
        restriction_rank_check(random_points(4, 2, seed=0), 4)


def test_scaling_invariance():
    S = random_points(5, 2, seed=6)
    base = m_matrix_dimension(S).dimension
    scaled = S.rescaled(2, -7).rescaled(0, 3)
    assert m_matrix_dimension(scaled).dimension == base
    assert cone_span_dimension_sampled(scaled, 5, seed=1).dimension == base
    assert coefficient_dimension(scaled).dimension == base


def test_span_report_json():
    report = m_matrix_dimension(random_points(3, 2, seed=0))
    data = report.to_dict()
    assert list(data) == ["n", "d", "method", "dimension", "certified", "expected", "samples_used"]
    assert report.matches
