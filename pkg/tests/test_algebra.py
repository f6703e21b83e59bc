from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conepoly.algebra import (
    BadPrimeError,
    DegreeError,
    HomogPoly,
    InvalidExponentError,
    LinearForm,
    PrimeField,
    StructureError,
    as_scalar,
    directional_derivative,
    monomial_at,
    monomial_index,
    monomials,
    multiply,
    num_monomials,
)
from oracles import all_exponents_desc_lex, naive_multiply, term_list


def x(k, m=3):
    return HomogPoly.variable(k, m)


def test_monomial_index_examples():
    assert monomial_index((2, 0, 0), 3, 2) == 0
    assert monomial_index((0, 0, 2), 3, 2) == 5
    assert monomial_index((1, 0, 1), 3, 2) == 2
    assert all_exponents_desc_lex(3, 2).index((1, 0, 1)) == 2


@pytest.mark.parametrize("m,d", [(1, 4), (2, 5), (3, 4), (4, 3), (5, 2), (6, 3)])
def test_enumeration_matches_brute_force(m, d):
    brute = all_exponents_desc_lex(m, d)
    assert list(monomials(m, d)) == brute
    assert [monomial_index(e, m, d) for e in brute] == list(range(len(brute)))
    assert num_monomials(m, d) == len(brute)


def test_index_roundtrip_exhaustive():
    for m in range(1, 7):
        for d in range(0, 13):
            for i in range(num_monomials(m, d)):
                assert monomial_index(monomial_at(i, m, d), m, d) == i


@pytest.mark.parametrize("bad", [(1, 1, 1), (-1, 2, 1), (2, 0)])
def test_monomial_index_rejects_bad_vectors(bad):
    with pytest.raises(InvalidExponentError):
        monomial_index(bad, 3, 2)


def test_monomial_at_out_of_range():
    with pytest.raises(InvalidExponentError):
        monomial_at(6, 3, 2)


def test_multiply_examples():
    p = multiply(x(0), x(1))
    assert p.coefficient((1, 1, 0)) == 1
    assert sum(1 for c in p.coeffs if c) == 1

    s = x(0) + x(1)
    sq = s * s
    assert term_list(sq) == {(2, 0, 0): 1, (1, 1, 0): 2, (0, 2, 0): 1}


def test_multiply_structure_mismatch():
    with pytest.raises(StructureError):
        multiply(x(0, 3), x(0, 4))


def test_two_group_product():
    f = HomogPoly.from_terms([("x", 2), ("y", 2)], (1, 1), {((1, 0), (0, 1)): 3})
    g = HomogPoly.from_terms([("x", 2), ("y", 2)], (1, 1), {((0, 1), (1, 0)): 2, ((1, 0), (1, 0)): 1})
    h = f * g
    assert h.degrees == (2, 2)
    assert h.coefficient((1, 1), (1, 1)) == 6
    assert h.coefficient((2, 0), (1, 1)) == 3
    assert sum(1 for c in h.coeffs if c) == 2


small_poly = st.builds(
    lambda d, cs: HomogPoly((("x", 3),), (d,), cs[: num_monomials(3, d)]),
    st.integers(0, 3),
    st.lists(st.integers(-5, 5), min_size=10, max_size=10),
)


@settings(max_examples=60, deadline=None)
@given(small_poly, small_poly, small_poly)
def test_multiply_commutative_associative(f, g, h):
    assert f * g == g * f
    assert (f * g) * h == f * (g * h)


@settings(max_examples=60, deadline=None)
@given(small_poly, small_poly)
def test_multiply_matches_naive_oracle(f, g):
    assert term_list(f * g) == naive_multiply(term_list(f), term_list(g))


def test_derivative_power_rule():
    f = x(0) * x(0)
    assert directional_derivative(f, (1, 0, 0)) == x(0).scale(2)


def test_derivative_of_constant_fails():
    with pytest.raises(DegreeError):
        directional_derivative(HomogPoly.constant(3, (("x", 3),)), (1, 0, 0))


def test_derivative_direction_length():
    with pytest.raises(StructureError):
        directional_derivative(x(0), (1, 0))


@settings(max_examples=60, deadline=None)
@given(small_poly, small_poly, st.lists(st.integers(-4, 4), min_size=3, max_size=3))
def test_leibniz_rule(f, g, w):
    if f.degree == 0 or g.degree == 0:
        return
    lhs = directional_derivative(f * g, w)
    rhs = directional_derivative(f, w) * g + f * directional_derivative(g, w)
    assert lhs == rhs


@settings(max_examples=60, deadline=None)
@given(small_poly, st.lists(st.integers(-4, 4), min_size=3, max_size=3), st.lists(st.integers(-4, 4), min_size=3, max_size=3))
def test_derivative_linear_in_direction(f, v, w):
    if f.degree == 0:
        return
    vw = [a + b for a, b in zip(v, w)]
    assert directional_derivative(f, vw) == directional_derivative(f, v) + directional_derivative(f, w)


@settings(max_examples=60, deadline=None)
@given(small_poly)
def test_euler_identity(f):
    if f.degree == 0:
        return
    total = HomogPoly.zero(f.groups, f.degrees)
    for k in range(3):
        e_k = [1 if j == k else 0 for j in range(3)]
        total = total + x(k) * directional_derivative(f, e_k)
    assert total == f.scale(f.degree)


def test_derivative_in_one_group_of_two():
    f = HomogPoly.from_terms([("x", 2), ("y", 2)], (2, 1), {((2, 0), (0, 1)): 5})
    g = directional_derivative(f, (1, 0), "x")
    assert g.degrees == (1, 1)
    assert g.coefficient((1, 0), (0, 1)) == 10
    h = directional_derivative(f, (3, 7), "y")
    assert h.degrees == (2, 0)
    assert h.coefficient((2, 0), (0, 0)) == 35


def test_evaluate_and_fraction_coefficients():
    f = HomogPoly.from_terms([("x", 2)], (2,), {(2, 0): Fraction(1, 2), (0, 2): -1})
    assert f.evaluate((2, 1)) == 1
    assert f.evaluate((Fraction(1, 2), 0)) == Fraction(1, 8)


def test_coefficients_in():
    f = HomogPoly.from_terms([("x", 2), ("y", 2)], (1, 1), {((1, 0), (0, 1)): 3, ((0, 1), (0, 1)): 4})
    parts = f.coefficients_in("x")
    assert len(parts) == 2
    assert parts[0].is_zero()
    assert parts[1].coeffs == (3, 4)


def test_polys_are_immutable_and_hashable():
    f = x(0)
    with pytest.raises(AttributeError):
        f.coeffs = (0, 0, 0)
    assert len({x(0), x(0), x(1)}) == 2


def test_scalars_reject_floats():
    with pytest.raises(TypeError):
        as_scalar(0.5)
    assert as_scalar(Fraction(4, 2)) == 2 and isinstance(as_scalar(Fraction(4, 2)), int)


def test_prime_field_reduce():
    F = PrimeField(7)
    assert F.reduce(-1) == 6
    assert F.reduce(Fraction(1, 3)) == 5
    with pytest.raises(BadPrimeError):
        F.reduce(Fraction(1, 14))


def test_linear_form_flags():
    assert LinearForm([0, 0, 0]).degenerate
    L = LinearForm([1, -2, 3])
    assert not L.degenerate
    assert L((1, 1, 1)) == 2
    assert L.as_poly() == HomogPoly.linear([1, -2, 3])
