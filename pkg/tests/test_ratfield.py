import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from nuclear_ideals.poly import Polynomial, parse_polynomial
from nuclear_ideals.ratfield import (
    as_univariate,
    gcd_in_k,
    is_strongly_squarefree,
    poly_gcd,
    pseudo_remainder,
    squarefree_gcd_degree,
)
from nuclear_ideals.tensor_index import TensorShape

from strategies import coeffs
from sympy_oracle import symbols, to_sympy

SQ2 = TensorShape((2, 2))
A = (2, 2)
J = [(1, 1), (1, 2), (2, 1)]


def P(text):
    return parse_polynomial(text, SQ2)


def J_polys(max_terms=3):
    """Small polynomials in the J variables only (x[2,2] exponent fixed at 0)."""
    mono = st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(0, 2)).map(lambda t: t + (0,))
    return st.dictionaries(mono, coeffs, min_size=1, max_size=max_terms).map(lambda t: Polynomial(SQ2, t))


def univariates(max_deg=3):
    return st.lists(J_polys(), min_size=1, max_size=max_deg + 1).map(
        lambda cs: sum((c * Polynomial.variable(SQ2, A) ** k for k, c in enumerate(cs)), Polynomial.zero(SQ2)))


def reference_gcd_degree(f, g):
    """Degree in x[2,2] of the multivariate gcd over Q; equals the gcd degree over Q(J) by Gauss's lemma."""
    gens = symbols(SQ2)
    h = sympy.gcd(to_sympy(f, gens), to_sympy(g, gens))
    return h.degree(gens[3])


def test_as_univariate_minor():
    u = as_univariate(P("x[1,1]*x[2,2] - x[1,2]*x[2,1]"), A, J)
    assert u.degree == 1
    assert list(u.coeffs) == [P("-x[1,2]*x[2,1]"), P("x[1,1]")]
    assert u.to_polynomial() == P("x[1,1]*x[2,2] - x[1,2]*x[2,1]")


def test_as_univariate_constant():
    assert as_univariate(Polynomial.constant(SQ2, 1), A, J).degree == 0


def test_as_univariate_two_term_shape():
    H = P("x[1,1]^2*x[2,2]^2 + x[1,2]^2*x[2,2]^2 - x[2,1]^2")
    u = as_univariate(H, A, J)
    assert u.degree == 2
    assert [not c.is_zero() for c in u.coeffs] == [True, False, True]


def test_as_univariate_rejects_foreign_variable():
    with pytest.raises(ValueError):
        as_univariate(P("x[1,1]*x[2,2]"), A, [(1, 2)])


def test_gcd_unit():
    u = as_univariate(P("x[2,2]^2 - x[1,1]*x[1,2]"), A, J)
    assert gcd_in_k(u, u.derivative()).degree == 0


def test_gcd_self():
    u = as_univariate(P("x[1,1]*x[2,2]^2 - x[1,2]*x[2,2] + x[2,1]"), A, J)
    g = gcd_in_k(u, u)
    assert g.degree == u.degree
    assert pseudo_remainder(list(u.coeffs), list(g.coeffs)) == []


def test_gcd_square_detection():
    f = P("x[2,2] - x[1,2]*x[2,1]")
    u = as_univariate(f * f, A, J)
    g = gcd_in_k(u, u.derivative())
    assert g.degree == 1
    assert g.to_polynomial() == f


def test_strongly_squarefree_examples():
    assert is_strongly_squarefree(P("x[1,1]*x[2,2] - x[1,2]*x[2,1]"), A, J)
    assert not is_strongly_squarefree(P("x[2,2]^2 - 2*x[2,2]*x[1,2] + x[1,2]^2"), A, J)
    assert is_strongly_squarefree(P("x[1,1]^2*x[2,2]^2 - x[2,1]^2"), A, J)
    assert is_strongly_squarefree(P("x[1,1]^2*x[2,2]^4 + x[1,2]^2*x[2,2]^4 - x[2,1]^4"), A, J)


def test_squarefree_rejects_constant():
    with pytest.raises(ValueError):
        squarefree_gcd_degree(P("x[1,1]"), A, J)


@pytest.mark.parametrize("text", ["x[1,1]*x[2,2] - x[1,2]*x[2,1]", "x[2,2]^3 - x[2,2]"])
def test_poly_gcd_with_itself(text):
    f = P(text)
    assert poly_gcd(f, f) == f.monic()


@settings(max_examples=40)
@given(univariates(), univariates())
def test_gcd_degree_matches_reference(f, g):
    if f.degree_in(A) < 1 or g.degree_in(A) < 1:
        return
    u, v = as_univariate(f, A, J), as_univariate(g, A, J)
    h = gcd_in_k(u, v)
    assert h.degree == reference_gcd_degree(f, g)
    # the gcd divides both arguments over k
    assert pseudo_remainder(list(u.coeffs), list(h.coeffs)) == []
    assert pseudo_remainder(list(v.coeffs), list(h.coeffs)) == []


@settings(max_examples=40)
@given(univariates(), univariates(), J_polys(2))
def test_gcd_degree_is_unit_invariant(f, g, unit):
    if f.degree_in(A) < 1 or g.degree_in(A) < 1:
        return
    base = gcd_in_k(as_univariate(f, A, J), as_univariate(g, A, J)).degree
    scaled = gcd_in_k(as_univariate(f * unit, A, J), as_univariate(g, A, J)).degree
    assert base == scaled


@settings(max_examples=30)
@given(univariates(2), univariates(2))
def test_common_factor_is_found(f, g):
    if f.degree_in(A) < 1 or g.degree_in(A) < 1:
        return
    u, v = as_univariate(f * g, A, J), as_univariate(f * f, A, J)
    assert gcd_in_k(u, v).degree >= f.degree_in(A)
