import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nuclear_ideals.certificates import corner_product
from nuclear_ideals.groebner import (
    Limits,
    ResourceLimitError,
    buchberger,
    divide,
    eliminate,
    ideal_member,
    is_groebner_basis,
    reduce,
    s_polynomial,
)
from nuclear_ideals.ideals import INF, build_ideal
from nuclear_ideals.poly import Polynomial, monomial_divides, parse_polynomial
from nuclear_ideals.tensor_index import TensorShape

from strategies import SQ2, polys
from sympy_oracle import reduced_groebner

LINE = TensorShape((2,))  # x = x[1], y = x[2]


def P(text, shape):
    return parse_polynomial(text, shape)


def shape_of(dims):
    return TensorShape(dims)


# reduction

@pytest.mark.parametrize("dims", [(2, 2), (3, 3), (2, 2, 2)])
@pytest.mark.parametrize("p", [0, 1, 2])
def test_generators_reduce_to_zero(dims, p):
    ideal = build_ideal(shape_of(dims), p)
    for g in ideal.generators:
        assert reduce(g, ideal.generators).is_zero()


@pytest.mark.parametrize("dims", [(3, 3), (2, 2, 2), (2, 3, 2)])
def test_corner_congruence(dims):
    # x[1..1]^(d-1) x_a is congruent to the product of its axis variables
    shape = shape_of(dims)
    ideal = build_ideal(shape, 2)
    x1 = Polynomial.variable(shape, shape.ones())
    for a in shape.indices():
        lhs = x1 ** (shape.order - 1) * Polynomial.variable(shape, a)
        assert reduce(lhs - corner_product(a, shape), ideal.generators).is_zero()


def test_single_division_step(sq2):
    minor = P("x[1,2]*x[2,1] - x[1,1]*x[2,2]", sq2)
    assert reduce(P("x[1,2]*x[2,1]", sq2), [minor]) == P("x[1,1]*x[2,2]", sq2)


@given(polys(max_terms=5, max_exp=3))
def test_reduce_is_idempotent_and_reduced(f):
    G = build_ideal(SQ2, 1).generators
    r = reduce(f, G)
    assert reduce(r, G) == r
    lts = [g.leading_monomial() for g in G]
    assert not any(monomial_divides(lt, m) for m in r.terms for lt in lts)


@given(polys(max_terms=5, max_exp=3))
def test_divide_reexpands(f):
    G = list(build_ideal(SQ2, 2).generators)
    qs, r = divide(f, G)
    total = r
    for q, g in zip(qs, G):
        total = total + q * g
    assert total == f
    assert r == reduce(f, G)


# S-polynomials

def test_s_polynomial_self(sq2):
    f = P("x[1,2]*x[2,1] - x[1,1]*x[2,2]", sq2)
    assert s_polynomial(f, f).is_zero()


def test_s_polynomial_minors_sharing_column(sq3):
    gens = build_ideal(sq3, 0).generators
    f = P("x[1,2]*x[2,1] - x[1,1]*x[2,2]", sq3)
    g = P("x[1,2]*x[3,1] - x[1,1]*x[3,2]", sq3)
    assert f in gens and g in gens
    assert reduce(s_polynomial(f, g), gens).is_zero()


def test_s_polynomial_sphere_minor(sq2):
    sphere, minor = build_ideal(sq2, 2).generators
    assert reduce(s_polynomial(sphere, minor), [sphere, minor]).is_zero()


# Buchberger's criterion

@pytest.mark.parametrize("dims", [(3, 3), (2, 2), (2, 3), (2, 2, 2)])
@pytest.mark.parametrize("p", [0, 1, 2])
def test_generators_are_groebner(dims, p):
    assert is_groebner_basis(build_ideal(shape_of(dims), p).generators).is_gb


def test_univariate_pair_is_groebner():
    x = TensorShape((1,))
    assert is_groebner_basis([P("x[1]^2 - 1", x), P("x[1] - 1", x)]).is_gb


def test_i_inf_generators_are_not_groebner(sq2):
    chk = is_groebner_basis(build_ideal(sq2, INF).generators)
    assert not chk.is_gb
    assert chk.witness is not None and not chk.witness[2].is_zero()


# completion

def test_buchberger_single_minor(sq2):
    gb = buchberger(build_ideal(sq2, 0).generators)
    assert list(gb) == [P("x[1,2]*x[2,1] - x[1,1]*x[2,2]", sq2)]


def test_buchberger_two_variable_example():
    gb = buchberger([P("x[1]^2 - x[2]", LINE), P("x[2]^2 - x[1]", LINE)])
    assert is_groebner_basis(list(gb)).is_gb
    assert ideal_member(P("x[1]^4 - x[1]", LINE), gb)
    assert not ideal_member(P("x[1] - 1", LINE), gb)
    assert set(gb) == reduced_groebner([P("x[1]^2 - x[2]", LINE), P("x[2]^2 - x[1]", LINE)], LINE)


@pytest.mark.parametrize("dims,size", [((2, 2), 7), ((2, 3), 14)])
def test_i_inf_completion(dims, size):
    shape = shape_of(dims)
    gens = build_ideal(shape, INF).generators
    gb = buchberger(gens)
    assert len(gb) == size
    assert is_groebner_basis(list(gb)).is_gb
    lms = set(gb.leading_monomials())
    for r in range(shape.size):
        pure = tuple(2 if i == r else 0 for i in range(shape.size))
        assert pure in lms
    assert set(gb) == reduced_groebner(gens, shape)


@settings(max_examples=25)
@given(st.lists(polys(max_terms=3, max_exp=2), min_size=1, max_size=3))
def test_buchberger_matches_reference(gens):
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return
    gb = buchberger(gens, limits=Limits(max_basis=200, max_terms=20000))
    assert is_groebner_basis(list(gb)).is_gb
    for g in gens:
        assert gb.contains(g)
    assert set(gb) == reduced_groebner(gens, SQ2)


def test_buchberger_resource_cap(sq3):
    with pytest.raises(ResourceLimitError):
        buchberger(build_ideal(sq3, INF).generators, limits=Limits(max_basis=3))


def test_buchberger_rejects_empty(sq2):
    with pytest.raises(ValueError):
        buchberger([Polynomial.zero(sq2)])


# elimination

@pytest.mark.parametrize("dims,J", [
    ((2, 2), [(1, 1), (2, 1)]),
    ((3, 3), [(1, 1), (1, 2), (2, 1), (3, 1)]),
])
def test_eliminate_onto_independent_set_is_empty(dims, J):
    assert eliminate(build_ideal(shape_of(dims), 2).generators, J) == []


def test_eliminate_small_examples():
    x_minus_y = P("x[1] - x[2]", LINE)
    assert eliminate([x_minus_y], [(2,)]) == []
    assert eliminate([x_minus_y, P("x[1]", LINE)], [(2,)]) == [P("x[2]", LINE)]


def test_eliminate_with_extra_variable_is_nonempty(sq2):
    # J plus one more variable is no longer independent
    out = eliminate(build_ideal(sq2, 2).generators, [(1, 1), (2, 1), (2, 2)])
    assert out
    for g in out:
        assert g.support() <= {0, 2, 3}
        assert reduce(g, buchberger(build_ideal(sq2, 2).generators).polynomials).is_zero()

