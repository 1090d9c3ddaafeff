"""Shared hypothesis strategies for small polynomials."""

from fractions import Fraction

from hypothesis import strategies as st

from nuclear_ideals.poly import Polynomial
from nuclear_ideals.tensor_index import TensorShape

SQ2 = TensorShape((2, 2))

coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=4).filter(lambda c: c != 0)


def monomials(nvars, max_exp=2):
    return st.tuples(*[st.integers(0, max_exp)] * nvars)


def polys(shape=SQ2, max_terms=4, max_exp=2):
    return st.dictionaries(monomials(shape.size, max_exp), coeffs, max_size=max_terms).map(
        lambda t: Polynomial(shape, {m: Fraction(c) for m, c in t.items()}))


def points(shape=SQ2):
    return st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=3),
                    min_size=shape.size, max_size=shape.size)
