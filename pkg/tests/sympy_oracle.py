"""Independent reference computations with sympy (test-only dependency)."""

import sympy

from nuclear_ideals.poly import Polynomial


def symbols(shape):
    return sympy.symbols(f"v0:{shape.size}")


def to_sympy(f: Polynomial, gens):
    expr = 0
    for m, c in f.terms.items():
        t = sympy.Rational(int(c.numerator), int(c.denominator))
        for v, e in zip(gens, m):
            t *= v ** e
        expr += t
    return sympy.Poly(expr, *gens, domain="QQ")


def from_sympy(p: sympy.Poly, shape) -> Polynomial:
    from fractions import Fraction
    return Polynomial(shape, {m: Fraction(int(c.p), int(c.q)) for m, c in p.terms()})


def reduced_groebner(polys, shape):
    gens = symbols(shape)
    G = sympy.groebner([to_sympy(f, gens).as_expr() for f in polys], *gens, order="grevlex", domain="QQ")
    return {from_sympy(sympy.Poly(g, *gens, domain="QQ"), shape) for g in G.exprs}
