"""Univariate polynomials over the rational function field k = Q(J).

An element of k[x_a] is stored with its denominators cleared: a list of
coefficients in Q[J] (ascending powers of x_a), defined up to a unit of k.
Every predicate exposed here (degree of a gcd, coprimality) is invariant
under such units, so no rational-function arithmetic is ever needed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .groebner import divide
from .poly import GREVLEX, Polynomial
from .tensor_index import MultiIndex, format_variable

# content extraction is skipped above this many terms (results stay correct up to a unit)
CONTENT_TERM_CAP = 2000


class _TooBig(Exception):
    pass


@dataclass(frozen=True)
class UnivariateOverField:
    main_var: MultiIndex
    coeffs: tuple[Polynomial, ...]

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading_coefficient(self) -> Polynomial:
        return self.coeffs[-1]

    def to_polynomial(self) -> Polynomial:
        x = Polynomial.variable(self.coeffs[0].shape, self.main_var)
        out = Polynomial.zero(x.shape)
        for k, c in enumerate(self.coeffs):
            out = out + c * x ** k
        return out

    def derivative(self) -> UnivariateOverField:
        return UnivariateOverField(self.main_var, tuple(_trim([c.scale(k) for k, c in enumerate(self.coeffs)][1:])))

    def __str__(self):
        v = format_variable(self.main_var)
        return " + ".join(f"({c})*{v}^{k}" for k, c in enumerate(self.coeffs))


def _trim(cs: list[Polynomial]) -> list[Polynomial]:
    while cs and cs[-1].is_zero():
        cs.pop()
    return cs


def as_univariate(H: Polynomial, a: Sequence[int], J: Iterable[Sequence[int]]) -> UnivariateOverField:
    """Coefficients of ``H`` in powers of ``x_a``; ``H`` may only involve ``J`` and ``a``."""
    shape = H.shape
    a = shape.validate(a)
    allowed = {shape.rank(b) for b in J} | {shape.rank(a)}
    foreign = H.support() - allowed
    if foreign:
        names = ", ".join(format_variable(shape.index(r)) for r in sorted(foreign))
        raise ValueError(f"polynomial involves variables outside J and {format_variable(a)}: {names}")
    return UnivariateOverField(a, tuple(_split(H, shape.rank(a))))


def _split(f: Polynomial, r: int) -> list[Polynomial]:
    """Coefficient list of ``f`` viewed as univariate in variable rank ``r``."""
    parts: dict[int, dict] = {}
    for m, c in f.terms.items():
        k = m[r]
        mm = m[:r] + (0,) + m[r + 1:]
        parts.setdefault(k, {})[mm] = c
    if not parts:
        return []
    return [Polynomial._raw(f.shape, parts.get(k, {})) for k in range(max(parts) + 1)]


def _join(cs: list[Polynomial], r: int, shape) -> Polynomial:
    t = {}
    for k, c in enumerate(cs):
        for m, v in c.terms.items():
            t[m[:r] + (m[r] + k,) + m[r + 1:]] = v
    return Polynomial._raw(shape, t)


def exact_quotient(f: Polynomial, g: Polynomial) -> Polynomial:
    """``f / g`` in Q[X]; raises ``ArithmeticError`` if ``g`` does not divide ``f``."""
    if g.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if g.is_constant():
        return f.scale(1 / g.leading_coefficient())
    (q,), r = divide(f, [g])
    if not r.is_zero():
        raise ArithmeticError("inexact polynomial division")
    return q


def pseudo_remainder(A: list[Polynomial], B: list[Polynomial]) -> list[Polynomial]:
    """``lc(B)^(deg A - deg B + 1) * A mod B`` with coefficients kept in Q[J]."""
    if not B:
        raise ZeroDivisionError("pseudo-division by zero")
    dA, dB = len(A) - 1, len(B) - 1
    if dA < dB:
        return list(A)
    lcB = B[-1]
    e = dA - dB + 1
    r = list(A)
    while r and len(r) - 1 >= dB:
        lr = r[-1]
        shift = len(r) - 1 - dB
        r = [c * lcB for c in r]
        for k, b in enumerate(B):
            r[k + shift] = r[k + shift] - lr * b
        r = _trim(r)
        e -= 1
    if e:
        f = lcB ** e
        r = [c * f for c in r]
    return r


def _subresultant_last(A: list[Polynomial], B: list[Polynomial]) -> list[Polynomial]:
    """Last nonzero member of the subresultant PRS of ``A`` and ``B``.

    Its degree is the degree of ``gcd(A, B)`` over the fraction field.
    """
    if len(A) < len(B):
        A, B = B, A
    if not B:
        return A
    shape = A[0].shape
    g = h = Polynomial.constant(shape, 1)
    while True:
        delta = len(A) - len(B)
        R = pseudo_remainder(A, B)
        if not R:
            return B
        if len(R) == 1:
            return R
        A, B = B, [exact_quotient(c, g * h ** delta) for c in R]
        g = A[-1]
        if delta == 0:
            pass
        elif delta == 1:
            h = g
        else:
            h = exact_quotient(g ** delta, h ** (delta - 1))


def _normalize_scalar(f: Polynomial) -> Polynomial:
    return f.monic(GREVLEX) if not f.is_zero() else f


def poly_gcd(f: Polynomial, g: Polynomial, cap: int = CONTENT_TERM_CAP) -> Polynomial:
    """Multivariate gcd over Q, normalized to leading coefficient 1.

    Recursive: split off the last variable, take gcds of contents in the
    remaining variables, and a subresultant gcd of the primitive parts.
    """
    if len(f) > cap or len(g) > cap:
        raise _TooBig
    if f.is_zero():
        return _normalize_scalar(g)
    if g.is_zero():
        return _normalize_scalar(f)
    if f.is_constant() or g.is_constant():
        return Polynomial.constant(f.shape, 1)
    r = max(f.support() | g.support())
    F, G = _split(f, r), _split(g, r)
    cf, cg = _content(F, cap), _content(G, cap)
    if len(F) == 1:
        return poly_gcd(f, cg, cap)
    if len(G) == 1:
        return poly_gcd(cf, g, cap)
    c = poly_gcd(cf, cg, cap)
    pF = [exact_quotient(x, cf) for x in F]
    pG = [exact_quotient(x, cg) for x in G]
    S = _subresultant_last(pF, pG)
    cS = _content(S, cap)
    S = [exact_quotient(x, cS) for x in S]
    return _normalize_scalar(c * _join(S, r, f.shape))


def _content(cs: list[Polynomial], cap: int) -> Polynomial:
    out = Polynomial.zero(cs[0].shape)
    for c in cs:
        out = poly_gcd(out, c, cap)
        if out and out.is_constant():
            break
    return out


def _primitive(cs: list[Polynomial]) -> list[Polynomial]:
    try:
        c = _content(cs, CONTENT_TERM_CAP)
    except _TooBig:
        return cs
    return [exact_quotient(x, c) for x in cs]


def gcd_in_k(u: UnivariateOverField, v: UnivariateOverField) -> UnivariateOverField:
    """gcd of ``u`` and ``v`` in k[x_a], up to a unit of k.

    The result is primitive over Q[J] (when content extraction stays under
    the size cap) and scaled so the leading coefficient of its leading
    coefficient is 1; a unit gcd is returned as 1.
    """
    if u.main_var != v.main_var:
        raise ValueError(f"main variable mismatch: {u.main_var} vs {v.main_var}")
    if u.is_zero() and v.is_zero():
        raise ValueError("gcd of two zero polynomials")
    A, B = list(u.coeffs), list(v.coeffs)
    A = _primitive(A) if A else A
    B = _primitive(B) if B else B
    S = _subresultant_last(A, B)
    shape = S[0].shape
    if len(S) == 1:
        return UnivariateOverField(u.main_var, (Polynomial.constant(shape, 1),))
    S = _primitive(S)
    lc = S[-1].leading_coefficient(GREVLEX)
    S = [c.scale(1 / lc) for c in S]
    return UnivariateOverField(u.main_var, tuple(S))


def is_strongly_squarefree(H: Polynomial, a: Sequence[int], J: Iterable[Sequence[int]]) -> bool:
    """True iff ``H`` and ``dH/dx_a`` are coprime in k[x_a]."""
    return squarefree_gcd_degree(H, a, J) == 0


def squarefree_gcd_degree(H: Polynomial, a: Sequence[int], J: Iterable[Sequence[int]]) -> int:
    """Degree in ``x_a`` of ``gcd(H, dH/dx_a)`` over k."""
    u = as_univariate(H, a, J)
    if u.degree < 1:
        raise ValueError(f"polynomial is constant in {format_variable(u.main_var)}")
    return gcd_in_k(u, u.derivative()).degree
