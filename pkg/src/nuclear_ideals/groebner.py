"""Multivariate division, S-polynomials, Buchberger's criterion and completion, elimination."""

from __future__ import annotations

import heapq
import logging
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from gmpy2 import mpq

from .poly import (
    GREVLEX,
    BlockOrder,
    Monomial,
    MonomialOrder,
    Polynomial,
    monomial_div,
    monomial_divides,
    monomial_lcm,
    monomial_mul,
)
from .tensor_index import ShapeError

log = logging.getLogger(__name__)

DEFAULT_MAX_BASIS = 5000
DEFAULT_MAX_TERMS = 10 ** 6


class ResourceLimitError(RuntimeError):
    """A Groebner computation exceeded a configured cap."""

    def __init__(self, what: str, limit: int):
        super().__init__(f"resource limit exceeded: {what} > {limit}")
        self.what = what
        self.limit = limit


@dataclass(frozen=True)
class Limits:
    max_basis: int = DEFAULT_MAX_BASIS
    max_terms: int = DEFAULT_MAX_TERMS


def _mask(m: Monomial) -> int:
    bits = 0
    for i, e in enumerate(m):
        if e:
            bits |= 1 << i
    return bits


class _Divisor:
    __slots__ = ("lt", "lc", "mask", "tail", "idx", "poly")

    def __init__(self, poly: Polynomial, order: MonomialOrder, idx: int):
        terms = poly.sorted_terms(order)
        self.lt, self.lc = terms[0]
        self.mask = _mask(self.lt)
        self.tail = terms[1:]
        self.idx = idx
        self.poly = poly


def _check_shapes(f: Polynomial, G: Sequence[Polynomial]):
    for g in G:
        if g.shape != f.shape:
            raise ShapeError(f"shape mismatch: {f.shape} vs {g.shape}")


def _divisors(G: Sequence[Polynomial], order: MonomialOrder) -> list[_Divisor]:
    # first match in the list sorted by decreasing leading monomial
    ds = [_Divisor(g, order, i) for i, g in enumerate(G) if not g.is_zero()]
    ds.sort(key=lambda d: order.key(d.lt))
    return ds


def _normal_form(terms, divisors, order, max_terms=DEFAULT_MAX_TERMS, quotients=None) -> dict:
    key = order.key
    p = dict(terms)
    heap = [(key(m), m) for m in p]
    heapq.heapify(heap)
    rem = {}
    while heap:
        _, m = heapq.heappop(heap)
        c = p.pop(m, None)
        if c is None:
            continue
        mm_mask = _mask(m)
        for d in divisors:
            if d.mask & ~mm_mask == 0 and monomial_divides(d.lt, m):
                q = monomial_div(m, d.lt)
                factor = c / d.lc
                if quotients is not None:
                    qd = quotients[d.idx]
                    v = qd.get(q, 0) + factor
                    if v:
                        qd[q] = v
                    else:
                        qd.pop(q, None)
                for t, tc in d.tail:
                    n = monomial_mul(t, q)
                    old = p.get(n)
                    if old is None:
                        p[n] = -factor * tc
                        heapq.heappush(heap, (key(n), n))
                    else:
                        v = old - factor * tc
                        if v:
                            p[n] = v
                        else:
                            del p[n]
                break
        else:
            rem[m] = c
        if len(p) + len(rem) > max_terms:
            raise ResourceLimitError("polynomial terms", max_terms)
    return rem


def reduce(f: Polynomial, G: Sequence[Polynomial], order: MonomialOrder = GREVLEX,
           max_terms: int = DEFAULT_MAX_TERMS) -> Polynomial:
    """Full normal form of ``f`` modulo ``G``.

    No term of the result is divisible by a leading monomial of ``G``.
    Divisors are tried in order of decreasing leading monomial.
    """
    _check_shapes(f, G)
    if f.is_zero():
        return f
    rem = _normal_form(f.terms, _divisors(G, order), order, max_terms)
    return Polynomial._raw(f.shape, rem)


def divide(f: Polynomial, G: Sequence[Polynomial], order: MonomialOrder = GREVLEX
           ) -> tuple[list[Polynomial], Polynomial]:
    """Division with tracked quotients: ``f == sum(q*g) + r``.

    Quotients are returned in the order of ``G``.
    """
    _check_shapes(f, G)
    quotients = [dict() for _ in G]
    rem = _normal_form(f.terms, _divisors(G, order), order, quotients=quotients)
    return [Polynomial._raw(f.shape, q) for q in quotients], Polynomial._raw(f.shape, rem)


def s_polynomial(f: Polynomial, g: Polynomial, order: MonomialOrder = GREVLEX) -> Polynomial:
    if f.is_zero() or g.is_zero():
        raise ValueError("S-polynomial of a zero polynomial")
    if f.shape != g.shape:
        raise ShapeError(f"shape mismatch: {f.shape} vs {g.shape}")
    mf, cf = f.leading_term(order)
    mg, cg = g.leading_term(order)
    L = monomial_lcm(mf, mg)
    return f.mul_term(monomial_div(L, mf), 1 / cf) - g.mul_term(monomial_div(L, mg), 1 / cg)


@dataclass
class GBCheck:
    is_gb: bool
    spairs_checked: int
    witness: tuple[int, int, Polynomial] | None = None

    def __bool__(self):
        return self.is_gb

    def to_dict(self) -> dict:
        w = None
        if self.witness is not None:
            i, j, r = self.witness
            w = {"pair": [i, j], "remainder": str(r)}
        return {"is_gb": self.is_gb, "spairs_checked": self.spairs_checked, "witness": w}


def is_groebner_basis(G: Sequence[Polynomial], order: MonomialOrder = GREVLEX,
                      max_terms: int = DEFAULT_MAX_TERMS) -> GBCheck:
    """Buchberger's criterion: every S-polynomial reduces to zero modulo ``G``.

    All pairs are checked (no pair-elimination criteria); on failure the
    first offending pair (indices into ``G``) and its remainder are returned.
    """
    G = [g for g in G if not g.is_zero()]
    if not G:
        return GBCheck(True, 0)
    divs = _divisors(G, order)
    checked = 0
    for i in range(len(G)):
        for j in range(i + 1, len(G)):
            s = s_polynomial(G[i], G[j], order)
            checked += 1
            if s.is_zero():
                continue
            r = _normal_form(s.terms, divs, order, max_terms)
            if r:
                return GBCheck(False, checked, (i, j, Polynomial._raw(G[0].shape, r)))
    return GBCheck(True, checked)


@dataclass
class GroebnerBasis:
    polynomials: tuple[Polynomial, ...]
    order: MonomialOrder = GREVLEX
    source: object = field(default=None, repr=False)

    def __iter__(self):
        return iter(self.polynomials)

    def __len__(self):
        return len(self.polynomials)

    def leading_monomials(self) -> list[Monomial]:
        return [g.leading_monomial(self.order) for g in self.polynomials]

    def reduce(self, f: Polynomial) -> Polynomial:
        return reduce(f, self.polynomials, self.order)

    def contains(self, f: Polynomial) -> bool:
        return self.reduce(f).is_zero()


class _Elem:
    __slots__ = ("poly", "lt", "mask", "deg")

    def __init__(self, poly, order):
        self.poly = poly
        self.lt = poly.leading_monomial(order)
        self.mask = _mask(self.lt)
        self.deg = sum(self.lt)


def _coprime(a: _Elem, b: _Elem) -> bool:
    return a.mask & b.mask == 0


def buchberger(generators: Iterable[Polynomial], order: MonomialOrder = GREVLEX,
               limits: Limits = Limits(), source=None) -> GroebnerBasis:
    """Reduced Groebner basis of the ideal generated by ``generators``.

    Pairs are processed by the normal strategy (smallest lcm degree first);
    useless pairs are dropped with the Gebauer-Moeller installation of
    Buchberger's coprime and chain criteria.
    """
    gens = [g for g in generators if not g.is_zero()]
    if not gens:
        raise ValueError("buchberger needs at least one nonzero generator")
    _check_shapes(gens[0], gens)

    elems: list[_Elem] = []
    active: list[int] = []
    pairs: set[tuple[int, int]] = set()
    heap: list = []

    def lcm_of(i, j):
        return monomial_lcm(elems[i].lt, elems[j].lt)

    def install(poly):
        h = len(elems)
        elems.append(_Elem(poly.monic(order), order))
        eh = elems[h]
        # Gebauer-Moeller update
        cand = [(g, lcm_of(g, h)) for g in active]
        keep = []
        for k, (g, L) in enumerate(cand):
            if _coprime(elems[g], eh):
                keep.append((g, L))
                continue
            others = [L2 for _, L2 in cand[k + 1:]] + [L2 for _, L2 in keep]
            if not any(monomial_divides(L2, L) for L2 in others):
                keep.append((g, L))
        # among pairs with equal lcm keep one; drop coprime ones
        new_pairs = []
        seen = set()
        for g, L in keep:
            if L in seen:
                continue
            seen.add(L)
            if not _coprime(elems[g], eh):
                new_pairs.append((g, h, L))
        for (i, j) in list(pairs):
            L = lcm_of(i, j)
            if monomial_divides(eh.lt, L) and lcm_of(i, h) != L and lcm_of(j, h) != L:
                pairs.discard((i, j))
        for g, hh, L in new_pairs:
            pairs.add((g, hh))
            heapq.heappush(heap, (sum(L), g, hh))
        active[:] = [g for g in active if not monomial_divides(eh.lt, elems[g].lt)] + [h]
        if len(active) > limits.max_basis:
            raise ResourceLimitError("basis size", limits.max_basis)

    for g in sorted(gens, key=lambda q: order.key(q.leading_monomial(order)), reverse=True):
        r = reduce(g, [elems[i].poly for i in active], order, limits.max_terms) if active else g
        if not r.is_zero():
            install(r)

    steps = 0
    while heap:
        _, i, j = heapq.heappop(heap)
        if (i, j) not in pairs:
            continue
        pairs.discard((i, j))
        s = s_polynomial(elems[i].poly, elems[j].poly, order)
        r = reduce(s, [elems[k].poly for k in active], order, limits.max_terms)
        steps += 1
        if not r.is_zero():
            install(r)
        if steps % 500 == 0:
            log.debug("buchberger: %d reductions, basis %d, pairs %d", steps, len(active), len(pairs))

    basis = [elems[i].poly for i in active]
    return GroebnerBasis(tuple(_interreduce(basis, order, limits)), order, source)


def _interreduce(basis: list[Polynomial], order: MonomialOrder, limits: Limits) -> list[Polynomial]:
    basis = sorted(basis, key=lambda g: order.key(g.leading_monomial(order)))
    minimal = []
    for k, g in enumerate(basis):
        lt = g.leading_monomial(order)
        if any(monomial_divides(h.leading_monomial(order), lt)
               for j, h in enumerate(basis) if j != k and (
                   h.leading_monomial(order) != lt or j < k)):
            continue
        minimal.append(g)
    out = []
    for k, g in enumerate(minimal):
        others = minimal[:k] + minimal[k + 1:]
        m, c = g.leading_term(order)
        tail = Polynomial._raw(g.shape, {t: v for t, v in g.terms.items() if t != m})
        tail = reduce(tail, others, order, limits.max_terms) if others else tail
        out.append((Polynomial._raw(g.shape, {m: mpq(1)}) + tail.scale(1 / c)))
    out.sort(key=lambda g: order.key(g.leading_monomial(order)))
    return out


def ideal_member(f: Polynomial, gb: GroebnerBasis) -> bool:
    return gb.contains(f)


def elimination_order(shape, keep: Iterable[Sequence[int]]) -> BlockOrder:
    keep_ranks = {shape.rank(a) for a in keep}
    return BlockOrder([r for r in range(shape.size) if r not in keep_ranks], shape.size)


def eliminate(generators: Sequence[Polynomial], keep: Iterable[Sequence[int]],
              limits: Limits = Limits()) -> list[Polynomial]:
    """Generators of ``<generators>`` intersected with ``Q[keep]``.

    Uses a block order with the eliminated variables above the kept ones.
    """
    gens = [g for g in generators if not g.is_zero()]
    if not gens:
        return []
    shape = gens[0].shape
    keep = [shape.validate(a) for a in keep]
    order = elimination_order(shape, keep)
    keep_ranks = {shape.rank(a) for a in keep}
    gb = buchberger(gens, order, limits)
    return [g for g in gb.polynomials if g.support() <= keep_ranks]
