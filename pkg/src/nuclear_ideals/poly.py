"""Exact multivariate polynomials over Q indexed by tensor entries.

Variables are the entries ``x[a]`` of a tensor of a fixed :class:`TensorShape`;
variable ``x[a]`` sits at position ``variable_rank(a)`` of every exponent
tuple.  Coefficients are ``gmpy2.mpq`` rationals.

Monomial orders are expressed through sort keys: ``order.key(m1) < order.key(m2)``
means ``m1`` is the *larger* monomial, so ``min(..., key=order.key)`` is the
leading monomial and ``sorted(..., key=order.key)`` lists terms in
decreasing order.
"""

from __future__ import annotations

import operator
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from gmpy2 import mpq

from .tensor_index import MultiIndex, ShapeError, TensorShape, format_variable

Monomial = tuple[int, ...]

LT, EQ, GT = -1, 0, 1


def rational(c) -> mpq:
    """Coerce an exact scalar to ``mpq``; floats are rejected."""
    if isinstance(c, float):
        raise TypeError("floating point coefficients are not allowed")
    if isinstance(c, str):
        return mpq(Fraction(c))
    return mpq(c)


class MonomialOrder:
    """Base class; subclasses provide :meth:`key`."""

    name = "order"

    def key(self, m: Monomial) -> tuple:
        raise NotImplementedError

    def compare(self, m1: Monomial, m2: Monomial) -> int:
        """Return ``GT`` if ``m1 > m2``, ``LT`` if ``m1 < m2`` and ``EQ`` otherwise."""
        if len(m1) != len(m2):
            raise ShapeError("monomials live in rings of different size")
        k1, k2 = self.key(m1), self.key(m2)
        if k1 == k2:
            return EQ
        return GT if k1 < k2 else LT


class Grevlex(MonomialOrder):
    """Graded reverse lexicographic order with ``x[rank 0] > x[rank 1] > ...``.

    Ties in degree are broken by the rightmost nonzero entry of the exponent
    difference: it is negative for the larger monomial.
    """

    name = "grevlex"

    def key(self, m):
        return (-sum(m),) + m[::-1]

    def __eq__(self, other):
        return isinstance(other, Grevlex)

    def __hash__(self):
        return hash("grevlex")

    def __repr__(self):
        return "Grevlex()"


GREVLEX = Grevlex()


class BlockOrder(MonomialOrder):
    """Elimination order: grevlex on the ``first`` block, ties broken by grevlex on the rest.

    Every monomial involving a ``first`` variable is larger than any monomial
    in the remaining variables alone.
    """

    name = "block"

    def __init__(self, first: Iterable[int], nvars: int):
        first = sorted(set(first))
        if any(not 0 <= r < nvars for r in first):
            raise ShapeError("block variable out of range")
        self.first = tuple(first)
        self.rest = tuple(r for r in range(nvars) if r not in set(first))
        self.nvars = nvars
        self._rf = self.first[::-1]
        self._rr = self.rest[::-1]

    def key(self, m):
        a = tuple(m[i] for i in self._rf)
        b = tuple(m[i] for i in self._rr)
        return (-sum(a),) + a + (-sum(b),) + b

    def __eq__(self, other):
        return isinstance(other, BlockOrder) and (self.first, self.nvars) == (other.first, other.nvars)

    def __hash__(self):
        return hash(("block", self.first, self.nvars))

    def __repr__(self):
        return f"BlockOrder(first={self.first}, nvars={self.nvars})"


def monomial_divides(m: Monomial, n: Monomial) -> bool:
    return all(a <= b for a, b in zip(m, n))


def monomial_lcm(m: Monomial, n: Monomial) -> Monomial:
    return tuple(map(max, m, n))


def monomial_mul(m: Monomial, n: Monomial) -> Monomial:
    return tuple(map(operator.add, m, n))


def monomial_div(m: Monomial, n: Monomial) -> Monomial:
    return tuple(map(operator.sub, m, n))


class Polynomial:
    """Immutable polynomial with rational coefficients.

    ``terms`` maps dense exponent tuples (length ``shape.size``) to nonzero
    ``mpq`` coefficients.
    """

    __slots__ = ("shape", "_terms", "_cache")

    def __init__(self, shape: TensorShape, terms: Mapping[Monomial, object] | None = None):
        self.shape = shape
        n = shape.size
        clean = {}
        for m, c in (terms or {}).items():
            m = tuple(m)
            if len(m) != n:
                raise ShapeError(f"exponent vector of length {len(m)} in a ring with {n} variables")
            c = rational(c)
            if c:
                clean[m] = clean.get(m, 0) + c
                if not clean[m]:
                    del clean[m]
        self._terms = clean
        self._cache = {}

    @classmethod
    def _raw(cls, shape, terms):
        # caller guarantees normalized terms
        p = cls.__new__(cls)
        p.shape = shape
        p._terms = terms
        p._cache = {}
        return p

    # constructors

    @classmethod
    def zero(cls, shape):
        return cls._raw(shape, {})

    @classmethod
    def constant(cls, shape, c):
        c = rational(c)
        return cls._raw(shape, {(0,) * shape.size: c} if c else {})

    @classmethod
    def variable(cls, shape, a: Sequence[int]):
        e = [0] * shape.size
        e[shape.rank(a)] = 1
        return cls._raw(shape, {tuple(e): mpq(1)})

    @classmethod
    def monomial(cls, shape, powers: Mapping[MultiIndex, int], c=1):
        """Build ``c * prod x[a]^k`` from a sparse ``{a: k}`` map."""
        e = [0] * shape.size
        for a, k in powers.items():
            if k < 0:
                raise ValueError("negative exponent")
            e[shape.rank(a)] += k
        return cls(shape, {tuple(e): c})

    @classmethod
    def parse(cls, text: str, shape: TensorShape | None = None):
        return parse_polynomial(text, shape)

    # basic accessors

    @property
    def terms(self) -> Mapping[Monomial, mpq]:
        return self._terms

    @property
    def nvars(self) -> int:
        return self.shape.size

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        z = (0,) * self.nvars
        return all(m == z for m in self._terms)

    def total_degree(self) -> int:
        if not self._terms:
            return -1
        return max(sum(m) for m in self._terms)

    def degree_in(self, a: Sequence[int]) -> int:
        r = self.shape.rank(a)
        if not self._terms:
            return -1
        return max(m[r] for m in self._terms)

    def support(self) -> set[int]:
        """Ranks of the variables that occur."""
        s = set()
        for m in self._terms:
            s.update(i for i, e in enumerate(m) if e)
        return s

    def variables(self) -> list[MultiIndex]:
        return [self.shape.index(r) for r in sorted(self.support())]

    # order-dependent views

    def sorted_terms(self, order: MonomialOrder = GREVLEX) -> list[tuple[Monomial, mpq]]:
        key = ("sorted", order)
        if key not in self._cache:
            self._cache[key] = sorted(self._terms.items(), key=lambda t: order.key(t[0]))
        return self._cache[key]

    def leading_term(self, order: MonomialOrder = GREVLEX) -> tuple[Monomial, mpq]:
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        key = ("lt", order)
        if key not in self._cache:
            m = min(self._terms, key=order.key)
            self._cache[key] = (m, self._terms[m])
        return self._cache[key]

    def leading_monomial(self, order: MonomialOrder = GREVLEX) -> Monomial:
        return self.leading_term(order)[0]

    def leading_coefficient(self, order: MonomialOrder = GREVLEX) -> mpq:
        return self.leading_term(order)[1]

    def monic(self, order: MonomialOrder = GREVLEX) -> Polynomial:
        if not self._terms:
            return self
        c = self.leading_coefficient(order)
        return self if c == 1 else self.scale(1 / c)

    # arithmetic

    def _check(self, other):
        if not isinstance(other, Polynomial):
            return Polynomial.constant(self.shape, other)
        if other.shape != self.shape:
            raise ShapeError(f"shape mismatch: {self.shape} vs {other.shape}")
        return other

    def __add__(self, other):
        other = self._check(other)
        t = dict(self._terms)
        for m, c in other._terms.items():
            v = t.get(m, 0) + c
            if v:
                t[m] = v
            else:
                t.pop(m, None)
        return Polynomial._raw(self.shape, t)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.shape, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def scale(self, c) -> Polynomial:
        c = rational(c)
        if not c:
            return Polynomial.zero(self.shape)
        return Polynomial._raw(self.shape, {m: c * v for m, v in self._terms.items()})

    def mul_term(self, m: Monomial, c) -> Polynomial:
        c = rational(c)
        if not c:
            return Polynomial.zero(self.shape)
        return Polynomial._raw(self.shape, {monomial_mul(m, k): c * v for k, v in self._terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return self.scale(other)
        other = self._check(other)
        t: dict = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = tuple(map(operator.add, m1, m2))
                v = t.get(m, 0) + c1 * c2
                if v:
                    t[m] = v
                else:
                    t.pop(m, None)
        return Polynomial._raw(self.shape, t)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = Polynomial.constant(self.shape, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.shape == other.shape and self._terms == other._terms
        try:
            return self == Polynomial.constant(self.shape, rational(other))
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash((self.shape, frozenset(self._terms.items())))

    # calculus and evaluation

    def partial_derivative(self, a: Sequence[int]) -> Polynomial:
        r = self.shape.rank(a)
        t = {}
        for m, c in self._terms.items():
            e = m[r]
            if e:
                mm = list(m)
                mm[r] = e - 1
                t[tuple(mm)] = c * e
        return Polynomial._raw(self.shape, t)

    def evaluate(self, point) -> mpq:
        """Exact value at ``point``.

        ``point`` is either a mapping ``MultiIndex -> scalar`` that assigns
        every variable, or a sequence of scalars indexed by variable rank.
        """
        vals = _point_values(self.shape, point)
        total = mpq(0)
        for m, c in self._terms.items():
            v = c
            for i, e in enumerate(m):
                if e:
                    v *= vals[i] ** e
            total += v
        return total

    def substitute(self, values: Mapping[MultiIndex, object]) -> Polynomial:
        """Replace some variables by exact constants."""
        sub = {self.shape.rank(a): rational(v) for a, v in values.items()}
        t: dict = {}
        for m, c in self._terms.items():
            mm = list(m)
            for r, v in sub.items():
                if mm[r]:
                    c = c * v ** mm[r]
                    mm[r] = 0
            if c:
                k = tuple(mm)
                s = t.get(k, 0) + c
                if s:
                    t[k] = s
                else:
                    t.pop(k, None)
        return Polynomial._raw(self.shape, t)

    def __str__(self):
        return format_polynomial(self)

    def __repr__(self):
        return f"Polynomial({str(self)!r}, shape={self.shape})"


def _point_values(shape: TensorShape, point) -> list[mpq]:
    if isinstance(point, Mapping):
        vals = []
        for a in shape.indices():
            if a not in point:
                raise ValueError(f"point assigns no value to {format_variable(a)}")
            vals.append(rational(point[a]))
        return vals
    vals = [rational(v) for v in point]
    if len(vals) != shape.size:
        raise ValueError(f"point has {len(vals)} entries, shape {shape} has {shape.size} variables")
    return vals


def compare(m1: Monomial, m2: Monomial, order: MonomialOrder = GREVLEX) -> int:
    return order.compare(m1, m2)


# text format


def format_monomial(shape: TensorShape, m: Monomial) -> str:
    parts = []
    for r, e in enumerate(m):
        if e:
            v = format_variable(shape.index(r))
            parts.append(v if e == 1 else f"{v}^{e}")
    return "*".join(parts)


def format_polynomial(f: Polynomial, order: MonomialOrder = GREVLEX) -> str:
    """Canonical text: decreasing order, explicit ``*`` and ``^``, rationals as ``p/q``."""
    if f.is_zero():
        return "0"
    out = []
    for i, (m, c) in enumerate(f.sorted_terms(order)):
        mono = format_monomial(f.shape, m)
        mag = abs(c)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        if i == 0:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append((" - " if c < 0 else " + ") + body)
    return "".join(out)


class PolynomialSyntaxError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class _Parser:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch):
        if self.peek() != ch:
            raise PolynomialSyntaxError(f"expected {ch!r}", self.pos)
        self.pos += 1

    def integer(self):
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            raise PolynomialSyntaxError("expected integer", self.pos)
        return int(self.text[start:self.pos])

    def var(self):
        self.expect("x")
        self.expect("[")
        idx = [self.integer()]
        while self.peek() == ",":
            self.pos += 1
            idx.append(self.integer())
        self.expect("]")
        k = 1
        if self.peek() == "^":
            self.pos += 1
            k = self.integer()
        return tuple(idx), k

    def term(self):
        coeff = Fraction(1)
        factors = []
        ch = self.peek()
        if ch.isdigit():
            num = self.integer()
            if self.peek() == "/":
                self.pos += 1
                pos = self.pos
                den = self.integer()
                if den == 0:
                    raise PolynomialSyntaxError("zero denominator", pos)
                coeff = Fraction(num, den)
            else:
                coeff = Fraction(num)
        elif ch == "x":
            factors.append(self.var())
        else:
            raise PolynomialSyntaxError("expected term", self.pos)
        while self.peek() == "*":
            self.pos += 1
            factors.append(self.var())
        return coeff, factors

    def polynomial(self):
        terms = []
        sign = 1
        if self.peek() in "+-" and self.peek():
            sign = -1 if self.peek() == "-" else 1
            self.pos += 1
        while True:
            c, f = self.term()
            terms.append((sign * c, f))
            ch = self.peek()
            if ch == "":
                break
            if ch not in "+-":
                raise PolynomialSyntaxError("expected '+' or '-'", self.pos)
            sign = -1 if ch == "-" else 1
            self.pos += 1
        return terms


def parse_polynomial(text: str, shape: TensorShape | None = None) -> Polynomial:
    """Parse the polynomial text grammar.

    Without ``shape`` the shape is the componentwise maximum of the indices
    that occur (a constant parses into shape ``(1,)``).
    """
    terms = _Parser(text).polynomial()
    if shape is None:
        idx = [a for _, fs in terms for a, _ in fs]
        if not idx:
            shape = TensorShape((1,))
        else:
            d = len(idx[0])
            if any(len(a) != d for a in idx):
                raise ShapeError("variables with different index lengths")
            shape = TensorShape(tuple(max(a[i] for a in idx) for i in range(d)))
    out: dict = {}
    for c, fs in terms:
        e = [0] * shape.size
        for a, k in fs:
            e[shape.rank(a)] += k
        m = tuple(e)
        out[m] = out.get(m, 0) + c
    return Polynomial(shape, out)
