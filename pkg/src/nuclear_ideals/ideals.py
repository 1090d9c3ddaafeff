"""Generator sets of the nuclear p-norm ideals I_0, I_1, I_2s and I_inf."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .poly import Polynomial
from .tensor_index import TensorShape, incomparable_pairs, join, meet

INF = math.inf


def parse_p(text) -> int | float:
    """Accept ``0``, ``1``, a positive even integer, or ``inf``."""
    if isinstance(text, str):
        t = text.strip().lower()
        if t in ("inf", "infinity", "oo"):
            return INF
        try:
            p = int(t)
        except ValueError:
            raise ValueError(f"invalid p {text!r}") from None
    else:
        p = text
    if p == INF:
        return INF
    if isinstance(p, float) or p < 0 or (p > 1 and p % 2):
        raise ValueError(f"invalid p {text!r}: use 0, 1, an even integer or inf")
    return int(p)


def format_p(p) -> str:
    return "inf" if p == INF else str(p)


def is_even_p(p) -> bool:
    return p != INF and p >= 2 and p % 2 == 0


@dataclass(frozen=True)
class IdealSpec:
    shape: TensorShape
    p: int | float
    generators: tuple[Polynomial, ...]
    claimed_groebner: bool

    @property
    def name(self) -> str:
        return f"I_{format_p(self.p)}"

    @property
    def s(self) -> int:
        if not is_even_p(self.p):
            raise ValueError(f"{self.name} is not an even-p ideal")
        return self.p // 2


def rank1_binomials(shape: TensorShape) -> list[Polynomial]:
    """``x_a x_b - x_{a v b} x_{a ^ b}`` for each unordered incomparable pair, a < b lexicographically."""
    out = []
    for a, b in incomparable_pairs(shape):
        lead = Polynomial.monomial(shape, {a: 1, b: 1})
        tail = Polynomial.monomial(shape, _powers(join(a, b), meet(a, b)))
        out.append(lead - tail)
    return out


def _powers(*idx):
    d: dict = {}
    for a in idx:
        d[a] = d.get(a, 0) + 1
    return d


def unit_sphere(shape: TensorShape, k: int) -> Polynomial:
    """``sum_a x_a^k - 1``."""
    terms = {}
    for r in range(shape.size):
        e = [0] * shape.size
        e[r] = k
        terms[tuple(e)] = 1
    terms[(0,) * shape.size] = -1
    return Polynomial(shape, terms)


def build_ideal(shape: TensorShape, p) -> IdealSpec:
    p = parse_p(p)
    idx = list(shape.indices())
    if p == 0:
        return IdealSpec(shape, 0, tuple(rank1_binomials(shape)), True)
    if p == 1:
        gens = [unit_sphere(shape, 2)]
        for a in idx:
            x = Polynomial.variable(shape, a)
            gens.append(x ** 3 - x)
        for i, a in enumerate(idx):
            for b in idx[i + 1:]:
                gens.append(Polynomial.monomial(shape, {a: 1, b: 1}))
        return IdealSpec(shape, 1, tuple(gens), True)
    if p == INF:
        gens = [Polynomial.variable(shape, a) ** 2 - 1 for a in idx]
        gens += rank1_binomials(shape)
        return IdealSpec(shape, INF, tuple(gens), False)
    # p = 2s: only s = 1 is known to be presented by a Groebner basis
    gens = [unit_sphere(shape, p)] + rank1_binomials(shape)
    return IdealSpec(shape, p, tuple(gens), p == 2)
