"""Multi-index combinatorics on the index set [n1] x ... x [nd].

Multi-indices are 1-based tuples; variable ranks are 0-based positions in
the lexicographic enumeration of the index set, so that ``x[1,...,1]`` has
rank 0 and is the largest variable.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from typing import Iterator, Sequence

MultiIndex = tuple[int, ...]


class ShapeError(ValueError):
    """Invalid shape or multi-index."""


@dataclass(frozen=True)
class TensorShape:
    dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(n) for n in self.dims)
        if not dims:
            raise ShapeError("shape needs at least one dimension")
        if any(n < 1 for n in dims):
            raise ShapeError(f"invalid shape {dims}: every dimension must be >= 1")
        object.__setattr__(self, "dims", dims)

    @classmethod
    def parse(cls, text: str) -> TensorShape:
        """Parse ``"3x3"`` / ``"2x2x2"`` / ``"4"``."""
        if not re.fullmatch(r"\d+(x\d+)*", text.strip()):
            raise ShapeError(f"invalid shape {text!r}")
        return cls(tuple(int(t) for t in text.strip().split("x")))

    @property
    def order(self) -> int:
        return len(self.dims)

    @property
    def size(self) -> int:
        return math.prod(self.dims)

    def indices(self) -> Iterator[MultiIndex]:
        """All multi-indices in lexicographic (= variable rank) order."""
        return itertools.product(*(range(1, n + 1) for n in self.dims))

    def validate(self, a: Sequence[int]) -> MultiIndex:
        a = tuple(a)
        if len(a) != self.order:
            raise ShapeError(f"index {a} has length {len(a)}, shape {self.dims} needs {self.order}")
        for ai, n in zip(a, self.dims):
            if not 1 <= ai <= n:
                raise ShapeError(f"index {a} out of bounds for shape {self.dims}")
        return a

    def rank(self, a: Sequence[int]) -> int:
        return variable_rank(a, self)

    def index(self, rank: int) -> MultiIndex:
        """Inverse of :func:`variable_rank`."""
        if not 0 <= rank < self.size:
            raise ShapeError(f"rank {rank} out of range for shape {self.dims}")
        out = []
        for n in reversed(self.dims):
            rank, r = divmod(rank, n)
            out.append(r + 1)
        return tuple(reversed(out))

    def ones(self) -> MultiIndex:
        return (1,) * self.order

    def __str__(self):
        return "x".join(str(n) for n in self.dims)


def _check_pair(a: Sequence[int], b: Sequence[int]) -> None:
    if len(a) != len(b):
        raise ShapeError(f"shape mismatch: {tuple(a)} vs {tuple(b)}")


def meet(a: Sequence[int], b: Sequence[int]) -> MultiIndex:
    """Componentwise minimum."""
    _check_pair(a, b)
    return tuple(min(x, y) for x, y in zip(a, b))


def join(a: Sequence[int], b: Sequence[int]) -> MultiIndex:
    """Componentwise maximum."""
    _check_pair(a, b)
    return tuple(max(x, y) for x, y in zip(a, b))


def comparable(a: Sequence[int], b: Sequence[int]) -> bool:
    """True if a <= b or b <= a in the product order."""
    _check_pair(a, b)
    return all(x <= y for x, y in zip(a, b)) or all(x >= y for x, y in zip(a, b))


def incomparable_pairs(shape: TensorShape) -> list[tuple[MultiIndex, MultiIndex]]:
    """Unordered incomparable pairs, each returned once as ``(a, b)`` with ``a < b`` lexicographically.

    Pairs are listed in lexicographic order of ``(a, b)``.
    """
    idx = list(shape.indices())
    return [(a, b) for a, b in itertools.combinations(idx, 2) if not comparable(a, b)]


def variable_rank(a: Sequence[int], shape: TensorShape) -> int:
    """0-based position of ``a`` in the lexicographic enumeration of the index set."""
    a = shape.validate(a)
    r = 0
    for ai, n in zip(a, shape.dims):
        r = r * n + (ai - 1)
    return r


def axis_index(shape: TensorShape, axis: int, value: int) -> MultiIndex:
    """The index ``(1,...,1,value,1,...,1)`` with ``value`` in position ``axis`` (0-based)."""
    a = [1] * shape.order
    a[axis] = value
    return shape.validate(a)


def non_one_count(a: Sequence[int]) -> int:
    return sum(1 for x in a if x != 1)


def format_index(a: Sequence[int]) -> str:
    return "(" + ",".join(str(x) for x in a) + ")"


def format_variable(a: Sequence[int]) -> str:
    return "x[" + ",".join(str(x) for x in a) + "]"
