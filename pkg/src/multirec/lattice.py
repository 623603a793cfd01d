"""Grid positions, finite blocks and evaluators for multidimensional words.

Coordinate conventions used throughout the package: a position is a tuple of
nonnegative integers, with the first coordinate horizontal for d = 2 and the
second vertical, rows growing bottom to top.  Nested-list (JSON) form puts the
bottom row first; the text renderer prints the top row first.
"""

from __future__ import annotations

import itertools
import math
from typing import Callable, Iterator, Sequence

from .errors import DegenerateDirection, DimensionError

Vector = tuple[int, ...]


def vec_add(p: Sequence[int], r: Sequence[int]) -> Vector:
    return tuple(a + b for a, b in zip(p, r, strict=True))


def vec_scale(p: Sequence[int], c: int) -> Vector:
    return tuple(c * a for a in p)


def iter_box(size: Sequence[int]) -> Iterator[Vector]:
    """Yield every position of the box [0,s_1) x ... x [0,s_d), first
    coordinate varying fastest (storage order of FiniteWord)."""
    for rev in itertools.product(*(range(s) for s in reversed(size))):
        yield rev[::-1]


def normalize_direction(raw: Sequence[int]) -> Vector:
    """Divide a nonzero nonnegative vector by the gcd of its entries."""
    coords = tuple(int(c) for c in raw)
    if any(c < 0 for c in coords):
        raise ValueError(f"direction coordinates must be nonnegative: {coords}")
    g = math.gcd(*coords) if coords else 0
    if g == 0:
        raise DegenerateDirection(f"no direction along {coords}")
    return tuple(c // g for c in coords)


def _check_dims(*lengths: int) -> None:
    if len(set(lengths)) != 1:
        raise DimensionError(f"mixed dimensions: {lengths}")


class FiniteWord:
    """A rectangular block of letters.

    Cells are stored flat with the first coordinate fastest, so a 2-D block
    is a stack of rows from bottom to top.  Instances are immutable and
    hashable (return-word coding keys on them).
    """

    __slots__ = ("size", "cells", "_hash")

    def __init__(self, size: Sequence[int], cells: Sequence[int]):
        size = tuple(int(s) for s in size)
        if not size or any(s < 1 for s in size):
            raise ValueError(f"invalid block size {size}")
        cells = tuple(int(c) for c in cells)
        if len(cells) != math.prod(size):
            raise ValueError(f"{len(cells)} cells for size {size}")
        object.__setattr__(self, "size", size)
        object.__setattr__(self, "cells", cells)
        object.__setattr__(self, "_hash", hash((size, cells)))

    def __setattr__(self, name, value):
        raise AttributeError("FiniteWord is immutable")

    @property
    def dimension(self) -> int:
        return len(self.size)

    @classmethod
    def from_function(cls, size: Sequence[int], fn: Callable[[Vector], int]) -> "FiniteWord":
        return cls(size, [fn(p) for p in iter_box(size)])

    @classmethod
    def from_nested(cls, nested) -> "FiniteWord":
        """Build from nested lists, outermost index = last coordinate
        (for d = 2: a list of rows, bottom row first)."""
        size = []
        probe = nested
        while isinstance(probe, (list, tuple)):
            size.append(len(probe))
            probe = probe[0]
        size.reverse()

        def fn(p: Vector) -> int:
            v = nested
            for c in reversed(p):
                v = v[c]
            return v

        return cls.from_function(size, fn)

    def to_nested(self):
        """Inverse of from_nested."""

        def rec(axis: int, partial: tuple) -> object:
            if axis < 0:
                return self[partial]
            return [rec(axis - 1, (i, *partial)) for i in range(self.size[axis])]

        return rec(self.dimension - 1, ())

    def flat_index(self, p: Sequence[int]) -> int:
        idx = 0
        stride = 1
        for c, s in zip(p, self.size, strict=True):
            if not 0 <= c < s:
                raise IndexError(f"{tuple(p)} outside block of size {self.size}")
            idx += c * stride
            stride *= s
        return idx

    def __getitem__(self, p) -> int:
        if isinstance(p, int):
            p = (p,)
        return self.cells[self.flat_index(p)]

    def positions(self) -> Iterator[Vector]:
        return iter_box(self.size)

    def __eq__(self, other) -> bool:
        return (isinstance(other, FiniteWord)
                and self.size == other.size and self.cells == other.cells)

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        shape = "x".join(map(str, self.size))
        return f"FiniteWord({shape}, {''.join(map(str, self.cells))})"


class WordSource:
    """An infinite word w: N^d -> A behind a pure evaluator.

    ``line_builder``, when given, batch-evaluates ``count`` letters along an
    arithmetic line; sources with cheap incremental state (rotations) use it
    to avoid per-position recomputation.  Evaluators must be deterministic;
    internal memoization is allowed but invisible.
    """

    __slots__ = ("dimension", "alphabet_size", "_evaluator", "_line_builder", "name")

    def __init__(self, dimension: int, alphabet_size: int,
                 evaluator: Callable[[Vector], int],
                 line_builder: Callable[[Vector, Vector, int], Sequence[int]] | None = None,
                 name: str = "word"):
        self.dimension = dimension
        self.alphabet_size = alphabet_size
        self._evaluator = evaluator
        self._line_builder = line_builder
        self.name = name

    def letter(self, p: Sequence[int]) -> int:
        p = tuple(p)
        _check_dims(self.dimension, len(p))
        return self._evaluator(p)

    def letters_along(self, start: Sequence[int], step: Sequence[int], count: int) -> list[int]:
        """Letters at start, start+step, ..., start+(count-1)*step."""
        start = tuple(start)
        step = tuple(step)
        _check_dims(self.dimension, len(start), len(step))
        if self._line_builder is not None:
            return list(self._line_builder(start, step, count))
        ev = self._evaluator
        out = []
        pos = start
        for _ in range(count):
            out.append(ev(pos))
            pos = vec_add(pos, step)
        return out

    def __repr__(self) -> str:
        return f"WordSource({self.name}, d={self.dimension}, k={self.alphabet_size})"


def factor_at(w: WordSource, p: Sequence[int], s: Sequence[int]) -> FiniteWord:
    """The block f with f(i) = w(p + i) for i in [0, s)."""
    p = tuple(p)
    s = tuple(s)
    _check_dims(w.dimension, len(p), len(s))
    ev = w._evaluator
    return FiniteWord(s, [ev(vec_add(p, i)) for i in iter_box(s)])


def directional_letter(w: WordSource, q: Sequence[int], s: Sequence[int], ell: int) -> FiniteWord:
    """The ell-th letter of the directional word of w along q with block size s."""
    return factor_at(w, vec_scale(tuple(q), ell), s)


def translate_origin(w: WordSource, p: Sequence[int]) -> WordSource:
    """The word i -> w(i + p)."""
    p = tuple(p)
    _check_dims(w.dimension, len(p))
    ev = w._evaluator
    lb = None
    if w._line_builder is not None:
        base_lb = w._line_builder
        lb = lambda start, step, count: base_lb(vec_add(start, p), step, count)
    return WordSource(w.dimension, w.alphabet_size,
                      lambda i: ev(vec_add(i, p)),
                      line_builder=lb,
                      name=f"{w.name}@{p}")
