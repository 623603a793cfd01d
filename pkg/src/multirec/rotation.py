"""Rotation words with exact quadratic angles.

Interval endpoints, angles and origins are QuadExt values, so membership at
half-open endpoints is bit-exact.  Circular interval sets are stored cut at
zero; a wrapping component splits in two.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import EmptyVisit, NotFound
from .lattice import FiniteWord, Vector, WordSource
from .quadratic import QuadExt

LOWER = "lower"   # intervals [a, b), partition of [0, 1)
UPPER = "upper"   # intervals (a, b], partition of (0, 1]

_ZERO = QuadExt()
_ONE = QuadExt.rational(1)

# Float orbit walks resync against exact arithmetic every _RESYNC steps, so
# the drift (a few ulp per step) stays far below the _GUARD band inside
# which points are re-decided exactly.
_RESYNC = 4096
_GUARD = 1e-9


def _as_qext(value) -> QuadExt:
    return value if isinstance(value, QuadExt) else QuadExt.rational(value)


class IntervalSet:
    """A finite union of disjoint half-open intervals on the circle."""

    __slots__ = ("components", "orientation")

    def __init__(self, components, orientation: str = LOWER):
        comps = []
        for lo, hi in components:
            lo, hi = _as_qext(lo), _as_qext(hi)
            if lo.compare(hi) < 0:
                comps.append((lo, hi))
        comps.sort(key=lambda c: c[0].to_float())
        merged: list[tuple[QuadExt, QuadExt]] = []
        for lo, hi in comps:
            if merged and merged[-1][1] == lo:
                merged[-1] = (merged[-1][0], hi)
            else:
                merged.append((lo, hi))
        object.__setattr__(self, "components", tuple(merged))
        object.__setattr__(self, "orientation", orientation)

    def __setattr__(self, name, value):
        raise AttributeError("IntervalSet is immutable")

    @classmethod
    def full(cls, orientation: str = LOWER) -> "IntervalSet":
        return cls([(_ZERO, _ONE)], orientation)

    @property
    def n_components(self) -> int:
        return len(self.components)

    def is_empty(self) -> bool:
        return not self.components

    def total_length(self) -> QuadExt:
        out = _ZERO
        for lo, hi in self.components:
            out = out + (hi - lo)
        return out

    def contains(self, x: QuadExt) -> bool:
        """Membership of a circle point given in [0, 1)."""
        if self.orientation == UPPER and x.is_zero():
            x = _ONE
        for lo, hi in self.components:
            c_lo = x.compare(lo)
            if (c_lo >= 0 if self.orientation == LOWER else c_lo > 0):
                c_hi = x.compare(hi)
                if (c_hi < 0 if self.orientation == LOWER else c_hi <= 0):
                    return True
        return False

    def rotate_back(self, delta: QuadExt) -> "IntervalSet":
        """{x : x + delta in self}, i.e. the set shifted by -delta."""
        out = []
        for lo, hi in self.components:
            length = hi - lo
            start = (lo - delta).mod1()
            end = start + length
            if end.compare(_ONE) <= 0:
                out.append((start, end))
            else:
                out.append((start, _ONE))
                out.append((_ZERO, end - 1))
        return IntervalSet(out, self.orientation)

    def intersect(self, other: "IntervalSet") -> "IntervalSet":
        if self.orientation != other.orientation:
            raise ValueError("cannot intersect sets of mixed orientation")
        out = []
        for lo_a, hi_a in self.components:
            for lo_b, hi_b in other.components:
                lo = lo_a if lo_a.compare(lo_b) >= 0 else lo_b
                hi = hi_a if hi_a.compare(hi_b) <= 0 else hi_b
                out.append((lo, hi))
        return IntervalSet(out, self.orientation)

    def min_length(self) -> QuadExt:
        if self.is_empty():
            raise ValueError("empty set has no component length")
        best = None
        for lo, hi in self.components:
            length = hi - lo
            if best is None or length.compare(best) < 0:
                best = length
        return best

    def __repr__(self):
        parts = ", ".join(f"({lo.to_float():.4f},{hi.to_float():.4f})"
                          for lo, hi in self.components)
        return f"IntervalSet[{self.orientation}]({parts})"


class IntervalPartition:
    """k half-open intervals cut from the circle, with a label per cell."""

    __slots__ = ("cuts", "labels", "orientation")

    def __init__(self, cuts: Sequence[QuadExt], labels: Sequence[int] | None = None,
                 orientation: str = LOWER):
        cuts = tuple(_as_qext(c) for c in cuts)
        for c in cuts:
            if not (_ZERO.compare(c) < 0 and c.compare(_ONE) < 0):
                raise ValueError("interior cuts must lie strictly inside (0, 1)")
        for a, b in zip(cuts, cuts[1:]):
            if a.compare(b) >= 0:
                raise ValueError("cuts must be strictly increasing")
        if orientation not in (LOWER, UPPER):
            raise ValueError(f"unknown orientation {orientation!r}")
        k = len(cuts) + 1
        if labels is None:
            labels = tuple(range(k))
        labels = tuple(int(v) for v in labels)
        if len(labels) != k or len(set(labels)) != k:
            raise ValueError("need one distinct label per interval")
        object.__setattr__(self, "cuts", cuts)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "orientation", orientation)

    def __setattr__(self, name, value):
        raise AttributeError("IntervalPartition is immutable")

    @property
    def size(self) -> int:
        return len(self.labels)

    def bounds(self, index: int) -> tuple[QuadExt, QuadExt]:
        ends = (_ZERO, *self.cuts, _ONE)
        return ends[index], ends[index + 1]

    def cell(self, label: int) -> IntervalSet:
        index = self.labels.index(label)
        return IntervalSet([self.bounds(index)], self.orientation)

    def min_cell_length(self) -> QuadExt:
        ends = (_ZERO, *self.cuts, _ONE)
        best = None
        for a, b in zip(ends, ends[1:]):
            length = b - a
            if best is None or length.compare(best) < 0:
                best = length
        return best

    def letter_at(self, x: QuadExt) -> int:
        """Label of the cell containing the circle point x (given in [0,1))."""
        if self.orientation == UPPER and x.is_zero():
            x = _ONE
        for index, cut in enumerate(self.cuts):
            c = x.compare(cut)
            if c < 0 or (self.orientation == UPPER and c == 0):
                return self.labels[index]
        return self.labels[-1]


def rational_independence_check(alpha: Sequence[QuadExt]) -> bool:
    """True iff 1, alpha_1, ..., alpha_d are linearly independent over Q."""
    radicands = {1}
    for a in alpha:
        radicands.update(a.coefficients())
    basis = sorted(radicands)
    column = {rad: i for i, rad in enumerate(basis)}
    rows = [[Fraction(0)] * len(basis) for _ in range(len(alpha) + 1)]
    rows[0][column[1]] = Fraction(1)
    for r, a in enumerate(alpha, start=1):
        for rad, c in a.coefficients().items():
            rows[r][column[rad]] = c
    rank = 0
    for col in range(len(basis)):
        pivot = next((r for r in range(rank, len(rows)) if rows[r][col] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        lead = rows[rank][col]
        for r in range(len(rows)):
            if r != rank and rows[r][col] != 0:
                factor = rows[r][col] / lead
                rows[r] = [x - factor * y for x, y in zip(rows[r], rows[rank])]
        rank += 1
    return rank == len(alpha) + 1


@dataclass(frozen=True)
class RotationWordSpec:
    """w(i) = label of the partition cell containing (rho + i.alpha) mod 1."""

    alpha: tuple[QuadExt, ...]
    rho: QuadExt
    partition: IntervalPartition

    def __post_init__(self):
        if not rational_independence_check(self.alpha):
            raise ValueError("1 and the angles must be rationally independent")

    @property
    def dimension(self) -> int:
        return len(self.alpha)

    def point(self, p: Sequence[int]) -> QuadExt:
        total = self.rho
        for c, a in zip(p, self.alpha, strict=True):
            total = total + a * c
        return total.mod1()

    def letter(self, p: Sequence[int]) -> int:
        return self.partition.letter_at(self.point(p))

    def angle_along(self, q: Sequence[int]) -> QuadExt:
        """Rotation step of the directional word along q: (q . alpha) mod 1."""
        total = _ZERO
        for c, a in zip(q, self.alpha, strict=True):
            total = total + a * c
        return total.mod1()

    def word(self) -> WordSource:
        part = self.partition

        def line(start: Vector, step: Vector, count: int) -> list[int]:
            x0 = self.point(start)
            delta = self.angle_along(step)
            cuts = [c.to_float() for c in part.cuts]
            edges = [0.0, 1.0] + cuts
            labels = part.labels
            d = delta.to_float()
            out = []
            x = x0.to_float()
            for ell in range(count):
                if ell % _RESYNC == 0:
                    x = (x0 + delta * ell).mod1().to_float()
                if any(abs(x - e) < _GUARD for e in edges):
                    out.append(part.letter_at((x0 + delta * ell).mod1()))
                else:
                    # strictness at the cut is immaterial outside the guard band
                    out.append(labels[bisect.bisect_right(cuts, x)])
                x += d
                if x >= 1.0:
                    x -= 1.0
            return out

        alphabet = max(part.labels) + 1
        return WordSource(self.dimension, alphabet, self.letter,
                          line_builder=line, name="rotation")


def sturmian_spec(labels: Sequence[int] | None = None) -> RotationWordSpec:
    """The default bidimensional Sturmian parameters used in tests:
    alpha = (sqrt(2)-1, sqrt(3)-1), rho = 0, cells [0, alpha_1) and [alpha_1, 1)."""
    a1 = QuadExt.sqrt(2) - 1
    a2 = QuadExt.sqrt(3) - 1
    part = IntervalPartition([a1], labels=labels)
    return RotationWordSpec((a1, a2), _ZERO, part)


def factor_interval_set(spec: RotationWordSpec, f: FiniteWord) -> IntervalSet:
    """I_f: circle points x such that the factor read from x is f; the factor
    occurs at p exactly when the orbit point of p lies in I_f."""
    out = IntervalSet.full(spec.partition.orientation)
    for i in f.positions():
        cell = spec.partition.cell(f[i])
        shift = _ZERO
        for c, a in zip(i, spec.alpha, strict=True):
            shift = shift + a * c
        out = out.intersect(cell.rotate_back(shift.mod1()))
        if out.is_empty():
            break
    return out


def factor_occurs(spec: RotationWordSpec, f: FiniteWord) -> bool:
    return not factor_interval_set(spec, f).is_empty()


def occurs_at(spec: RotationWordSpec, f: FiniteWord, p: Sequence[int]) -> bool:
    return factor_interval_set(spec, f).contains(spec.point(p))


def three_gap_analysis(delta: QuadExt, interval: IntervalSet, horizon: int) -> set[int]:
    """Distinct gaps between successive l <= horizon with (l*delta) mod 1 in
    the interval set.  The three-distance theorem caps the answer at 3 for
    irrational delta.

    The orbit walk runs on floats, resynced against exact arithmetic every
    _RESYNC steps so the accumulated drift stays orders of magnitude below
    _GUARD; any point that close to a component edge (or to the 0/1 seam)
    is decided exactly instead.
    """
    if delta.is_rational():
        raise ValueError("three-gap analysis needs an irrational angle")
    comps = [(lo.to_float(), hi.to_float()) for lo, hi in interval.components]
    edges = [0.0, 1.0] + [e for c in comps for e in c]
    lower = interval.orientation == LOWER
    d = delta.to_float()
    visits = []
    x = 0.0
    for ell in range(horizon + 1):
        if ell % _RESYNC == 0:
            x = (delta * ell).mod1().to_float()
        if any(abs(x - e) < _GUARD for e in edges):
            inside = interval.contains((delta * ell).mod1())
        elif lower:
            inside = any(lo <= x < hi for lo, hi in comps)
        else:
            inside = any(lo < x <= hi for lo, hi in comps)
        if inside:
            visits.append(ell)
        x += d
        if x >= 1.0:
            x -= 1.0
    if not visits:
        raise EmptyVisit(f"no orbit point in the set within {horizon} steps")
    gaps = {b - a for a, b in zip(visits, visits[1:])}
    assert len(gaps) <= 3, f"three-gap theorem violated: {sorted(gaps)}"
    return gaps


def surd_failure_direction(spec: RotationWordSpec, n: int,
                           search_cap: int = 100_000) -> Vector:
    """A direction q = (q_1, n, ..., n) whose directional rotation step is so
    small that the 1x1 directional word contains a constant run of length at
    least n; witnesses that one gap bound cannot serve all directions."""
    if n < 1:
        raise ValueError("run length must be positive")
    import math as _math
    min_len = spec.partition.min_cell_length()
    threshold = min_len / n
    for q1 in range(1, search_cap + 1):
        if _math.gcd(q1, n) != 1:
            continue
        q = (q1,) + (n,) * (spec.dimension - 1)
        delta = spec.angle_along(q)
        if delta.is_zero() or delta.compare(threshold) >= 0:
            continue
        if _constant_run_along(spec, q, delta, n):
            return q
    raise NotFound(f"no witness direction with q_1 <= {search_cap}")


def _constant_run_along(spec: RotationWordSpec, q: Vector, delta: QuadExt,
                        n: int) -> bool:
    # the orbit advances by delta < min cell length / n, so the first cell it
    # enters from the left edge hosts a run of >= n letters; bound the scan by
    # one full revolution plus slack
    part = spec.partition
    limit = int(2 / delta.to_float()) + 3 * n + 2
    x = spec.point((0,) * spec.dimension)
    run, prev = 0, None
    for _ in range(limit):
        letter = part.letter_at(x)
        run = run + 1 if letter == prev else 1
        prev = letter
        if run >= n:
            return True
        x = x + delta
        if x.compare(_ONE) >= 0:
            x = x - 1
    return False
