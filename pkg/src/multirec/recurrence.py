"""Finite-horizon recurrence scanning.

Everything here reports evidence about a budgeted window of the word, never
a claim about the infinite object: ``BOUNDED_WITNESSED`` records the largest
gap seen between occurrences (counting the tail up to the horizon), and
``NO_RECURRENCE_IN_HORIZON`` means the prefix block was only ever seen at
the start of the line.  ``GAP_EXCEEDS_CLAIM`` is reserved for scans run
against a caller-supplied bound and is always a hard failure.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .lattice import Vector, WordSource, vec_add, vec_scale, iter_box
from .residues import iter_coprime_directions

BOUNDED_WITNESSED = "BOUNDED_WITNESSED"
NO_RECURRENCE_IN_HORIZON = "NO_RECURRENCE_IN_HORIZON"
GAP_EXCEEDS_CLAIM = "GAP_EXCEEDS_CLAIM"

# A claim may depend on the block size (the morphic bounds do).
Claim = int | Callable[[Vector], int] | None


@dataclass(frozen=True)
class RecurrenceBudget:
    """Truncation parameters for all scans.

    horizon      largest multiplier scanned along a line
    direction_bound   max coordinate of enumerated directions
    size_bound   max coordinate of enumerated block sizes
    origin_bound max coordinate of enumerated origins
    block_bound  side of the region searched by window scans
    """

    horizon: int = 5000
    direction_bound: int = 5
    size_bound: int = 3
    origin_bound: int = 3
    block_bound: int = 256

    def __post_init__(self) -> None:
        for field in (
            self.horizon,
            self.direction_bound,
            self.size_bound,
            self.origin_bound,
            self.block_bound,
        ):
            if field < 1:
                raise ValueError(f"budget fields must be positive, got {field}")


@dataclass(frozen=True)
class GapReport:
    direction: Vector
    size: Vector
    origin: Vector
    occurrences: tuple[int, ...]
    max_gap: int | None
    verdict: str

    def bounded(self) -> bool:
        return self.verdict == BOUNDED_WITNESSED


@dataclass(frozen=True)
class SizeSummary:
    """Worst gap over a family of lines sharing one block size."""

    size: Vector
    bound: int | None
    worst: GapReport
    verdict: str


@dataclass(frozen=True)
class URReport:
    size: Vector
    window: int | None


def enumerate_directions(dimension: int, bound: int) -> list[Vector]:
    """All coprime nonnegative nonzero tuples with coordinates <= bound."""
    return list(iter_coprime_directions(dimension, bound))


def enumerate_sizes(dimension: int, bound: int) -> list[Vector]:
    return [
        tuple(s)
        for s in itertools.product(range(1, bound + 1), repeat=dimension)
    ]


def occurrence_indices(
    w: WordSource,
    direction: Sequence[int],
    size: Sequence[int],
    origin: Sequence[int] | None = None,
    horizon: int = 5000,
) -> list[int]:
    """All ell <= horizon where the block at origin reappears at origin + ell*q.

    ell = 0 is always reported.  The scan walks one line per cell of the
    block, but cells after the first are only consulted at multipliers that
    survived earlier cells, so a mismatching first cell is cheap.
    """
    q = tuple(direction)
    s = tuple(size)
    p0 = (0,) * w.dimension if origin is None else tuple(origin)
    offsets = list(iter_box(s))
    ref = [w.letter(vec_add(p0, o)) for o in offsets]

    line = w.letters_along(vec_add(p0, offsets[0]), q, horizon + 1)
    target = ref[0]
    alive = [ell for ell in range(horizon + 1) if line[ell] == target]
    for o, target in zip(offsets[1:], ref[1:]):
        if not alive:
            break
        start = vec_add(p0, o)
        if 2 * len(alive) >= horizon:
            line = w.letters_along(start, q, horizon + 1)
            alive = [ell for ell in alive if line[ell] == target]
        else:
            alive = [
                ell
                for ell in alive
                if w.letter(vec_add(start, vec_scale(q, ell))) == target
            ]
    return alive


def _claim_value(claim: Claim, size: Vector) -> int | None:
    if claim is None:
        return None
    if callable(claim):
        return claim(size)
    return claim


def gap_report(
    w: WordSource,
    direction: Sequence[int],
    size: Sequence[int],
    origin: Sequence[int] | None = None,
    horizon: int = 5000,
    claim: Claim = None,
) -> GapReport:
    q = tuple(direction)
    s = tuple(size)
    p0 = (0,) * w.dimension if origin is None else tuple(origin)
    occ = occurrence_indices(w, q, s, p0, horizon)
    bound = _claim_value(claim, s)
    if len(occ) < 2:
        verdict = NO_RECURRENCE_IN_HORIZON
        # A missing second occurrence refutes any claimed bound the horizon
        # can see past.
        if bound is not None and horizon >= bound:
            verdict = GAP_EXCEEDS_CLAIM
        return GapReport(q, s, p0, tuple(occ), None, verdict)
    gaps = [b - a for a, b in zip(occ, occ[1:])]
    gaps.append(horizon - occ[-1])
    max_gap = max(gaps)
    verdict = BOUNDED_WITNESSED
    if bound is not None and max_gap > bound:
        verdict = GAP_EXCEEDS_CLAIM
    return GapReport(q, s, p0, tuple(occ), max_gap, verdict)


def check_urd_empirical(
    w: WordSource,
    budget: RecurrenceBudget | None = None,
    sizes: Iterable[Sequence[int]] | None = None,
    claim: Claim = None,
) -> list[GapReport]:
    """One report per (direction, size) pair, origin fixed at zero."""
    budget = budget or RecurrenceBudget()
    d = w.dimension
    size_list = (
        enumerate_sizes(d, budget.size_bound)
        if sizes is None
        else [tuple(s) for s in sizes]
    )
    dirs = enumerate_directions(d, budget.direction_bound)
    return [
        gap_report(w, q, s, None, budget.horizon, claim)
        for s in size_list
        for q in dirs
    ]


def _summarize(size: Vector, reports: list[GapReport]) -> SizeSummary:
    worst = reports[0]
    for r in reports[1:]:
        if worst.verdict == GAP_EXCEEDS_CLAIM:
            break
        if r.verdict == GAP_EXCEEDS_CLAIM:
            worst = r
        elif r.max_gap is None and worst.max_gap is not None:
            worst = r
        elif (
            r.max_gap is not None
            and worst.max_gap is not None
            and r.max_gap > worst.max_gap
        ):
            worst = r
    bounds = [r.max_gap for r in reports]
    bound = None if any(b is None for b in bounds) else max(bounds)
    if any(r.verdict == GAP_EXCEEDS_CLAIM for r in reports):
        verdict = GAP_EXCEEDS_CLAIM
    elif bound is None:
        verdict = NO_RECURRENCE_IN_HORIZON
    else:
        verdict = BOUNDED_WITNESSED
    return SizeSummary(size, bound, worst, verdict)


def check_surd_empirical(
    w: WordSource,
    budget: RecurrenceBudget | None = None,
    sizes: Iterable[Sequence[int]] | None = None,
    claim: Claim = None,
) -> list[SizeSummary]:
    """Per size, the sup of gaps over all directions (origin zero)."""
    budget = budget or RecurrenceBudget()
    d = w.dimension
    size_list = (
        enumerate_sizes(d, budget.size_bound)
        if sizes is None
        else [tuple(s) for s in sizes]
    )
    dirs = enumerate_directions(d, budget.direction_bound)
    out = []
    for s in size_list:
        reports = [gap_report(w, q, s, None, budget.horizon, claim) for q in dirs]
        out.append(_summarize(tuple(s), reports))
    return out


def check_ssurdo_empirical(
    w: WordSource,
    budget: RecurrenceBudget | None = None,
    sizes: Iterable[Sequence[int]] | None = None,
    claim: Claim = None,
) -> list[SizeSummary]:
    """Per size, the sup of gaps over directions and origins."""
    budget = budget or RecurrenceBudget()
    d = w.dimension
    size_list = (
        enumerate_sizes(d, budget.size_bound)
        if sizes is None
        else [tuple(s) for s in sizes]
    )
    dirs = enumerate_directions(d, budget.direction_bound)
    origins = [
        tuple(p)
        for p in itertools.product(range(budget.origin_bound + 1), repeat=d)
    ]
    out = []
    for s in size_list:
        reports = [
            gap_report(w, q, s, p, budget.horizon, claim)
            for p in origins
            for q in dirs
        ]
        out.append(_summarize(tuple(s), reports))
    return out


def sample_grid(w: WordSource, shape: Sequence[int]) -> np.ndarray:
    """Letters of w on the box [0, shape), indexed grid[x1, ..., xd]."""
    shape = tuple(shape)
    grid = np.empty(shape, dtype=np.int64)
    for p in iter_box(shape):
        grid[p] = w.letter(p)
    return grid


def _prefix_occurrences(grid: np.ndarray, size: Vector) -> np.ndarray:
    """Boolean grid: position p carries the prefix block of the given size."""
    extent = tuple(m - s + 1 for m, s in zip(grid.shape, size))
    occ = np.ones(extent, dtype=bool)
    for o in iter_box(size):
        ref = grid[o]
        window = grid[tuple(slice(c, c + e) for c, e in zip(o, extent))]
        occ &= window == ref
    return occ


def smallest_covering_window(
    grid: np.ndarray, size: Sequence[int], block_bound: int
) -> int | None:
    """Least b <= block_bound such that every size-(b,..,b) block with corner
    in [0, block_bound]^d contains the prefix block, or None.
    """
    size = tuple(size)
    d = grid.ndim
    occ = _prefix_occurrences(grid, size)
    # Padded summed-area table: sat[c] = number of occurrences below c.
    sat = occ.astype(np.int64)
    for axis in range(d):
        sat = sat.cumsum(axis=axis)
    pad = [(1, 0)] * d
    sat = np.pad(sat, pad)

    b_corners = block_bound + 1

    def covered(b: int) -> bool:
        # Occurrence corners usable by a block at corner c span, per axis,
        # [c, c + b - s + 1).
        ext = tuple(b - s + 1 for s in size)
        if min(ext) < 1:
            return False
        if any(e + b_corners > n for e, n in zip(ext, sat.shape)):
            return False
        total = np.zeros((b_corners,) * d, dtype=np.int64)
        for mask in itertools.product((0, 1), repeat=d):
            sl = tuple(
                slice(0, b_corners) if m else slice(e, e + b_corners)
                for e, m in zip(ext, mask)
            )
            sign = -1 if sum(mask) % 2 else 1
            total += sign * sat[sl]
        return bool((total > 0).all())

    lo, hi = max(size), block_bound
    if not covered(hi):
        return None
    while lo < hi:
        mid = (lo + hi) // 2
        if covered(mid):
            hi = mid
        else:
            lo = mid + 1
    return lo


def check_ur_empirical(
    w: WordSource,
    budget: RecurrenceBudget | None = None,
    sizes: Iterable[Sequence[int]] | None = None,
) -> list[URReport]:
    """Smallest hypercubic window forced to contain each small prefix."""
    budget = budget or RecurrenceBudget()
    d = w.dimension
    size_list = (
        [(m,) * d for m in range(1, budget.size_bound + 1)]
        if sizes is None
        else [tuple(s) for s in sizes]
    )
    max_s = max(max(s) for s in size_list)
    side = 2 * budget.block_bound + max_s
    grid = sample_grid(w, (side,) * d)
    return [
        URReport(s, smallest_covering_window(grid, s, budget.block_bound))
        for s in size_list
    ]
