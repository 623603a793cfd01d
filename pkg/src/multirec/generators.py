"""Word sources: constant-size morphic fixed points, classical unidimensional
words, the gcd-placement word, Toeplitz-style periodic fillings, and the
greedy URD-not-UR construction."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from importlib import resources
from typing import Sequence

import numpy as np

from .errors import (ConstructionBug, NotProlongable, ScheduleExhausted)
from .lattice import (FiniteWord, Vector, WordSource, iter_box, vec_add,
                      vec_scale)
from .residues import iter_coprime_directions

# ---------------------------------------------------------------------------
# morphisms


def _ndigits(n: int, base: int) -> int:
    count = 0
    while n:
        n //= base
        count += 1
    return count


class Morphism:
    """A constant-size substitution over the alphabet {0, ..., k-1}.

    Every letter maps to a block of the same size (s_1, ..., s_d); square
    morphisms have all s_j equal.  Fixed points are evaluated digit by digit
    (mixed radix s_j per coordinate, most significant digit first), so single
    letters at positions around 2^40 stay cheap.
    """

    __slots__ = ("images", "dims", "_cells", "_strides")

    def __init__(self, images: Sequence[FiniteWord]):
        images = tuple(images)
        if not images:
            raise ValueError("morphism needs at least one image")
        dims = images[0].size
        k = len(images)
        for img in images:
            if img.size != dims:
                raise ValueError(f"image sizes differ: {img.size} vs {dims}")
            if any(not 0 <= c < k for c in img.cells):
                raise ValueError("image letter outside alphabet")
        self.images = images
        self.dims = dims
        self._cells = tuple(img.cells for img in images)
        strides = [1]
        for s in dims[:-1]:
            strides.append(strides[-1] * s)
        self._strides = tuple(strides)

    @property
    def alphabet_size(self) -> int:
        return len(self.images)

    @property
    def dimension(self) -> int:
        return len(self.dims)

    @property
    def is_square(self) -> bool:
        return len(set(self.dims)) == 1

    @property
    def expansion(self) -> int:
        if not self.is_square:
            raise ValueError(f"not a square morphism: size {self.dims}")
        return self.dims[0]

    def image(self, b: int) -> FiniteWord:
        return self.images[b]

    def is_prolongable(self, a: int) -> bool:
        return self.images[a].cells[0] == a

    def letter_in_fixed_point(self, a: int, p: Sequence[int]) -> int:
        if not self.is_prolongable(a):
            raise NotProlongable(f"image of {a} does not start with {a}")
        cells = self._cells
        dims = self.dims
        strides = self._strides
        offsets = []
        p = tuple(p)
        while any(p):
            off = 0
            nxt = []
            for c, s, st in zip(p, dims, strides):
                off += (c % s) * st
                nxt.append(c // s)
            offsets.append(off)
            p = tuple(nxt)
        letter = a
        for off in reversed(offsets):
            letter = cells[letter][off]
        return letter

    def iterate(self, b: int, n: int) -> FiniteWord:
        """The n-th image of the letter b, a block of size (s_1^n, ..., s_d^n).
        Does not require prolongability."""
        if n < 0:
            raise ValueError("negative iteration depth")
        cells = self._cells
        dims = self.dims
        strides = self._strides
        powers = [[s ** j for j in range(n)] for s in dims]

        def fn(p: Vector) -> int:
            letter = b
            for j in range(n - 1, -1, -1):
                off = 0
                for axis, c in enumerate(p):
                    off += (c // powers[axis][j] % dims[axis]) * strides[axis]
                letter = cells[letter][off]
            return letter

        return FiniteWord.from_function(tuple(s ** n for s in dims), fn)

    def power(self, i: int) -> "Morphism":
        """The morphism b -> iterate(b, i), of size (s_1^i, ..., s_d^i)."""
        if i < 1:
            raise ValueError("power must be >= 1")
        return Morphism([self.iterate(b, i) for b in range(self.alphabet_size)])

    def transpose(self) -> "Morphism":
        if self.dimension != 2:
            raise ValueError("transpose defined for d = 2 only")
        s1, s2 = self.dims
        return Morphism([FiniteWord.from_function((s2, s1), lambda p, im=img: im[(p[1], p[0])])
                         for img in self.images])

    def fixed_point(self, a: int, name: str | None = None) -> WordSource:
        if not self.is_prolongable(a):
            raise NotProlongable(f"image of {a} does not start with {a}")
        if self.dims == (2, 2):
            cells = self._cells

            def ev(p: Vector) -> int:
                x, y = p
                letter = a
                for i in range(max(x.bit_length(), y.bit_length()) - 1, -1, -1):
                    letter = cells[letter][(x >> i & 1) + (y >> i & 1) * 2]
                return letter
        else:
            ev = lambda p: self.letter_in_fixed_point(a, p)
        return WordSource(self.dimension, self.alphabet_size, ev,
                          line_builder=self._line_evaluator(a),
                          name=name or f"fixedpoint({a})")

    def _line_evaluator(self, a: int):
        """Batch digit walk along an arithmetic line.

        Leading zero digits map a to a (prolongability), so every position
        can be padded to the depth of the largest coordinate and the walk
        runs as one table lookup per digit over the whole line.
        """
        img = np.array(self._cells, dtype=np.int64)
        dims = self.dims
        strides = self._strides

        def lb(start: Vector, step: Vector, count: int) -> list[int]:
            if count <= 0:
                return []
            top = max(s + t * (count - 1) for s, t in zip(start, step))
            if min(start) < 0 or min(step) < 0 or top >= 1 << 40:
                ev = lambda p: self.letter_in_fixed_point(a, p)
                return [ev(vec_add(start, vec_scale(step, i))) for i in range(count)]
            idx = np.arange(count, dtype=np.int64)
            coords = [s + t * idx for s, t in zip(start, step)]
            depth = max(_ndigits(top, s) for s in dims)
            letters = np.full(count, a, dtype=np.int64)
            for j in range(depth - 1, -1, -1):
                off = np.zeros(count, dtype=np.int64)
                for axis, c in enumerate(coords):
                    off += (c // dims[axis] ** j) % dims[axis] * strides[axis]
                letters = img[letters, off]
            return letters.tolist()

        return lb

    def __eq__(self, other) -> bool:
        return isinstance(other, Morphism) and self.images == other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def __repr__(self) -> str:
        shape = "x".join(map(str, self.dims))
        return f"Morphism(k={self.alphabet_size}, {shape})"


def check_prolongable(m: Morphism, a: int) -> bool:
    return m.is_prolongable(a)


def morphic_letter(m: Morphism, a: int, p: Sequence[int]) -> int:
    """Letter of the fixed point of m on a at position p."""
    return m.letter_in_fixed_point(a, p)


def morphic_prefix(m: Morphism, a: int, n: int) -> FiniteWord:
    """The block m^n(a); equals the size-(s^n) prefix of the fixed point."""
    if not m.is_prolongable(a):
        raise NotProlongable(f"image of {a} does not start with {a}")
    return m.iterate(a, n)


def morphism_to_json(m: Morphism) -> dict:
    return {"k": m.alphabet_size,
            "dims": list(m.dims),
            "images": {str(b): m.images[b].to_nested() for b in range(m.alphabet_size)}}


def morphism_from_json(data: dict) -> Morphism:
    k = int(data["k"])
    dims = tuple(int(s) for s in data["dims"])
    images = []
    for b in range(k):
        img = FiniteWord.from_nested(data["images"][str(b)])
        if img.size != dims:
            raise ValueError(f"image of {b} has size {img.size}, declared {dims}")
        images.append(img)
    return Morphism(images)


PRESET_NAMES = ("preimage-3x2", "sierpinski", "ssurdo-3x3",
                "surd-not-ssurdo-2x2", "suffnotnec-3x3", "power-3x3")


def load_preset(name: str) -> Morphism:
    if name not in PRESET_NAMES:
        raise KeyError(f"unknown preset {name!r}; have {', '.join(PRESET_NAMES)}")
    text = resources.files("multirec.presets").joinpath(f"{name}.json").read_text("utf-8")
    return morphism_from_json(json.loads(text))


def preset_word(name: str, a: int = 1) -> WordSource:
    return load_preset(name).fixed_point(a, name=name)


# ---------------------------------------------------------------------------
# classical unidimensional words


def thue_morse(n: int) -> int:
    """Parity of the binary digit sum of n."""
    return n.bit_count() & 1


def thue_morse_word() -> WordSource:
    return WordSource(1, 2, lambda p: thue_morse(p[0]), name="thue-morse")


_fib_cache = bytearray(b"\x00")


def fibonacci_word(n: int) -> int:
    """n-th letter of the fixed point of 0 -> 01, 1 -> 0."""
    global _fib_cache
    while len(_fib_cache) <= n:
        grown = bytearray()
        for b in _fib_cache:
            grown.extend((0, 1) if b == 0 else (0,))
        _fib_cache = grown
    return _fib_cache[n]


def fibonacci_word_source() -> WordSource:
    return WordSource(1, 2, lambda p: fibonacci_word(p[0]), name="fibonacci")


def gcd_word(u: WordSource, d: int) -> WordSource:
    """w(i) = u(gcd(i_1, ..., i_d)); the zero vector maps to u(0)."""
    if u.dimension != 1:
        raise ValueError("gcd placement needs a unidimensional word")
    ev = lambda p: u.letter((math.gcd(*p),))
    return WordSource(d, u.alphabet_size, ev, name=f"gcd[{u.name}]")


# ---------------------------------------------------------------------------
# the two row-built counterexample words


def fib_rows_word() -> WordSource:
    """Rows alternate 1F, 0F where F is the Fibonacci word: URD rows and
    columns, yet the prefix with a lone 1 at the origin recurs only in the
    first column."""

    def ev(p: Vector) -> int:
        x, y = p
        if x == 0:
            return 1 - (y & 1)
        return fibonacci_word(x - 1)

    return WordSource(2, 2, ev, name="fib-rows")


def toeplitz_rows_word() -> WordSource:
    """Row 0 is 1 0^omega; row n >= 1 repeats 1 0^(2^k - 1) with k the 2-adic
    valuation of n.  UR, although row 0 is not recurrent."""

    def ev(p: Vector) -> int:
        x, y = p
        if y == 0:
            return 1 if x == 0 else 0
        k = (y & -y).bit_length() - 1
        return 1 if x % (1 << k) == 0 else 0

    return WordSource(2, 2, ev, name="toeplitz-rows")


# ---------------------------------------------------------------------------
# Toeplitz-style filling


def _mix64(*values: int) -> int:
    """SplitMix64 finalizer folded over the inputs; stateless and stable."""
    h = 0x9E3779B97F4A7C15
    for v in values:
        h = (h + (v & 0xFFFFFFFFFFFFFFFF) + 0x9E3779B97F4A7C15) & 0xFFFFFFFFFFFFFFFF
        h = ((h ^ (h >> 30)) * 0xBF58476D1CE4E5B9) & 0xFFFFFFFFFFFFFFFF
        h = ((h ^ (h >> 27)) * 0x94D049BB133111EB) & 0xFFFFFFFFFFFFFFFF
        h ^= h >> 31
    return h


CONSTANT = "constant"
SEEDED_RANDOM = "random"


@dataclass(frozen=True)
class ToeplitzSchedule:
    """Parameters of the doubly periodic filling.

    ``steps`` is the guaranteed materialization depth (the box
    [0, 2^(steps+1))^2 is fully assigned); evaluation beyond it extends the
    schedule lazily with the same deterministic choices.
    """

    steps: int = 5
    policy: str = CONSTANT
    fill_letter: int = 0
    seed: int = 0
    base_letter: int = 1
    alphabet_size: int = 2

    def __post_init__(self):
        if self.steps < 1:
            raise ValueError("steps must be >= 1")
        if self.policy not in (CONSTANT, SEEDED_RANDOM):
            raise ValueError(f"unknown fill policy {self.policy!r}")
        if not 0 <= self.base_letter < self.alphabet_size:
            raise ValueError("base letter outside alphabet")
        if self.policy == CONSTANT and not 0 <= self.fill_letter < self.alphabet_size:
            raise ValueError("fill letter outside alphabet")


class ToeplitzWord:
    """Lazy evaluator for the step-by-step periodic filling.

    Step 0 writes the base letter on the even sublattice; step 1 fills the
    residues (0,1), (1,0), (1,1) modulo 4; step n >= 2 fills every cell of
    [0, 2^(n+1))^2 still unassigned and repeats it with period 2^(n+2).
    A cell's letter therefore only depends on the step at which its residue
    class was filled, which ``_fill_of`` resolves recursively.
    """

    _STEP1 = ((0, 1), (1, 0), (1, 1))

    def __init__(self, schedule: ToeplitzSchedule):
        self.schedule = schedule
        self._memo: dict[Vector, tuple[int, Vector]] = {}

    def _choice(self, step: int, cell: Vector) -> int:
        s = self.schedule
        if s.policy == CONSTANT:
            return s.fill_letter
        return _mix64(s.seed, step, *cell) % s.alphabet_size

    def _fill_of(self, p: Vector) -> tuple[int, Vector]:
        """(step, anchor cell in S_step) for the class containing p."""
        if p[0] % 2 == 0 and p[1] % 2 == 0:
            return 0, (0, 0)
        r4 = (p[0] % 4, p[1] % 4)
        if r4 in self._STEP1:
            return 1, r4
        hit = self._memo.get(p)
        if hit is not None:
            return hit
        n = 2
        while True:
            mod = 1 << (n + 2)
            box = 1 << (n + 1)
            r = (p[0] % mod, p[1] % mod)
            if r[0] < box and r[1] < box:
                if r == p or self._fill_of(r)[0] == n:
                    out = (n, r)
                    self._memo[p] = out
                    return out
            n += 1

    def letter(self, p: Sequence[int]) -> int:
        p = tuple(p)
        step, cell = self._fill_of(p)
        if step == 0:
            return self.schedule.base_letter
        return self._choice(step, cell)

    def source(self) -> WordSource:
        tag = f"toeplitz[{self.schedule.policy},seed={self.schedule.seed}]"
        return WordSource(2, self.schedule.alphabet_size, self.letter, name=tag)

    def materialize(self, steps: int) -> dict[Vector, int]:
        """Run the construction eagerly for the given number of steps and
        return the fully assigned box [0, 2^(steps+1))^2.  Double assignment
        of a cell raises ConstructionBug (the classes are disjoint by
        construction, so this must never fire)."""
        grid: dict[Vector, int] = {}
        side = 1 << (steps + 1)

        def put(cell: Vector, letter: int) -> None:
            if grid.get(cell, letter) != letter:
                raise ConstructionBug(f"cell {cell} assigned twice")
            grid[cell] = letter

        for x in range(0, side, 2):
            for y in range(0, side, 2):
                put((x, y), self.schedule.base_letter)
        for rx, ry in self._STEP1:
            val = self._choice(1, (rx, ry))
            for x in range(rx, side, 4):
                for y in range(ry, side, 4):
                    put((x, y), val)
        for n in range(2, steps + 1):
            mod = 1 << (n + 2)
            box = 1 << (n + 1)
            fresh = [c for c in iter_box((box, box)) if c not in grid]
            for cell in fresh:
                val = self._choice(n, cell)
                for x in range(cell[0], side, mod):
                    for y in range(cell[1], side, mod):
                        put((x, y), val)
        missing = [c for c in iter_box((side, side)) if c not in grid]
        if missing:
            raise ConstructionBug(f"{len(missing)} cells unassigned after step {steps}")
        return grid


def toeplitz_construct(schedule: ToeplitzSchedule) -> WordSource:
    return ToeplitzWord(schedule).source()


# ---------------------------------------------------------------------------
# URD-not-UR greedy construction


@dataclass(frozen=True)
class UrdNotUrSchedule:
    steps: int = 5
    dimension: int = 2
    seed: int | None = None       # None: complete prefixes with 0
    horizon: int = 512            # side of the recorded box
    search_cap: int = 1 << 20

    def __post_init__(self):
        if self.steps < 1 or self.dimension < 2 or self.horizon < 1:
            raise ValueError("bad schedule")


@dataclass
class UrdNotUrArtifact:
    """Best-effort finite artifact of the greedy construction: the recorded
    box, the per-step direction constants, and the parked all-zero blocks.
    The underlying result is a sketch; anything outside the box is unknown."""

    schedule: UrdNotUrSchedule
    cells: dict[Vector, int]
    b_table: dict[tuple[int, Vector], int]
    zero_blocks: list[tuple[int, Vector]]

    def filled(self, p: Vector) -> bool:
        return p in self.cells

    def letter(self, p: Vector) -> int | None:
        return self.cells.get(tuple(p))


def urd_not_ur_construct(schedule: UrdNotUrSchedule) -> UrdNotUrArtifact:
    """Greedy rendition of the URD-not-UR sketch.

    Step 1 writes 1 at the origin.  Step n completes the prefix of size
    (n,...,n), then for each coprime direction q with coordinates < n finds
    the smallest b such that stamping the prefix at every multiple of b*q
    agrees with all recorded cells, and finally parks an n^d block of zeros
    in the closest untouched spot below the diagonal.
    """
    d = schedule.dimension
    hor = schedule.horizon
    cells: dict[Vector, int] = {(0,) * d: 1}
    b_table: dict[tuple[int, Vector], int] = {}
    zero_blocks: list[tuple[int, Vector]] = []

    def fill_choice(step: int, pos: Vector) -> int:
        if schedule.seed is None:
            return 0
        return _mix64(schedule.seed, step, *pos) % 2

    for n in range(2, schedule.steps + 1):
        box = (n,) * d
        for i in iter_box(box):
            if i not in cells:
                cells[i] = fill_choice(n, i)
        prefix = {i: cells[i] for i in iter_box(box)}

        for q in iter_coprime_directions(d, n - 1):
            b = 0
            while True:
                b += 1
                if b > schedule.search_cap:
                    raise ScheduleExhausted(f"no b for direction {q} at step {n}")
                step_vec = vec_scale(q, b)
                ok = True
                ell = 1
                while ok:
                    base = vec_scale(step_vec, ell)
                    if all(base[j] > hor for j in range(d) if q[j]):
                        break
                    for i, val in prefix.items():
                        cell = vec_add(base, i)
                        if cells.get(cell, val) != val:
                            ok = False
                            break
                    ell += 1
                if ok:
                    break
            b_table[(n, q)] = b
            ell = 1
            while True:
                base = vec_scale(vec_scale(q, b), ell)
                if all(base[j] > hor for j in range(d) if q[j]):
                    break
                for i, val in prefix.items():
                    cells[vec_add(base, i)] = val
                ell += 1

        park = _find_free_block(cells, n, d, hor)
        if park is None:
            raise ScheduleExhausted(f"no free {n}^d block below the diagonal at step {n}")
        for i in iter_box(box):
            cells[vec_add(park, i)] = 0
        zero_blocks.append((n, park))

    return UrdNotUrArtifact(schedule, cells, b_table, zero_blocks)


def _find_free_block(cells: dict[Vector, int], n: int, d: int, hor: int) -> Vector | None:
    # closest-to-origin free n-cube strictly below the main diagonal
    candidates = []
    for p in iter_box((hor - n,) * d):
        if p[-1] < p[0]:
            candidates.append((max(p), p))
    candidates.sort()
    for _, p in candidates:
        if all(vec_add(p, i) not in cells for i in iter_box((n,) * d)):
            return p
    return None
