"""Text, JSON, CSV and netpbm output for finite grids.

Grids are handled as rows[y][x] with row 0 at the bottom, the same layout
FiniteWord.to_nested produces.  Text and CSV print the top row first, the
way the figures are read; JSON keeps the bottom-first nesting.  A cell
holding -1 stands for an undefined entry and renders as '?' in text and
CSV (it stays -1 in JSON, and is rejected by the image formats).
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import InvalidInput
from .lattice import FiniteWord, WordSource

TEXT = "text"
JSON = "json"
CSV = "csv"
PBM = "pbm"
PGM = "pgm"

FORMATS = (TEXT, JSON, CSV, PBM, PGM)

UNDEFINED = -1


@dataclass(frozen=True)
class RenderSpec:
    """Output format plus the optional letter-to-gray override for PGM."""

    format: str = TEXT
    gray_map: dict | None = None

    def __post_init__(self):
        if self.format not in FORMATS:
            raise InvalidInput(f"unknown format {self.format!r}")


Rows = "list[list[int]]"


def sample_rows(w: WordSource | FiniteWord, box) -> list[list[int]]:
    """Evaluate a word on [0,box) as bottom-first rows; only d <= 2."""
    box = tuple(box)
    if len(box) == 1:
        box = (box[0], 1)
    if len(box) != 2:
        raise InvalidInput(f"grid rendering needs 1 or 2 dimensions, got {len(box)}")
    look = w.letter if isinstance(w, WordSource) else w.__getitem__
    return [[look((x, y)) for x in range(box[0])] for y in range(box[1])]


def _cell_token(c: int) -> str:
    return "?" if c == UNDEFINED else str(c)


def to_text(rows: Rows) -> str:
    return "\n".join(" ".join(_cell_token(c) for c in row) for row in reversed(rows))


def to_csv(rows: Rows) -> str:
    return "\n".join(",".join(_cell_token(c) for c in row) for row in reversed(rows))


def to_json(rows: Rows) -> str:
    return json.dumps(rows, separators=(",", " "))


def _check_defined(rows: Rows, fmt: str) -> None:
    if any(c < 0 for row in rows for c in row):
        raise InvalidInput(f"{fmt} cannot represent undefined cells")


def to_pbm(rows: Rows, alphabet_size: int) -> str:
    """P1 bitmap, letter 1 black.  Binary alphabets only."""
    if alphabet_size != 2:
        raise InvalidInput(f"pbm needs a binary alphabet, got {alphabet_size}")
    _check_defined(rows, "pbm")
    height, width = len(rows), len(rows[0])
    body = "\n".join(" ".join(str(c) for c in row) for row in reversed(rows))
    return f"P1\n{width} {height}\n{body}\n"


def to_pgm(rows: Rows, alphabet_size: int, gray_map: dict | None = None) -> str:
    """P2 graymap; letters spread linearly over 0..255 unless overridden."""
    _check_defined(rows, "pgm")
    if gray_map is None:
        hi = max(alphabet_size - 1, 1)
        gray_map = {a: round(255 * a / hi) for a in range(alphabet_size)}
    height, width = len(rows), len(rows[0])
    body = "\n".join(
        " ".join(str(gray_map[c]) for c in row) for row in reversed(rows)
    )
    return f"P2\n{width} {height}\n255\n{body}\n"


def render_rows(rows: Rows, alphabet_size: int, spec: RenderSpec) -> str:
    if spec.format == TEXT:
        return to_text(rows)
    if spec.format == CSV:
        return to_csv(rows)
    if spec.format == JSON:
        return to_json(rows)
    if spec.format == PBM:
        return to_pbm(rows, alphabet_size)
    return to_pgm(rows, alphabet_size, spec.gray_map)


# Fixture grids live as text files with an explicit header so a golden can
# be eyeballed against the source it was transcribed from.

def write_grid_fixture(path, rows: Rows, alphabet_size: int) -> None:
    height, width = len(rows), len(rows[0])
    lines = [f"dims={width}x{height} alphabet={alphabet_size}"]
    lines += [" ".join(_cell_token(c) for c in row) for row in reversed(rows)]
    path.write_text("\n".join(lines) + "\n")


def read_grid_fixture(path) -> tuple[list[list[int]], int]:
    """Rows bottom-first plus the declared alphabet size."""
    lines = path.read_text().strip().splitlines()
    header = dict(item.split("=") for item in lines[0].split())
    width, height = (int(v) for v in header["dims"].split("x"))
    alphabet = int(header["alphabet"])
    body = [
        [UNDEFINED if tok == "?" else int(tok) for tok in line.split()]
        for line in lines[1:]
    ]
    if len(body) != height or any(len(r) != width for r in body):
        raise InvalidInput(f"{path} body does not match its dims header")
    return body[::-1], alphabet
