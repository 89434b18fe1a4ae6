"""Two-dimensional subtraction games and grayscale image output.

A move (a, b) takes a tokens from the first heap and b from the second.
Grids are indexed ``grid[y, x]``; images are written with the origin at the
lower left, so the top image row is y = H - 1.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass

import numba
import numpy as np

from .core.periodicity import PeriodicityCertificate, minimal_preperiod, _byte_view, _tail_period
from .core.rulesets import RulesetError
from .core.sequences import fnv1a64

MAX_CELLS = 200_000_000

# the bundled TBB is too old for numba; workqueue needs nothing external
numba.config.THREADING_LAYER = "workqueue"


@dataclass(frozen=True)
class Ruleset2D:
    moves: tuple[tuple[int, int], ...]

    def __post_init__(self):
        moves = tuple((int(a), int(b)) for a, b in self.moves)
        if not moves:
            raise RulesetError("2-d ruleset must be nonempty")
        for a, b in moves:
            if a < 0 or b < 0 or (a, b) == (0, 0):
                raise RulesetError(f"invalid 2-d move {(a, b)}")
        if len(set(moves)) != len(moves):
            raise RulesetError(f"duplicate 2-d moves in {moves}")
        object.__setattr__(self, "moves", tuple(sorted(moves)))

    @property
    def row_independent(self) -> bool:
        """True when no move stays in the same row, so a row fills in any order."""
        return all(b >= 1 for _, b in self.moves)

    def __str__(self):
        return ",".join(f"({a},{b})" for a, b in self.moves)


def as_ruleset2d(S) -> Ruleset2D:
    return S if isinstance(S, Ruleset2D) else Ruleset2D(tuple(S))


@numba.njit(cache=True)
def _row_sequential(moves, grid, y):
    W = grid.shape[1]
    for x in range(W):
        bit = 1
        for i in range(moves.shape[0]):
            a = moves[i, 0]
            b = moves[i, 1]
            if a <= x and b <= y and grid[y - b, x - a] == 1:
                bit = 0
                break
        grid[y, x] = bit


@numba.njit(cache=True)
def _grid_sequential(moves, grid):
    for y in range(grid.shape[0]):
        _row_sequential(moves, grid, y)


@numba.njit(cache=True, parallel=True)
def _grid_parallel(moves, grid):
    H, W = grid.shape
    for y in range(H):
        for x in numba.prange(W):
            bit = 1
            for i in range(moves.shape[0]):
                a = moves[i, 0]
                b = moves[i, 1]
                if a <= x and b <= y and grid[y - b, x - a] == 1:
                    bit = 0
                    break
            grid[y, x] = bit


@dataclass
class OutcomeGrid:
    bits: np.ndarray  # uint8 [H, W], 1 = P
    ruleset: Ruleset2D

    @property
    def width(self) -> int:
        return int(self.bits.shape[1])

    @property
    def height(self) -> int:
        return int(self.bits.shape[0])

    def is_p(self, x: int, y: int) -> bool:
        return bool(self.bits[y, x])

    def row(self, y: int) -> np.ndarray:
        return self.bits[y]

    def column(self, x: int) -> np.ndarray:
        return self.bits[:, x]

    def digest(self) -> int:
        return fnv1a64(np.ascontiguousarray(self.bits).reshape(-1))


def outcomes2d(S, width: int, height: int, threads: int = 1,
               max_cells: int = MAX_CELLS) -> OutcomeGrid:
    """P/N grid for heaps (x, y), 0 <= x < width, 0 <= y < height.

    Rows are computed bottom-up. With ``threads > 1`` and every move
    decreasing y, cells within a row are filled in parallel; the result is
    identical to the sequential fill.
    """
    S = as_ruleset2d(S)
    if width < 1 or height < 1:
        raise RulesetError("grid dimensions must be positive")
    if width * height > max_cells:
        raise RulesetError(f"grid of {width * height} cells exceeds the cap of {max_cells}")
    moves = np.asarray(S.moves, dtype=np.int64).reshape(-1, 2)
    grid = np.zeros((height, width), dtype=np.uint8)
    if threads > 1 and S.row_independent:
        numba.set_num_threads(min(threads, numba.config.NUMBA_NUM_THREADS))
        _grid_parallel(moves, grid)
    else:
        _grid_sequential(moves, grid)
    return OutcomeGrid(grid, S)


def recheck_cell(grid: OutcomeGrid, x: int, y: int) -> bool:
    """Recompute whether (x, y) is P from its predecessors."""
    return not any(a <= x and b <= y and grid.bits[y - b, x - a]
                   for a, b in grid.ruleset.moves)


def line_periodicity(grid: OutcomeGrid, row: int | None = None, column: int | None = None
                     ) -> PeriodicityCertificate | None:
    """Best (preperiod, period) for one row or column; never certified.

    The period must fit the second half of the line at least twice. Returns
    None when the line is too short for that.
    """
    if (row is None) == (column is None):
        raise ValueError("give exactly one of row= or column=")
    line = grid.row(row) if row is not None else grid.column(column)
    n = len(line)
    if n < 4:
        return None
    data, width = _byte_view(line)
    start = n // 2
    q = _tail_period(data, width, start, n, (n - start) // 2)
    if q is None:
        return None
    return PeriodicityCertificate(minimal_preperiod(line, q), q, False, n)


# --- images ---------------------------------------------------------------

# Gray level per class label; mirrors the usual 3-move classification picture.
CLASS_GRAY = {
    "s2+s3": 200,     # light gray
    "s1+s3": 140,     # gray
    "s1+s2": 70,      # dark gray
    "diagonal": 0,    # black
    "other": 255,     # white
    "unknown": 100,
    "invalid": 255,
}


def pgm_bytes(pixels: np.ndarray) -> bytes:
    """Binary P5 image from a [rows, cols] uint8 array given top row first."""
    pixels = np.ascontiguousarray(pixels, dtype=np.uint8)
    if pixels.ndim != 2 or pixels.size == 0:
        raise ValueError("image must be a non-empty 2-d array")
    h, w = pixels.shape
    return b"P5\n%d %d\n255\n" % (w, h) + pixels.tobytes()


def grid_pixels(grid: OutcomeGrid) -> np.ndarray:
    """P -> 0 (black), N -> 255 (white), flipped so y grows upward."""
    return np.where(grid.bits[::-1] == 1, 0, 255).astype(np.uint8)


def class_pixels(cg) -> np.ndarray:
    """ClassGrid cells to gray levels; s1 runs left to right, s2 bottom to top."""
    img = np.array([[CLASS_GRAY[lab] for lab in row] for row in cg.labels], dtype=np.uint8)
    return img[::-1]


def render_pgm(obj, path: str | os.PathLike | None = None) -> bytes:
    """P5 bytes for an OutcomeGrid or ClassGrid; also written to ``path`` if given."""
    if isinstance(obj, OutcomeGrid):
        data = pgm_bytes(grid_pixels(obj))
    elif hasattr(obj, "labels"):
        data = pgm_bytes(class_pixels(obj))
    else:
        raise TypeError(f"cannot render {type(obj).__name__}")
    if path is not None:
        with open(path, "wb") as fh:
            fh.write(data)
    return data


def read_pgm(data: bytes) -> np.ndarray:
    """Parse a P5 image back into a [rows, cols] array (top row first)."""
    m = _PGM_HEADER.match(data)
    if not m:
        raise ValueError("not a binary PGM (P5) image")
    w, h, maxval = (int(g) for g in m.groups())
    if maxval != 255:
        raise ValueError(f"unsupported maxval {maxval}")
    body = data[m.end():]
    if len(body) != w * h:
        raise ValueError(f"expected {w * h} pixel bytes, got {len(body)}")
    return np.frombuffer(body, dtype=np.uint8).reshape(h, w)


_PGM_HEADER = re.compile(rb"P5\s+(\d+)\s+(\d+)\s+(\d+)\s")


FIG2_RULESET = Ruleset2D(((2, 6), (3, 3), (6, 1), (19, 6)))
