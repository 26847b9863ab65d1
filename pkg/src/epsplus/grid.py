"""Belief map: the finest tiling, per-cell symbolic state and the static sweep field.

Cells are addressed as ``(col, row)`` tuples with column 0 at the left and
row 0 at the bottom. Each cell carries one of three symbolic states:

* ``UNEXPLORED`` -- nothing known yet (initial state of every cell),
* ``EXPLORED``   -- the vehicle has traversed the cell,
* ``OBSTACLE``   -- a detected obstacle occupies the cell.

State transitions are one-way: unexplored cells may become explored or
obstacle; explored and obstacle are absorbing.

The static field ``b`` assigns every unexplored cell a positive integer
potential that is constant along a column and strictly decreasing from left
to right (``b(col) = width - col``), which biases the sweep into a
left-to-right column pattern.
"""

from __future__ import annotations

from collections import deque
from enum import IntEnum
from typing import Iterable, Iterator

from .errors import MapConflictError, MapFormatError

Cell = tuple[int, int]

NEIGHBORS_8 = (
    (-1, -1), (-1, 0), (-1, 1),
    (0, -1), (0, 1),
    (1, -1), (1, 0), (1, 1),
)


class CellState(IntEnum):
    UNEXPLORED = 0
    EXPLORED = 1
    OBSTACLE = 2


class CellGrid:
    """Dense belief grid plus the static column-potential field."""

    def __init__(self, width: int, height: int, cell_size: float, station: Cell):
        if width < 1 or height < 1:
            raise ValueError(f"grid dimensions must be >= 1, got {width}x{height}")
        if cell_size <= 0:
            raise ValueError(f"cell_size must be positive, got {cell_size}")
        col, row = station
        if not (0 <= col < width and 0 <= row < height):
            raise ValueError(f"station {station} outside {width}x{height} grid")
        self.width = width
        self.height = height
        self.cell_size = float(cell_size)
        self.station = (int(col), int(row))
        self._states = [CellState.UNEXPLORED] * (width * height)
        # column plateaus, strictly decreasing left to right
        self._b_by_col = [width - c for c in range(width)]
        self.b_max = width

    # -- indexing -----------------------------------------------------------

    def _idx(self, cell: Cell) -> int:
        return cell[1] * self.width + cell[0]

    def in_bounds(self, cell: Cell) -> bool:
        col, row = cell
        return 0 <= col < self.width and 0 <= row < self.height

    def state(self, cell: Cell) -> CellState:
        return self._states[self._idx(cell)]

    def b_field(self, cell: Cell) -> int:
        """Static potential of the cell's column."""
        return self._b_by_col[cell[0]]

    def cell_center(self, cell: Cell) -> tuple[float, float]:
        """Center of the cell in meters."""
        return ((cell[0] + 0.5) * self.cell_size, (cell[1] + 0.5) * self.cell_size)

    def cells(self) -> Iterator[Cell]:
        for row in range(self.height):
            for col in range(self.width):
                yield (col, row)

    def neighbors8(self, cell: Cell) -> list[Cell]:
        col, row = cell
        out = []
        for dc, dr in NEIGHBORS_8:
            n = (col + dc, row + dr)
            if 0 <= n[0] < self.width and 0 <= n[1] < self.height:
                out.append(n)
        return out

    # -- updates ------------------------------------------------------------

    def apply_sensor_update(self, detected_obstacles: Iterable[Cell]) -> int:
        """Mark detected obstacle cells, returning the number of state changes.

        A detection on an explored cell or on the station contradicts the
        ground truth assumptions and raises :class:`MapConflictError`.
        Repeated detections of the same cell are no-ops.
        """
        changed = 0
        for cell in sorted(set(detected_obstacles)):
            if not self.in_bounds(cell):
                raise ValueError(f"detected obstacle {cell} out of bounds")
            if cell == self.station:
                raise MapConflictError(f"obstacle detected on the station cell {cell}")
            st = self._states[self._idx(cell)]
            if st is CellState.EXPLORED:
                raise MapConflictError(f"obstacle detected on explored cell {cell}")
            if st is CellState.UNEXPLORED:
                self._states[self._idx(cell)] = CellState.OBSTACLE
                changed += 1
        return changed

    def mark_traversed(self, cell: Cell) -> None:
        """Record that the vehicle traversed the cell (unexplored -> explored)."""
        idx = self._idx(cell)
        if self._states[idx] is CellState.OBSTACLE:
            raise MapConflictError(f"cannot traverse obstacle cell {cell}")
        self._states[idx] = CellState.EXPLORED

    # -- queries ------------------------------------------------------------

    def reachable_unexplored(self) -> set[Cell]:
        """Unexplored cells 8-connected to the station through non-obstacle cells."""
        start = self.station
        if self.state(start) is CellState.OBSTACLE:
            return set()
        seen = {start}
        queue = deque([start])
        found: set[Cell] = set()
        if self.state(start) is CellState.UNEXPLORED:
            found.add(start)
        while queue:
            cell = queue.popleft()
            for n in self.neighbors8(cell):
                if n in seen:
                    continue
                st = self.state(n)
                if st is CellState.OBSTACLE:
                    continue
                seen.add(n)
                if st is CellState.UNEXPLORED:
                    found.add(n)
                queue.append(n)
        return found

    def counts(self) -> dict[CellState, int]:
        out = {CellState.UNEXPLORED: 0, CellState.EXPLORED: 0, CellState.OBSTACLE: 0}
        for st in self._states:
            out[st] += 1
        return out


# -- ASCII map format ---------------------------------------------------------
#
# One line per row, top row first. Characters: '#' obstacle, '.' free,
# 'C' the single charging station. All lines must have equal length.


class ParsedMap:
    """Raw content of an ASCII map file."""

    def __init__(self, width: int, height: int, obstacles: frozenset[Cell], station: Cell):
        self.width = width
        self.height = height
        self.obstacles = obstacles
        self.station = station


def parse_map_text(text: str) -> ParsedMap:
    lines = [line for line in text.splitlines() if line.strip() != ""]
    if not lines:
        raise MapFormatError("map file is empty")
    width = len(lines[0])
    height = len(lines)
    obstacles: set[Cell] = set()
    station: Cell | None = None
    for i, line in enumerate(lines):
        if len(line) != width:
            raise MapFormatError(
                f"line {i + 1} has length {len(line)}, expected {width} (all rows must match)"
            )
        row = height - 1 - i
        for col, ch in enumerate(line):
            if ch == "#":
                obstacles.add((col, row))
            elif ch == "C":
                if station is not None:
                    raise MapFormatError(
                        f"multiple station cells: {station} and {(col, row)}"
                    )
                station = (col, row)
            elif ch != ".":
                raise MapFormatError(f"invalid character {ch!r} at line {i + 1}, column {col + 1}")
    if station is None:
        raise MapFormatError("map has no station cell 'C'")
    return ParsedMap(width, height, frozenset(obstacles), station)


def grid_to_ascii(grid: CellGrid) -> str:
    """Snapshot the belief grid in the ASCII map format (top row first)."""
    lines = []
    for row in range(grid.height - 1, -1, -1):
        chars = []
        for col in range(grid.width):
            cell = (col, row)
            if cell == grid.station:
                chars.append("C")
            elif grid.state(cell) is CellState.OBSTACLE:
                chars.append("#")
            else:
                chars.append(".")
        lines.append("".join(chars))
    return "\n".join(lines) + "\n"
