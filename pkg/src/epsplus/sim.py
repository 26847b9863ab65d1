"""Ground-truth world model: true obstacle map, sonar queries, move validation.

The sensor has a disk field of view: an obstacle cell is detected when its
center lies within range of the vehicle's cell center and the straight ray
between the two centers is not blocked by a nearer obstacle cell. Rays are
traced over the supercover cells of the segment, so obstacles hiding behind
other obstacles (including diagonal corner contacts) stay undetected until
seen from a better vantage point.
"""

from __future__ import annotations

import math

from .grid import Cell, ParsedMap
from .pathfind import supercover_line


class SensorModel:
    """Disk field-of-view sonar with a fixed range in meters."""

    def __init__(self, range_m: float):
        if range_m <= 0:
            raise ValueError(f"sensor range must be positive, got {range_m}")
        self.range_m = float(range_m)


class GroundTruth:
    """Immutable true map used by the simulator; never read by the planner."""

    def __init__(
        self,
        width: int,
        height: int,
        cell_size: float,
        obstacles: frozenset[Cell],
        station: Cell,
    ):
        if width < 1 or height < 1:
            raise ValueError(f"bad dimensions {width}x{height}")
        for cell in obstacles:
            if not (0 <= cell[0] < width and 0 <= cell[1] < height):
                raise ValueError(f"obstacle {cell} out of bounds")
        if station in obstacles:
            raise ValueError(f"station {station} lies on an obstacle")
        if not (0 <= station[0] < width and 0 <= station[1] < height):
            raise ValueError(f"station {station} out of bounds")
        self.width = width
        self.height = height
        self.cell_size = float(cell_size)
        self.obstacles = obstacles
        self.station = station
        self._flags = [False] * (width * height)
        for col, row in obstacles:
            self._flags[row * width + col] = True
        self._sense_cache: dict[tuple[float, Cell], frozenset[Cell]] = {}
        self._offsets: list[Cell] | None = None
        self._offsets_range: float | None = None

    @classmethod
    def from_parsed(cls, parsed: ParsedMap, cell_size: float = 1.0) -> "GroundTruth":
        return cls(parsed.width, parsed.height, cell_size, parsed.obstacles, parsed.station)

    def is_obstacle(self, cell: Cell) -> bool:
        return self._flags[cell[1] * self.width + cell[0]]

    def free_cells(self) -> set[Cell]:
        return {
            (col, row)
            for row in range(self.height)
            for col in range(self.width)
            if not self._flags[row * self.width + col]
        }

    def _disk_offsets(self, range_m: float) -> list[Cell]:
        if self._offsets is None or self._offsets_range != range_m:
            r_cells = range_m / self.cell_size
            r_int = int(math.floor(r_cells))
            limit = r_cells * r_cells
            offsets = []
            for dr in range(-r_int, r_int + 1):
                for dc in range(-r_int, r_int + 1):
                    if dc == 0 and dr == 0:
                        continue
                    if dc * dc + dr * dr <= limit + 1e-12:
                        offsets.append((dc, dr))
            offsets.sort()
            self._offsets = offsets
            self._offsets_range = range_m
        return self._offsets

    def sense(self, sensor: SensorModel, pose: Cell) -> frozenset[Cell]:
        """Obstacle cells visible from the pose cell (in range, not occluded)."""
        if self.is_obstacle(pose):
            raise ValueError(f"sensor pose {pose} is inside an obstacle")
        key = (sensor.range_m, pose)
        cached = self._sense_cache.get(key)
        if cached is not None:
            return cached
        detected = set()
        for dc, dr in self._disk_offsets(sensor.range_m):
            target = (pose[0] + dc, pose[1] + dr)
            if not (0 <= target[0] < self.width and 0 <= target[1] < self.height):
                continue
            if not self.is_obstacle(target):
                continue
            blocked = False
            for cell in supercover_line(pose, target):
                if cell == target:
                    break
                if cell != pose and self.is_obstacle(cell):
                    blocked = True
                    break
            if not blocked:
                detected.add(target)
        result = frozenset(detected)
        self._sense_cache[key] = result
        return result

    def validate_move(self, frm: Cell, to: Cell) -> bool:
        """True iff the target is free and at most one 8-connected step away."""
        for cell in (frm, to):
            if not (0 <= cell[0] < self.width and 0 <= cell[1] < self.height):
                return False
        if self.is_obstacle(to):
            return False
        return abs(to[0] - frm[0]) <= 1 and abs(to[1] - frm[1]) <= 1
