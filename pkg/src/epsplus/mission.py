"""Mission loop: advance, cover until the budget runs low, retreat, recharge.

Each charge cycle is one trajectory that starts and ends at the station.
Coverage proceeds one cell per decision: sense, pick the next waypoint,
check that the remaining energy pays for reaching it plus retreating from
it, then move. Retreats and advances run as shortest paths over explored
cells (visibility-graph A* with an 8-connected fallback when no sight-line
path exists yet); advances may cross unexplored free space only when no
explored corridor to the restart point exists.

The retreat-cost side of the energy gate uses an incrementally maintained
explored-grid distance field instead of rebuilding the visibility graph on
every step. That estimate never undercuts the executed retreat (grid length
bounds the sight-line length from above), so the budget stays safe; it can
only trigger a retreat slightly early.

Ground truth backstop: sonar rays cannot see past corner contacts, so a
planned cell may turn out to hold an obstacle. Stepping into it is refused
by the world model and recorded as a contact detection; the plan is then
rebuilt. Unexplored cells that can never be both reached and retreated from
on a full charge are excluded and reported as uncoverable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .config import MissionConfig
from .energy import EnergyState, SegmentKind
from .errors import PlanningError
from .grid import Cell, CellGrid, CellState
from .hierarchy import MapsHierarchy
from .pathfind import (
    DistanceField,
    PathResult,
    astar,
    build_visibility_graph,
    euclid,
    explored_only,
    grid_astar,
    non_obstacle,
    supercover_line,
)
from .planner import next_waypoint, restart_point
from .sim import GroundTruth, SensorModel

SQRT2 = math.sqrt(2.0)


class MissionEvent(Enum):
    SENSED = "sensed"
    MOVED = "moved"
    RETREAT_STARTED = "retreat_started"
    RECHARGED = "recharged"
    ADVANCE_STARTED = "advance_started"
    COMPLETED = "completed"


@dataclass
class TrajectorySegment:
    kind: SegmentKind
    cells: list[Cell]
    length: float
    energy: float


@dataclass
class Trajectory:
    index: int
    segments: list[TrajectorySegment]

    @property
    def length(self) -> float:
        return math.fsum(s.length for s in self.segments)

    @property
    def energy(self) -> float:
        return math.fsum(s.energy for s in self.segments)

    @property
    def first_cell(self) -> Cell:
        return self.segments[0].cells[0]

    @property
    def last_cell(self) -> Cell:
        return self.segments[-1].cells[-1]


@dataclass
class MissionReport:
    trajectories: list[Trajectory]
    covered_cell_count: int
    uncoverable_cell_count: int
    overlap_count: int
    total_length: float
    recharge_count: int


LogRow = tuple[int, str, int, int, float, float]

LOG_HEADER = "trajectory_index,segment_kind,col,row,remaining_energy,cumulative_length"


def log_to_csv(rows: list[LogRow]) -> str:
    lines = [LOG_HEADER]
    for ti, kind, col, row, rem, cum in rows:
        lines.append(f"{ti},{kind},{col},{row},{rem:.9f},{cum:.9f}")
    return "\n".join(lines) + "\n"


def report_to_text(report: MissionReport) -> str:
    lines = [
        f"covered_cells: {report.covered_cell_count}",
        f"uncoverable_cells: {report.uncoverable_cell_count}",
        f"overlap_cells: {report.overlap_count}",
        f"total_length_m: {report.total_length:.9f}",
        f"recharge_count: {report.recharge_count}",
        f"trajectories: {len(report.trajectories)}",
    ]
    for t in report.trajectories:
        segs = "+".join(s.kind.value for s in t.segments)
        lines.append(
            f"trajectory {t.index}: segments={segs} length_m={t.length:.9f}"
            f" energy={t.energy:.9f}"
        )
    return "\n".join(lines) + "\n"


class _SegmentBuilder:
    __slots__ = ("kind", "cells", "length", "energy")

    def __init__(self, kind: SegmentKind, start: Cell):
        self.kind = kind
        self.cells = [start]
        self.length = 0.0
        self.energy = 0.0

    def freeze(self) -> TrajectorySegment:
        return TrajectorySegment(self.kind, self.cells, self.length, self.energy)


class Mission:
    """Single deterministic mission over one ground-truth map."""

    def __init__(self, gt: GroundTruth, config: MissionConfig | None = None):
        self.gt = gt
        self.config = config or MissionConfig()
        self.grid = CellGrid(gt.width, gt.height, gt.cell_size, gt.station)
        self.hier = MapsHierarchy(self.grid, self.config.levels)
        self.energy = EnergyState(
            capacity=self.config.capacity_e0,
            travel_rate=self.config.travel_rate,
            coverage_rate=self.config.coverage_rate,
        )
        self.sensor = SensorModel(self.config.sensor_range)
        self.pos: Cell = gt.station
        self.dfield = DistanceField(self.grid)
        self.trajectories: list[Trajectory] = []
        self.log_rows: list[LogRow] = []
        self.report: MissionReport | None = None
        self.infeasible: set[Cell] = set()
        self._segments: list[_SegmentBuilder] = []
        self._visits: dict[Cell, int] = {}
        self._cum_length = 0.0
        self._reachable_cache: set[Cell] | None = None
        self._route: dict | None = None
        self._traj_start_unexplored = 0
        self._start_trajectory()
        self._coverage_enter(self.pos)
        self._log_row()
        self._events = self._run()

    # -- public API ----------------------------------------------------------

    def step(self) -> MissionEvent:
        """Advance the mission by one event; raises once completed."""
        try:
            return next(self._events)
        except StopIteration:
            raise RuntimeError("mission already completed") from None

    def run(self) -> MissionReport:
        """Run the mission to completion and return the report."""
        for _ in self._events:
            pass
        assert self.report is not None
        return self.report

    # -- belief updates -------------------------------------------------------

    def _reachable(self) -> set[Cell]:
        if self._reachable_cache is None:
            self._reachable_cache = self.grid.reachable_unexplored()
        return self._reachable_cache

    def _add_obstacles(self, detected: "frozenset[Cell] | list[Cell] | set[Cell]") -> list[Cell]:
        new = sorted(c for c in set(detected) if self.grid.state(c) is CellState.UNEXPLORED)
        if not new:
            return []
        changed = self.grid.apply_sensor_update(detected)
        assert changed == len(new)
        for c in new:
            self.hier.on_state_change(c, CellState.UNEXPLORED, CellState.OBSTACLE)
        self._reachable_cache = None
        self._route = None
        return new

    def _sense_here(self) -> list[Cell]:
        return self._add_obstacles(self.gt.sense(self.sensor, self.pos))

    def _mark_explored(self, cell: Cell) -> None:
        if self.grid.state(cell) is CellState.UNEXPLORED:
            self.grid.mark_traversed(cell)
            self.hier.on_state_change(cell, CellState.UNEXPLORED, CellState.EXPLORED)
            self.dfield.insert(cell)

    # -- trajectory bookkeeping ------------------------------------------------

    def _start_trajectory(self) -> None:
        self._segments = []
        self._traj_start_unexplored = self.grid.counts()[CellState.UNEXPLORED]

    def _close_trajectory(self) -> None:
        traj = Trajectory(len(self.trajectories) + 1, [s.freeze() for s in self._segments])
        assert traj.first_cell == self.grid.station and traj.last_cell == self.grid.station
        assert traj.energy <= self.energy.capacity + 1e-9
        assert self.grid.counts()[CellState.UNEXPLORED] < self._traj_start_unexplored
        self.trajectories.append(traj)
        self._segments = []

    def _begin_segment(self, kind: SegmentKind, start: Cell) -> _SegmentBuilder:
        seg = _SegmentBuilder(kind, start)
        self._segments.append(seg)
        return seg

    def _coverage_enter(self, cell: Cell) -> None:
        self._begin_segment(SegmentKind.COVERAGE, cell)
        if self.grid.state(cell) is CellState.UNEXPLORED:
            self._mark_explored(cell)
            self._visits[cell] = self._visits.get(cell, 0) + 1

    def _log_row(self) -> None:
        seg = self._segments[-1]
        self.log_rows.append(
            (
                len(self.trajectories) + 1,
                seg.kind.value,
                self.pos[0],
                self.pos[1],
                self.energy.remaining,
                self._cum_length,
            )
        )

    # -- motion -----------------------------------------------------------------

    def _coverage_move(self, nxt: Cell) -> None:
        s = euclid(self.grid, self.pos, nxt)
        assert self.gt.validate_move(self.pos, nxt)
        cost = self.energy.consume(s, SegmentKind.COVERAGE)
        self.pos = nxt
        self._mark_explored(nxt)
        self._visits[nxt] = self._visits.get(nxt, 0) + 1
        seg = self._segments[-1]
        seg.cells.append(nxt)
        seg.length += s
        seg.energy += cost
        self._cum_length += s
        self._log_row()

    def _execute_polyline(self, nodes: list[Cell], kind: SegmentKind):
        """Walk a node path edge by edge; yields MOVED per node reached.

        Returns "arrived", or "stopped" when a contact detection or newly
        sensed obstacle invalidates the remaining plan (advance only).
        """
        seg = self._segments[-1]
        for k in range(len(nodes) - 1):
            u, v = nodes[k], nodes[k + 1]
            assert self.pos == u
            if max(abs(v[0] - u[0]), abs(v[1] - u[1])) == 1:
                chain = [u, v]  # plain 8-connected motion, not a sight-line segment
            else:
                chain = supercover_line(u, v)
            stop: Cell | None = None
            for ci in range(1, len(chain)):
                cell = chain[ci]
                if self.gt.is_obstacle(cell):
                    self._add_obstacles([cell])
                    stop = self.pos
                    break
                self.pos = cell
                self._mark_explored(cell)
                new = self._sense_here()
                if kind is SegmentKind.ADVANCE and new:
                    rest_blocked = any(
                        self.grid.state(x) is CellState.OBSTACLE for x in chain[ci + 1 :]
                    ) or any(
                        self.grid.state(n) is CellState.OBSTACLE for n in nodes[k + 1 :]
                    )
                    if rest_blocked:
                        stop = cell
                        break
            if stop is None:
                d = euclid(self.grid, u, v)
                cost = self.energy.consume(d, kind)
                seg.cells.append(v)
                seg.length += d
                seg.energy += cost
                self._cum_length += d
                self._log_row()
                yield MissionEvent.MOVED
            else:
                if kind is SegmentKind.RETREAT:
                    raise PlanningError("retreat path blocked; explored cells must stay free")
                if stop != u:
                    d = euclid(self.grid, u, stop)
                    cost = self.energy.consume(d, kind)
                    seg.cells.append(stop)
                    seg.length += d
                    seg.energy += cost
                    self._cum_length += d
                    self._log_row()
                    yield MissionEvent.MOVED
                return "stopped"
        return "arrived"

    # -- path planning -----------------------------------------------------------

    def _plan_retreat(self, from_cell: Cell) -> PathResult:
        station = self.grid.station
        options = []
        vis = build_visibility_graph(self.grid, from_cell, station, explored_only)
        vpath = astar(vis, from_cell, station)
        if vpath is not None:
            options.append(vpath)
        gpath = grid_astar(self.grid, from_cell, station, explored_only)
        if gpath is not None:
            options.append(gpath)
        if not options:
            raise PlanningError(f"no retreat path from {from_cell}")
        options.sort(key=lambda p: (p.length, p.cells))
        return options[0]

    def _plan_advance(self, start: Cell, target: Cell) -> PathResult | None:
        options = []
        vis = build_visibility_graph(self.grid, start, target, explored_only)
        vpath = astar(vis, start, target)
        if vpath is not None:
            options.append(vpath)
        gpath = grid_astar(
            self.grid, start, target, explored_only, extra=frozenset((target,))
        )
        if gpath is not None:
            options.append(gpath)
        if not options:
            vis2 = build_visibility_graph(self.grid, start, target, non_obstacle)
            vpath2 = astar(vis2, start, target)
            if vpath2 is not None:
                options.append(vpath2)
            gpath2 = grid_astar(self.grid, start, target, non_obstacle)
            if gpath2 is not None:
                options.append(gpath2)
        if not options:
            return None
        options.sort(key=lambda p: (p.length, p.cells))
        return options[0]

    def _route_for(self, target: Cell) -> list[Cell]:
        """Cell route from the vehicle to the waypoint (adjacent or planned chain)."""
        if max(abs(target[0] - self.pos[0]), abs(target[1] - self.pos[1])) == 1:
            return [self.pos, target]
        r = self._route
        if r is not None and r["target"] == target:
            cells = r["cells"]
            i = r["i"]
            if i + 1 < len(cells) and cells[i + 1] == self.pos:
                i += 1
                r["i"] = i
            if cells[i] == self.pos:
                return cells[i:]
        plan = grid_astar(self.grid, self.pos, target, non_obstacle)
        if plan is None:
            raise PlanningError(f"no route to reachable waypoint {target}")
        self._route = {"target": target, "cells": plan.cells, "i": 0}
        return plan.cells

    @staticmethod
    def _chain_length(grid: CellGrid, cells: list[Cell]) -> float:
        return math.fsum(euclid(grid, cells[i], cells[i + 1]) for i in range(len(cells) - 1))

    # -- phases ---------------------------------------------------------------

    def _run(self):
        while True:
            terminal = yield from self._coverage_phase()
            if terminal == "done":
                yield from self._retreat_moves()
                self._close_trajectory()
                self._finalize()
                yield MissionEvent.COMPLETED
                return
            yield from self._retreat_moves()
            self._close_trajectory()
            self.energy.charge_full()
            yield MissionEvent.RECHARGED
            resumed = yield from self._advance_phase()
            if not resumed:
                self._finalize()
                yield MissionEvent.COMPLETED
                return

    def _coverage_phase(self):
        grid = self.grid
        energy = self.energy
        while True:
            self._sense_here()
            yield MissionEvent.SENSED
            wp = next_waypoint(
                grid, self.hier, self.pos,
                excluded=frozenset(self.infeasible),
                reachable=self._reachable(),
            )
            if wp is None:
                return "done"
            route = self._route_for(wp.cell)
            l_rest = self._chain_length(grid, route)
            step_cost = energy.coverage_rate * l_rest
            if len(route) == 2:
                est = self.dfield.neighbor_estimate(wp.cell)
            else:
                est = l_rest + self.dfield.distance(self.pos)
            if not energy.can_continue(step_cost, energy.travel_rate * est):
                return "recharge"
            nxt = route[1]
            if self.gt.is_obstacle(nxt):
                self._add_obstacles([nxt])
                yield MissionEvent.SENSED
                continue
            self._coverage_move(nxt)
            yield MissionEvent.MOVED

    def _retreat_moves(self):
        station = self.grid.station
        self._begin_segment(SegmentKind.RETREAT, self.pos)
        if self.pos == station:
            return
        yield MissionEvent.RETREAT_STARTED
        plan = self._plan_retreat(self.pos)
        status = yield from self._execute_polyline(plan.cells, SegmentKind.RETREAT)
        if status != "arrived" or self.pos != station:
            raise PlanningError("retreat did not reach the station")

    def _advance_phase(self):
        grid = self.grid
        station = grid.station
        min_step = SQRT2 * grid.cell_size
        cov = self.energy.coverage_rate
        travel = self.energy.travel_rate
        skipped: set[Cell] = set()
        while True:
            wp = restart_point(
                grid, self.hier, station,
                excluded=frozenset(self.infeasible | skipped),
                reachable=self._reachable(),
            )
            if wp is None:
                return False
            target = wp.cell
            d_opt = euclid(grid, station, target)
            if self.energy.capacity < 2.0 * travel * d_opt + cov * min_step:
                self.infeasible.add(target)
                continue
            plan = self._plan_advance(self.pos, target)
            if plan is None or self.energy.capacity < 2.0 * travel * plan.length + cov * min_step:
                skipped.add(target)
                continue
            self._start_trajectory()
            self._begin_segment(SegmentKind.ADVANCE, self.pos)
            yield MissionEvent.ADVANCE_STARTED
            arrived = yield from self._advance_exec(target, plan)
            if arrived:
                self._coverage_enter(self.pos)
                return True
            # advance abandoned: return home, recharge and reselect
            self._coverage_enter(self.pos)
            yield from self._retreat_moves()
            self._close_trajectory()
            self.energy.charge_full()
            yield MissionEvent.RECHARGED
            skipped = set()

    def _advance_exec(self, target: Cell, plan: PathResult):
        travel = self.energy.travel_rate
        while True:
            status = yield from self._execute_polyline(plan.cells, SegmentKind.ADVANCE)
            if status == "arrived":
                return self.pos == target
            if (
                self.grid.state(target) is not CellState.UNEXPLORED
                or target in self.infeasible
                or target not in self._reachable()
            ):
                wp = next_waypoint(
                    self.grid, self.hier, self.pos,
                    excluded=frozenset(self.infeasible),
                    reachable=self._reachable(),
                )
                if wp is None:
                    return False
                target = wp.cell
            new_plan = self._plan_advance(self.pos, target)
            if new_plan is None:
                return False
            if not self.energy.can_continue(
                travel * new_plan.length,
                travel * (new_plan.length + self.dfield.distance(self.pos)),
            ):
                return False
            plan = new_plan

    # -- wrap-up ----------------------------------------------------------------

    def _finalize(self) -> None:
        counts = self.grid.counts()
        covered = counts[CellState.EXPLORED]
        free_total = self.gt.width * self.gt.height - len(self.gt.obstacles)
        overlap = sum(1 for v in self._visits.values() if v >= 2)
        self.report = MissionReport(
            trajectories=list(self.trajectories),
            covered_cell_count=covered,
            uncoverable_cell_count=free_total - covered,
            overlap_count=overlap,
            total_length=self._cum_length,
            recharge_count=len(self.trajectories) - 1,
        )


def run_mission(gt: GroundTruth, config: MissionConfig | None = None) -> MissionReport:
    return Mission(gt, config).run()
