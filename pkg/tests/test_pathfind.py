import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from epsplus.grid import CellGrid, CellState
from epsplus.pathfind import (
    DistanceField,
    astar,
    build_visibility_graph,
    explored_only,
    grid_astar,
    grid_dijkstra,
    los_clear,
    non_obstacle,
    obstacle_vertices,
    supercover_line,
)

from helpers import dijkstra_on_graph, explored_grid, random_rect_obstacles, supercover_oracle


# -- supercover ---------------------------------------------------------------

def test_supercover_axis_lines():
    assert supercover_line((0, 0), (3, 0)) == [(0, 0), (1, 0), (2, 0), (3, 0)]
    assert supercover_line((2, 5), (2, 2)) == [(2, 5), (2, 4), (2, 3), (2, 2)]
    assert supercover_line((1, 1), (1, 1)) == [(1, 1)]


def test_supercover_diagonal_includes_corner_pairs():
    cells = supercover_line((0, 0), (2, 2))
    assert cells[0] == (0, 0) and cells[-1] == (2, 2)
    assert (1, 0) in cells and (0, 1) in cells


@given(st.integers(-12, 12), st.integers(-12, 12), st.integers(-12, 12), st.integers(-12, 12))
@settings(max_examples=200)
def test_supercover_matches_rational_oracle(ax, ay, bx, by):
    got = supercover_line((ax, ay), (bx, by))
    expected = supercover_oracle((ax, ay), (bx, by))
    assert set(got) == set(expected)
    assert got[0] == (ax, ay) and got[-1] == (bx, by)
    # consecutive cells stay 8-connected so the walk is executable
    for u, v in zip(got, got[1:]):
        assert max(abs(u[0] - v[0]), abs(u[1] - v[1])) == 1


# -- line of sight -------------------------------------------------------------

def test_los_same_cell():
    grid = explored_grid(4, 4, set(), (0, 0))
    assert los_clear(grid, (2, 2), (2, 2), explored_only)


def test_los_blocked_by_obstacle():
    grid = explored_grid(5, 3, {(2, 1)}, (0, 0))
    assert not los_clear(grid, (0, 1), (4, 1), explored_only)
    assert los_clear(grid, (0, 0), (4, 0), explored_only)


def test_los_corner_graze_blocked():
    # two diagonal obstacles pinch the corner the segment passes through
    grid = explored_grid(4, 4, {(1, 2), (2, 1)}, (0, 0))
    assert not los_clear(grid, (1, 1), (2, 2), explored_only)
    oracle_cells = supercover_oracle((1, 1), (2, 2))
    assert (1, 2) in oracle_cells and (2, 1) in oracle_cells


def test_los_unknown_blocks_explored_predicate_only():
    grid = CellGrid(4, 1, 1.0, (0, 0))
    for c in range(4):
        if c != 2:
            grid.mark_traversed((c, 0))
    assert not los_clear(grid, (0, 0), (3, 0), explored_only)
    assert los_clear(grid, (0, 0), (3, 0), non_obstacle)


# -- visibility graph -----------------------------------------------------------

def test_visibility_free_space_direct_edge():
    grid = explored_grid(6, 6, set(), (0, 0))
    g = build_visibility_graph(grid, (0, 0), (5, 5), explored_only)
    assert g.nodes == [(0, 0), (5, 5)]
    weights = dict(g.adjacency[(0, 0)])
    assert weights[(5, 5)] == pytest.approx(math.hypot(5, 5))


def test_visibility_routes_around_rectangle():
    obstacles = {(c, r) for c in range(2, 5) for r in range(2, 4)}
    grid = explored_grid(7, 6, obstacles, (0, 0))
    g = build_visibility_graph(grid, (0, 2), (6, 3), explored_only)
    assert (6, 3) not in dict(g.adjacency[(0, 2)])
    for u in g.nodes:
        for v, w in g.adjacency[u]:
            assert set(supercover_oracle(u, v)) & obstacles == set()
            assert w == pytest.approx(math.hypot(v[0] - u[0], v[1] - u[1]))
    path = astar(g, (0, 2), (6, 3))
    assert path is not None
    corners = set(obstacle_vertices(grid, explored_only))
    assert set(path.cells[1:-1]) <= corners


def test_visibility_goal_equals_start():
    grid = explored_grid(4, 4, set(), (0, 0))
    g = build_visibility_graph(grid, (1, 1), (1, 1), explored_only)
    path = astar(g, (1, 1), (1, 1))
    assert path.cells == [(1, 1)] and path.length == 0.0


def test_unexplored_goal_is_admitted():
    grid = CellGrid(3, 1, 1.0, (0, 0))
    grid.mark_traversed((0, 0))
    grid.mark_traversed((1, 0))
    g = build_visibility_graph(grid, (0, 0), (2, 0), explored_only)
    path = astar(g, (0, 0), (2, 0))
    assert path is not None and path.length == pytest.approx(2.0)


# -- A* ---------------------------------------------------------------------

def test_astar_direct_edge():
    grid = explored_grid(9, 2, set(), (0, 0))
    g = build_visibility_graph(grid, (0, 0), (8, 0), explored_only)
    path = astar(g, (0, 0), (8, 0))
    assert path.cells == [(0, 0), (8, 0)]
    assert path.length == pytest.approx(8.0)


def test_astar_prefers_cheaper_total():
    # direct edge of 10 beats a 6+5 two-hop route
    grid = explored_grid(2, 1, set(), (0, 0))

    class FakeGraph:
        def __init__(self):
            self.grid = grid
            self.nodes = ["s", "m", "g"]
            self.adjacency = {
                (0, 0): [((1, 0), 10.0), ((5, 5), 6.0)],
                (5, 5): [((0, 0), 6.0), ((1, 0), 5.0)],
                (1, 0): [((0, 0), 10.0), ((5, 5), 5.0)],
            }

    path = astar(FakeGraph(), (0, 0), (1, 0))
    assert path.cells == [(0, 0), (1, 0)]


def test_astar_matches_dijkstra_on_random_graphs():
    rng = random.Random(5)
    for _ in range(40):
        w, h = rng.randint(8, 16), rng.randint(8, 16)
        station = (0, 0)
        obstacles = random_rect_obstacles(rng, w, h, station, rng.uniform(0.05, 0.25))
        grid = explored_grid(w, h, obstacles, station)
        free = sorted(c for c in grid.cells() if grid.state(c) is CellState.EXPLORED)
        start, goal = rng.sample(free, 2)
        g = build_visibility_graph(grid, start, goal, explored_only)
        mine = astar(g, start, goal)
        oracle = dijkstra_on_graph(g, start, goal)
        if mine is None:
            assert oracle is None
        else:
            assert mine.length == oracle


def test_path_symmetry():
    obstacles = {(c, r) for c in range(3, 6) for r in range(2, 5)}
    grid = explored_grid(9, 8, obstacles, (0, 0))
    a, b = (0, 0), (8, 7)
    g1 = build_visibility_graph(grid, a, b, explored_only)
    g2 = build_visibility_graph(grid, b, a, explored_only)
    assert astar(g1, a, b).length == pytest.approx(astar(g2, b, a).length, abs=1e-12)


def test_visibility_length_bounded_by_grid_path():
    rng = random.Random(11)
    for _ in range(30):
        w, h = rng.randint(8, 18), rng.randint(8, 18)
        obstacles = random_rect_obstacles(rng, w, h, (0, 0), rng.uniform(0.05, 0.3))
        grid = explored_grid(w, h, obstacles, (0, 0))
        free = sorted(c for c in grid.cells() if grid.state(c) is CellState.EXPLORED)
        start, goal = rng.sample(free, 2)
        lengths = grid_dijkstra(grid, start, explored_only, cut_corners=False)
        if goal not in lengths:
            continue
        g = build_visibility_graph(grid, start, goal, explored_only)
        path = astar(g, start, goal)
        assert path is not None
        assert path.length <= lengths[goal] + 1e-9


# -- grid search & distance field ------------------------------------------------

def test_grid_astar_squeeze_control():
    # diagonal squeeze between two obstacles: allowed as motion, not without corner cutting
    obstacles = {(1, 2), (2, 1)}
    grid = explored_grid(4, 4, obstacles, (0, 0))
    squeezing = grid_astar(grid, (1, 1), (2, 2), explored_only, cut_corners=True)
    assert squeezing.length == pytest.approx(math.sqrt(2))
    strict = grid_astar(grid, (1, 1), (2, 2), explored_only, cut_corners=False)
    assert strict is None or strict.length > math.sqrt(2) + 1e-9


def test_distance_field_matches_dijkstra_after_growth():
    rng = random.Random(3)
    for _ in range(15):
        w, h = rng.randint(6, 12), rng.randint(6, 12)
        station = (0, 0)
        obstacles = random_rect_obstacles(rng, w, h, station, 0.15)
        grid = CellGrid(w, h, 1.0, station)
        if obstacles:
            grid.apply_sensor_update(obstacles)
        field = DistanceField(grid)
        grid.mark_traversed(station)
        field.insert(station)
        # grow the explored region cell by cell, connected to the station
        frontier = [c for c in grid.neighbors8(station) if grid.state(c) is not CellState.OBSTACLE]
        seen = {station}
        while frontier:
            cell = frontier.pop(rng.randrange(len(frontier)))
            if cell in seen:
                continue
            seen.add(cell)
            grid.mark_traversed(cell)
            field.insert(cell)
            for n in grid.neighbors8(cell):
                if n not in seen and grid.state(n) is not CellState.OBSTACLE:
                    frontier.append(n)
        oracle = grid_dijkstra(grid, station, explored_only, cut_corners=True)
        for cell in grid.cells():
            if grid.state(cell) is CellState.EXPLORED:
                assert field.distance(cell) == pytest.approx(oracle[cell], abs=1e-9)
