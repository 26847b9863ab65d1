"""Shared test oracles and map builders, independent of the library internals."""

from __future__ import annotations

import heapq
import math
from fractions import Fraction

from epsplus.grid import CellGrid


def flood_reachable(width, height, obstacles, station):
    """Free cells 8-connected to the station (frontier-set expansion oracle)."""
    if station in obstacles:
        return set()
    reached = {station}
    frontier = {station}
    while frontier:
        nxt = set()
        for c, r in frontier:
            for dc in (-1, 0, 1):
                for dr in (-1, 0, 1):
                    n = (c + dc, r + dr)
                    if n in reached or n in obstacles:
                        continue
                    if 0 <= n[0] < width and 0 <= n[1] < height:
                        nxt.add(n)
        reached |= nxt
        frontier = nxt
    return reached


def supercover_oracle(a, b):
    """Cells touched by the segment between cell centers, via exact rational
    boundary-crossing times (both cells are added at exact corner crossings)."""
    ax, ay = Fraction(2 * a[0] + 1, 2), Fraction(2 * a[1] + 1, 2)
    bx, by = Fraction(2 * b[0] + 1, 2), Fraction(2 * b[1] + 1, 2)
    dx, dy = bx - ax, by - ay
    events = []  # (t, axis)
    if dx != 0:
        step = 1 if dx > 0 else -1
        x = a[0] + (1 if step > 0 else 0)
        while (x <= b[0] if step > 0 else x >= b[0] + 1):
            events.append(((Fraction(x) - ax) / dx, "x"))
            x += step
    if dy != 0:
        step = 1 if dy > 0 else -1
        y = a[1] + (1 if step > 0 else 0)
        while (y <= b[1] if step > 0 else y >= b[1] + 1):
            events.append(((Fraction(y) - ay) / dy, "y"))
            y += step
    events.sort(key=lambda e: e[0])
    sx = 1 if dx > 0 else -1
    sy = 1 if dy > 0 else -1
    cells = [a]
    cur = a
    i = 0
    while i < len(events):
        t = events[i][0]
        group = []
        while i < len(events) and events[i][0] == t:
            group.append(events[i][1])
            i += 1
        if len(group) == 2:
            # exact corner crossing: both flanking cells, then the diagonal cell
            cells.append((cur[0] + sx, cur[1]))
            cells.append((cur[0], cur[1] + sy))
            cur = (cur[0] + sx, cur[1] + sy)
        elif group[0] == "x":
            cur = (cur[0] + sx, cur[1])
        else:
            cur = (cur[0], cur[1] + sy)
        cells.append(cur)
    return cells


def dijkstra_on_graph(graph, start, goal):
    """Plain Dijkstra over a VisibilityGraph; returns the path length or None."""
    dist = {start: 0.0}
    parent = {start: None}
    heap = [(0.0, start)]
    while heap:
        d, u = heapq.heappop(heap)
        if d > dist.get(u, math.inf):
            continue
        for v, w in graph.adjacency[u]:
            nd = d + w
            if nd < dist.get(v, math.inf):
                dist[v] = nd
                parent[v] = u
                heapq.heappush(heap, (nd, v))
    if goal not in dist:
        return None
    cells = [goal]
    while parent[cells[-1]] is not None:
        cells.append(parent[cells[-1]])
    cells.reverse()
    return math.fsum(
        math.hypot(cells[i + 1][0] - cells[i][0], cells[i + 1][1] - cells[i][1]) * graph.grid.cell_size
        for i in range(len(cells) - 1)
    )


def random_rect_obstacles(rng, width, height, station, density):
    """Random axis-aligned rectangles up to roughly the requested obstacle density."""
    target = int(density * width * height)
    obstacles = set()
    for _ in range(60):
        if len(obstacles) >= target:
            break
        w = rng.randint(1, max(1, width // 4))
        h = rng.randint(1, max(1, height // 4))
        c0 = rng.randrange(width - w + 1)
        r0 = rng.randrange(height - h + 1)
        rect = {(c, r) for c in range(c0, c0 + w) for r in range(r0, r0 + h)}
        if station in rect:
            continue
        obstacles |= rect
    return obstacles


def map_text(width, height, obstacles, station):
    lines = []
    for r in range(height - 1, -1, -1):
        row = []
        for c in range(width):
            if (c, r) in obstacles:
                row.append("#")
            elif (c, r) == station:
                row.append("C")
            else:
                row.append(".")
        lines.append("".join(row))
    return "\n".join(lines) + "\n"


def explored_grid(width, height, obstacles, station):
    """Belief grid with every free cell explored (obstacles all discovered)."""
    grid = CellGrid(width, height, 1.0, station)
    if obstacles:
        grid.apply_sensor_update(obstacles)
    for r in range(height):
        for c in range(width):
            if (c, r) not in obstacles:
                grid.mark_traversed((c, r))
    return grid
