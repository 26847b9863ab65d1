"""SVG rendering of a mission log over its map.

Obstacles are filled dark, the station is the yellow marker, and the three
segment kinds keep the usual color convention: coverage red, retreat blue,
advance green. Output is plain SVG text built with fixed formatting so the
same inputs always produce the same bytes.
"""

from __future__ import annotations

from .grid import ParsedMap
from .mission import LogRow

SCALE = 14.0  # px per cell
MARGIN = 12.0

COLORS = {
    "coverage": "#d62728",
    "retreat": "#1f77b4",
    "advance": "#2ca02c",
}

OBSTACLE_FILL = "#3b3b3b"
STATION_FILL = "#ffcc00"


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def render_svg(parsed: ParsedMap, rows: list[LogRow]) -> str:
    width_px = parsed.width * SCALE + 2 * MARGIN
    height_px = parsed.height * SCALE + 2 * MARGIN

    def center(col: int, row: int) -> tuple[float, float]:
        return (
            MARGIN + (col + 0.5) * SCALE,
            MARGIN + (parsed.height - 1 - row + 0.5) * SCALE,
        )

    for _, _, col, row, _, _ in rows:
        if not (0 <= col < parsed.width and 0 <= row < parsed.height):
            raise ValueError(f"log cell ({col},{row}) outside {parsed.width}x{parsed.height} map")

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(width_px)}"'
        f' height="{_fmt(height_px)}" viewBox="0 0 {_fmt(width_px)} {_fmt(height_px)}">',
        f'<rect x="0" y="0" width="{_fmt(width_px)}" height="{_fmt(height_px)}" fill="#ffffff"/>',
        f'<rect x="{_fmt(MARGIN)}" y="{_fmt(MARGIN)}" width="{_fmt(parsed.width * SCALE)}"'
        f' height="{_fmt(parsed.height * SCALE)}" fill="none" stroke="#999999" stroke-width="1"/>',
    ]
    for col, row in sorted(parsed.obstacles):
        x = MARGIN + col * SCALE
        y = MARGIN + (parsed.height - 1 - row) * SCALE
        out.append(
            f'<rect x="{_fmt(x)}" y="{_fmt(y)}" width="{_fmt(SCALE)}"'
            f' height="{_fmt(SCALE)}" fill="{OBSTACLE_FILL}"/>'
        )

    # consecutive rows of one segment kind form one polyline; each group is
    # anchored at the previous row's point so segments connect visually
    prev_point: tuple[float, float] | None = None
    group_kind: str | None = None
    group_points: list[tuple[float, float]] = []

    def flush() -> None:
        if group_kind is not None and len(group_points) >= 2:
            pts = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in group_points)
            out.append(
                f'<polyline points="{pts}" fill="none" stroke="{COLORS[group_kind]}"'
                f' stroke-width="2" stroke-linejoin="round" stroke-linecap="round"/>'
            )

    last_group: tuple[int, str] | None = None
    for ti, kind, col, row, _, _ in rows:
        point = center(col, row)
        if (ti, kind) != last_group:
            flush()
            group_points = [prev_point] if prev_point is not None else []
            group_kind = kind
            last_group = (ti, kind)
        group_points.append(point)
        prev_point = point
    flush()

    sx, sy = center(*parsed.station)
    out.append(
        f'<circle cx="{_fmt(sx)}" cy="{_fmt(sy)}" r="{_fmt(SCALE * 0.45)}"'
        f' fill="{STATION_FILL}" stroke="#806000" stroke-width="1"/>'
    )
    out.append("</svg>")
    return "\n".join(out) + "\n"
