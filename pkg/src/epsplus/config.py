"""Mission configuration: defaults and the flat key = value file format."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass
class MissionConfig:
    """Run parameters; defaults match the bundled 50x50 field scenarios."""

    capacity_e0: float = 320.0
    travel_rate: float = 0.5
    coverage_rate: float | None = None  # None -> 2 * travel_rate
    sensor_range: float = 5.0
    levels: int | None = None  # None -> coarsen until one top cell

    def __post_init__(self) -> None:
        if self.capacity_e0 <= 0:
            raise ValueError("capacity_e0 must be positive")
        if self.travel_rate <= 0:
            raise ValueError("travel_rate must be positive")
        if self.coverage_rate is None:
            self.coverage_rate = 2.0 * self.travel_rate
        if self.coverage_rate <= 0:
            raise ValueError("coverage_rate must be positive")
        if self.sensor_range <= 0:
            raise ValueError("sensor_range must be positive")
        if self.levels is not None and self.levels < 1:
            raise ValueError("levels must be >= 1 or auto")


_FLOAT_KEYS = ("capacity_e0", "travel_rate", "coverage_rate", "sensor_range")


def parse_config(text: str) -> MissionConfig:
    """Parse the flat ``key = value`` format ('#' starts a comment)."""
    values: dict[str, object] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line {lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip().lower()
        value = value.strip()
        if key in _FLOAT_KEYS:
            try:
                values[key] = float(value)
            except ValueError:
                raise ValueError(f"config line {lineno}: {key} needs a number, got {value!r}")
        elif key == "levels":
            if value.lower() == "auto":
                values[key] = None
            else:
                try:
                    values[key] = int(value)
                except ValueError:
                    raise ValueError(
                        f"config line {lineno}: levels needs an integer or 'auto', got {value!r}"
                    )
        else:
            raise ValueError(f"config line {lineno}: unknown key {key!r}")
    return MissionConfig(**values)  # type: ignore[arg-type]
