"""Directional sensing model and the target-coverage fitness function.

A directional sensor sees a circular sector: radius ``radius``, view angle
``view_angle``, and one of ``directions`` equally spaced orientations
(direction ``j`` points at angle ``2*pi*j/directions`` from the x-axis).
A deployment chooses exactly one direction per sensor; its fitness is the
number of distinct targets covered by at least one sensor (NCT).

Fitness is evaluated many thousands of times per optimization run, so the
per-(sensor, direction) coverage sets are precomputed once as integer
bitmasks and an evaluation is a chain of ORs plus one popcount.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

TWO_PI = 2.0 * math.pi

# One direction index per sensor.
Assignment = Sequence[int]


@dataclass(frozen=True)
class Point:
    """A point in the field, in meters."""

    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"point coordinates must be finite, got ({self.x}, {self.y})")


@dataclass(frozen=True)
class Sensor:
    """A directional sensor: position, sensing radius, view angle, direction count."""

    position: Point
    radius: float
    view_angle: float
    directions: int

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError(f"sensor radius must be positive, got {self.radius}")
        if not 0 < self.view_angle <= TWO_PI:
            raise ValueError(f"view angle must be in (0, 2*pi], got {self.view_angle}")
        if self.directions < 1:
            raise ValueError(f"direction count must be >= 1, got {self.directions}")

    def direction_angle(self, j: int) -> float:
        """Orientation of direction j, measured from the x-axis."""
        if not 0 <= j < self.directions:
            raise ValueError(f"direction index {j} out of range [0, {self.directions})")
        return TWO_PI * j / self.directions


@dataclass(frozen=True)
class Instance:
    """A deployment problem: field dimensions, sensors, and target points."""

    length: float
    width: float
    sensors: tuple[Sensor, ...]
    targets: tuple[Point, ...]

    def __post_init__(self):
        if self.length <= 0 or self.width <= 0:
            raise ValueError("field dimensions must be positive")
        if not self.sensors:
            raise ValueError("instance needs at least one sensor")
        if not self.targets:
            raise ValueError("instance needs at least one target")
        for s in self.sensors:
            self._check_inside(s.position, "sensor")
        for t in self.targets:
            self._check_inside(t, "target")

    def _check_inside(self, p: Point, kind: str):
        if not (0 <= p.x <= self.length and 0 <= p.y <= self.width):
            raise ValueError(
                f"{kind} at ({p.x}, {p.y}) lies outside the field "
                f"[0, {self.length}] x [0, {self.width}]"
            )

    @property
    def sensor_count(self) -> int:
        return len(self.sensors)

    @property
    def target_count(self) -> int:
        return len(self.targets)


def angular_offset(a: float, b: float) -> float:
    """Absolute difference between two angles, taken on the circle (<= pi)."""
    d = (a - b) % TWO_PI
    return TWO_PI - d if d > math.pi else d


def covers(sensor: Sensor, direction: int, target: Point) -> bool:
    """True iff the target lies in the sensor's sector for the given direction.

    The sector test is distance <= radius and angular offset from the
    direction axis <= half the view angle, both boundaries inclusive. A
    target coincident with the sensor (undefined bearing) counts as covered.
    """
    alpha = sensor.direction_angle(direction)
    dx = target.x - sensor.position.x
    dy = target.y - sensor.position.y
    d2 = dx * dx + dy * dy
    if d2 > sensor.radius * sensor.radius:
        return False
    if d2 == 0.0:
        return True
    bearing = math.atan2(dy, dx)
    return angular_offset(bearing, alpha) <= sensor.view_angle / 2.0


@dataclass
class CoverageTable:
    """Precomputed coverage bitmasks: bit k of masks[i][j] is target k.

    Immutable once built; safe to share across concurrent evaluators.
    """

    masks: list[list[int]]
    target_count: int

    @property
    def sensor_count(self) -> int:
        return len(self.masks)

    @property
    def levels(self) -> list[int]:
        """Number of admissible directions per sensor."""
        return [len(row) for row in self.masks]

    def covered(self, sensor: int, direction: int) -> set[int]:
        """Decode one cell back into a set of target indices."""
        mask = self.masks[sensor][direction]
        return {k for k in range(self.target_count) if mask >> k & 1}

    def count_covered(self, assignment: Assignment) -> int:
        """Number of targets covered by at least one sensor under `assignment`.

        This is the optimization fitness (NCT). Pure function; raises
        ValueError on a length mismatch or an out-of-range direction index.
        """
        masks = self.masks
        if len(assignment) != len(masks):
            raise ValueError(
                f"assignment length {len(assignment)} != sensor count {len(masks)}"
            )
        union = 0
        for row, j in zip(masks, assignment):
            if not 0 <= j < len(row):
                raise ValueError(f"direction index {j} out of range [0, {len(row)})")
            union |= row[j]
        return union.bit_count()


def build_coverage_table(instance: Instance) -> CoverageTable:
    """Precompute, for every (sensor, direction), the bitmask of covered targets."""
    tx = np.fromiter((t.x for t in instance.targets), dtype=np.float64)
    ty = np.fromiter((t.y for t in instance.targets), dtype=np.float64)
    masks: list[list[int]] = []
    for s in instance.sensors:
        dx = tx - s.position.x
        dy = ty - s.position.y
        d2 = dx * dx + dy * dy
        in_range = d2 <= s.radius * s.radius
        bearings = np.arctan2(dy, dx)
        half = s.view_angle / 2.0
        row: list[int] = []
        for j in range(s.directions):
            alpha = s.direction_angle(j)
            off = np.mod(bearings - alpha, TWO_PI)
            off = np.where(off > math.pi, TWO_PI - off, off)
            hit = in_range & ((off <= half) | (d2 == 0.0))
            bits = np.packbits(hit, bitorder="little")
            row.append(int.from_bytes(bits.tobytes(), "little"))
        masks.append(row)
    return CoverageTable(masks=masks, target_count=instance.target_count)
