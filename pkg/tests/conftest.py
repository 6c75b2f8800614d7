"""Shared test helpers: random instance builders and a scripted stream stub."""

from __future__ import annotations

import math
from itertools import repeat

import numpy as np

from antcover.sensing import Instance, Point, Sensor


def make_random_instance(
    rng: np.random.Generator,
    sensors: int,
    targets: int,
    directions: int,
    length: float = 100.0,
    width: float = 100.0,
    radius: float | None = None,
    view_angle: float | None = None,
) -> Instance:
    """A uniformly random deployment for oracle-style tests."""
    radius = radius if radius is not None else float(rng.uniform(10.0, 60.0))
    view_angle = view_angle if view_angle is not None else float(rng.uniform(0.3, 2.0 * math.pi))
    sensor_objs = tuple(
        Sensor(
            position=Point(float(rng.uniform(0, length)), float(rng.uniform(0, width))),
            radius=radius,
            view_angle=view_angle,
            directions=directions,
        )
        for _ in range(sensors)
    )
    target_objs = tuple(
        Point(float(rng.uniform(0, length)), float(rng.uniform(0, width)))
        for _ in range(targets)
    )
    return Instance(length, width, sensor_objs, target_objs)


def random_assignment(rng: np.random.Generator, instance: Instance) -> tuple[int, ...]:
    return tuple(int(rng.integers(0, s.directions)) for s in instance.sensors)


def _source(value):
    """Turn a constant or an iterable into an endless/finite value source."""
    if hasattr(value, "__next__"):
        return value
    if isinstance(value, (list, tuple)):
        return iter(value)
    return repeat(value)


class StubStream:
    """Scripted stand-in for RandomStream with per-kernel value sources.

    Each kernel pops from its own source; constants repeat forever, lists
    are consumed in order. Lets operator tests force specific draws.
    """

    def __init__(
        self,
        normal=0.0,
        cauchy=0.0,
        uniform=0.5,
        integer=0,
        roulette=0,
        distinct=None,
    ):
        self._normal = _source(normal)
        self._cauchy = _source(cauchy)
        self._uniform = _source(uniform)
        self._integer = _source(integer)
        self._roulette = _source(roulette)
        self._distinct = distinct

    def _fill(self, source, size):
        if size is None:
            return float(next(source))
        shape = (size,) if isinstance(size, int) else size
        return np.fromiter(
            (next(source) for _ in range(int(np.prod(shape)))), dtype=np.float64
        ).reshape(shape)

    def standard_normal(self, size=None):
        return self._fill(self._normal, size)

    def standard_cauchy(self, size=None):
        return self._fill(self._cauchy, size)

    def uniform(self, size=None):
        return self._fill(self._uniform, size)

    def integer(self, upper):
        return int(next(self._integer)) % upper

    def roulette(self, weights, size=None):
        assert size is None
        return int(next(self._roulette))

    def distinct_indices(self, upper, count):
        if self._distinct is not None:
            return np.asarray(self._distinct)
        return np.arange(count)
