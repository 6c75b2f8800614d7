"""Discrete army ant search: a swarm optimizer over circular direction grids.

A candidate solution is a vector of angles, one per dimension, constrained to
``levels[d]`` equally spaced grid values on [0, 2*pi). The swarm hunts like an
army ant raid guided by up to four prey odors (the best four distinct
solutions found so far):

* Each iteration a Poisson-distributed number of ants is recruited, with the
  mean ramping from ``num_ini`` up to the full population size.
* A recruited ant makes one Gaussian-perturbed move toward every active prey
  and lands on the average of those moves.
* Every other ant wanders to the midpoint of two Cauchy-perturbed companions
  picked at random from the population.
* New positions wrap into [0, 2*pi) and are stochastically rounded to the
  grid: the probability of rounding up equals the fractional offset, which
  doubles as the mutation operator.
* The number of active prey declines from four toward one over the run, so
  late iterations exploit the best solution only.

All randomness flows through one :class:`~antcover.rng.RandomStream` in a
fixed order (recruitment count, recruited-index set, then ants in index
order, then rounding draws ant-major/dimension-minor), so a run is a pure
function of (fitness function, parameters, seed).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .rng import RandomStream, poisson_pmf
from .sensing import TWO_PI

FitnessFn = Callable[[tuple[int, ...]], float]

# Fractional offsets closer to a grid point than this are treated as exact,
# so grid values survive wrap/divide round-trips bit-for-bit.
_SNAP_EPS = 1e-9

ARCHIVE_CAPACITY = 4


@dataclass
class OptimizerParams:
    """Run parameters: swarm size, per-dimension grid sizes, iteration budget.

    ``num_ini`` is the initial mean of the recruitment distribution and
    defaults to half the population.
    """

    population: int
    levels: list[int]
    max_iterations: int
    num_ini: float | None = None

    def __post_init__(self):
        if self.population < ARCHIVE_CAPACITY:
            raise ValueError(
                f"population must be >= {ARCHIVE_CAPACITY} (the prey archive "
                f"holds up to {ARCHIVE_CAPACITY} distinct solutions), got {self.population}"
            )
        if not self.levels or any(p < 1 for p in self.levels):
            raise ValueError("levels must be a nonempty list of positive ints")
        if self.max_iterations < 1:
            raise ValueError(f"max_iterations must be >= 1, got {self.max_iterations}")
        if self.num_ini is None:
            self.num_ini = self.population / 2.0
        if not 0 <= self.num_ini <= self.population:
            raise ValueError(f"num_ini must lie in [0, population], got {self.num_ini}")

    @property
    def dimension(self) -> int:
        return len(self.levels)


class ArchiveEntry(NamedTuple):
    assignment: tuple[int, ...]
    fitness: float
    stamp: int  # iteration of first discovery; used for tie-breaking


class PreyArchive:
    """The best distinct solutions found so far, best first (the prey odors).

    Holds at most four entries with pairwise distinct assignments. Ordering:
    fitness descending, then earlier discovery, then lexicographically
    smaller assignment. Merging is elitist, so the best entry never worsens.
    """

    def __init__(self):
        self.entries: list[ArchiveEntry] = []

    def offer(self, assignment: tuple[int, ...], fitness: float, stamp: int) -> None:
        entries = self.entries
        if len(entries) == ARCHIVE_CAPACITY and fitness < entries[-1].fitness:
            return
        for e in entries:
            if e.assignment == assignment:
                return  # already archived under its first discovery stamp
        entries.append(ArchiveEntry(assignment, fitness, stamp))
        entries.sort(key=lambda e: (-e.fitness, e.stamp, e.assignment))
        del entries[ARCHIVE_CAPACITY:]

    def merge(
        self,
        assignments: Sequence[tuple[int, ...]],
        fitnesses: Sequence[float],
        stamp: int,
    ) -> None:
        for assignment, fit in zip(assignments, fitnesses):
            self.offer(assignment, fit, stamp)

    @property
    def best(self) -> ArchiveEntry:
        if not self.entries:
            raise ValueError("archive is empty")
        return self.entries[0]

    def active(self, count: int) -> list[ArchiveEntry]:
        """The first `count` entries (at least one) acting as odors."""
        return self.entries[: max(1, min(count, len(self.entries)))]


@dataclass
class AntPopulation:
    """Swarm state: grid angles, the matching grid indices, and fitnesses."""

    angles: np.ndarray  # (N, D) float64, each value on its dimension's grid
    indices: np.ndarray  # (N, D) int64
    fitness: list  # per-ant fitness values, as returned by the fitness function

    @property
    def size(self) -> int:
        return self.angles.shape[0]


@dataclass(frozen=True)
class ScheduleState:
    """Per-iteration schedule values: recruitment mean and active prey count."""

    iteration: int
    recruit_mean: float
    prey_target: int

    @classmethod
    def for_iteration(cls, t: int, params: OptimizerParams) -> "ScheduleState":
        return cls(
            iteration=t,
            recruit_mean=recruitment_mean(t, params),
            prey_target=prey_count(t, params.max_iterations),
        )


@dataclass
class OptimizationResult:
    best_assignment: tuple[int, ...]
    best_fitness: float
    history: list  # best archive fitness per iteration; index 0 = initial
    evaluations: int


def _round_half_away(x: float) -> int:
    """Round half away from zero; arguments here are always nonnegative."""
    return int(math.floor(x + 0.5))


def recruitment_mean(t: int, params: OptimizerParams) -> float:
    """Mean recruited-ant count at iteration t, ramping from num_ini to N."""
    _check_iteration(t, params.max_iterations)
    n = params.population
    return params.num_ini + (n - params.num_ini) * t / params.max_iterations


def recruitment_count(t: int, params: OptimizerParams, stream: RandomStream) -> int:
    """Number of ants recruited at iteration t.

    Poisson with mean :func:`recruitment_mean`, truncated to {0, ..., N} and
    renormalized; the draw is a roulette selection over that pmf.
    """
    mean = recruitment_mean(t, params)
    if mean == 0:
        return 0
    weights = poisson_pmf(np.arange(params.population + 1), mean)
    return stream.roulette(weights)


def prey_count(t: int, t_max: int) -> int:
    """Number of active prey at iteration t: declines from 4, clamped to >= 1."""
    _check_iteration(t, t_max)
    raw = 4.0 - 4.0 * (t - 1) / t_max
    return max(1, _round_half_away(raw))


def _check_iteration(t: int, t_max: int) -> None:
    if not 1 <= t <= t_max:
        raise ValueError(f"iteration {t} out of range [1, {t_max}]")


def following_move(ant: np.ndarray, prey: np.ndarray, stream: RandomStream) -> np.ndarray:
    """Gaussian move toward a prey: prey + (prey - ant) * eps, elementwise."""
    ant = np.asarray(ant, dtype=np.float64)
    prey = np.asarray(prey, dtype=np.float64)
    if ant.shape != prey.shape:
        raise ValueError(f"shape mismatch: ant {ant.shape} vs prey {prey.shape}")
    eps = stream.standard_normal(ant.shape[0])
    return prey + (prey - ant) * eps


def attacking_move(follow_results: Sequence[np.ndarray]) -> np.ndarray:
    """Elementwise mean of the per-prey following moves."""
    if len(follow_results) == 0:
        raise ValueError("attacking_move needs at least one following move")
    total = np.array(follow_results[0], dtype=np.float64)
    for r in follow_results[1:]:
        total = total + r
    return total / len(follow_results)


def wander_move(
    companion_a: np.ndarray, companion_b: np.ndarray, stream: RandomStream
) -> np.ndarray:
    """Midpoint of two Cauchy-perturbed companions."""
    a = np.asarray(companion_a, dtype=np.float64)
    b = np.asarray(companion_b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    ca = stream.standard_cauchy(a.shape[0])
    cb = stream.standard_cauchy(b.shape[0])
    return ((a + ca) + (b + cb)) / 2.0


def wrap_angles(values: np.ndarray) -> np.ndarray:
    """Reduce angles into [0, 2*pi); float rounding can make mod return 2*pi."""
    wrapped = np.mod(values, TWO_PI)
    return np.where(wrapped >= TWO_PI, 0.0, wrapped)


def _stochastic_round(
    angles: np.ndarray, levels: np.ndarray, r2: np.ndarray
) -> np.ndarray:
    """Round angles onto their circular grids, up with probability = offset.

    `angles` must already lie in [0, 2*pi). Offsets within _SNAP_EPS of a
    grid point count as exact, so on-grid values round to themselves for any
    r2 (r2 is in (0, 1] and is compared with strict <).
    """
    steps = TWO_PI / levels
    scaled = angles / steps
    lower = np.floor(scaled)
    frac = scaled - lower
    lower = np.where(frac > 1.0 - _SNAP_EPS, lower + 1.0, lower)
    frac = np.where((frac < _SNAP_EPS) | (frac > 1.0 - _SNAP_EPS), 0.0, frac)
    up = r2 < frac
    return (lower.astype(np.int64) + up) % levels


def discretize(x: float, levels: int, stream: RandomStream) -> float:
    """Stochastically round one angle onto the grid {2*pi*j/levels}.

    The bracketing pair is circular: the cell above the top grid value wraps
    to 0. Returns the selected grid value. Consumes exactly one uniform draw.
    """
    if levels < 1:
        raise ValueError(f"levels must be >= 1, got {levels}")
    pos = wrap_angles(np.array([float(x)]))
    r2 = np.array([stream.uniform()])
    idx = _stochastic_round(pos, np.array([levels], dtype=np.int64), r2)
    return float(idx[0] * (TWO_PI / levels))


def initialize_population(
    params: OptimizerParams, fitness_fn: FitnessFn, stream: RandomStream
) -> tuple[AntPopulation, PreyArchive]:
    """Draw a uniform grid-valued swarm, evaluate it, and seed the archive.

    Index draws are ant-major, dimension-minor. Positions start on the grid,
    so no rounding draws are consumed here.
    """
    n, d = params.population, params.dimension
    levels = np.asarray(params.levels, dtype=np.int64)
    indices = np.empty((n, d), dtype=np.int64)
    for i in range(n):
        for dim in range(d):
            indices[i, dim] = stream.integer(params.levels[dim])
    angles = indices * (TWO_PI / levels)
    fitness = [fitness_fn(tuple(row)) for row in indices.tolist()]
    archive = PreyArchive()
    archive.merge([tuple(row) for row in indices.tolist()], fitness, stamp=0)
    population = AntPopulation(angles=angles, indices=indices, fitness=fitness)
    return population, archive


def _pick_companions(i: int, n: int, stream: RandomStream) -> tuple[int, int]:
    """Two distinct companions for ant i, uniform over the other ants."""
    a = stream.integer(n - 1)
    if a >= i:
        a += 1
    b = stream.integer(n - 2)
    for excluded in sorted((i, a)):
        if b >= excluded:
            b += 1
    return a, b


def step(
    population: AntPopulation,
    archive: PreyArchive,
    t: int,
    params: OptimizerParams,
    fitness_fn: FitnessFn,
    stream: RandomStream,
) -> tuple[AntPopulation, PreyArchive]:
    """Advance the swarm one iteration and merge it into the archive."""
    n, d = params.population, params.dimension
    levels = np.asarray(params.levels, dtype=np.int64)
    steps_arr = TWO_PI / levels
    schedule = ScheduleState.for_iteration(t, params)

    active = archive.active(schedule.prey_target)
    prey_vectors = [np.asarray(e.assignment, dtype=np.float64) * steps_arr for e in active]

    recruited_count = recruitment_count(t, params, stream)
    recruited = np.zeros(n, dtype=bool)
    recruited[stream.distinct_indices(n, recruited_count)] = True

    raw = np.empty((n, d), dtype=np.float64)
    for i in range(n):
        if recruited[i]:
            moves = [following_move(population.angles[i], p, stream) for p in prey_vectors]
            raw[i] = attacking_move(moves)
        else:
            a, b = _pick_companions(i, n, stream)
            raw[i] = wander_move(population.angles[a], population.angles[b], stream)

    wrapped = wrap_angles(raw)
    r2 = stream.uniform(size=(n, d))
    indices = _stochastic_round(wrapped, levels, r2)
    angles = indices * steps_arr
    assignments = [tuple(row) for row in indices.tolist()]
    fitness = [fitness_fn(a) for a in assignments]
    archive.merge(assignments, fitness, stamp=t)
    return AntPopulation(angles=angles, indices=indices, fitness=fitness), archive


def optimize(
    fitness_fn: FitnessFn,
    params: OptimizerParams,
    seed: int,
    callback: Callable[[int, AntPopulation, PreyArchive], None] | None = None,
) -> OptimizationResult:
    """Run the full search and return the best assignment found.

    The returned history has ``max_iterations + 1`` entries of best archive
    fitness (entry 0 is the initial swarm's best) and is non-decreasing.
    `callback`, if given, is invoked after initialization and after every
    iteration with (iteration, population, archive).
    """
    stream = RandomStream(seed)
    population, archive = initialize_population(params, fitness_fn, stream)
    history = [archive.best.fitness]
    if callback is not None:
        callback(0, population, archive)
    for t in range(1, params.max_iterations + 1):
        population, archive = step(population, archive, t, params, fitness_fn, stream)
        history.append(archive.best.fitness)
        if callback is not None:
            callback(t, population, archive)
    best = archive.best
    return OptimizationResult(
        best_assignment=best.assignment,
        best_fitness=best.fitness,
        history=history,
        evaluations=params.population * (params.max_iterations + 1),
    )
