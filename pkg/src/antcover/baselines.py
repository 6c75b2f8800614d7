"""Reference optimizers: random search, greedy assignment, exhaustive oracle.

These exist to validate and calibrate the swarm optimizer. Random search is
the evaluation-budget-matched comparator; greedy is the classic one-pass
heuristic; exhaustive enumeration is the ground-truth optimum for instances
small enough to enumerate.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .rng import RandomStream
from .sensing import CoverageTable

EXHAUSTIVE_LIMIT = 1_000_000


class SearchSpaceError(Exception):
    """Raised when the assignment space exceeds the exhaustive-search guard."""


@dataclass
class BaselineResult:
    assignment: tuple[int, ...]
    fitness: int
    evaluations_used: int


def random_search(
    table: CoverageTable, budget_evals: int, stream: RandomStream
) -> BaselineResult:
    """Best of `budget_evals` uniformly random assignments."""
    if budget_evals < 1:
        raise ValueError(f"budget must be >= 1, got {budget_evals}")
    levels = table.levels
    best_assignment: tuple[int, ...] | None = None
    best_fitness = -1
    for _ in range(budget_evals):
        assignment = tuple(stream.integer(p) for p in levels)
        fit = table.count_covered(assignment)
        if fit > best_fitness:
            best_fitness = fit
            best_assignment = assignment
    assert best_assignment is not None
    return BaselineResult(best_assignment, best_fitness, budget_evals)


def greedy_assign(table: CoverageTable) -> BaselineResult:
    """One pass over sensors in index order, each taking the direction that
    covers the most not-yet-covered targets (ties to the smaller index)."""
    covered = 0
    assignment: list[int] = []
    trials = 0
    for row in table.masks:
        best_j = 0
        best_gain = -1
        for j, mask in enumerate(row):
            trials += 1
            gain = (mask & ~covered).bit_count()
            if gain > best_gain:
                best_gain = gain
                best_j = j
        assignment.append(best_j)
        covered |= row[best_j]
    return BaselineResult(tuple(assignment), covered.bit_count(), trials)


def exhaustive_search(table: CoverageTable) -> BaselineResult:
    """The true optimum by full enumeration; ties go to the lexicographically
    smallest assignment. Refuses search spaces above EXHAUSTIVE_LIMIT."""
    levels = table.levels
    space = math.prod(levels)
    if space > EXHAUSTIVE_LIMIT:
        raise SearchSpaceError(
            f"assignment space {space} exceeds the exhaustive limit {EXHAUSTIVE_LIMIT}"
        )
    best_assignment: tuple[int, ...] | None = None
    best_fitness = -1
    count = 0
    for assignment in itertools.product(*(range(p) for p in levels)):
        count += 1
        fit = table.count_covered(assignment)
        if fit > best_fitness:
            best_fitness = fit
            best_assignment = assignment
    assert best_assignment is not None
    return BaselineResult(best_assignment, best_fitness, count)
