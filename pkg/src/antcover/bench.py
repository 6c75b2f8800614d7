"""Benchmark harness: scenarios, instance generation, multi-seed experiments.

A scenario describes a family of random deployments plus optimizer settings.
An experiment runs an algorithm over ``runs`` independent deployments (fresh
random scene per run by default), derives every per-run seed from one master
seed, and aggregates the final coverage counts. All outputs are pure
functions of (scenario file, master seed).

File formats
------------
* Scenario: JSON with keys ``field {length, width}``, ``targets``,
  ``sensors``, ``radius``, ``view_angle``, ``directions``, ``population``,
  ``iterations``, ``runs``, ``seed``.
* Instance: JSON with keys ``area {length, width}``,
  ``sensors [{x, y, r, theta, p}]``, ``targets [{x, y}]``; numbers are
  decimal text with up to 9 significant digits.
* Run CSV: columns ``run_id,seed,iteration,best_nct``.
* Summary CSV: columns ``scenario,algorithm,runs,mean,std,min,max``.
"""

from __future__ import annotations

import csv
import json
import math
import time
from dataclasses import dataclass, field
from pathlib import Path

from .army_ant import OptimizerParams, optimize
from .baselines import exhaustive_search, greedy_assign, random_search
from .rng import RandomStream, derive_seed
from .sensing import CoverageTable, Instance, Point, Sensor, build_coverage_table

ALGORITHMS = ("daaso", "random", "greedy", "exhaustive")


@dataclass(frozen=True)
class Scenario:
    """One experimental configuration: deployment family plus run settings."""

    length: float
    width: float
    targets: int
    sensors: int
    radius: float
    view_angle: float
    directions: int
    population: int
    iterations: int
    runs: int
    seed: int

    def __post_init__(self):
        numeric = {
            "length": self.length,
            "width": self.width,
            "targets": self.targets,
            "sensors": self.sensors,
            "radius": self.radius,
            "view_angle": self.view_angle,
            "directions": self.directions,
            "population": self.population,
            "iterations": self.iterations,
            "runs": self.runs,
        }
        for name, value in numeric.items():
            if value <= 0:
                raise ValueError(f"scenario field '{name}' must be positive, got {value}")

    def descriptor(self) -> str:
        """Compact label used in summary rows."""
        return (
            f"{self.length:g}x{self.width:g}_M{self.targets}_D{self.sensors}"
            f"_R{self.radius:g}_theta{self.view_angle:.4g}_p{self.directions}"
            f"_N{self.population}_T{self.iterations}"
        )


def load_scenario(path: str | Path) -> Scenario:
    """Read a scenario JSON file."""
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    try:
        return Scenario(
            length=float(raw["field"]["length"]),
            width=float(raw["field"]["width"]),
            targets=int(raw["targets"]),
            sensors=int(raw["sensors"]),
            radius=float(raw["radius"]),
            view_angle=float(raw["view_angle"]),
            directions=int(raw["directions"]),
            population=int(raw["population"]),
            iterations=int(raw["iterations"]),
            runs=int(raw["runs"]),
            seed=int(raw["seed"]),
        )
    except KeyError as exc:
        raise ValueError(f"scenario file {path} is missing key {exc}") from exc


def generate_instance(scenario: Scenario, stream: RandomStream) -> Instance:
    """Place sensors then targets uniformly at random in the field.

    Draw order is sensors first (x, y per sensor), then targets, so the
    instance is reproducible from the stream seed alone.
    """
    sensor_xy = stream.uniform(size=(scenario.sensors, 2))
    target_xy = stream.uniform(size=(scenario.targets, 2))
    sensors = tuple(
        Sensor(
            position=Point(x * scenario.length, y * scenario.width),
            radius=scenario.radius,
            view_angle=scenario.view_angle,
            directions=scenario.directions,
        )
        for x, y in sensor_xy
    )
    targets = tuple(Point(x * scenario.length, y * scenario.width) for x, y in target_xy)
    return Instance(scenario.length, scenario.width, sensors, targets)


def initial_coverage(
    instance: Instance, stream: RandomStream, table: CoverageTable | None = None
) -> tuple[tuple[int, ...], int]:
    """A uniformly random direction per sensor and its coverage count.

    This is the random-deployment starting point against which optimized
    coverage is compared.
    """
    assignment = tuple(stream.integer(s.directions) for s in instance.sensors)
    if table is None:
        table = build_coverage_table(instance)
    return assignment, table.count_covered(assignment)


# --- instance file format ---------------------------------------------------


def _dec9(value: float) -> float:
    """Round so the JSON decimal text has at most 9 significant digits."""
    return float(f"{value:.9g}")


def write_instance(instance: Instance, path: str | Path) -> None:
    doc = {
        "area": {"length": _dec9(instance.length), "width": _dec9(instance.width)},
        "sensors": [
            {
                "x": _dec9(s.position.x),
                "y": _dec9(s.position.y),
                "r": _dec9(s.radius),
                "theta": _dec9(s.view_angle),
                "p": s.directions,
            }
            for s in instance.sensors
        ],
        "targets": [{"x": _dec9(t.x), "y": _dec9(t.y)} for t in instance.targets],
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


def read_instance(path: str | Path) -> Instance:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    try:
        area = doc["area"]
        sensors = tuple(
            Sensor(
                position=Point(float(s["x"]), float(s["y"])),
                radius=float(s["r"]),
                view_angle=float(s["theta"]),
                directions=int(s["p"]),
            )
            for s in doc["sensors"]
        )
        targets = tuple(Point(float(t["x"]), float(t["y"])) for t in doc["targets"])
        return Instance(float(area["length"]), float(area["width"]), sensors, targets)
    except KeyError as exc:
        raise ValueError(f"instance file {path} is missing key {exc}") from exc


# --- run records and experiments --------------------------------------------


@dataclass
class RunRecord:
    """One optimization run: its seed, best-so-far trace, and timing."""

    run_id: int
    seed: int
    history: list[int]
    wall_time: float = field(default=0.0, compare=False)

    def __post_init__(self):
        if not self.history:
            raise ValueError("run history must be nonempty")
        if any(b < a for a, b in zip(self.history, self.history[1:])):
            raise ValueError("run history must be non-decreasing")

    @property
    def initial_nct(self) -> int:
        return self.history[0]

    @property
    def final_nct(self) -> int:
        return self.history[-1]


@dataclass
class SummaryRow:
    scenario: str
    algorithm: str
    runs: int
    mean: float
    std: float
    min: int
    max: int

    def __post_init__(self):
        if not self.min <= self.mean <= self.max:
            raise ValueError("summary violates min <= mean <= max")


def summarize(descriptor: str, algorithm: str, records: list[RunRecord]) -> SummaryRow:
    """Mean, sample std, min, max of final coverage over the runs."""
    finals = [r.final_nct for r in records]
    n = len(finals)
    mean = sum(finals) / n
    std = math.sqrt(sum((f - mean) ** 2 for f in finals) / (n - 1)) if n > 1 else 0.0
    return SummaryRow(descriptor, algorithm, n, mean, std, min(finals), max(finals))


def run_single(
    table: CoverageTable, algorithm: str, population: int, iterations: int, seed: int
) -> tuple[list[int], tuple[int, ...]]:
    """Run one algorithm on a prebuilt table; returns (history, best assignment).

    The random-search comparator is budget-matched to the swarm optimizer:
    population * (iterations + 1) evaluations, with the best-so-far recorded
    after every batch of `population` so its trace is directly comparable.
    """
    if algorithm == "daaso":
        params = OptimizerParams(
            population=population,
            levels=table.levels,
            max_iterations=iterations,
        )
        result = optimize(table.count_covered, params, seed)
        return list(result.history), result.best_assignment
    if algorithm == "random":
        stream = RandomStream(seed)
        history: list[int] = []
        best = -1
        best_assignment: tuple[int, ...] = ()
        for _ in range(iterations + 1):
            batch = random_search(table, population, stream)
            if batch.fitness > best:
                best = batch.fitness
                best_assignment = batch.assignment
            history.append(best)
        return history, best_assignment
    if algorithm == "greedy":
        result = greedy_assign(table)
        return [result.fitness], result.assignment
    if algorithm == "exhaustive":
        result = exhaustive_search(table)
        return [result.fitness], result.assignment
    raise ValueError(f"unknown algorithm {algorithm!r}; expected one of {ALGORITHMS}")


def run_experiment(
    scenario: Scenario, algorithm: str, fixed_instance: bool = False
) -> tuple[list[RunRecord], SummaryRow]:
    """Run `scenario.runs` independent runs and summarize the final coverage.

    Per-run seeds derive from the master seed: instance stream
    ``derive_seed(seed, r, 0)`` and algorithm stream ``derive_seed(seed, r, 1)``
    for run r (1-based). By default every run gets a fresh random deployment;
    with `fixed_instance` all runs share the deployment of
    ``derive_seed(seed, 0, 0)``.
    """
    if algorithm not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algorithm!r}; expected one of {ALGORITHMS}")
    shared_table: CoverageTable | None = None
    if fixed_instance:
        instance = generate_instance(scenario, RandomStream(derive_seed(scenario.seed, 0, 0)))
        shared_table = build_coverage_table(instance)
    records: list[RunRecord] = []
    for r in range(1, scenario.runs + 1):
        if shared_table is not None:
            table = shared_table
        else:
            instance = generate_instance(
                scenario, RandomStream(derive_seed(scenario.seed, r, 0))
            )
            table = build_coverage_table(instance)
        algo_seed = derive_seed(scenario.seed, r, 1)
        start = time.perf_counter()
        history, _ = run_single(
            table, algorithm, scenario.population, scenario.iterations, algo_seed
        )
        elapsed = time.perf_counter() - start
        records.append(RunRecord(run_id=r, seed=algo_seed, history=history, wall_time=elapsed))
    return records, summarize(scenario.descriptor(), algorithm, records)


# --- CSV formats -------------------------------------------------------------


def write_runs_csv(records: list[RunRecord], path: str | Path) -> None:
    """Convergence traces, one row per (run, iteration)."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["run_id", "seed", "iteration", "best_nct"])
        for record in records:
            for iteration, best in enumerate(record.history):
                writer.writerow([record.run_id, record.seed, iteration, best])


def read_runs_csv(path: str | Path) -> list[RunRecord]:
    """Rebuild run records from a convergence CSV (timing is not stored)."""
    histories: dict[int, tuple[int, list[int]]] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            run_id = int(row["run_id"])
            seed = int(row["seed"])
            histories.setdefault(run_id, (seed, []))[1].append(int(row["best_nct"]))
    return [
        RunRecord(run_id=run_id, seed=seed, history=history)
        for run_id, (seed, history) in sorted(histories.items())
    ]


def write_summary_csv(rows: list[SummaryRow], path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["scenario", "algorithm", "runs", "mean", "std", "min", "max"])
        for row in rows:
            writer.writerow(
                [
                    row.scenario,
                    row.algorithm,
                    row.runs,
                    f"{row.mean:.6g}",
                    f"{row.std:.6g}",
                    row.min,
                    row.max,
                ]
            )
