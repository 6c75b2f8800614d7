"""Target coverage optimization for directional sensor networks.

The package solves the maximum target coverage problem: pick one sensing
direction per sensor so that as many targets as possible fall inside at
least one sensor's sector. The main solver is a discrete army ant search
optimizer; random search, greedy assignment, and exhaustive enumeration are
included as baselines, together with a seeded benchmark harness and CLI.
"""

from .army_ant import (
    AntPopulation,
    ArchiveEntry,
    OptimizationResult,
    OptimizerParams,
    PreyArchive,
    discretize,
    optimize,
    prey_count,
    recruitment_count,
    recruitment_mean,
    step,
)
from .baselines import (
    BaselineResult,
    SearchSpaceError,
    exhaustive_search,
    greedy_assign,
    random_search,
)
from .bench import (
    ALGORITHMS,
    RunRecord,
    Scenario,
    SummaryRow,
    generate_instance,
    initial_coverage,
    load_scenario,
    read_instance,
    run_experiment,
    run_single,
    write_instance,
)
from .rng import RandomStream, derive_seed
from .sensing import (
    Assignment,
    CoverageTable,
    Instance,
    Point,
    Sensor,
    build_coverage_table,
    covers,
)

__version__ = "0.1.0"

__all__ = [
    "ALGORITHMS",
    "AntPopulation",
    "ArchiveEntry",
    "Assignment",
    "BaselineResult",
    "CoverageTable",
    "Instance",
    "OptimizationResult",
    "OptimizerParams",
    "Point",
    "PreyArchive",
    "RandomStream",
    "RunRecord",
    "Scenario",
    "SearchSpaceError",
    "Sensor",
    "SummaryRow",
    "build_coverage_table",
    "covers",
    "derive_seed",
    "discretize",
    "exhaustive_search",
    "generate_instance",
    "greedy_assign",
    "initial_coverage",
    "load_scenario",
    "optimize",
    "prey_count",
    "random_search",
    "read_instance",
    "recruitment_count",
    "recruitment_mean",
    "run_experiment",
    "run_single",
    "step",
    "write_instance",
]
