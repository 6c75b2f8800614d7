"""Static result figures, rendered to SVG next to the CSV outputs."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
from matplotlib.patches import Wedge

from .bench import RunRecord
from .sensing import Assignment, Instance, build_coverage_table


def convergence_figure(records: list[RunRecord]):
    """Best-coverage-so-far per iteration: one faint line per run plus the mean."""
    if not records:
        raise ValueError("cannot plot an empty record list")
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for record in records:
        ax.plot(range(len(record.history)), record.history, color="steelblue", alpha=0.3, lw=0.8)
    shortest = min(len(r.history) for r in records)
    mean = np.mean([r.history[:shortest] for r in records], axis=0)
    ax.plot(range(shortest), mean, color="crimson", lw=2.0, label=f"mean of {len(records)} runs")
    ax.set_xlabel("iteration")
    ax.set_ylabel("covered targets (NCT)")
    ax.legend(loc="lower right")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    return fig


def save_convergence_svg(records: list[RunRecord], path: str | Path) -> None:
    """Write the convergence figure as a self-contained SVG."""
    fig = convergence_figure(records)
    # Date metadata is dropped so identical runs yield comparable files.
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def deployment_figure(instance: Instance, assignment: Assignment):
    """Field map: sensor sectors for the given assignment, targets colored by coverage."""
    table = build_coverage_table(instance)
    covered_union = 0
    for row, j in zip(table.masks, assignment):
        covered_union |= row[j]
    fig, ax = plt.subplots(figsize=(6, 6 * instance.width / instance.length))
    for sensor, j in zip(instance.sensors, assignment):
        alpha_deg = np.degrees(sensor.direction_angle(j))
        half_deg = np.degrees(sensor.view_angle / 2.0)
        ax.add_patch(
            Wedge(
                (sensor.position.x, sensor.position.y),
                sensor.radius,
                alpha_deg - half_deg,
                alpha_deg + half_deg,
                facecolor="steelblue",
                alpha=0.15,
                edgecolor="steelblue",
                lw=0.5,
            )
        )
        ax.plot(sensor.position.x, sensor.position.y, "^", color="navy", ms=4)
    hit_x, hit_y, miss_x, miss_y = [], [], [], []
    for k, t in enumerate(instance.targets):
        if covered_union >> k & 1:
            hit_x.append(t.x)
            hit_y.append(t.y)
        else:
            miss_x.append(t.x)
            miss_y.append(t.y)
    ax.plot(hit_x, hit_y, ".", color="forestgreen", ms=3, label=f"covered ({len(hit_x)})")
    ax.plot(miss_x, miss_y, "x", color="firebrick", ms=3, label=f"uncovered ({len(miss_x)})")
    ax.set_xlim(0, instance.length)
    ax.set_ylim(0, instance.width)
    ax.set_aspect("equal")
    ax.set_xlabel("x (m)")
    ax.set_ylabel("y (m)")
    ax.legend(loc="upper right", fontsize=8)
    fig.tight_layout()
    return fig


def save_deployment_svg(instance: Instance, assignment: Assignment, path: str | Path) -> None:
    fig = deployment_figure(instance, assignment)
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
