"""Result post-processing: density grid, trajectory CSV, summary metrics."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .engine import SimulationResult
from .geometry import Vec2

DEFAULT_DENSITY_CELL_SIZE = 0.5

# Color ramp endpoints: deep blue for empty cells, yellow for the busiest.
RAMP_LOW = (0, 0, 139)
RAMP_HIGH = (255, 255, 0)


@dataclass(frozen=True, slots=True)
class DensityGrid:
    origin: Vec2
    cell_size: float
    cols: int
    rows: int
    counts: np.ndarray  # int64, shape (rows, cols)

    def total(self) -> int:
        return int(self.counts.sum())


@dataclass(frozen=True, slots=True)
class SummaryMetrics:
    simulation_time_s: float
    agents_total: int
    agents_arrived: int
    distance_avg: float
    distance_max: float

    def to_doc(self) -> dict:
        return {
            "simulation_time_s": self.simulation_time_s,
            "agents_total": self.agents_total,
            "agents_arrived": self.agents_arrived,
            "distance_avg": self.distance_avg,
            "distance_max": self.distance_max,
        }


def _cell_index(coord: float, cell_size: float, count: int) -> int:
    # Boundary positions belong to the lower-index cell.
    idx = int(math.ceil(coord / cell_size)) - 1
    return min(max(idx, 0), count - 1)


def accumulate_density(result: SimulationResult, cell_size: float = DEFAULT_DENSITY_CELL_SIZE) -> DensityGrid:
    """Count every recorded agent position into its containing cell."""
    if not cell_size > 0:
        raise ValueError("cell_size must be positive")
    cols = int(math.ceil(result.world.width / cell_size - 1e-9))
    rows = int(math.ceil(result.world.height / cell_size - 1e-9))
    counts = np.zeros((rows, cols), dtype=np.int64)
    for agent in result.agents:
        for x, y in agent.trajectory:
            counts[_cell_index(y, cell_size, rows), _cell_index(x, cell_size, cols)] += 1
    counts.setflags(write=False)
    return DensityGrid(origin=Vec2(0.0, 0.0), cell_size=cell_size, cols=cols, rows=rows, counts=counts)


def colorize_density(grid: DensityGrid) -> np.ndarray:
    """Linear RGB ramp from deep blue (count 0) to yellow (grid maximum).

    Channels round half-up; an all-zero grid renders uniformly deep blue.
    Returns a (rows, cols, 3) uint8 raster aligned with the grid.
    """
    peak = int(grid.counts.max()) if grid.counts.size else 0
    t = grid.counts.astype(float) / peak if peak > 0 else np.zeros_like(grid.counts, dtype=float)
    raster = np.empty((grid.rows, grid.cols, 3), dtype=np.uint8)
    for ch in range(3):
        lo, hi = RAMP_LOW[ch], RAMP_HIGH[ch]
        raster[:, :, ch] = np.floor(lo + (hi - lo) * t + 0.5).astype(np.uint8)
    return raster


def export_trajectories(result: SimulationResult) -> str:
    """CSV with header agent_id,step,x,y; one row per recorded position,
    sorted by (agent_id, step), coordinates at 4 decimal places."""
    lines = ["agent_id,step,x,y"]
    for agent in sorted(result.agents, key=lambda a: a.id):
        for offset, (x, y) in enumerate(agent.trajectory):
            lines.append(f"{agent.id},{agent.spawn_step + offset},{x:.4f},{y:.4f}")
    return "\n".join(lines) + "\n"


def summarize(result: SimulationResult) -> SummaryMetrics:
    distances = []
    for agent in result.agents:
        if not agent.trajectory:
            continue
        total = 0.0
        for (x0, y0), (x1, y1) in zip(agent.trajectory, agent.trajectory[1:]):
            total += math.hypot(x1 - x0, y1 - y0)
        distances.append(total)
    return SummaryMetrics(
        simulation_time_s=result.simulation_time_s,
        agents_total=len(result.agents),
        agents_arrived=sum(1 for a in result.agents if a.arrived),
        distance_avg=sum(distances) / len(distances) if distances else 0.0,
        distance_max=max(distances) if distances else 0.0,
    )


def density_to_doc(grid: DensityGrid) -> dict:
    return {
        "cell_size": grid.cell_size,
        "cols": grid.cols,
        "rows": grid.rows,
        "counts": [[int(v) for v in row] for row in grid.counts],
    }


def density_from_doc(doc: dict) -> DensityGrid:
    counts = np.asarray(doc["counts"], dtype=np.int64).reshape(doc["rows"], doc["cols"])
    counts.setflags(write=False)
    return DensityGrid(
        origin=Vec2(0.0, 0.0),
        cell_size=float(doc["cell_size"]),
        cols=int(doc["cols"]),
        rows=int(doc["rows"]),
        counts=counts,
    )
