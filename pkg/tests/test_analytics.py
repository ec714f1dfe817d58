import math

import numpy as np
import pytest

from conftest import corridor_run_scene, goal, obstacle, spawner
from crowdlab.analytics import (
    DensityGrid,
    accumulate_density,
    colorize_density,
    density_from_doc,
    density_to_doc,
    export_trajectories,
    summarize,
)
from crowdlab.engine import AgentRecord, SimulationConfig, SimulationResult, run_simulation
from crowdlab.geometry import Vec2
from crowdlab.raster import ppm_bytes, render_density_image, render_trajectory_plot
from crowdlab.scene import Scene, WorldExtents


def synthetic_result(trajectories, world=WorldExtents(30.0, 30.0), time_s=0.0, steps=None, arrived=None):
    if steps is None:
        steps = max((len(t) for t in trajectories), default=0)
    agents = tuple(
        AgentRecord(
            id=i,
            spawner_id="s",
            goal_id="g",
            arrived=True if arrived is None else arrived[i],
            spawn_step=0,
            trajectory=tuple(t),
        )
        for i, t in enumerate(trajectories)
    )
    return SimulationResult(
        world=world,
        agents=agents,
        simulation_time_s=time_s,
        steps_executed=steps,
        all_arrived=all(a.arrived for a in agents),
    )


# -- density -------------------------------------------------------------------

def test_empty_result_is_all_zero():
    grid = accumulate_density(synthetic_result([]))
    assert (grid.cols, grid.rows) == (60, 60)
    assert grid.total() == 0
    assert not grid.counts.any()


def test_stationary_agent_fills_one_cell():
    grid = accumulate_density(synthetic_result([[(10.2, 20.3)] * 50]))
    assert grid.total() == 50
    assert grid.counts.max() == 50
    assert grid.counts[int(20.3 // 0.5), int(10.2 // 0.5)] == 50


def test_density_conservation_on_real_run():
    result = run_simulation(corridor_run_scene(), SimulationConfig(seed=42))
    grid = accumulate_density(result)
    recorded = sum(len(a.trajectory) for a in result.agents)
    assert grid.total() == recorded


def test_boundary_positions_belong_to_lower_cell():
    grid = accumulate_density(synthetic_result([[(0.5, 0.5)]]), cell_size=0.5)
    assert grid.counts[0, 0] == 1
    grid = accumulate_density(synthetic_result([[(1.0, 1.0)]]), cell_size=0.5)
    assert grid.counts[1, 1] == 1
    # world origin clamps into the first cell
    grid = accumulate_density(synthetic_result([[(0.0, 0.0)]]), cell_size=0.5)
    assert grid.counts[0, 0] == 1


def test_density_doc_round_trip():
    grid = accumulate_density(synthetic_result([[(1.0, 2.0), (3.0, 4.0)]]))
    doc = density_to_doc(grid)
    assert set(doc) == {"cell_size", "cols", "rows", "counts"}
    back = density_from_doc(doc)
    assert np.array_equal(back.counts, grid.counts)
    assert back.cell_size == grid.cell_size


# -- colorize -------------------------------------------------------------------

def grid_of(counts) -> DensityGrid:
    arr = np.asarray(counts, dtype=np.int64)
    return DensityGrid(origin=Vec2(0, 0), cell_size=0.5, cols=arr.shape[1], rows=arr.shape[0], counts=arr)


def test_colorize_endpoints():
    raster = colorize_density(grid_of([[0, 10], [5, 10]]))
    assert raster[0, 0].tolist() == [0, 0, 139]
    assert raster[0, 1].tolist() == [255, 255, 0]


def test_colorize_midpoint_rounds_half_up():
    raster = colorize_density(grid_of([[0, 5, 10]]))
    assert raster[0, 1].tolist() == [128, 128, 70]


def test_all_zero_grid_is_uniform_deep_blue():
    raster = colorize_density(grid_of([[0, 0], [0, 0]]))
    assert (raster == np.array([0, 0, 139], dtype=np.uint8)).all()


def test_colorize_monotone_along_the_ramp():
    counts = [[i for i in range(0, 101, 10)]]
    raster = colorize_density(grid_of(counts))
    row = raster[0]
    for a, b in zip(row, row[1:]):
        assert b[0] >= a[0] and b[1] >= a[1] and b[2] <= a[2]


# -- trajectory CSV ----------------------------------------------------------------

def test_empty_export_is_header_only():
    assert export_trajectories(synthetic_result([])) == "agent_id,step,x,y\n"


def test_rows_sorted_and_formatted():
    result = synthetic_result([
        [(1.23456, 2.0), (1.3, 2.1), (1.4, 2.2)],
        [(5.0, 6.0)],
    ])
    text = export_trajectories(result)
    lines = text.strip().split("\n")
    assert lines[0] == "agent_id,step,x,y"
    assert lines[1] == "0,0,1.2346,2.0000"
    assert lines[2] == "0,1,1.3000,2.1000"
    assert lines[4] == "1,0,5.0000,6.0000"
    assert len(lines) == 1 + 4


def test_row_count_equals_recorded_positions():
    result = run_simulation(corridor_run_scene(), SimulationConfig(seed=42))
    text = export_trajectories(result)
    rows = text.strip().split("\n")[1:]
    assert len(rows) == sum(len(a.trajectory) for a in result.agents)


# -- summary -------------------------------------------------------------------------

def test_empty_summary_is_all_zero():
    metrics = summarize(synthetic_result([], time_s=0.0))
    assert metrics.agents_total == 0
    assert metrics.agents_arrived == 0
    assert metrics.distance_avg == 0.0
    assert metrics.distance_max == 0.0


def test_constant_speed_distance_arithmetic():
    # 100 moves of 0.13 m need 101 recorded points; oracle: 100 * 0.13 = 13.0
    points = [(i * 0.13, 0.0) for i in range(101)]
    metrics = summarize(synthetic_result([points], time_s=10.0, steps=101))
    assert metrics.distance_avg == pytest.approx(13.0, abs=1e-6)
    assert metrics.distance_max == pytest.approx(13.0, abs=1e-6)
    assert metrics.simulation_time_s == 10.0


def test_avg_and_max_over_agents():
    a = [(0.0, 0.0), (10.0, 0.0)]
    b = [(0.0, 0.0), (0.0, 20.0)]
    metrics = summarize(synthetic_result([a, b]))
    assert metrics.distance_avg == pytest.approx(15.0)
    assert metrics.distance_max == pytest.approx(20.0)
    assert metrics.agents_total == 2


def test_agents_arrived_counts_flags():
    metrics = summarize(synthetic_result([[(0, 0)], [(1, 1)]], arrived=[True, False]))
    assert metrics.agents_total == 2
    assert metrics.agents_arrived == 1


# -- rasters ----------------------------------------------------------------------------

def test_ppm_layout():
    raster = np.zeros((2, 3, 3), dtype=np.uint8)
    raster[0, 0] = (1, 2, 3)
    data = ppm_bytes(raster)
    assert data.startswith(b"P6\n3 2\n255\n")
    assert data[len(b"P6\n3 2\n255\n"):][:3] == bytes([1, 2, 3])


def test_density_image_is_flipped_vertically():
    grid = grid_of([[9, 0], [0, 0]])  # hot cell at world lower-left
    image = render_density_image(grid)
    assert image[1, 0].tolist() == [255, 255, 0]  # bottom row of the image
    assert image[0, 0].tolist() == [0, 0, 139]


def test_trajectory_plot_draws_scene_and_lines():
    scene = Scene(
        goals=(goal("g1", 25.0, 15.0),),
        obstacles=(obstacle("o1", 15.0, 15.0, 4.0, 4.0),),
    )
    result = synthetic_result([[(2.0, 15.0), (8.0, 15.0)]])
    raster = render_trajectory_plot(scene, result, pixels_per_meter=10)
    assert raster.shape == (300, 300, 3)
    # obstacle center pixel is gray, goal center blue, path red, corner white
    assert raster[150, 150].tolist() == [128, 128, 128]
    assert raster[150, 250].tolist() == [30, 60, 200]
    assert raster[150, 50].tolist() == [200, 30, 30]
    assert raster[0, 0].tolist() == [255, 255, 255]
    assert ppm_bytes(raster) == ppm_bytes(render_trajectory_plot(scene, result, pixels_per_meter=10))
