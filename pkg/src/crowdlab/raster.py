"""Binary PPM (P6) rasters for the density image and the trajectory plot.

Rasters are rendered on demand from raw result data; images put world-y up
(row 0 is the top of the world).
"""

from __future__ import annotations

import math

import numpy as np

from .analytics import DensityGrid, colorize_density
from .engine import SimulationResult
from .geometry import points_in_rect_mask
from .scene import Scene

PLOT_PIXELS_PER_METER = 20

BACKGROUND = (255, 255, 255)
OBSTACLE_GRAY = (128, 128, 128)
GOAL_BLUE = (30, 60, 200)
TRAJECTORY_RED = (200, 30, 30)


def ppm_bytes(rgb: np.ndarray) -> bytes:
    if rgb.ndim != 3 or rgb.shape[2] != 3 or rgb.dtype != np.uint8:
        raise ValueError("expected a (rows, cols, 3) uint8 raster")
    rows, cols = rgb.shape[:2]
    return f"P6\n{cols} {rows}\n255\n".encode("ascii") + rgb.tobytes()


def render_density_image(grid: DensityGrid) -> np.ndarray:
    # Grid row 0 sits at world y=0; flip so the image reads y-up.
    return colorize_density(grid)[::-1, :, :].copy()


def _draw_line(raster: np.ndarray, r0: int, c0: int, r1: int, c1: int, color: tuple[int, int, int]) -> None:
    """1-px Bresenham polyline segment, clipped to the raster."""
    rows, cols = raster.shape[:2]
    dr = abs(r1 - r0)
    dc = abs(c1 - c0)
    sr = 1 if r0 < r1 else -1
    sc = 1 if c0 < c1 else -1
    err = dc - dr
    r, c = r0, c0
    while True:
        if 0 <= r < rows and 0 <= c < cols:
            raster[r, c] = color
        if r == r1 and c == c1:
            break
        e2 = 2 * err
        if e2 > -dr:
            err -= dr
            c += sc
        if e2 < dc:
            err += dc
            r += sr
    return


def render_trajectory_plot(
    scene: Scene,
    result: SimulationResult,
    pixels_per_meter: int = PLOT_PIXELS_PER_METER,
) -> np.ndarray:
    """White canvas with gray obstacles, goal discs, and per-agent polylines."""
    world = result.world
    cols = max(1, int(math.ceil(world.width * pixels_per_meter)))
    rows = max(1, int(math.ceil(world.height * pixels_per_meter)))
    raster = np.full((rows, cols, 3), 255, dtype=np.uint8)

    # Pixel centers in world coordinates (row 0 = top of the world).
    px = (np.arange(cols) + 0.5) / pixels_per_meter
    py = world.height - (np.arange(rows) + 0.5) / pixels_per_meter
    gx, gy = np.meshgrid(px, py)

    for ob in scene.obstacles:
        mask = points_in_rect_mask(gx, gy, ob.center.x, ob.center.y, ob.width, ob.height, ob.rotation)
        raster[mask] = OBSTACLE_GRAY

    for goal in scene.goals:
        mask = (gx - goal.center.x) ** 2 + (gy - goal.center.y) ** 2 <= goal.radius ** 2
        raster[mask] = GOAL_BLUE

    def to_pixel(x: float, y: float) -> tuple[int, int]:
        c = min(max(int(x * pixels_per_meter), 0), cols - 1)
        r = min(max(int((world.height - y) * pixels_per_meter), 0), rows - 1)
        return r, c

    for agent in result.agents:
        pts = [to_pixel(x, y) for x, y in agent.trajectory]
        for (r0, c0), (r1, c1) in zip(pts, pts[1:]):
            _draw_line(raster, r0, c0, r1, c1, TRAJECTORY_RED)
        if len(pts) == 1:
            raster[pts[0][0], pts[0][1]] = TRAJECTORY_RED
    return raster
