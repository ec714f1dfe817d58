"""Occupancy-grid route planning: 8-connected A* plus string-pulling.

The grid discretizes the world at ``cell_size``; a cell is blocked iff its
center lies within any obstacle inflated by the clearance margin. Paths are
sequences of cell centers; visibility checks use the exact supercover of a
segment (every cell whose closed square the closed segment touches),
computed in integer arithmetic so corner grazing is never misclassified.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

import numpy as np

from .geometry import Vec2, points_in_rect_mask
from .scene import Scene

DEFAULT_CELL_SIZE = 0.5
# Agent body radius 0.2 m plus 0.1 m margin.
DEFAULT_CLEARANCE = 0.3

SQRT2 = math.sqrt(2.0)

# Fixed neighbor order: (dr, dc) row-major around the cell.
_NEIGHBORS = ((-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1))


class BlockedEndpointError(ValueError):
    """Start or goal falls in a blocked cell (goal: beyond the 2-cell remap ring)."""


class NoPathError(ValueError):
    """Start and goal lie in disconnected regions of the grid."""


@dataclass(frozen=True, slots=True)
class NavGrid:
    origin: Vec2
    cell_size: float
    cols: int
    rows: int
    blocked: np.ndarray  # bool, shape (rows, cols)

    def cell_of(self, x: float, y: float) -> tuple[int, int]:
        c = min(max(int((x - self.origin.x) // self.cell_size), 0), self.cols - 1)
        r = min(max(int((y - self.origin.y) // self.cell_size), 0), self.rows - 1)
        return r, c

    def center(self, r: int, c: int) -> Vec2:
        return Vec2(
            self.origin.x + (c + 0.5) * self.cell_size,
            self.origin.y + (r + 0.5) * self.cell_size,
        )

    def index(self, r: int, c: int) -> int:
        return r * self.cols + c


@dataclass(frozen=True, slots=True)
class Path:
    waypoints: tuple[Vec2, ...]
    cost: float


def build_nav_grid(
    scene: Scene,
    cell_size: float = DEFAULT_CELL_SIZE,
    clearance: float = DEFAULT_CLEARANCE,
) -> NavGrid:
    if not cell_size > 0:
        raise ValueError("cell_size must be positive")
    cols = int(math.ceil(scene.world.width / cell_size - 1e-9))
    rows = int(math.ceil(scene.world.height / cell_size - 1e-9))
    xs = (np.arange(cols) + 0.5) * cell_size
    ys = (np.arange(rows) + 0.5) * cell_size
    gx, gy = np.meshgrid(xs, ys)
    blocked = np.zeros((rows, cols), dtype=bool)
    for ob in scene.obstacles:
        blocked |= points_in_rect_mask(
            gx, gy, ob.center.x, ob.center.y, ob.width, ob.height, ob.rotation, pad=clearance
        )
    blocked.setflags(write=False)
    return NavGrid(origin=Vec2(0.0, 0.0), cell_size=cell_size, cols=cols, rows=rows, blocked=blocked)


def supercover_cells(c0: int, r0: int, c1: int, r1: int) -> list[tuple[int, int]]:
    """All cells whose closed square touches the closed segment between the
    centers of cells (r0, c0) and (r1, c1).

    Works in doubled coordinates where centers are odd integers, so every
    boundary comparison is exact; a segment through a lattice corner reports
    all four incident cells.
    """
    if c0 == c1:
        return [(r, c0) for r in range(min(r0, r1), max(r0, r1) + 1)]
    if c0 > c1:
        c0, r0, c1, r1 = c1, r1, c0, r0
    x0, y0 = 2 * c0 + 1, 2 * r0 + 1
    x1, y1 = 2 * c1 + 1, 2 * r1 + 1
    dx = x1 - x0
    dy = y1 - y0
    den = 2 * dx
    cells: list[tuple[int, int]] = []
    for c in range(c0, c1 + 1):
        wx0 = max(x0, 2 * c)
        wx1 = min(x1, 2 * c + 2)
        na = y0 * dx + (wx0 - x0) * dy
        nb = y0 * dx + (wx1 - x0) * dy
        ylo = min(na, nb)
        yhi = max(na, nb)
        r_max = yhi // den
        r_min = -((-(ylo - den)) // den)
        for r in range(r_min, r_max + 1):
            cells.append((r, c))
    return cells


def segment_clear(grid: NavGrid, a: tuple[int, int], b: tuple[int, int]) -> bool:
    """True iff the supercover of the center-to-center segment avoids blocked cells."""
    for r, c in supercover_cells(a[1], a[0], b[1], b[0]):
        if grid.blocked[r, c]:
            return False
    return True


def _octile(r0: int, c0: int, r1: int, c1: int) -> float:
    dr = abs(r0 - r1)
    dc = abs(c0 - c1)
    lo = min(dr, dc)
    return float(max(dr, dc) - lo) + float(lo) * SQRT2


def _nearest_open_cell(grid: NavGrid, r: int, c: int, target: Vec2) -> tuple[int, int]:
    # Goal cells swallowed by clearance inflation remap to the nearest open
    # cell within a 2-cell ring; farther than that counts as blocked.
    best: tuple[float, int, int, int] | None = None
    for ring in (1, 2):
        for nr in range(r - ring, r + ring + 1):
            for nc in range(c - ring, c + ring + 1):
                if max(abs(nr - r), abs(nc - c)) != ring:
                    continue
                if not (0 <= nr < grid.rows and 0 <= nc < grid.cols):
                    continue
                if grid.blocked[nr, nc]:
                    continue
                center = grid.center(nr, nc)
                d = math.hypot(center.x - target.x, center.y - target.y)
                key = (d, grid.index(nr, nc), nr, nc)
                if best is None or key < best:
                    best = key
        if best is not None:
            return best[2], best[3]
    raise BlockedEndpointError(f"goal cell ({r}, {c}) is blocked and no open cell lies within 2 cells")


def plan_path(grid: NavGrid, start: Vec2, goal: Vec2) -> Path:
    """8-connected A* from start to goal, step costs 1 and sqrt(2) scaled by
    cell size, octile heuristic, no diagonal corner-cutting.

    The returned cost equals the true shortest grid cost; expansion ties
    break toward the lower cell index, so the waypoint list is deterministic.
    """
    sr, sc = grid.cell_of(start.x, start.y)
    gr, gc = grid.cell_of(goal.x, goal.y)
    if grid.blocked[sr, sc]:
        raise BlockedEndpointError(f"start cell ({sr}, {sc}) is blocked")
    if grid.blocked[gr, gc]:
        gr, gc = _nearest_open_cell(grid, gr, gc, goal)

    cols = grid.cols
    rows = grid.rows
    blocked = grid.blocked
    start_idx = sr * cols + sc
    goal_idx = gr * cols + gc

    # g is tracked as (straight, diagonal) step counts; the float value is
    # recomputed canonically from the counts so equal-cost paths compare equal.
    counts: dict[int, tuple[int, int]] = {start_idx: (0, 0)}
    best_g: dict[int, float] = {start_idx: 0.0}
    parent: dict[int, int] = {}
    done: set[int] = set()
    open_heap: list[tuple[float, int]] = [(_octile(sr, sc, gr, gc), start_idx)]

    while open_heap:
        _, idx = heapq.heappop(open_heap)
        if idx in done:
            continue
        done.add(idx)
        if idx == goal_idx:
            break
        r, c = divmod(idx, cols)
        ns, nd = counts[idx]
        for dr, dc in _NEIGHBORS:
            nr, nc = r + dr, c + dc
            if not (0 <= nr < rows and 0 <= nc < cols) or blocked[nr, nc]:
                continue
            diagonal = dr != 0 and dc != 0
            if diagonal and (blocked[r, nc] or blocked[nr, c]):
                continue
            cand = (ns, nd + 1) if diagonal else (ns + 1, nd)
            g = float(cand[0]) + float(cand[1]) * SQRT2
            nidx = nr * cols + nc
            if g < best_g.get(nidx, math.inf):
                best_g[nidx] = g
                counts[nidx] = cand
                parent[nidx] = idx
                heapq.heappush(open_heap, (g + _octile(nr, nc, gr, gc), nidx))
    else:
        raise NoPathError(f"no route from cell ({sr}, {sc}) to cell ({gr}, {gc})")

    chain = [goal_idx]
    while chain[-1] != start_idx:
        chain.append(parent[chain[-1]])
    chain.reverse()
    waypoints = tuple(grid.center(*divmod(i, cols)) for i in chain)
    ns, nd = counts[goal_idx]
    cost = (float(ns) + float(nd) * SQRT2) * grid.cell_size
    return Path(waypoints=waypoints, cost=cost)


def _polyline_length(points: tuple[Vec2, ...]) -> float:
    total = 0.0
    for a, b in zip(points, points[1:]):
        total += math.hypot(b.x - a.x, b.y - a.y)
    return total


def simplify_path(grid: NavGrid, path: Path) -> Path:
    """Greedy string pulling: from each kept waypoint jump to the farthest
    later waypoint whose connecting segment stays clear. Endpoints are
    preserved, cost never increases, and the operation is idempotent.
    """
    points = path.waypoints
    if len(points) <= 2:
        return Path(waypoints=points, cost=_polyline_length(points))
    cells = [grid.cell_of(p.x, p.y) for p in points]
    kept = [0]
    i = 0
    last = len(points) - 1
    while i < last:
        nxt = i + 1
        for j in range(last, i + 1, -1):
            if segment_clear(grid, cells[i], cells[j]):
                nxt = j
                break
        kept.append(nxt)
        i = nxt
    waypoints = tuple(points[k] for k in kept)
    return Path(waypoints=waypoints, cost=_polyline_length(waypoints))
