"""Built-in obstacle arrangements placed as single locked units.

Each kind is a fixed table of (dx, dy, width, height, rotation) wall entries
relative to the instance anchor; the same tables are documented in
docs/presets.md and served to clients via the HTTP API.
"""

from __future__ import annotations

from .geometry import Vec2
from .scene import PRESET_KINDS, ObstacleRect, PresetInstance, WorldExtents


class PlacementError(ValueError):
    """Preset walls would extend outside the world extents."""


# (dx, dy, width, height, rotation_deg) per wall, relative to the anchor.
PRESET_GEOMETRY: dict[str, tuple[tuple[float, float, float, float, float], ...]] = {
    # Two parallel 12x2 walls enclosing a 4 m wide passage along x.
    "corridor": (
        (0.0, 3.0, 12.0, 2.0, 0.0),
        (0.0, -3.0, 12.0, 2.0, 0.0),
    ),
    # Two colinear 8x2 walls leaving a 1.5 m gap at the anchor.
    "bottleneck": (
        (-4.75, 0.0, 8.0, 2.0, 0.0),
        (4.75, 0.0, 8.0, 2.0, 0.0),
    ),
    # Four 3x3 pillars on the corners of a 10 m square.
    "four_pillars": (
        (-5.0, -5.0, 3.0, 3.0, 0.0),
        (-5.0, 5.0, 3.0, 3.0, 0.0),
        (5.0, -5.0, 3.0, 3.0, 0.0),
        (5.0, 5.0, 3.0, 3.0, 0.0),
    ),
    # A 4 m wide corridor along x with a 4 m wide branch descending at the anchor.
    "t_junction": (
        (0.0, 3.0, 16.0, 2.0, 0.0),
        (-5.0, -3.0, 6.0, 2.0, 0.0),
        (5.0, -3.0, 6.0, 2.0, 0.0),
        (-3.0, -6.5, 2.0, 5.0, 0.0),
        (3.0, -6.5, 2.0, 5.0, 0.0),
    ),
    # Four 6x6 corner blocks leaving two 4 m wide crossing corridors.
    "crossing": (
        (-5.0, -5.0, 6.0, 6.0, 0.0),
        (-5.0, 5.0, 6.0, 6.0, 0.0),
        (5.0, -5.0, 6.0, 6.0, 0.0),
        (5.0, 5.0, 6.0, 6.0, 0.0),
    ),
}

assert set(PRESET_GEOMETRY) == set(PRESET_KINDS)


def instantiate_preset(
    kind: str,
    anchor: Vec2,
    world: WorldExtents | None = None,
    preset_id: str | None = None,
) -> tuple[PresetInstance, list[ObstacleRect]]:
    """Build the locked obstacles of a preset kind translated to ``anchor``.

    When ``world`` is given, every wall footprint must lie inside it, else
    :class:`PlacementError` is raised. Obstacle ids are derived from
    ``preset_id`` (default: the kind name).
    """
    if kind not in PRESET_GEOMETRY:
        raise ValueError(f"unknown preset kind {kind!r}")
    pid = preset_id if preset_id is not None else f"preset_{kind}"

    obstacles = []
    for i, (dx, dy, w, h, rot) in enumerate(PRESET_GEOMETRY[kind]):
        ob = ObstacleRect(
            id=f"{pid}_w{i}",
            center=Vec2(anchor.x + dx, anchor.y + dy),
            width=w,
            height=h,
            rotation=rot,
            locked=True,
        )
        if world is not None:
            for cx, cy in ob.corners():
                if not (0.0 <= cx <= world.width and 0.0 <= cy <= world.height):
                    raise PlacementError(
                        f"preset {kind!r} at ({anchor.x}, {anchor.y}) extends outside the "
                        f"{world.width}x{world.height} world"
                    )
        obstacles.append(ob)

    instance = PresetInstance(
        id=pid, kind=kind, anchor=anchor, obstacle_ids=tuple(o.id for o in obstacles)
    )
    return instance, obstacles


def preset_catalog() -> dict:
    """Geometry tables in JSON form (served by GET /api/presets)."""
    return {
        "kinds": [
            {
                "kind": kind,
                "walls": [
                    {"dx": dx, "dy": dy, "width": w, "height": h, "rotation": rot}
                    for dx, dy, w, h, rot in walls
                ],
            }
            for kind, walls in ((k, PRESET_GEOMETRY[k]) for k in PRESET_KINDS)
        ]
    }
