"""Shared scene builders and strategies."""

from __future__ import annotations

import sys
from pathlib import Path

from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from crowdlab.geometry import Vec2
from crowdlab.presets import instantiate_preset
from crowdlab.scene import (
    PRESET_KINDS,
    Goal,
    ObstacleRect,
    Scene,
    SpawnerArea,
    WorldExtents,
)


def spawner(sid: str, x: float, y: float, count: int = 10, goal_id: str | None = None) -> SpawnerArea:
    return SpawnerArea(id=sid, origin=Vec2(x, y), agent_count=count, goal_id=goal_id)


def goal(gid: str, x: float, y: float) -> Goal:
    return Goal(id=gid, center=Vec2(x, y))


def obstacle(oid: str, x: float, y: float, w: float, h: float, rotation: float = 0.0, locked: bool = False) -> ObstacleRect:
    return ObstacleRect(id=oid, center=Vec2(x, y), width=w, height=h, rotation=rotation, locked=locked)


def crossing_scene() -> Scene:
    """Two 10-agent streams whose straight routes intersect at the center."""
    return Scene(
        spawners=(
            spawner("sA", 1.0, 14.0, 10, "gA"),
            spawner("sB", 14.0, 1.0, 10, "gB"),
        ),
        goals=(goal("gA", 28.0, 15.0), goal("gB", 15.0, 28.0)),
    )


def corridor_run_scene() -> Scene:
    """One 10-agent spawner, goal 20 m away, empty world."""
    return Scene(
        spawners=(spawner("s1", 4.0, 14.0, 10, "g1"),),
        goals=(goal("g1", 25.0, 15.0),),
    )


def two_obstacle_scene() -> Scene:
    """Spawners left, goals right, two obstacles staggered in between."""
    return Scene(
        spawners=(
            spawner("s1", 2.0, 10.0, 10, "g1"),
            spawner("s2", 2.0, 18.0, 10, "g2"),
        ),
        goals=(goal("g1", 27.0, 12.0), goal("g2", 27.0, 19.0)),
        obstacles=(
            obstacle("o1", 12.0, 12.0, 4.0, 4.0),
            obstacle("o2", 18.0, 18.0, 4.0, 4.0, rotation=20.0),
        ),
    )


def bottleneck_stress_scene() -> Scene:
    """100 agents in two opposing waves squeezing through a 1.5 m gap; the
    congestion keeps the run busy for hundreds of steps."""
    instance, walls = instantiate_preset("bottleneck", Vec2(15.0, 15.0), preset_id="p1")
    spawners = []
    goals = []
    for i in range(5):
        spawners.append(spawner(f"sb{i}", 4.0 + 4.5 * i, 2.0, 10, f"gt{i}"))
        goals.append(goal(f"gt{i}", 24.0 - 4.5 * i, 28.0))
        spawners.append(spawner(f"st{i}", 4.0 + 4.5 * i, 26.0, 10, f"gb{i}"))
        goals.append(goal(f"gb{i}", 24.0 - 4.5 * i, 2.0))
    return Scene(
        spawners=tuple(spawners),
        goals=tuple(goals),
        obstacles=tuple(walls),
        presets=(instance,),
    )


def desk_scale_scene() -> Scene:
    """The authoring maximum: 100 agents in the default 30x30 world."""
    spawners = tuple(spawner(f"s{i}", 1.0 + 2.7 * i, 2.0, 10, f"g{i}") for i in range(10))
    goals = tuple(goal(f"g{i}", 28.0 - 2.7 * i, 27.0) for i in range(10))
    return Scene(spawners=spawners, goals=goals)


# -- hypothesis strategy for structurally valid scenes -----------------------

_coord = st.floats(min_value=0.5, max_value=29.5, allow_nan=False, allow_infinity=False)


@st.composite
def valid_scenes(draw) -> Scene:
    n_goals = draw(st.integers(0, 3))
    goals = tuple(
        Goal(id=f"g{i}", center=Vec2(draw(_coord), draw(_coord))) for i in range(n_goals)
    )
    goal_ids = [g.id for g in goals] + [None]

    n_spawners = draw(st.integers(0, 3))
    spawners = []
    for i in range(n_spawners):
        ox = draw(st.floats(min_value=0.0, max_value=28.0, allow_nan=False))
        oy = draw(st.floats(min_value=0.0, max_value=28.0, allow_nan=False))
        spawners.append(
            SpawnerArea(
                id=f"s{i}",
                origin=Vec2(ox, oy),
                agent_count=draw(st.integers(1, 10)),
                goal_id=draw(st.sampled_from(goal_ids)),
            )
        )

    n_obstacles = draw(st.integers(0, 4))
    obstacles = []
    for i in range(n_obstacles):
        obstacles.append(
            ObstacleRect(
                id=f"o{i}",
                center=Vec2(draw(st.floats(min_value=5.0, max_value=25.0, allow_nan=False)),
                            draw(st.floats(min_value=5.0, max_value=25.0, allow_nan=False))),
                width=draw(st.floats(min_value=2.0, max_value=8.0, allow_nan=False)),
                height=draw(st.floats(min_value=2.0, max_value=8.0, allow_nan=False)),
                rotation=draw(st.floats(min_value=0.0, max_value=359.9, allow_nan=False)),
                locked=draw(st.booleans()),
            )
        )

    presets = []
    if draw(st.booleans()):
        kind = draw(st.sampled_from(PRESET_KINDS))
        anchor = Vec2(draw(st.floats(min_value=10.0, max_value=20.0, allow_nan=False)),
                      draw(st.floats(min_value=10.0, max_value=20.0, allow_nan=False)))
        instance, walls = instantiate_preset(kind, anchor, preset_id="p0")
        presets.append(instance)
        obstacles.extend(walls)

    return Scene(
        world=WorldExtents(30.0, 30.0),
        spawners=tuple(spawners),
        goals=goals,
        obstacles=tuple(obstacles),
        presets=tuple(presets),
    )
