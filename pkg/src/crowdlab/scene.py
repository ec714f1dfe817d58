"""The authored world: spawn areas, goals, obstacles, presets, and validation.

All values are immutable after construction. Scene collections are kept
sorted by id so that structurally equal scenes compare (and serialize)
identically.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .geometry import Vec2, rect_corners

SCENE_VERSION = "1"

# Fixed authoring geometry: spawner areas are 2x2 m squares positioned by
# their lower-left corner; goals are 0.5 m circles and are not editable.
SPAWNER_SIDE = 2.0
GOAL_RADIUS = 0.5


@dataclass(frozen=True, slots=True)
class WorldExtents:
    width: float
    height: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "width", float(self.width))
        object.__setattr__(self, "height", float(self.height))
        if not (self.width > 0 and self.height > 0):
            raise ValueError(f"world extents must be positive, got {self.width}x{self.height}")

    def contains(self, p: Vec2) -> bool:
        return 0.0 <= p.x <= self.width and 0.0 <= p.y <= self.height


DEFAULT_WORLD = WorldExtents(30.0, 30.0)


@dataclass(frozen=True, slots=True)
class SceneLimits:
    """Authoring caps enforced by validation (not by construction)."""

    max_agents_per_spawner: int = 10
    max_agents_total: int = 100
    obstacle_min_side: float = 2.0
    obstacle_max_side: float = 20.0

    def __post_init__(self) -> None:
        if self.max_agents_per_spawner < 1 or self.max_agents_total < 1:
            raise ValueError("agent limits must be positive")
        if not (0 < self.obstacle_min_side <= self.obstacle_max_side):
            raise ValueError("obstacle size bounds must satisfy 0 < min <= max")


DEFAULT_LIMITS = SceneLimits()


@dataclass(frozen=True, slots=True)
class SpawnerArea:
    """A rectangular area that emits agents sharing one goal."""

    id: str
    origin: Vec2  # lower-left corner
    width: float = SPAWNER_SIDE
    height: float = SPAWNER_SIDE
    agent_count: int = 1
    goal_id: str | None = None

    def __post_init__(self) -> None:
        if not (self.width > 0 and self.height > 0):
            raise ValueError(f"spawner {self.id}: size must be positive")
        if not isinstance(self.agent_count, int) or self.agent_count < 1:
            raise ValueError(f"spawner {self.id}: agent_count must be a positive integer")


@dataclass(frozen=True, slots=True)
class Goal:
    id: str
    center: Vec2
    radius: float = GOAL_RADIUS

    def __post_init__(self) -> None:
        if not self.radius > 0:
            raise ValueError(f"goal {self.id}: radius must be positive")


@dataclass(frozen=True, slots=True)
class ObstacleRect:
    """A rectangle agents must avoid; ``locked`` ones belong to presets."""

    id: str
    center: Vec2
    width: float
    height: float
    rotation: float = 0.0  # degrees counterclockwise, normalized to [0, 360)
    locked: bool = False

    def __post_init__(self) -> None:
        if not (self.width > 0 and self.height > 0):
            raise ValueError(f"obstacle {self.id}: size must be positive")
        object.__setattr__(self, "rotation", float(self.rotation) % 360.0)

    def corners(self) -> list[tuple[float, float]]:
        return rect_corners(self.center.x, self.center.y, self.width, self.height, self.rotation)


PRESET_KINDS = ("corridor", "bottleneck", "four_pillars", "t_junction", "crossing")


@dataclass(frozen=True, slots=True)
class PresetInstance:
    id: str
    kind: str
    anchor: Vec2
    obstacle_ids: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.kind not in PRESET_KINDS:
            raise ValueError(f"preset {self.id}: unknown kind {self.kind!r}")
        object.__setattr__(self, "obstacle_ids", tuple(self.obstacle_ids))


def _check_unique(kind: str, items) -> None:
    seen: set[str] = set()
    for item in items:
        if item.id in seen:
            raise ValueError(f"duplicate {kind} id {item.id!r}")
        seen.add(item.id)


@dataclass(frozen=True, slots=True)
class Scene:
    version: str = SCENE_VERSION
    world: WorldExtents = DEFAULT_WORLD
    spawners: tuple[SpawnerArea, ...] = ()
    goals: tuple[Goal, ...] = ()
    obstacles: tuple[ObstacleRect, ...] = ()
    presets: tuple[PresetInstance, ...] = ()

    def __post_init__(self) -> None:
        for name in ("spawners", "goals", "obstacles", "presets"):
            items = tuple(sorted(getattr(self, name), key=lambda o: o.id))
            _check_unique(name[:-1], items)
            object.__setattr__(self, name, items)

    def total_agents(self) -> int:
        return sum(s.agent_count for s in self.spawners)

    def goal_by_id(self, goal_id: str) -> Goal | None:
        for g in self.goals:
            if g.id == goal_id:
                return g
        return None

    def obstacle_by_id(self, obstacle_id: str) -> ObstacleRect | None:
        for o in self.obstacles:
            if o.id == obstacle_id:
                return o
        return None


@dataclass(frozen=True, slots=True)
class Issue:
    severity: str  # "error" | "warning"
    object_id: str | None
    message: str


@dataclass(frozen=True, slots=True)
class ValidationReport:
    issues: tuple[Issue, ...] = ()
    ok: bool = field(init=False, default=True)

    def __post_init__(self) -> None:
        object.__setattr__(self, "issues", tuple(self.issues))
        object.__setattr__(self, "ok", not any(i.severity == "error" for i in self.issues))

    def errors(self) -> list[Issue]:
        return [i for i in self.issues if i.severity == "error"]

    def to_doc(self) -> dict:
        return {
            "ok": self.ok,
            "issues": [
                {"severity": i.severity, "object_id": i.object_id, "message": i.message}
                for i in self.issues
            ],
        }


def _rect_inside_world(obstacle: ObstacleRect, world: WorldExtents) -> bool:
    return all(
        0.0 <= x <= world.width and 0.0 <= y <= world.height
        for x, y in obstacle.corners()
    )


def validate_scene(scene: Scene, limits: SceneLimits = DEFAULT_LIMITS) -> ValidationReport:
    """Check every authoring constraint; violations become report entries.

    A scene is runnable iff the report is ok: limit bounds, containment,
    referential integrity, and the every-spawner-has-a-goal rule all hold.
    """
    issues: list[Issue] = []
    err = lambda oid, msg: issues.append(Issue("error", oid, msg))
    warn = lambda oid, msg: issues.append(Issue("warning", oid, msg))

    world = scene.world
    goal_ids = {g.id for g in scene.goals}
    obstacle_ids = {o.id for o in scene.obstacles}

    for sp in scene.spawners:
        if sp.agent_count > limits.max_agents_per_spawner:
            err(sp.id, f"agent_count {sp.agent_count} exceeds {limits.max_agents_per_spawner}")
        if not (
            0.0 <= sp.origin.x
            and 0.0 <= sp.origin.y
            and sp.origin.x + sp.width <= world.width
            and sp.origin.y + sp.height <= world.height
        ):
            err(sp.id, "spawner area extends outside world extents")
        if sp.goal_id is None:
            err(sp.id, "spawner has no goal")
        elif sp.goal_id not in goal_ids:
            err(sp.id, f"spawner references missing goal {sp.goal_id!r}")

    total = scene.total_agents()
    if total > limits.max_agents_total:
        err(None, f"total agents {total} exceed {limits.max_agents_total}")

    for g in scene.goals:
        if not world.contains(g.center):
            err(g.id, "goal center outside world extents")
        if g.radius != GOAL_RADIUS:
            warn(g.id, f"goal radius {g.radius} differs from the fixed default {GOAL_RADIUS}")

    for ob in scene.obstacles:
        if not ob.locked:
            small = min(ob.width, ob.height)
            large = max(ob.width, ob.height)
            if small < limits.obstacle_min_side:
                err(ob.id, f"side {small} below {limits.obstacle_min_side} m minimum")
            if large > limits.obstacle_max_side:
                err(ob.id, f"side {large} above {limits.obstacle_max_side} m maximum")
        if not _rect_inside_world(ob, world):
            err(ob.id, "obstacle footprint extends outside world extents")

    owned: set[str] = set()
    for pr in scene.presets:
        for oid in pr.obstacle_ids:
            if oid not in obstacle_ids:
                err(pr.id, f"preset references missing obstacle {oid!r}")
            else:
                ob = scene.obstacle_by_id(oid)
                if ob is not None and not ob.locked:
                    err(pr.id, f"preset obstacle {oid!r} is not locked")
            if oid in owned:
                err(pr.id, f"obstacle {oid!r} owned by more than one preset")
            owned.add(oid)

    return ValidationReport(tuple(issues))
