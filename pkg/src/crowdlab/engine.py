"""Marker-based crowd engine.

Walkable space is sampled once into markers; every step each non-arrived
agent exclusively captures the markers it is closest to (within its
perception radius) and moves by a convex combination of the captured
offsets, weighted toward its goal direction. Goal directions follow A*
waypoints. Everything is deterministic in (scene, config).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import Vec2, points_in_rect_mask
from .pathfind import (
    BlockedEndpointError,
    NoPathError,
    build_nav_grid,
    plan_path,
    simplify_path,
)
from .scene import DEFAULT_LIMITS, Scene, SceneLimits, ValidationReport, WorldExtents, validate_scene

# Independent substreams of the run seed, so each sampling stage is
# deterministic on its own.
_MARKER_STREAM = 0
_SPAWN_STREAM = 1

_SEED_MASK = (1 << 64) - 1


class InvalidSceneError(ValueError):
    """The scene failed validation; carries the full report."""

    def __init__(self, report: ValidationReport):
        messages = "; ".join(f"{i.object_id or 'scene'}: {i.message}" for i in report.errors())
        super().__init__(f"scene is not runnable: {messages}")
        self.report = report


class SpawnError(RuntimeError):
    pass


class UnreachableGoalError(RuntimeError):
    def __init__(self, spawner_id: str, detail: str):
        super().__init__(f"spawner {spawner_id!r}: goal unreachable ({detail})")
        self.spawner_id = spawner_id


@dataclass(frozen=True, slots=True)
class SimulationConfig:
    dt: float = 0.1
    max_speed: float = 1.3
    perception_radius: float = 1.0
    marker_density: float = 8.0
    arrival_radius: float = 0.5
    waypoint_radius: float = 0.8
    min_spawn_separation: float = 0.4
    max_steps: int = 5000
    seed: int = 0

    def __post_init__(self) -> None:
        for name in (
            "dt",
            "max_speed",
            "perception_radius",
            "marker_density",
            "arrival_radius",
            "waypoint_radius",
            "min_spawn_separation",
        ):
            if not getattr(self, name) > 0:
                raise ValueError(f"config field {name} must be positive")
        if self.max_steps < 1:
            raise ValueError("max_steps must be >= 1")

    def to_doc(self) -> dict:
        return {
            "dt": self.dt,
            "max_speed": self.max_speed,
            "perception_radius": self.perception_radius,
            "marker_density": self.marker_density,
            "arrival_radius": self.arrival_radius,
            "waypoint_radius": self.waypoint_radius,
            "min_spawn_separation": self.min_spawn_separation,
            "max_steps": self.max_steps,
            "seed": self.seed,
        }

    @classmethod
    def from_doc(cls, doc: dict) -> "SimulationConfig":
        known = cls().to_doc().keys()
        unknown = set(doc) - set(known)
        if unknown:
            raise ValueError(f"unknown config fields: {sorted(unknown)}")
        return cls(**doc)


def _stream_rng(seed: int, stream: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed & _SEED_MASK, stream])))


@dataclass(frozen=True, slots=True)
class MarkerField:
    positions: np.ndarray  # (n, 2) float64
    bucket_size: float
    buckets: dict[tuple[int, int], np.ndarray]

    def near(self, x: float, y: float, radius: float) -> np.ndarray:
        """Indices of all markers that could lie within ``radius`` of (x, y)."""
        reach = int(math.ceil(radius / self.bucket_size))
        bx = int(math.floor(x / self.bucket_size))
        by = int(math.floor(y / self.bucket_size))
        chunks = []
        for ix in range(bx - reach, bx + reach + 1):
            for iy in range(by - reach, by + reach + 1):
                found = self.buckets.get((ix, iy))
                if found is not None:
                    chunks.append(found)
        if not chunks:
            return np.empty(0, dtype=np.int64)
        return np.concatenate(chunks)


def scatter_markers(scene: Scene, config: SimulationConfig) -> MarkerField:
    """Jittered-grid sampling of walkable space.

    The world is split into roughly 1/sqrt(density)-sided cells (the nearest
    integer cell count per axis); each cell contributes one candidate at a
    seeded uniform offset, and candidates strictly inside an obstacle are
    discarded. Deterministic in (scene, seed).
    """
    world = scene.world
    side = 1.0 / math.sqrt(config.marker_density)
    nx = max(1, round(world.width / side))
    ny = max(1, round(world.height / side))
    sx = world.width / nx
    sy = world.height / ny

    rng = _stream_rng(config.seed, _MARKER_STREAM)
    jitter = rng.random((nx * ny, 2))
    ix = np.tile(np.arange(nx), ny)
    iy = np.repeat(np.arange(ny), nx)
    xs = (ix + jitter[:, 0]) * sx
    ys = (iy + jitter[:, 1]) * sy

    keep = np.ones(nx * ny, dtype=bool)
    for ob in scene.obstacles:
        keep &= ~points_in_rect_mask(
            xs, ys, ob.center.x, ob.center.y, ob.width, ob.height, ob.rotation, strict=True
        )
    positions = np.column_stack([xs[keep], ys[keep]])
    return build_marker_field(positions, config.perception_radius)


def build_marker_field(positions: np.ndarray, bucket_size: float) -> MarkerField:
    positions = np.ascontiguousarray(positions, dtype=float).reshape(-1, 2)
    bx = np.floor(positions[:, 0] / bucket_size).astype(np.int64)
    by = np.floor(positions[:, 1] / bucket_size).astype(np.int64)
    buckets: dict[tuple[int, int], list[int]] = {}
    for i in range(len(positions)):
        buckets.setdefault((int(bx[i]), int(by[i])), []).append(i)
    frozen = {k: np.asarray(v, dtype=np.int64) for k, v in buckets.items()}
    positions.setflags(write=False)
    return MarkerField(positions=positions, bucket_size=bucket_size, buckets=frozen)


@dataclass(slots=True)
class AgentState:
    id: int
    spawner_id: str
    goal_id: str
    goal_center: np.ndarray
    position: np.ndarray
    waypoints: list[np.ndarray] = field(default_factory=list)
    waypoint_index: int = 0
    goal_direction: np.ndarray = field(default_factory=lambda: np.zeros(2))
    arrived: bool = False
    spawn_step: int = 0
    trajectory: list[tuple[float, float]] = field(default_factory=list)


def spawn_agents(scene: Scene, config: SimulationConfig) -> list[AgentState]:
    """Place agents uniformly at random inside their spawner rectangles.

    Candidates strictly inside obstacles are rejected; pairwise separation
    starts at min_spawn_separation and halves after every 1000 failed
    attempts. Ids are dense, assigned in spawner order then placement order.
    """
    rng = _stream_rng(config.seed, _SPAWN_STREAM)
    agents: list[AgentState] = []
    placed: list[np.ndarray] = []
    next_id = 0
    for sp in scene.spawners:
        goal = scene.goal_by_id(sp.goal_id) if sp.goal_id else None
        if goal is None:
            raise SpawnError(f"spawner {sp.id!r} has no goal set")
        origin = np.array([sp.origin.x, sp.origin.y])
        size = np.array([sp.width, sp.height])
        for _ in range(sp.agent_count):
            position = None
            separation = config.min_spawn_separation
            for _halving in range(64):
                batch = origin + rng.random((1000, 2)) * size
                ok = np.ones(len(batch), dtype=bool)
                for ob in scene.obstacles:
                    ok &= ~points_in_rect_mask(
                        batch[:, 0], batch[:, 1],
                        ob.center.x, ob.center.y, ob.width, ob.height, ob.rotation,
                        strict=True,
                    )
                if placed and ok.any():
                    others = np.stack(placed)
                    d2 = ((batch[:, None, :] - others[None, :, :]) ** 2).sum(axis=2)
                    ok &= (d2 >= separation * separation).all(axis=1)
                hits = np.flatnonzero(ok)
                if len(hits):
                    position = batch[hits[0]].copy()
                    break
                separation /= 2.0
            if position is None:
                raise SpawnError(
                    f"spawner {sp.id!r}: no valid spawn position found (area covered by obstacles?)"
                )
            placed.append(position)
            agents.append(
                AgentState(
                    id=next_id,
                    spawner_id=sp.id,
                    goal_id=goal.id,
                    goal_center=np.array([goal.center.x, goal.center.y]),
                    position=position,
                )
            )
            next_id += 1
    return agents


def assign_markers(agents: list[AgentState], field_: MarkerField, radius: float) -> list[np.ndarray]:
    """Partition markers among non-arrived agents.

    Each marker within ``radius`` of at least one claimant goes to the
    closest one; distance ties within 1e-9 go to the lower agent id. Returns
    per-input-agent arrays of captured marker indices (sorted); arrived
    agents always receive an empty array.
    """
    result: list[np.ndarray] = [np.empty(0, dtype=np.int64) for _ in agents]
    active = sorted((i for i, a in enumerate(agents) if not a.arrived), key=lambda i: agents[i].id)
    if not active or len(field_.positions) == 0:
        return result

    chunks = [field_.near(agents[i].position[0], agents[i].position[1], radius) for i in active]
    candidates = np.unique(np.concatenate(chunks)) if chunks else np.empty(0, dtype=np.int64)
    if len(candidates) == 0:
        return result

    marker_pos = field_.positions[candidates]
    agent_pos = np.stack([agents[i].position for i in active])
    diff = marker_pos[:, None, :] - agent_pos[None, :, :]
    dists = np.sqrt((diff ** 2).sum(axis=2))
    dmin = dists.min(axis=1)
    within = dmin <= radius
    winners = (dists <= (dmin + 1e-9)[:, None]).argmax(axis=1)
    for k, agent_index in enumerate(active):
        result[agent_index] = candidates[within & (winners == k)]
    return result


@dataclass(frozen=True, slots=True)
class MotionTerms:
    offsets: np.ndarray  # (k, 2) marker - agent, degenerate offsets dropped
    weights: np.ndarray  # (k,) non-negative, sums to 1 when k > 0
    movement: np.ndarray  # (2,) = sum(w * v), inside the offsets' convex hull


_ZERO2 = np.zeros(2)


def _motion(position: np.ndarray, goal_dir: np.ndarray, captured: np.ndarray, step_cap: float) -> tuple[MotionTerms, np.ndarray]:
    if len(captured) == 0:
        return MotionTerms(np.empty((0, 2)), np.empty(0), _ZERO2.copy()), _ZERO2.copy()
    offsets = captured - position
    dist = np.sqrt((offsets ** 2).sum(axis=1))
    keep = dist >= 1e-9
    offsets = offsets[keep]
    dist = dist[keep]
    if len(offsets) == 0:
        return MotionTerms(np.empty((0, 2)), np.empty(0), _ZERO2.copy()), _ZERO2.copy()
    if goal_dir[0] == 0.0 and goal_dir[1] == 0.0:
        favor = 1.0 / (1.0 + dist)
    else:
        cos = (offsets @ goal_dir) / dist
        favor = (1.0 + cos) / (1.0 + dist)
    total = favor.sum()
    if total <= 0.0:
        # every captured marker sits exactly opposite the goal direction;
        # fall back to pure distance decay so weights stay defined
        favor = 1.0 / (1.0 + dist)
        total = favor.sum()
    weights = favor / total
    movement = (weights[:, None] * offsets).sum(axis=0)
    norm = math.sqrt(movement[0] ** 2 + movement[1] ** 2)
    if norm < 1e-12:
        delta = _ZERO2.copy()
    else:
        delta = movement * (min(norm, step_cap) / norm)
    return MotionTerms(offsets, weights, movement), delta


def compute_motion(agent: AgentState, captured, config: SimulationConfig) -> tuple[MotionTerms, np.ndarray]:
    """Motion of one agent from its captured markers.

    ``captured`` may be an (k, 2) array of marker positions or a sequence of
    Vec2. Returns the motion terms and the speed-capped displacement.
    """
    if isinstance(captured, np.ndarray):
        pts = captured.reshape(-1, 2).astype(float)
    else:
        pts = np.array([[p.x, p.y] for p in captured], dtype=float).reshape(-1, 2)
    return _motion(agent.position, agent.goal_direction, pts, config.max_speed * config.dt)


@dataclass(frozen=True, slots=True)
class StepTrace:
    """Per-step instrumentation snapshot (active agents only)."""

    step_index: int
    agent_ids: tuple[int, ...]
    positions: np.ndarray  # pre-step positions, (n, 2)
    captured: tuple[np.ndarray, ...]  # marker indices per agent
    terms: tuple[MotionTerms, ...]
    displacements: np.ndarray  # (n, 2)


def _update_goal_direction(agent: AgentState, waypoint_radius: float) -> None:
    x, y = agent.position[0], agent.position[1]
    last = len(agent.waypoints) - 1
    while agent.waypoint_index < last:
        wp = agent.waypoints[agent.waypoint_index]
        if math.hypot(wp[0] - x, wp[1] - y) <= waypoint_radius:
            agent.waypoint_index += 1
        else:
            break
    if last < 0 or agent.waypoint_index >= last:
        target = agent.goal_center
    else:
        target = agent.waypoints[agent.waypoint_index]
    dx, dy = target[0] - x, target[1] - y
    norm = math.hypot(dx, dy)
    if norm > 1e-12:
        agent.goal_direction = np.array([dx / norm, dy / norm])
    else:
        agent.goal_direction = np.zeros(2)


def step(
    agents: list[AgentState],
    field_: MarkerField,
    config: SimulationConfig,
    step_index: int,
    collect_trace: bool = False,
) -> StepTrace | None:
    """One synchronous engine step.

    Phases: waypoint-following goal directions, marker assignment, motion
    from the pre-step snapshot, displacement, recording, then arrival
    marking. Arrived agents take part in nothing.
    """
    active = [a for a in agents if not a.arrived]
    if not active:
        if collect_trace:
            return StepTrace(step_index, (), np.empty((0, 2)), (), (), np.empty((0, 2)))
        return None

    for agent in active:
        _update_goal_direction(agent, config.waypoint_radius)

    captured = assign_markers(active, field_, config.perception_radius)

    step_cap = config.max_speed * config.dt
    pre_positions = np.stack([a.position for a in active]) if collect_trace else None
    terms_list = []
    deltas = []
    for agent, marker_idx in zip(active, captured):
        terms, delta = _motion(agent.position, agent.goal_direction, field_.positions[marker_idx], step_cap)
        terms_list.append(terms)
        deltas.append(delta)

    for agent, delta in zip(active, deltas):
        if delta[0] != 0.0 or delta[1] != 0.0:
            agent.position = agent.position + delta
        agent.trajectory.append((float(agent.position[0]), float(agent.position[1])))

    for agent in active:
        dx = agent.position[0] - agent.goal_center[0]
        dy = agent.position[1] - agent.goal_center[1]
        if math.hypot(dx, dy) <= config.arrival_radius:
            agent.arrived = True

    if collect_trace:
        return StepTrace(
            step_index=step_index,
            agent_ids=tuple(a.id for a in active),
            positions=pre_positions,
            captured=tuple(captured),
            terms=tuple(terms_list),
            displacements=np.stack(deltas) if deltas else np.empty((0, 2)),
        )
    return None


@dataclass(frozen=True, slots=True)
class AgentRecord:
    id: int
    spawner_id: str
    goal_id: str
    arrived: bool
    spawn_step: int
    trajectory: tuple[tuple[float, float], ...]


@dataclass(frozen=True, slots=True)
class SimulationResult:
    world: WorldExtents
    agents: tuple[AgentRecord, ...]
    simulation_time_s: float
    steps_executed: int
    all_arrived: bool


def run_simulation(
    scene: Scene,
    config: SimulationConfig = SimulationConfig(),
    limits: SceneLimits = DEFAULT_LIMITS,
    observer=None,
) -> SimulationResult:
    """Validate, plan, scatter, spawn, then iterate steps until every agent
    arrives or max_steps is hit.

    ``observer`` (if given) receives a :class:`StepTrace` after every step.
    Raises :class:`InvalidSceneError` when validation fails and
    :class:`UnreachableGoalError` when any agent has no route to its goal.
    """
    report = validate_scene(scene, limits)
    if not report.ok:
        raise InvalidSceneError(report)

    grid = build_nav_grid(scene)
    field_ = scatter_markers(scene, config)
    agents = spawn_agents(scene, config)

    for agent in agents:
        goal = scene.goal_by_id(agent.goal_id)
        try:
            path = plan_path(grid, Vec2(float(agent.position[0]), float(agent.position[1])), goal.center)
            path = simplify_path(grid, path)
        except (NoPathError, BlockedEndpointError) as exc:
            raise UnreachableGoalError(agent.spawner_id, str(exc)) from exc
        agent.waypoints = [np.array([w.x, w.y]) for w in path.waypoints]

    steps_executed = 0
    for step_index in range(config.max_steps):
        if all(a.arrived for a in agents):
            break
        trace = step(agents, field_, config, step_index, collect_trace=observer is not None)
        if observer is not None:
            observer(trace)
        steps_executed = step_index + 1

    all_arrived = all(a.arrived for a in agents)
    return SimulationResult(
        world=scene.world,
        agents=tuple(
            AgentRecord(
                id=a.id,
                spawner_id=a.spawner_id,
                goal_id=a.goal_id,
                arrived=a.arrived,
                spawn_step=a.spawn_step,
                trajectory=tuple(a.trajectory),
            )
            for a in agents
        ),
        simulation_time_s=steps_executed * config.dt,
        steps_executed=steps_executed,
        all_arrived=all_arrived,
    )
