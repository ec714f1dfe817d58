"""Canonical scene JSON: fixed key order, objects sorted by id, shortest
round-trip number formatting. ``parse_scene(serialize_scene(s)) == s`` for
every valid scene.
"""

from __future__ import annotations

import json
import warnings as _warnings

from .geometry import Vec2
from .scene import (
    SCENE_VERSION,
    Goal,
    ObstacleRect,
    PresetInstance,
    Scene,
    SpawnerArea,
    WorldExtents,
)


class SceneError(ValueError):
    """Base class for scene document failures."""


class ParseError(SceneError):
    pass


class VersionError(SceneError):
    pass


class DanglingReferenceError(SceneError):
    """A goal_id or preset obstacle id that names no existing object."""

    def __init__(self, ref_id: str, message: str | None = None):
        super().__init__(message or f"dangling reference {ref_id!r}")
        self.ref_id = ref_id


class SceneWarning(UserWarning):
    """Raised (as a warning) for ignored unknown fields in scene documents."""


# -- serialization ----------------------------------------------------------

def _vec_doc(v: Vec2) -> dict:
    return {"x": v.x, "y": v.y}


def scene_to_doc(scene: Scene) -> dict:
    """Scene as a JSON-ready dict in the canonical key order."""
    return {
        "version": scene.version,
        "world": {"width": scene.world.width, "height": scene.world.height},
        "spawners": [
            {
                "id": s.id,
                "origin": _vec_doc(s.origin),
                "width": s.width,
                "height": s.height,
                "agent_count": s.agent_count,
                "goal_id": s.goal_id,
            }
            for s in scene.spawners
        ],
        "goals": [
            {"id": g.id, "center": _vec_doc(g.center), "radius": g.radius}
            for g in scene.goals
        ],
        "obstacles": [
            {
                "id": o.id,
                "center": _vec_doc(o.center),
                "width": o.width,
                "height": o.height,
                "rotation": o.rotation,
                "locked": o.locked,
            }
            for o in scene.obstacles
        ],
        "presets": [
            {
                "id": p.id,
                "kind": p.kind,
                "anchor": _vec_doc(p.anchor),
                "obstacle_ids": list(p.obstacle_ids),
            }
            for p in scene.presets
        ],
    }


def serialize_scene(scene: Scene) -> str:
    # Scene collections are already sorted by id at construction.
    return json.dumps(scene_to_doc(scene), indent=2, allow_nan=False) + "\n"


# -- parsing ----------------------------------------------------------------

def _reject_constant(value: str):
    raise ParseError(f"non-finite number {value!r} not allowed")


def _expect_dict(value, path: str) -> dict:
    if not isinstance(value, dict):
        raise ParseError(f"{path}: expected an object")
    return value


def _expect_list(value, path: str) -> list:
    if not isinstance(value, list):
        raise ParseError(f"{path}: expected an array")
    return value


def _take_number(d: dict, key: str, path: str) -> float:
    if key not in d:
        raise ParseError(f"{path}: missing required field {key!r}")
    v = d[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ParseError(f"{path}.{key}: expected a number")
    return float(v)


def _take_int(d: dict, key: str, path: str) -> int:
    if key not in d:
        raise ParseError(f"{path}: missing required field {key!r}")
    v = d[key]
    if isinstance(v, bool) or not isinstance(v, int):
        raise ParseError(f"{path}.{key}: expected an integer")
    return v


def _take_str(d: dict, key: str, path: str) -> str:
    if key not in d:
        raise ParseError(f"{path}: missing required field {key!r}")
    v = d[key]
    if not isinstance(v, str):
        raise ParseError(f"{path}.{key}: expected a string")
    return v


def _warn_unknown(d: dict, known: tuple[str, ...], path: str) -> None:
    for key in d:
        if key not in known:
            _warnings.warn(f"{path}: ignoring unknown field {key!r}", SceneWarning, stacklevel=3)


def _parse_vec(d: dict, key: str, path: str) -> Vec2:
    if key not in d:
        raise ParseError(f"{path}: missing required field {key!r}")
    vd = _expect_dict(d[key], f"{path}.{key}")
    _warn_unknown(vd, ("x", "y"), f"{path}.{key}")
    try:
        return Vec2(_take_number(vd, "x", f"{path}.{key}"), _take_number(vd, "y", f"{path}.{key}"))
    except ValueError as exc:
        raise ParseError(f"{path}.{key}: {exc}") from exc


def parse_scene(text: str) -> Scene:
    """Parse a scene document and check structural integrity (ids, references).

    Unknown fields are ignored with a :class:`SceneWarning`. Raises
    :class:`ParseError` for malformed documents, :class:`VersionError` for an
    unsupported format version and :class:`DanglingReferenceError` when a
    goal_id or preset obstacle id names no object.
    """
    try:
        raw = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON: {exc}") from exc

    doc = _expect_dict(raw, "scene")
    _warn_unknown(doc, ("version", "world", "spawners", "goals", "obstacles", "presets"), "scene")

    version = _take_str(doc, "version", "scene")
    if version != SCENE_VERSION:
        raise VersionError(f"unsupported scene version {version!r} (expected {SCENE_VERSION!r})")

    wd = _expect_dict(doc.get("world"), "scene.world") if "world" in doc else None
    if wd is None:
        raise ParseError("scene: missing required field 'world'")
    _warn_unknown(wd, ("width", "height"), "scene.world")
    try:
        world = WorldExtents(_take_number(wd, "width", "scene.world"), _take_number(wd, "height", "scene.world"))
    except ValueError as exc:
        raise ParseError(f"scene.world: {exc}") from exc

    spawners = []
    for i, sd in enumerate(_expect_list(doc.get("spawners", []), "scene.spawners")):
        path = f"scene.spawners[{i}]"
        sd = _expect_dict(sd, path)
        _warn_unknown(sd, ("id", "origin", "width", "height", "agent_count", "goal_id"), path)
        goal_id = sd.get("goal_id")
        if goal_id is not None and not isinstance(goal_id, str):
            raise ParseError(f"{path}.goal_id: expected a string or null")
        try:
            spawners.append(
                SpawnerArea(
                    id=_take_str(sd, "id", path),
                    origin=_parse_vec(sd, "origin", path),
                    width=_take_number(sd, "width", path),
                    height=_take_number(sd, "height", path),
                    agent_count=_take_int(sd, "agent_count", path),
                    goal_id=goal_id,
                )
            )
        except ValueError as exc:
            raise ParseError(f"{path}: {exc}") from exc

    goals = []
    for i, gd in enumerate(_expect_list(doc.get("goals", []), "scene.goals")):
        path = f"scene.goals[{i}]"
        gd = _expect_dict(gd, path)
        _warn_unknown(gd, ("id", "center", "radius"), path)
        try:
            goals.append(
                Goal(
                    id=_take_str(gd, "id", path),
                    center=_parse_vec(gd, "center", path),
                    radius=_take_number(gd, "radius", path),
                )
            )
        except ValueError as exc:
            raise ParseError(f"{path}: {exc}") from exc

    obstacles = []
    for i, od in enumerate(_expect_list(doc.get("obstacles", []), "scene.obstacles")):
        path = f"scene.obstacles[{i}]"
        od = _expect_dict(od, path)
        _warn_unknown(od, ("id", "center", "width", "height", "rotation", "locked"), path)
        locked = od.get("locked", False)
        if not isinstance(locked, bool):
            raise ParseError(f"{path}.locked: expected a boolean")
        try:
            obstacles.append(
                ObstacleRect(
                    id=_take_str(od, "id", path),
                    center=_parse_vec(od, "center", path),
                    width=_take_number(od, "width", path),
                    height=_take_number(od, "height", path),
                    rotation=_take_number(od, "rotation", path) if "rotation" in od else 0.0,
                    locked=locked,
                )
            )
        except ValueError as exc:
            raise ParseError(f"{path}: {exc}") from exc

    presets = []
    for i, pd in enumerate(_expect_list(doc.get("presets", []), "scene.presets")):
        path = f"scene.presets[{i}]"
        pd = _expect_dict(pd, path)
        _warn_unknown(pd, ("id", "kind", "anchor", "obstacle_ids"), path)
        oids = _expect_list(pd.get("obstacle_ids", []), f"{path}.obstacle_ids")
        if not all(isinstance(o, str) for o in oids):
            raise ParseError(f"{path}.obstacle_ids: expected strings")
        try:
            presets.append(
                PresetInstance(
                    id=_take_str(pd, "id", path),
                    kind=_take_str(pd, "kind", path),
                    anchor=_parse_vec(pd, "anchor", path),
                    obstacle_ids=tuple(oids),
                )
            )
        except ValueError as exc:
            raise ParseError(f"{path}: {exc}") from exc

    try:
        scene = Scene(
            version=version,
            world=world,
            spawners=tuple(spawners),
            goals=tuple(goals),
            obstacles=tuple(obstacles),
            presets=tuple(presets),
        )
    except ValueError as exc:  # duplicate ids
        raise ParseError(str(exc)) from exc

    goal_ids = {g.id for g in scene.goals}
    for sp in scene.spawners:
        if sp.goal_id is not None and sp.goal_id not in goal_ids:
            raise DanglingReferenceError(sp.goal_id, f"spawner {sp.id!r} references missing goal {sp.goal_id!r}")
    obstacle_ids = {o.id for o in scene.obstacles}
    for pr in scene.presets:
        for oid in pr.obstacle_ids:
            if oid not in obstacle_ids:
                raise DanglingReferenceError(oid, f"preset {pr.id!r} references missing obstacle {oid!r}")

    return scene
