"""JSON documents for simulation outputs (files and service payloads)."""

from __future__ import annotations

import json

from .analytics import DensityGrid, SummaryMetrics, density_to_doc
from .engine import AgentRecord, SimulationConfig, SimulationResult
from .scene import Scene
from .scene_io import parse_scene, scene_to_doc


def canonical_json(doc) -> str:
    """Stable rendering: fixed key order (construction order), shortest
    round-trip numbers, two-space indent, trailing newline."""
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def result_to_doc(scene: Scene, config: SimulationConfig, result: SimulationResult) -> dict:
    return {
        "scene": scene_to_doc(scene),
        "config": config.to_doc(),
        "simulation_time_s": result.simulation_time_s,
        "steps_executed": result.steps_executed,
        "all_arrived": result.all_arrived,
        "agents": [
            {
                "id": a.id,
                "spawner_id": a.spawner_id,
                "goal_id": a.goal_id,
                "arrived": a.arrived,
                "spawn_step": a.spawn_step,
                "trajectory": [[x, y] for x, y in a.trajectory],
            }
            for a in result.agents
        ],
    }


def result_from_doc(doc: dict) -> tuple[Scene, SimulationConfig, SimulationResult]:
    scene = parse_scene(json.dumps(doc["scene"]))
    config = SimulationConfig.from_doc(doc["config"])
    agents = tuple(
        AgentRecord(
            id=int(a["id"]),
            spawner_id=a["spawner_id"],
            goal_id=a["goal_id"],
            arrived=bool(a["arrived"]),
            spawn_step=int(a["spawn_step"]),
            trajectory=tuple((float(x), float(y)) for x, y in a["trajectory"]),
        )
        for a in doc["agents"]
    )
    result = SimulationResult(
        world=scene.world,
        agents=agents,
        simulation_time_s=float(doc["simulation_time_s"]),
        steps_executed=int(doc["steps_executed"]),
        all_arrived=bool(doc["all_arrived"]),
    )
    return scene, config, result


def bundle_doc(
    scene: Scene,
    config: SimulationConfig,
    result: SimulationResult,
    density: DensityGrid,
    summary: SummaryMetrics,
) -> dict:
    """The full result bundle stored on a finished job and served to clients."""
    return {
        "result": result_to_doc(scene, config, result),
        "density": density_to_doc(density),
        "summary": summary.to_doc(),
    }
