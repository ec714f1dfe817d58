"""crowdlab: authoring and simulation platform for 2D marker-based crowds.

Scenes are built from agent spawn areas, goals, rectangular obstacles and
preset obstacle groups, saved as canonical JSON, and simulated by a
deterministic marker-based steering engine with grid A* route planning.
Results come back as per-agent trajectories, a density grid, and the
simulated time to completion.
"""

from .analytics import accumulate_density, colorize_density, export_trajectories, summarize
from .engine import SimulationConfig, SimulationResult, run_simulation
from .scene import Scene, SceneLimits, validate_scene
from .scene_io import parse_scene, serialize_scene

__version__ = "0.1.0"

__all__ = [
    "SimulationConfig",
    "SimulationResult",
    "Scene",
    "SceneLimits",
    "accumulate_density",
    "colorize_density",
    "export_trajectories",
    "parse_scene",
    "run_simulation",
    "serialize_scene",
    "summarize",
    "validate_scene",
]
