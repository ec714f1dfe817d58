"""Headless entry point: validate scenes, run simulations to files, render
rasters, and launch the HTTP service.

Exit codes: 0 ok, 2 invalid scene, 3 io/not-found, 4 simulation failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from pathlib import Path

from .analytics import accumulate_density, density_from_doc, export_trajectories, summarize
from .engine import (
    InvalidSceneError,
    SimulationConfig,
    SpawnError,
    UnreachableGoalError,
    run_simulation,
)
from .raster import ppm_bytes, render_density_image, render_trajectory_plot
from .results import canonical_json, result_from_doc, result_to_doc
from .scene import DEFAULT_LIMITS, SceneLimits, ValidationReport, validate_scene
from .scene_io import SceneError, SceneWarning, parse_scene

EXIT_OK = 0
EXIT_INVALID_SCENE = 2
EXIT_IO = 3
EXIT_SIMULATION = 4


def _fail(code: int, message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


def _read_text(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _print_report(report: ValidationReport) -> None:
    for issue in report.issues:
        where = issue.object_id or "scene"
        print(f"{issue.severity}: {where}: {issue.message}")
    print("ok" if report.ok else "invalid")


def _load_scene(path: str) -> tuple:
    """Returns (scene, parse_warnings) or raises."""
    text = _read_text(path)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", SceneWarning)
        scene = parse_scene(text)
    notes = [str(w.message) for w in caught if issubclass(w.category, SceneWarning)]
    return scene, notes


def cmd_validate(args) -> int:
    try:
        scene, notes = _load_scene(args.scene)
    except OSError as exc:
        return _fail(EXIT_IO, f"cannot read scene: {exc}")
    except SceneError as exc:
        return _fail(EXIT_INVALID_SCENE, f"invalid scene: {exc}")
    for note in notes:
        print(f"warning: {note}")
    report = validate_scene(scene, _limits_from(args))
    _print_report(report)
    return EXIT_OK if report.ok else EXIT_INVALID_SCENE


def cmd_run(args) -> int:
    try:
        scene, _ = _load_scene(args.scene)
    except OSError as exc:
        return _fail(EXIT_IO, f"cannot read scene: {exc}")
    except SceneError as exc:
        return _fail(EXIT_INVALID_SCENE, f"invalid scene: {exc}")

    overrides = {}
    if args.config:
        try:
            overrides = json.loads(_read_text(args.config))
        except OSError as exc:
            return _fail(EXIT_IO, f"cannot read config: {exc}")
        except json.JSONDecodeError as exc:
            return _fail(EXIT_IO, f"malformed config: {exc}")
    if args.seed is not None:
        overrides["seed"] = args.seed
    try:
        config = SimulationConfig.from_doc({**SimulationConfig().to_doc(), **overrides})
    except (TypeError, ValueError) as exc:
        return _fail(EXIT_IO, f"bad config: {exc}")

    try:
        result = run_simulation(scene, config, _limits_from(args))
    except InvalidSceneError as exc:
        _print_report(exc.report)
        return _fail(EXIT_INVALID_SCENE, "scene failed validation")
    except (UnreachableGoalError, SpawnError) as exc:
        return _fail(EXIT_SIMULATION, f"simulation failed: {exc}")

    density = accumulate_density(result)
    try:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "result.json").write_text(canonical_json(result_to_doc(scene, config, result)), encoding="utf-8")
        (out / "trajectories.csv").write_text(export_trajectories(result), encoding="utf-8")
        (out / "density.json").write_text(
            canonical_json(
                {
                    "cell_size": density.cell_size,
                    "cols": density.cols,
                    "rows": density.rows,
                    "counts": [[int(v) for v in row] for row in density.counts],
                }
            ),
            encoding="utf-8",
        )
    except OSError as exc:
        return _fail(EXIT_IO, f"cannot write outputs: {exc}")

    summary = summarize(result)
    print(f"simulation_time_s={summary.simulation_time_s}")
    print(f"steps_executed={result.steps_executed}")
    print(f"agents_arrived={summary.agents_arrived}/{summary.agents_total}")
    print(f"distance_avg={summary.distance_avg:.4f}")
    print(f"distance_max={summary.distance_max:.4f}")
    return EXIT_OK


def cmd_render(args) -> int:
    directory = Path(args.dir)
    try:
        result_doc = json.loads((directory / "result.json").read_text(encoding="utf-8"))
        density_doc = json.loads((directory / "density.json").read_text(encoding="utf-8"))
    except OSError as exc:
        return _fail(EXIT_IO, f"cannot read run outputs: {exc}")
    except json.JSONDecodeError as exc:
        return _fail(EXIT_IO, f"malformed run outputs: {exc}")
    try:
        scene, _config, result = result_from_doc(result_doc)
        grid = density_from_doc(density_doc)
    except (KeyError, ValueError, TypeError) as exc:
        return _fail(EXIT_IO, f"malformed run outputs: {exc}")
    try:
        (directory / "density.ppm").write_bytes(ppm_bytes(render_density_image(grid)))
        (directory / "trajectories.ppm").write_bytes(ppm_bytes(render_trajectory_plot(scene, result)))
    except OSError as exc:
        return _fail(EXIT_IO, f"cannot write rasters: {exc}")
    print(f"wrote {directory / 'density.ppm'} and {directory / 'trajectories.ppm'}")
    return EXIT_OK


def cmd_serve(args) -> int:
    from .service import run_service

    try:
        run_service(
            port=args.port,
            data_dir=args.data_dir,
            workers=args.workers,
            lease_timeout_s=args.lease_timeout,
            limits=_limits_from(args),
            host=args.host,
        )
    except OSError as exc:
        return _fail(EXIT_IO, f"cannot start service: {exc}")
    return EXIT_OK


def _limits_from(args) -> SceneLimits:
    path = getattr(args, "limits", None)
    if not path:
        return DEFAULT_LIMITS
    doc = json.loads(_read_text(path))
    return SceneLimits(**doc)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="crowdlab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a scene file against the authoring constraints")
    p.add_argument("scene")
    p.add_argument("--limits", help="JSON file overriding the scene limits")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("run", help="run a simulation and write result files")
    p.add_argument("scene")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--config", help="JSON file with simulation config overrides")
    p.add_argument("--limits", help="JSON file overriding the scene limits")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("render", help="render density.ppm and trajectories.ppm from a run directory")
    p.add_argument("dir")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("serve", help="run the HTTP simulation service")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--data-dir", default="crowdlab-data")
    p.add_argument("--workers", type=int, default=2)
    p.add_argument("--lease-timeout", type=float, default=300.0)
    p.add_argument("--limits", help="JSON file overriding the scene limits")
    p.set_defaults(func=cmd_serve)

    return parser


def dispatch(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
