"""Simulation job service: a durable FIFO job queue over a data directory,
the worker routine that executes queued simulations, and the HTTP API.

All cross-worker coordination happens through atomic filesystem operations
(exclusive create and rename), so any number of worker threads or processes
can share one data directory. Finished job documents are immutable.
"""

from __future__ import annotations

import json
import logging
import os
import secrets
import threading
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from fastapi import Body, FastAPI
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .analytics import accumulate_density, summarize
from .engine import SimulationConfig, run_simulation
from .presets import preset_catalog
from .results import bundle_doc
from .scene import DEFAULT_LIMITS, SceneLimits, validate_scene
from .scene_io import SceneError, parse_scene, scene_to_doc

log = logging.getLogger(__name__)

DEFAULT_WORKERS = 2
DEFAULT_LEASE_TIMEOUT_S = 300.0


class SubmissionRejected(ValueError):
    """Scene or config rejected before a job was created; carries a payload
    suitable for a 422 response body."""

    def __init__(self, payload: dict):
        super().__init__(payload.get("message") or payload.get("error", "rejected"))
        self.payload = payload


class JobNotFound(KeyError):
    pass


class ResultNotReady(RuntimeError):
    def __init__(self, state: str):
        super().__init__(f"job is {state}")
        self.state = state


class JobFailed(RuntimeError):
    def __init__(self, error: str):
        super().__init__(error)
        self.error = error


def _now_iso() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="microseconds")


class JobStore:
    """One JSON document per job; queue membership and leases are marker
    files whose atomic rename is the claim primitive."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.jobs_dir = self.root / "jobs"
        self.queue_dir = self.root / "queue"
        self.lease_dir = self.root / "leases"
        self.terminal_dir = self.root / "terminal"
        for d in (self.jobs_dir, self.queue_dir, self.lease_dir, self.terminal_dir):
            d.mkdir(parents=True, exist_ok=True)

    def _job_path(self, job_id: str) -> Path:
        return self.jobs_dir / f"{job_id}.json"

    def write_job(self, doc: dict) -> None:
        path = self._job_path(doc["job_id"])
        tmp = path.with_suffix(".json.tmp")
        tmp.write_text(json.dumps(doc, allow_nan=False), encoding="utf-8")
        os.replace(tmp, path)

    def load_job(self, job_id: str) -> dict | None:
        path = self._job_path(job_id)
        try:
            return json.loads(path.read_text(encoding="utf-8"))
        except FileNotFoundError:
            return None

    def enqueue(self, job_id: str, submitted_ns: int) -> None:
        marker = self.queue_dir / f"{submitted_ns:020d}-{job_id}"
        fd = os.open(marker, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
        os.close(fd)

    def is_terminal(self, job_id: str) -> bool:
        return (self.terminal_dir / job_id).exists()

    def claim_next(self) -> str | None:
        """Atomically claim the oldest queued job (FIFO by submit time, ties
        by job id). Exactly one concurrent claimant wins each marker."""
        for name in sorted(os.listdir(self.queue_dir)):
            job_id = name.split("-", 1)[1]
            lease = self.lease_dir / f"{name}.lease"
            try:
                os.rename(self.queue_dir / name, lease)
            except FileNotFoundError:
                continue  # someone else claimed it first
            os.utime(lease)
            if self.is_terminal(job_id):
                lease.unlink(missing_ok=True)
                continue
            return job_id
        return None

    def drop_lease(self, job_id: str) -> None:
        for lease in self.lease_dir.glob(f"*-{job_id}.lease"):
            lease.unlink(missing_ok=True)

    def reclaim_expired(self, lease_timeout_s: float) -> None:
        """Requeue jobs whose worker leases went stale (crashed mid-run)."""
        cutoff = time.time() - lease_timeout_s
        for lease in list(self.lease_dir.glob("*.lease")):
            name = lease.name[: -len(".lease")]
            job_id = name.split("-", 1)[1]
            if self.is_terminal(job_id):
                lease.unlink(missing_ok=True)
                continue
            try:
                stale = lease.stat().st_mtime < cutoff
            except FileNotFoundError:
                continue
            if stale:
                try:
                    os.rename(lease, self.queue_dir / name)
                except FileNotFoundError:
                    continue

    def finish(self, doc: dict) -> bool:
        """Record a terminal transition exactly once.

        The exclusive terminal marker gates the final write: a second worker
        racing the same job sees the marker and drops its outcome.
        """
        job_id = doc["job_id"]
        try:
            fd = os.open(self.terminal_dir / job_id, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
            os.close(fd)
        except FileExistsError:
            self.drop_lease(job_id)
            return False
        self.write_job(doc)
        self.drop_lease(job_id)
        return True


@dataclass
class JobService:
    store: JobStore
    limits: SceneLimits = DEFAULT_LIMITS
    default_config: SimulationConfig = field(default_factory=SimulationConfig)
    lease_timeout_s: float = DEFAULT_LEASE_TIMEOUT_S

    def submit(self, scene_doc, config_overrides: dict | None = None) -> str:
        """Parse and validate, then durably store a queued job and return its id."""
        if isinstance(scene_doc, (dict, list)):
            scene_text = json.dumps(scene_doc, allow_nan=False)
        elif isinstance(scene_doc, str):
            scene_text = scene_doc
        else:
            raise SubmissionRejected({"error": "parse", "message": "scene must be a JSON object"})
        try:
            scene = parse_scene(scene_text)
        except SceneError as exc:
            raise SubmissionRejected({"error": "parse", "message": str(exc)}) from exc

        report = validate_scene(scene, self.limits)
        if not report.ok:
            raise SubmissionRejected({"error": "validation", "report": report.to_doc()})

        try:
            config = SimulationConfig.from_doc({**self.default_config.to_doc(), **(config_overrides or {})})
        except (TypeError, ValueError) as exc:
            raise SubmissionRejected({"error": "config", "message": str(exc)}) from exc

        job_id = secrets.token_hex(16)
        doc = {
            "job_id": job_id,
            "state": "queued",
            "submitted_at": _now_iso(),
            "started_at": None,
            "finished_at": None,
            "wall_clock_s": None,
            "error": None,
            "scene": scene_to_doc(scene),
            "config": config.to_doc(),
            "result": None,
        }
        self.store.write_job(doc)
        self.store.enqueue(job_id, time.time_ns())
        return job_id

    def job_metadata(self, job_id: str) -> dict:
        doc = self.store.load_job(job_id)
        if doc is None:
            raise JobNotFound(job_id)
        return {
            "job_id": doc["job_id"],
            "state": doc["state"],
            "submitted_at": doc["submitted_at"],
            "started_at": doc["started_at"],
            "finished_at": doc["finished_at"],
            "wall_clock_s": doc["wall_clock_s"],
            "error": doc["error"],
        }

    def result_bundle(self, job_id: str) -> dict:
        doc = self.store.load_job(job_id)
        if doc is None:
            raise JobNotFound(job_id)
        if doc["state"] == "failed":
            raise JobFailed(doc["error"] or "unknown failure")
        if doc["state"] != "done":
            raise ResultNotReady(doc["state"])
        return doc["result"]

    def execute_next(self) -> str | None:
        """Claim and run the oldest queued job; returns its id, or None when idle.

        Failures are recorded on the job, never raised.
        """
        self.store.reclaim_expired(self.lease_timeout_s)
        job_id = self.store.claim_next()
        if job_id is None:
            return None
        doc = self.store.load_job(job_id)
        if doc is None or doc["state"] in ("done", "failed"):
            self.store.drop_lease(job_id)
            return job_id
        doc["state"] = "running"
        doc["started_at"] = _now_iso()
        if not self.store.is_terminal(job_id):
            self.store.write_job(doc)

        t0 = time.monotonic()
        try:
            scene = parse_scene(json.dumps(doc["scene"]))
            config = SimulationConfig.from_doc(doc["config"])
            result = run_simulation(scene, config, self.limits)
            density = accumulate_density(result)
            summary = summarize(result)
            doc["result"] = bundle_doc(scene, config, result, density, summary)
            doc["state"] = "done"
        except Exception as exc:  # noqa: BLE001 - outcome is recorded on the job
            doc["state"] = "failed"
            doc["error"] = f"{type(exc).__name__}: {exc}"
        doc["finished_at"] = _now_iso()
        doc["wall_clock_s"] = round(time.monotonic() - t0, 6)
        self.store.finish(doc)
        return job_id


def _worker_loop(service: JobService, stop: threading.Event, poll_s: float = 0.05) -> None:
    while not stop.is_set():
        try:
            executed = service.execute_next()
        except Exception:  # noqa: BLE001
            log.exception("worker iteration failed")
            executed = None
        if executed is None:
            stop.wait(poll_s)


def start_workers(service: JobService, count: int = DEFAULT_WORKERS) -> threading.Event:
    stop = threading.Event()
    for _ in range(count):
        threading.Thread(target=_worker_loop, args=(service, stop), daemon=True).start()
    return stop


def build_app(service: JobService) -> FastAPI:
    app = FastAPI(title="crowdlab service", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )

    @app.post("/api/simulations", status_code=202)
    def submit(payload: dict = Body(...)):
        scene_doc = payload.get("scene")
        if scene_doc is None:
            return JSONResponse({"error": "parse", "message": "missing 'scene'"}, status_code=422)
        try:
            job_id = service.submit(scene_doc, payload.get("config"))
        except SubmissionRejected as exc:
            return JSONResponse(exc.payload, status_code=422)
        return {"job_id": job_id}

    @app.get("/api/jobs/{job_id}")
    def job_status(job_id: str):
        try:
            return service.job_metadata(job_id)
        except JobNotFound:
            return JSONResponse({"error": "not_found"}, status_code=404)

    @app.get("/api/jobs/{job_id}/result")
    def job_result(job_id: str):
        try:
            return service.result_bundle(job_id)
        except JobNotFound:
            return JSONResponse({"error": "not_found"}, status_code=404)
        except ResultNotReady as exc:
            return JSONResponse({"error": "not_ready", "state": exc.state}, status_code=409)
        except JobFailed as exc:
            return JSONResponse({"error": "failed", "state": "failed", "message": exc.error}, status_code=409)

    @app.get("/api/presets")
    def presets():
        return preset_catalog()

    @app.get("/healthz")
    def healthz():
        return {"status": "ok"}

    return app


def run_service(
    port: int = 8000,
    data_dir: str | Path = "crowdlab-data",
    workers: int = DEFAULT_WORKERS,
    lease_timeout_s: float = DEFAULT_LEASE_TIMEOUT_S,
    limits: SceneLimits = DEFAULT_LIMITS,
    host: str = "127.0.0.1",
) -> None:
    """Run the HTTP service with background workers until interrupted."""
    import uvicorn

    store = JobStore(data_dir)
    service = JobService(store, limits=limits, lease_timeout_s=lease_timeout_s)
    stop = start_workers(service, workers)
    try:
        uvicorn.run(build_app(service), host=host, port=port, log_level="warning")
    finally:
        stop.set()
