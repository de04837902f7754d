"""HTTP facade over the pipeline for the studio UI.

Endpoints: submit, status, SSE event stream (resumable by sequence), ranked
candidates, accept, rerun, and content-addressed blob serving. Jobs execute
on a worker pool; each job owns an append-only event log.
"""
from __future__ import annotations

import dataclasses
import hashlib
import json
import threading
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from fastapi import FastAPI, HTTPException, Request
from fastapi.responses import HTMLResponse, Response, StreamingResponse
from fastapi.staticfiles import StaticFiles

from ..errors import WordArtError
from ..llm.backends import BackendConfig, make_backend
from ..pipeline.job import DesignJob, JobConfig
from ..pipeline.persist import persist_run
from ..pipeline.runner import RunRecord, run_pipeline
from ..providers.http import HttpProvider
from ..providers.mock import MockProvider
from .events import EventLog


class JobRuntime:
    def __init__(self, job: DesignJob):
        self.job = job
        self.log = EventLog()
        self.record: RunRecord | None = None
        self.error: str | None = None
        self.rerun_of: str | None = None


class Studio:
    """Shared state: jobs, executor, blob store."""

    def __init__(
        self,
        font_bytes: bytes,
        out_dir: str | None = None,
        backend_config: BackendConfig = BackendConfig(kind="mock"),
        stylize_endpoint: str | None = None,
        texture_endpoint: str | None = None,
        defaults: JobConfig | None = None,
        max_workers: int = 2,
    ):
        self.font_bytes = font_bytes
        self.out_dir = out_dir
        self.backend_config = backend_config
        self.stylize_endpoint = stylize_endpoint
        self.texture_endpoint = texture_endpoint
        self.defaults = defaults or JobConfig()
        self.jobs: dict[str, JobRuntime] = {}
        self.blobs: dict[str, tuple[bytes, str]] = {}
        self._lock = threading.Lock()
        self._pool = ThreadPoolExecutor(max_workers=max_workers)

    def put_blob(self, data: bytes, content_type: str = "image/png") -> str:
        digest = hashlib.sha256(data).hexdigest()
        with self._lock:
            self.blobs[digest] = (data, content_type)
        return digest

    def submit(self, config: JobConfig, rerun_of: str | None = None) -> JobRuntime:
        runtime = JobRuntime(DesignJob(config=config))
        runtime.rerun_of = rerun_of
        with self._lock:
            self.jobs[runtime.job.id] = runtime
        self._pool.submit(self._run, runtime)
        return runtime

    def _run(self, runtime: JobRuntime):
        def on_event(kind: str, payload: dict):
            if kind == "frame" and "png" in payload:
                digest = self.put_blob(payload.pop("png"))
                payload["blob"] = digest
                payload["url"] = f"/api/blobs/{digest}"
            runtime.log.append(kind, payload)

        stylize = (
            HttpProvider(self.stylize_endpoint) if self.stylize_endpoint else MockProvider()
        )
        texture = (
            HttpProvider(self.texture_endpoint) if self.texture_endpoint else MockProvider()
        )
        try:
            record = run_pipeline(
                runtime.job,
                self.font_bytes,
                make_backend(self.backend_config),
                stylize,
                texture,
                on_event=on_event,
            )
            runtime.record = record
            self._register_candidate_blobs(record)
            if self.out_dir:
                persist_run(record, self.out_dir)
        except WordArtError as exc:
            runtime.error = f"{type(exc).__name__}: {exc}"
            if not runtime.log.terminal:
                runtime.log.append(
                    "terminal",
                    {"state": "failed", "error": runtime.error, "selected": []},
                )
        except Exception as exc:  # defensive: never strand a stream
            runtime.error = f"internal error: {exc}"
            if not runtime.log.terminal:
                runtime.log.append(
                    "terminal",
                    {"state": "failed", "error": runtime.error, "selected": []},
                )

    def _register_candidate_blobs(self, record: RunRecord):
        for attempt in record.attempts:
            for c in attempt.candidates:
                c.blob_sem = self.put_blob(c.i_sem_png)
                c.blob_sty = self.put_blob(c.i_sty_png)
                c.blob_tex = self.put_blob(c.i_tex_png)
                c.blob_svg = self.put_blob(c.svg.encode(), "image/svg+xml")

    def get(self, job_id: str) -> JobRuntime:
        with self._lock:
            runtime = self.jobs.get(job_id)
        if runtime is None:
            raise HTTPException(status_code=404, detail=f"unknown job {job_id}")
        return runtime


def _job_config_from_body(body: dict, defaults: JobConfig) -> JobConfig:
    cfg = dataclasses.replace(defaults)
    simple = {
        "raw_text": str, "text": str, "concept": str, "domain": str,
        "k": int, "max_restarts": int, "seeds_per_attempt": int, "seed": int,
        "canvas_px": int, "min_points": int, "condition": str, "workers": int,
        "tau": float, "tau_percentile": float,
    }
    updates = {}
    for key, cast in simple.items():
        if key in body and body[key] is not None:
            try:
                updates[key] = cast(body[key])
            except (TypeError, ValueError) as exc:
                raise HTTPException(status_code=400, detail=f"bad field {key}: {exc}")
    region_updates = {}
    for key in ("min_len", "max_len"):
        if key in body and body[key] is not None:
            region_updates[key] = int(body[key])
    opt_updates = {}
    for key in ("iterations", "learning_rate", "crop_count", "crop_px", "frame_stride"):
        if key in body and body[key] is not None:
            opt_updates[key] = type(getattr(defaults.optimization, key))(body[key])
    cfg = dataclasses.replace(cfg, **updates)
    if region_updates:
        cfg = dataclasses.replace(cfg, region=dataclasses.replace(cfg.region, **region_updates))
    if opt_updates:
        cfg = dataclasses.replace(
            cfg, optimization=dataclasses.replace(cfg.optimization, **opt_updates)
        )
    if not cfg.raw_text and not cfg.concept:
        raise HTTPException(status_code=400, detail="need raw_text or concept")
    if not cfg.text and not cfg.raw_text:
        raise HTTPException(status_code=400, detail="need text (characters) or raw_text")
    return cfg


def _status_payload(runtime: JobRuntime) -> dict:
    record = runtime.record
    return {
        "job_id": runtime.job.id,
        "state": runtime.job.state.value,
        "restart_count": runtime.job.restart_count,
        "terminal": runtime.log.terminal,
        "error": runtime.error,
        "rerun_of": runtime.rerun_of,
        "selected": record.selected if record else [],
        "accepted": record.accepted if record else None,
        "tau": record.tau if record else None,
        "event_count": len(runtime.log.events),
    }


def _candidates_payload(runtime: JobRuntime) -> list[dict]:
    record = runtime.record
    if record is None:
        return []
    out = []
    for attempt in record.attempts:
        for c in attempt.candidates:
            out.append(
                {
                    "id": c.id,
                    "character": c.character,
                    "attempt": attempt.index,
                    "score": c.score,
                    "qualified": c.qualified,
                    "selected": c.id in record.selected,
                    "region": {"start": c.region_start, "length": c.region_length},
                    "images": {
                        "sem": f"/api/blobs/{c.blob_sem}",
                        "sty": f"/api/blobs/{c.blob_sty}",
                        "tex": f"/api/blobs/{c.blob_tex}",
                        "svg": f"/api/blobs/{c.blob_svg}",
                    },
                }
            )
    out.sort(key=lambda c: (-c["score"], c["id"]))
    return out


def create_app(studio: Studio, ui_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="wordart studio service")
    app.state.studio = studio

    @app.post("/api/jobs", status_code=202)
    async def submit_job(request: Request):
        try:
            body = await request.json()
        except Exception:
            raise HTTPException(status_code=400, detail="body must be JSON")
        if not isinstance(body, dict):
            raise HTTPException(status_code=400, detail="body must be a JSON object")
        cfg = _job_config_from_body(body, studio.defaults)
        runtime = studio.submit(cfg)
        return {"job_id": runtime.job.id}

    @app.get("/api/jobs/{job_id}")
    def get_job(job_id: str):
        return _status_payload(studio.get(job_id))

    @app.get("/api/jobs/{job_id}/events")
    def stream_events(job_id: str, request: Request):
        runtime = studio.get(job_id)
        try:
            from_seq = int(request.query_params.get("from", 0))
        except ValueError:
            raise HTTPException(status_code=400, detail="from must be an integer")

        def sse():
            for event in runtime.log.stream(from_seq):
                data = json.dumps({"sequence": event.sequence, **event.payload})
                yield f"id: {event.sequence}\nevent: {event.kind}\ndata: {data}\n\n"

        return StreamingResponse(sse(), media_type="text/event-stream")

    @app.get("/api/jobs/{job_id}/candidates")
    def list_candidates(job_id: str):
        return {"candidates": _candidates_payload(studio.get(job_id))}

    @app.post("/api/jobs/{job_id}/select")
    async def select_candidate(job_id: str, request: Request):
        runtime = studio.get(job_id)
        body = await request.json()
        cand_id = body.get("candidate_id")
        record = runtime.record
        if record is None:
            raise HTTPException(status_code=409, detail="job still running")
        known = {c.id for a in record.attempts for c in a.candidates}
        if cand_id not in known:
            raise HTTPException(status_code=404, detail=f"unknown candidate {cand_id}")
        record.accepted = cand_id
        if studio.out_dir:
            persist_run(record, studio.out_dir)
        return {"accepted": cand_id}

    @app.post("/api/jobs/{job_id}/rerun", status_code=202)
    async def rerun(job_id: str, request: Request):
        runtime = studio.get(job_id)
        try:
            body = await request.json()
        except Exception:
            body = {}
        base = dataclasses.replace(runtime.job.config)
        merged = _job_config_from_body(
            body if isinstance(body, dict) else {}, base
        )
        new_runtime = studio.submit(merged, rerun_of=job_id)
        return {"job_id": new_runtime.job.id, "rerun_of": job_id}

    @app.get("/api/blobs/{digest}")
    def get_blob(digest: str):
        with studio._lock:
            blob = studio.blobs.get(digest)
        if blob is None:
            raise HTTPException(status_code=404, detail="unknown blob")
        data, content_type = blob
        headers = {"Cache-Control": "public, max-age=31536000, immutable"}
        return Response(content=data, media_type=content_type, headers=headers)

    if ui_dir and Path(ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")
    else:
        @app.get("/", response_class=HTMLResponse)
        def index():
            return "<html><body><h1>wordart studio service</h1><p>UI bundle not installed; the API lives under /api.</p></body></html>"

    return app
