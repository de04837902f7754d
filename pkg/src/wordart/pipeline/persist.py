"""Run-directory persistence: one folder per job, one per attempt, manifest
with a content digest for every artifact. Writing the same record twice
yields byte-identical output (no wall-clock anywhere).
"""
from __future__ import annotations

import dataclasses
import hashlib
import json
from pathlib import Path

from ..errors import IoFailure
from .runner import RunRecord

MANIFEST_SCHEMA = "run-manifest/1"


def _sha256(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def persist_run(record: RunRecord, root_dir) -> Path:
    root = Path(root_dir) / record.job_id
    files: dict[str, bytes] = {}

    for attempt in record.attempts:
        base = f"attempt_{attempt.index:02d}"
        meta = {
            "index": attempt.index,
            "qualified_count": attempt.qualified_count,
            "stylize_concretization": dataclasses.asdict(attempt.stylize_concretization)
            if attempt.stylize_concretization
            else None,
            "texture_concretization": dataclasses.asdict(attempt.texture_concretization)
            if attempt.texture_concretization
            else None,
        }
        files[f"{base}/concretization.json"] = json.dumps(meta, indent=2, sort_keys=True).encode()
        scores = {
            c.id: {"score": c.score, "qualified": c.qualified, "character": c.character}
            for c in attempt.candidates
        }
        files[f"{base}/scores.json"] = json.dumps(scores, indent=2, sort_keys=True).encode()
        for c in attempt.candidates:
            files[f"{base}/semantic/{c.id}.svg"] = c.svg.encode()
            files[f"{base}/semantic/{c.id}_sem.png"] = c.i_sem_png
            files[f"{base}/semantic/{c.id}_trajectory.jsonl"] = c.trajectory_jsonl.encode()
            for fi, frame in enumerate(c.frames_png):
                files[f"{base}/semantic/{c.id}_frame_{fi:03d}.png"] = frame
            files[f"{base}/stylize/{c.id}_sty.png"] = c.i_sty_png
            files[f"{base}/texture/{c.id}_tex.png"] = c.i_tex_png

    summary = {
        "schema": MANIFEST_SCHEMA,
        "job_id": record.job_id,
        "final_state": record.final_state.value,
        "restart_count": record.restart_count,
        "attempt_count": len(record.attempts),
        "tau": record.tau,
        "selected": record.selected,
        "accepted": record.accepted,
        "failure": record.failure,
        "request": dataclasses.asdict(record.request) if record.request else None,
        "config": record.config,
    }
    files["selected.json"] = json.dumps(
        {"selected": record.selected, "accepted": record.accepted}, indent=2, sort_keys=True
    ).encode()

    manifest = {
        **summary,
        "files": [
            {"path": path, "sha256": _sha256(data), "bytes": len(data)}
            for path, data in sorted(files.items())
        ],
    }
    manifest_bytes = json.dumps(manifest, indent=2, sort_keys=True).encode()

    try:
        for path, data in files.items():
            target = root / path
            target.parent.mkdir(parents=True, exist_ok=True)
            target.write_bytes(data)
        (root / "manifest.json").write_bytes(manifest_bytes)
    except OSError as exc:
        raise IoFailure(f"cannot persist run under {root}: {exc}") from exc
    return root


def load_manifest(run_dir) -> dict:
    try:
        return json.loads((Path(run_dir) / "manifest.json").read_text())
    except OSError as exc:
        raise IoFailure(f"cannot read manifest in {run_dir}: {exc}") from exc


def verify_manifest(run_dir) -> bool:
    """Every listed file exists with the recorded digest, and no strays."""
    run_dir = Path(run_dir)
    manifest = load_manifest(run_dir)
    listed = {f["path"]: f["sha256"] for f in manifest["files"]}
    on_disk = {
        str(p.relative_to(run_dir)).replace("\\", "/")
        for p in run_dir.rglob("*")
        if p.is_file() and p.name != "manifest.json"
    }
    if set(listed) != on_disk:
        return False
    return all(_sha256((run_dir / path).read_bytes()) == digest for path, digest in listed.items())
