from .job import DesignJob, JobConfig, JobState
from .persist import load_manifest, persist_run, verify_manifest
from .runner import (
    AttemptRecord,
    CandidateRecord,
    RunRecord,
    default_guidance_factory,
    run_pipeline,
)

__all__ = [
    "AttemptRecord",
    "CandidateRecord",
    "DesignJob",
    "JobConfig",
    "JobState",
    "RunRecord",
    "default_guidance_factory",
    "load_manifest",
    "persist_run",
    "run_pipeline",
    "verify_manifest",
]
