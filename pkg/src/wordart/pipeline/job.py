"""Job configuration and state machine types."""
from __future__ import annotations

import uuid
from dataclasses import dataclass, field
from enum import Enum

from ..semtypo.optimize import OptimizationConfig
from ..semtypo.region import RegionConfig


class JobState(Enum):
    PARSING = "parsing"
    CONCRETIZING = "concretizing"
    SEMANTIC = "semantic"
    STYLIZING = "stylizing"
    TEXTURING = "texturing"
    RANKING = "ranking"
    DONE = "done"
    FAILED = "failed"


# Legal forward transitions; RANKING loops back to CONCRETIZING on restart.
_TRANSITIONS = {
    JobState.PARSING: {JobState.CONCRETIZING, JobState.FAILED},
    JobState.CONCRETIZING: {JobState.SEMANTIC, JobState.FAILED},
    JobState.SEMANTIC: {JobState.STYLIZING, JobState.FAILED},
    JobState.STYLIZING: {JobState.TEXTURING, JobState.FAILED},
    JobState.TEXTURING: {JobState.RANKING, JobState.FAILED},
    JobState.RANKING: {JobState.DONE, JobState.FAILED, JobState.CONCRETIZING},
    JobState.DONE: set(),
    JobState.FAILED: set(),
}


@dataclass
class JobConfig:
    raw_text: str = ""            # free-form request; synthesized when empty
    text: str = ""                # explicit characters to transform
    concept: str = ""
    domain: str = ""
    k: int = 1
    max_restarts: int = 2
    seeds_per_attempt: int = 4
    seed: int = 0
    tau: float | None = None      # None: calibrated from the first attempt
    tau_percentile: float = 60.0
    canvas_px: int = 256
    min_points: int = 60
    condition: str = "scribble"
    workers: int = 2
    region: RegionConfig = field(default_factory=RegionConfig)
    optimization: OptimizationConfig = field(
        default_factory=lambda: OptimizationConfig(iterations=60, frame_stride=20)
    )

    def request_text(self) -> str:
        if self.raw_text:
            return self.raw_text
        concept = self.concept or "pattern"
        domain = self.domain or "general"
        return f"A {concept} in {domain} design"


@dataclass
class DesignJob:
    config: JobConfig
    id: str = field(default_factory=lambda: uuid.uuid4().hex[:12])
    state: JobState = JobState.PARSING
    restart_count: int = 0

    def transition(self, new_state: JobState):
        if new_state is self.state:
            return
        allowed = _TRANSITIONS[self.state]
        if new_state not in allowed:
            raise ValueError(f"illegal transition {self.state} -> {new_state}")
        self.state = new_state
