"""End-to-end orchestration with the quality-feedback restart loop.

Each attempt concretizes the concept, runs the per-seed semantic branches
(region selection + optimization), stylizes and textures every result, and
scores it against the untransformed glyph render. If fewer than K candidates
clear the qualification threshold, the attempt is retired and the loop
restarts with fresh seeds and a fresh concretization, until max_restarts is
exhausted. Infrastructure failures (backend or provider down) abort
immediately without consuming a restart.
"""
from __future__ import annotations

import dataclasses
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ..errors import BackendUnavailable, ProviderUnavailable, WordArtError
from ..glyph import (
    load_glyph,
    normalize_outline,
    outline_to_svg,
    parameterize,
    rebalance_control_points,
    reconstruct,
)
from ..llm.backends import DesignRequest, parse_user_input, query_concretization
from ..llm.parsing import ConcretizationResult, provider_prompt
from ..llm.prompts import PromptKind
from ..providers.types import RenderedImage, StylizeRequest, TextureRequest
from ..ranker.metrics import Candidate, calibrate_threshold, select_top_x
from ..ranker.scoring import heuristic_score
from ..raster.pngio import encode_png, encode_rgb_png
from ..raster.render import rasterize
from ..raster.types import RasterConfig, RasterImage
from ..semtypo.guidance import IdentityEncoder, PromptFieldDenoiser, SdsGuidance, cosine_schedule
from ..semtypo.optimize import optimize
from ..semtypo.region import region_box, select_region
from .job import DesignJob, JobState


@dataclass
class CandidateRecord:
    id: str
    character: str
    seed: int
    score: float = float("nan")
    qualified: bool = False
    svg: str = ""
    i_sem_png: bytes = b""
    i_sty_png: bytes = b""
    i_tex_png: bytes = b""
    trajectory_jsonl: str = ""
    frames_png: list[bytes] = field(default_factory=list)
    region_start: int = 0
    region_length: int = 0
    # content digests filled in by services that blob-store the images
    blob_sem: str = ""
    blob_sty: str = ""
    blob_tex: str = ""
    blob_svg: str = ""


@dataclass
class AttemptRecord:
    index: int
    stylize_concretization: ConcretizationResult | None = None
    texture_concretization: ConcretizationResult | None = None
    candidates: list[CandidateRecord] = field(default_factory=list)
    qualified_count: int = 0


@dataclass
class RunRecord:
    job_id: str
    request: DesignRequest | None
    config: dict
    attempts: list[AttemptRecord] = field(default_factory=list)
    final_state: JobState = JobState.FAILED
    restart_count: int = 0
    tau: float | None = None
    selected: list[str] = field(default_factory=list)
    accepted: str | None = None
    failure: str | None = None


def default_guidance_factory(request: DesignRequest, concretization: ConcretizationResult):
    """Mock diffusion prior keyed by the stylization prompt."""
    return SdsGuidance(
        denoiser=PromptFieldDenoiser(),
        encoder=IdentityEncoder(),
        schedule=cosine_schedule(1000),
        prompt_key=provider_prompt(concretization),
        n_samples=1,
    )


def _branch_seed(base: int, attempt: int, index: int) -> int:
    return int(np.random.SeedSequence((base, attempt, index)).generate_state(1)[0])


def _luminance_raster(image: RenderedImage) -> RasterImage:
    return RasterImage(image.luminance())


def run_pipeline(
    job: DesignJob,
    font_bytes: bytes,
    backend,
    stylize_provider,
    texture_provider,
    scorer=None,
    guidance_factory=default_guidance_factory,
    on_event=None,
) -> RunRecord:
    cfg = job.config
    scorer = scorer or heuristic_score

    def emit(kind: str, **payload):
        if on_event is not None:
            on_event(kind, payload)

    def set_state(state: JobState):
        job.transition(state)
        emit("state_change", state=state.value, restart_count=job.restart_count)

    record = RunRecord(
        job_id=job.id,
        request=None,
        config=dataclasses.asdict(cfg),
    )
    raster_cfg = RasterConfig(cfg.canvas_px, cfg.canvas_px)

    try:
        request = parse_user_input(backend, cfg.request_text(), fallback_characters=cfg.text)
        record.request = request
        emit("parsed", characters=request.characters, concept=request.concept, domain=request.domain)

        for attempt_index in range(cfg.max_restarts + 1):
            set_state(JobState.CONCRETIZING)
            a_sty = query_concretization(backend, PromptKind.STYLIZATION, request.concept)
            a_tex = query_concretization(backend, PromptKind.TEXTURE, request.concept)
            attempt = AttemptRecord(
                index=attempt_index,
                stylize_concretization=a_sty,
                texture_concretization=a_tex,
            )
            emit(
                "concretized",
                attempt=attempt_index,
                stylize=provider_prompt(a_sty),
                texture=provider_prompt(a_tex),
            )

            set_state(JobState.SEMANTIC)
            branches = []
            for ci, character in enumerate(request.characters):
                for si in range(cfg.seeds_per_attempt):
                    branches.append((ci, character, si))

            def run_branch(branch):
                ci, character, si = branch
                seed = _branch_seed(cfg.seed, attempt_index, ci * 1000 + si)
                cand_id = f"a{attempt_index}_c{ci}_s{si}"
                outline = normalize_outline(
                    rebalance_control_points(
                        load_glyph(font_bytes, ord(character)), cfg.min_points
                    ),
                    cfg.canvas_px,
                )
                reference = rasterize(parameterize(outline), raster_cfg)
                split, region = select_region(outline, rng_seed=seed, cfg=cfg.region)
                params = parameterize(split)
                emit(
                    "region",
                    candidate=cand_id,
                    character=character,
                    box=list(region_box(region, params, cfg.optimization.loss_locality_dilation)),
                    start=region.start_index,
                    length=region.length,
                )
                guidance = guidance_factory(request, a_sty)
                opt_cfg = dataclasses.replace(
                    cfg.optimization, seed=seed, canvas_px=cfg.canvas_px
                )
                def progress(i, loss, frame, cand_id=cand_id):
                    emit("iteration", candidate=cand_id, iteration=i, loss=loss)
                    if frame is not None:
                        emit(
                            "frame",
                            candidate=cand_id,
                            iteration=i,
                            png=encode_png(frame),
                        )

                final, trajectory = optimize(
                    params, region, guidance, opt_cfg, on_iteration=progress
                )
                i_sem = rasterize(final, raster_cfg)
                return cand_id, character, seed, region, final, trajectory, reference, i_sem

            if cfg.workers > 1 and len(branches) > 1:
                with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
                    results = list(pool.map(run_branch, branches))
            else:
                results = [run_branch(b) for b in branches]

            set_state(JobState.STYLIZING)
            sty_prompt = provider_prompt(a_sty)
            tex_prompt = provider_prompt(a_tex)
            finished = []
            for cand_id, character, seed, region, final, trajectory, reference, i_sem in results:
                i_sty = stylize_provider.stylize(
                    StylizeRequest(i_sem, prompt=sty_prompt, seed=seed)
                )
                finished.append(
                    (cand_id, character, seed, region, final, trajectory, reference, i_sem, i_sty)
                )
            set_state(JobState.TEXTURING)
            for cand_id, character, seed, region, final, trajectory, reference, i_sem, i_sty in finished:
                i_tex = texture_provider.texture(
                    TextureRequest(
                        _luminance_raster(i_sty),
                        prompt=tex_prompt,
                        condition=cfg.condition,
                        original_font_image=reference,
                        seed=seed,
                    )
                )
                score = float(scorer(i_sty, reference))
                im = final.index_map
                header = {
                    "segment_counts": list(im.segment_counts),
                    "codepoint": im.codepoint,
                    "units_per_em": im.units_per_em,
                    "advance_width": im.advance_width,
                    "canvas_px": cfg.canvas_px,
                }
                traj_lines = [json.dumps({"header": header})]
                frame_iters = {it for it, _ in trajectory.frames()}
                for p in trajectory.points:
                    entry = {"iteration": p.iteration, "loss": p.loss}
                    if p.iteration in frame_iters:
                        entry["params"] = p.params.tolist()
                    traj_lines.append(json.dumps(entry))
                cand = CandidateRecord(
                    id=cand_id,
                    character=character,
                    seed=seed,
                    score=score,
                    svg=outline_to_svg(reconstruct(final), cfg.canvas_px, cfg.canvas_px),
                    i_sem_png=encode_png(i_sem),
                    i_sty_png=encode_rgb_png(i_sty.pixels),
                    i_tex_png=encode_rgb_png(i_tex.pixels),
                    trajectory_jsonl="\n".join(traj_lines),
                    frames_png=[encode_png(f) for _, f in trajectory.frames()],
                    region_start=region.start_index,
                    region_length=region.length,
                )
                attempt.candidates.append(cand)
                emit("candidate", id=cand_id, character=character, score=score)

            set_state(JobState.RANKING)
            if record.tau is None:
                record.tau = (
                    cfg.tau
                    if cfg.tau is not None
                    else calibrate_threshold(
                        [c.score for c in attempt.candidates], cfg.tau_percentile
                    )
                )
            for c in attempt.candidates:
                c.qualified = c.score >= record.tau
            attempt.qualified_count = sum(c.qualified for c in attempt.candidates)
            record.attempts.append(attempt)
            emit(
                "ranked",
                attempt=attempt_index,
                qualified=attempt.qualified_count,
                tau=record.tau,
            )

            if attempt.qualified_count >= cfg.k:
                qualified = [
                    Candidate(id=c.id, character=c.character, score=c.score)
                    for c in attempt.candidates
                    if c.qualified
                ]
                record.selected = [c.id for c in select_top_x(qualified, cfg.k)]
                set_state(JobState.DONE)
                record.final_state = JobState.DONE
                record.restart_count = job.restart_count
                emit("terminal", state="done", restart_count=job.restart_count, selected=record.selected)
                return record
            if attempt_index < cfg.max_restarts:
                job.restart_count += 1
                emit("restart", restart_count=job.restart_count)
        set_state(JobState.FAILED)
        record.final_state = JobState.FAILED
        record.restart_count = job.restart_count
        record.failure = (
            f"no attempt reached {cfg.k} qualified candidates "
            f"(threshold {record.tau}, {cfg.max_restarts + 1} attempts)"
        )
        emit("terminal", state="failed", restart_count=job.restart_count, selected=[])
        return record
    except (BackendUnavailable, ProviderUnavailable):
        # Infrastructure outage: fail fast, never consume a restart.
        if job.state not in (JobState.DONE, JobState.FAILED):
            job.state = JobState.FAILED
        raise
    except WordArtError as exc:
        job.state = JobState.FAILED
        record.final_state = JobState.FAILED
        record.restart_count = job.restart_count
        record.failure = f"{type(exc).__name__}: {exc}"
        emit("terminal", state="failed", restart_count=job.restart_count, selected=[])
        return record
