"""Command-line entry points: run, eval-ranker, render-frames, serve.

Exit codes for `run`: 0 finished Done, 2 finished Failed (quality loop
exhausted), 3 infrastructure error (font unreadable, backend or provider
down, output not writable).
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from .errors import WordArtError
from .glyph.geometry import IndexMap, ParameterVector
from .llm.backends import BackendConfig, make_backend
from .pipeline.job import DesignJob, JobConfig, JobState
from .pipeline.persist import persist_run
from .pipeline.runner import run_pipeline
from .providers.http import HttpProvider
from .providers.mock import MockProvider
from .ranker.dataset import load_dataset
from .ranker.metrics import evaluate_topx, random_baseline
from .ranker.scoring import heuristic_score
from .raster.pngio import encode_png
from .raster.render import rasterize
from .raster.types import RasterConfig
from .semtypo.optimize import OptimizationConfig
from .semtypo.region import RegionConfig

EXIT_DONE = 0
EXIT_FAILED = 2
EXIT_INFRA = 3


def _apply_config_file(args: argparse.Namespace, parser: argparse.ArgumentParser):
    """Values from --config override command-line flags (documented order)."""
    if not getattr(args, "config", None):
        return
    try:
        overrides = json.loads(Path(args.config).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        parser.error(f"cannot read config file: {exc}")
    for key, value in overrides.items():
        setattr(args, key.replace("-", "_"), value)


def _build_job_config(args) -> JobConfig:
    region = RegionConfig(
        min_len=args.region_min_len,
        max_len=args.region_max_len,
        presplit_threshold_px=args.presplit_px,
    )
    optimization = OptimizationConfig(
        iterations=args.iterations,
        learning_rate=args.learning_rate,
        crop_count=args.crops,
        crop_px=args.crop_px,
        canvas_px=args.canvas,
        frame_stride=args.frame_stride,
    )
    return JobConfig(
        raw_text=args.request or "",
        text=args.text or "",
        concept=args.concept or "",
        domain=args.domain or "",
        k=args.k,
        max_restarts=args.max_restarts,
        seeds_per_attempt=args.seeds_per_attempt,
        seed=args.seed,
        tau=args.tau,
        canvas_px=args.canvas,
        min_points=args.min_points,
        condition=args.condition,
        workers=args.workers,
        region=region,
        optimization=optimization,
    )


def _providers(args):
    stylize_ep = args.stylize_endpoint or os.environ.get("WORDART_STYLIZE_ENDPOINT")
    texture_ep = args.texture_endpoint or os.environ.get("WORDART_TEXTURE_ENDPOINT")
    stylize = HttpProvider(stylize_ep) if stylize_ep else MockProvider()
    texture = HttpProvider(texture_ep) if texture_ep else MockProvider()
    return stylize, texture


def _backend_config(args) -> BackendConfig:
    endpoint = args.llm_endpoint or os.environ.get("WORDART_LLM_ENDPOINT", "")
    return BackendConfig(
        kind=args.backend,
        endpoint=endpoint,
        fixture_path=args.fixtures or "",
        max_retries=args.max_retries,
    )


def cmd_run(args) -> int:
    try:
        font_bytes = Path(args.font).read_bytes()
    except OSError as exc:
        print(f"error: cannot read font: {exc}", file=sys.stderr)
        return EXIT_INFRA
    cfg = _build_job_config(args)
    job = DesignJob(config=cfg)

    def on_event(kind, payload):
        if not args.quiet and kind in ("state_change", "ranked", "terminal", "restart"):
            print(f"[{job.id}] {kind}: {json.dumps({k: v for k, v in payload.items() if k != 'png'})}")

    try:
        record = run_pipeline(
            job,
            font_bytes,
            make_backend(_backend_config(args)),
            *_providers(args),
            on_event=on_event,
        )
    except WordArtError as exc:
        print(f"infrastructure error: {exc}", file=sys.stderr)
        return EXIT_INFRA
    try:
        out = persist_run(record, args.out)
    except WordArtError as exc:
        print(f"infrastructure error: {exc}", file=sys.stderr)
        return EXIT_INFRA
    print(f"run directory: {out}")
    if record.final_state is JobState.DONE:
        print(f"done: selected {record.selected} (restarts {record.restart_count})")
        return EXIT_DONE
    print(f"failed: {record.failure}")
    return EXIT_FAILED


def cmd_eval_ranker(args) -> int:
    try:
        dataset = load_dataset(args.dataset)
    except WordArtError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFRA
    xs = [int(x) for x in args.top.split(",")]
    scores = {}
    if args.use_labels_as_scores:
        for pool in dataset.per_character.values():
            for c in pool:
                scores[c.id] = 1.0 if c.label else 0.0
    elif args.font:
        from .glyph import load_glyph, normalize_outline, parameterize, rebalance_control_points

        font_bytes = Path(args.font).read_bytes()
        for ch, pool in dataset.per_character.items():
            first = next(c for c in pool if c.image is not None)
            px = first.image.height
            outline = normalize_outline(
                rebalance_control_points(load_glyph(font_bytes, ord(ch)), 24), px
            )
            reference = rasterize(parameterize(outline), RasterConfig(px, px))
            for c in pool:
                if c.image is None:
                    print(f"error: candidate {c.id} has no image", file=sys.stderr)
                    return EXIT_INFRA
                scores[c.id] = heuristic_score(c.image, reference)
    else:
        print("error: need --font for heuristic scoring or --use-labels-as-scores", file=sys.stderr)
        return EXIT_INFRA
    ranked = evaluate_topx(dataset, scores, xs)
    rand = random_baseline(dataset, xs, n_iterations=args.iterations, seed=args.seed)
    print(rand.to_text())
    print(ranked.to_text())
    if args.json_out:
        Path(args.json_out).write_text(
            json.dumps(
                {"ranking": json.loads(ranked.to_json()), "random": json.loads(rand.to_json())},
                indent=2,
            )
        )
        print(f"wrote {args.json_out}")
    return EXIT_DONE


def cmd_render_frames(args) -> int:
    run_dir = Path(args.run)
    trajectories = sorted(run_dir.rglob("*_trajectory.jsonl"))
    if not trajectories:
        print(f"error: no trajectories under {run_dir}", file=sys.stderr)
        return EXIT_INFRA
    total = 0
    for traj_path in trajectories:
        lines = traj_path.read_text().splitlines()
        header = json.loads(lines[0])["header"]
        index_map = IndexMap(
            segment_counts=tuple(header["segment_counts"]),
            codepoint=header["codepoint"],
            units_per_em=header["units_per_em"],
            advance_width=header["advance_width"],
            entries=(),
        )
        canvas = args.canvas or header["canvas_px"]
        cfg = RasterConfig(canvas, canvas, edge_softness=args.softness)
        out_dir = traj_path.parent / (traj_path.stem.replace("_trajectory", "") + "_frames")
        out_dir.mkdir(exist_ok=True)
        for line in lines[1:]:
            entry = json.loads(line)
            if "params" not in entry:
                continue
            pv = ParameterVector(np.array(entry["params"]), index_map)
            img = rasterize(pv, cfg)
            (out_dir / f"iter_{entry['iteration']:05d}.png").write_bytes(encode_png(img))
            total += 1
        print(f"{traj_path.parent.name}/{traj_path.name}: frames -> {out_dir}")
    print(f"rendered {total} frames")
    return EXIT_DONE


def cmd_serve(args) -> int:
    import uvicorn

    from .service.app import Studio, create_app

    try:
        font_bytes = Path(args.font).read_bytes()
    except OSError as exc:
        print(f"error: cannot read font: {exc}", file=sys.stderr)
        return EXIT_INFRA
    defaults = _build_job_config(args)
    studio = Studio(
        font_bytes,
        out_dir=args.out,
        backend_config=_backend_config(args),
        stylize_endpoint=args.stylize_endpoint or os.environ.get("WORDART_STYLIZE_ENDPOINT"),
        texture_endpoint=args.texture_endpoint or os.environ.get("WORDART_TEXTURE_ENDPOINT"),
        defaults=defaults,
        max_workers=args.workers,
    )
    app = create_app(studio, ui_dir=args.ui)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return EXIT_DONE


def _add_job_flags(p: argparse.ArgumentParser):
    p.add_argument("--request", help="free-form design request text")
    p.add_argument("--text", help="characters to transform")
    p.add_argument("--concept", help="semantic concept (used when --request is absent)")
    p.add_argument("--domain", help="application domain")
    p.add_argument("--k", type=int, default=1, help="required qualified candidates")
    p.add_argument("--max-restarts", type=int, default=2)
    p.add_argument("--seeds-per-attempt", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tau", type=float, default=None, help="qualification threshold")
    p.add_argument("--canvas", type=int, default=256)
    p.add_argument("--min-points", type=int, default=60)
    p.add_argument("--condition", default="scribble", choices=("canny", "depth", "scribble"))
    p.add_argument("--workers", type=int, default=2)
    p.add_argument("--iterations", type=int, default=500)
    p.add_argument("--learning-rate", type=float, default=0.5)
    p.add_argument("--crops", type=int, default=4)
    p.add_argument("--crop-px", type=int, default=192)
    p.add_argument("--frame-stride", type=int, default=50)
    p.add_argument("--region-min-len", type=int, default=None)
    p.add_argument("--region-max-len", type=int, default=None)
    p.add_argument("--presplit-px", type=float, default=20.0)
    p.add_argument("--backend", default="mock", choices=("mock", "replay", "http"))
    p.add_argument("--fixtures", help="replay fixture file")
    p.add_argument("--llm-endpoint", help="chat backend URL (or WORDART_LLM_ENDPOINT)")
    p.add_argument("--stylize-endpoint", help="stylize provider URL")
    p.add_argument("--texture-endpoint", help="texture provider URL")
    p.add_argument("--max-retries", type=int, default=2)
    p.add_argument("--config", help="JSON config file; overrides flags")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="wordart", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one design job end to end")
    p_run.add_argument("--font", required=True)
    p_run.add_argument("--out", default="runs")
    p_run.add_argument("--quiet", action="store_true")
    _add_job_flags(p_run)
    p_run.set_defaults(func=cmd_run)

    p_eval = sub.add_parser("eval-ranker", help="Top-X evaluation on a labeled dataset")
    p_eval.add_argument("--dataset", required=True)
    p_eval.add_argument("--font", help="font for reference renders (heuristic scoring)")
    p_eval.add_argument("--top", default="1,2,5,10")
    p_eval.add_argument("--iterations", type=int, default=10_000)
    p_eval.add_argument("--seed", type=int, default=0)
    p_eval.add_argument("--json-out")
    p_eval.add_argument(
        "--use-labels-as-scores",
        action="store_true",
        help="oracle mode: score = label (for harness checks)",
    )
    p_eval.set_defaults(func=cmd_eval_ranker)

    p_frames = sub.add_parser("render-frames", help="re-render frames from a run directory")
    p_frames.add_argument("--run", required=True)
    p_frames.add_argument("--canvas", type=int, default=None)
    p_frames.add_argument("--softness", type=float, default=1.0)
    p_frames.set_defaults(func=cmd_render_frames)

    p_serve = sub.add_parser("serve", help="start the studio HTTP service")
    p_serve.add_argument("--font", required=True)
    p_serve.add_argument("--out", default="runs")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8788)
    p_serve.add_argument("--ui", help="static UI bundle directory")
    _add_job_flags(p_serve)
    p_serve.set_defaults(func=cmd_serve)

    args = parser.parse_args(argv)
    _apply_config_file(args, parser)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
