"""The semantic optimization loop: render, crop, guide, localize, adjoint,
mask, step. Coordinates outside the selected region are bit-identical before
and after, and runs are deterministic per (seed, config).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import NonFiniteLoss
from ..glyph.geometry import ParameterVector
from ..raster.crops import crop_adjoint, crop_augment
from ..raster.render import render_with_context
from ..raster.types import RasterConfig, RasterImage
from .region import RegionSelection, localize_crop_grads, mask_gradient


@dataclass(frozen=True)
class OptimizationConfig:
    iterations: int = 500
    learning_rate: float = 0.5
    optimizer: str = "adam"          # "adam" | "sgd"
    crop_count: int = 4
    crop_px: int = 192
    canvas_px: int = 256
    sigma_start: float = 2.0
    sigma_end: float = 0.8
    seed: int = 0
    loss_locality_dilation: float = 20.0
    frame_stride: int = 50

    def __post_init__(self):
        if self.iterations < 0:
            raise ValueError("iterations must be >= 0")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be > 0")
        if self.optimizer not in ("adam", "sgd"):
            raise ValueError(f"unknown optimizer {self.optimizer!r}")


@dataclass
class TrajectoryPoint:
    iteration: int
    loss: float
    params: np.ndarray
    frame: RasterImage | None = None


@dataclass
class Trajectory:
    points: list[TrajectoryPoint] = field(default_factory=list)

    def losses(self) -> np.ndarray:
        return np.array([p.loss for p in self.points])

    def frames(self) -> list[tuple[int, RasterImage]]:
        return [(p.iteration, p.frame) for p in self.points if p.frame is not None]


class _Adam:
    def __init__(self, lr: float, n: int):
        self.lr = lr
        self.b1, self.b2, self.eps = 0.9, 0.999, 1e-8
        self.m = np.zeros(n)
        self.v = np.zeros(n)
        self.t = 0

    def step(self, g: np.ndarray) -> np.ndarray:
        self.t += 1
        self.m = self.b1 * self.m + (1 - self.b1) * g
        self.v = self.b2 * self.v + (1 - self.b2) * g * g
        m_hat = self.m / (1 - self.b1**self.t)
        v_hat = self.v / (1 - self.b2**self.t)
        return -self.lr * m_hat / (np.sqrt(v_hat) + self.eps)


class _Sgd:
    def __init__(self, lr: float, n: int):
        self.lr = lr

    def step(self, g: np.ndarray) -> np.ndarray:
        return -self.lr * g


def _sigma_at(cfg: OptimizationConfig, i: int) -> float:
    if cfg.iterations <= 1:
        return cfg.sigma_start
    f = i / (cfg.iterations - 1)
    return cfg.sigma_start + (cfg.sigma_end - cfg.sigma_start) * f


def optimize(
    params: ParameterVector,
    region: RegionSelection,
    guidance,
    cfg: OptimizationConfig,
    on_iteration=None,
) -> tuple[ParameterVector, Trajectory]:
    """Run the loop and return (final params, trajectory).

    `guidance.gradient(crops, iteration, rng_seed)` must return
    (GuidanceGrad, loss). `on_iteration(i, loss, frame_or_none)` is an
    optional progress hook.
    """
    current = params.copy()
    trajectory = Trajectory()
    if cfg.iterations == 0:
        return current, trajectory

    movable = region.movable_mask
    opt_cls = _Adam if cfg.optimizer == "adam" else _Sgd
    opt = opt_cls(cfg.learning_rate, int(movable.sum()))
    seeds = np.random.default_rng(cfg.seed)
    last_good = current.values.copy()

    for i in range(cfg.iterations):
        crop_seed = int(seeds.integers(0, 2**63 - 1))
        guide_seed = int(seeds.integers(0, 2**63 - 1))
        raster_cfg = RasterConfig(
            cfg.canvas_px, cfg.canvas_px, edge_softness=_sigma_at(cfg, i)
        )
        img, ctx = render_with_context(current, raster_cfg)
        batch = crop_augment(img, cfg.crop_count, cfg.crop_px, crop_seed)
        gg, loss = guidance.gradient(batch, i, guide_seed)
        if not np.isfinite(loss):
            raise NonFiniteLoss(
                f"loss became non-finite at iteration {i}",
                snapshot=ParameterVector(last_good, current.index_map),
                trajectory=trajectory,
            )
        localized = localize_crop_grads(
            gg.per_crop, batch, region, current, cfg.loss_locality_dilation
        )
        upstream = crop_adjoint(batch, localized)
        adj = ctx.backprop(upstream)
        g = mask_gradient(adj, region).grad
        delta = opt.step(g[movable])
        current.values[movable] += delta
        if not np.all(np.isfinite(current.values)):
            raise NonFiniteLoss(
                f"parameters became non-finite at iteration {i}",
                snapshot=ParameterVector(last_good, current.index_map),
                trajectory=trajectory,
            )
        last_good = current.values.copy()
        frame = img if (i % cfg.frame_stride == 0 or i == cfg.iterations - 1) else None
        trajectory.points.append(
            TrajectoryPoint(iteration=i, loss=float(loss), params=current.values.copy(), frame=frame)
        )
        if on_iteration is not None:
            on_iteration(i, float(loss), frame)
    return current, trajectory
