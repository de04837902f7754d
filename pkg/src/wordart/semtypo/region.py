"""Region selection over control points and gradient/loss localization.

A region is one contiguous run of distinct control points (wrap-around
allowed) on a single contour; optimization may only move those points, and
the pixel loss is restricted to their dilated bounding box.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import EmptyOutline, RegionInfeasible, ShapeMismatch
from ..glyph.geometry import GlyphOutline, ParameterVector, presplit_long_segments
from ..raster.types import AdjointResult, CropBatch


@dataclass(frozen=True)
class RegionConfig:
    min_len: int | None = None       # explicit point counts win over fractions
    max_len: int | None = None
    min_frac: float = 0.25
    max_frac: float = 0.60
    presplit_threshold_px: float = 20.0


@dataclass
class RegionSelection:
    contour_index: int
    start_index: int                 # global distinct-point index
    length: int
    movable_mask: np.ndarray         # bool per parameter coordinate
    point_indices: np.ndarray        # global indices of the selected points

    @property
    def coordinate_count(self) -> int:
        return int(self.movable_mask.sum())


def full_region(params: ParameterVector) -> RegionSelection:
    """Every point movable; the degenerate case used by whole-glyph runs."""
    n = params.index_map.point_count
    return RegionSelection(
        contour_index=0,
        start_index=0,
        length=n,
        movable_mask=np.ones(2 * n, dtype=bool),
        point_indices=np.arange(n),
    )


def select_region(
    outline: GlyphOutline, rng_seed: int, cfg: RegionConfig = RegionConfig()
) -> tuple[GlyphOutline, RegionSelection]:
    """Pre-split long segments, then pick a seeded contiguous point run.

    Returns the pre-split outline together with the selection; the caller
    parameterizes that outline, not the original (splitting changes the
    point layout).
    """
    if outline.is_empty():
        raise EmptyOutline(f"U+{outline.codepoint:04X} has no contours to select from")
    split = presplit_long_segments(outline, cfg.presplit_threshold_px)
    counts = [c.point_count() for c in split.contours]
    total = sum(counts)
    if cfg.min_len is not None and cfg.min_len > total:
        raise RegionInfeasible(
            f"min_len {cfg.min_len} exceeds {total} points available after pre-split"
        )
    rng = np.random.default_rng(rng_seed)
    weights = np.array(counts, dtype=np.float64) / total
    ci = int(rng.choice(len(counts), p=weights))
    n = counts[ci]
    lo = cfg.min_len if cfg.min_len is not None else max(1, round(cfg.min_frac * n))
    hi = cfg.max_len if cfg.max_len is not None else max(1, round(cfg.max_frac * n))
    lo = min(lo, n)
    hi = max(lo, min(hi, n))
    length = int(rng.integers(lo, hi + 1))
    start_local = int(rng.integers(0, n))

    base = sum(counts[:ci])
    local = (start_local + np.arange(length)) % n
    point_indices = base + local
    mask = np.zeros(2 * total, dtype=bool)
    mask[2 * point_indices] = True
    mask[2 * point_indices + 1] = True
    return split, RegionSelection(
        contour_index=ci,
        start_index=int(base + start_local),
        length=length,
        movable_mask=mask,
        point_indices=point_indices,
    )


def mask_gradient(grad: AdjointResult, region: RegionSelection) -> AdjointResult:
    """Zero every coordinate outside the region's movable mask."""
    if grad.grad.shape != region.movable_mask.shape:
        raise ShapeMismatch(
            f"gradient has {grad.grad.shape[0]} coords, mask {region.movable_mask.shape[0]}"
        )
    return AdjointResult(np.where(region.movable_mask, grad.grad, 0.0), grad.index_map)


def region_box(region: RegionSelection, params: ParameterVector, dilation_px: float):
    """(x0, y0, x1, y1) covering the selected control points, dilated."""
    pts = params.points()[region.point_indices]
    return (
        float(pts[:, 0].min() - dilation_px),
        float(pts[:, 1].min() - dilation_px),
        float(pts[:, 0].max() + dilation_px),
        float(pts[:, 1].max() + dilation_px),
    )


def localize_loss(
    upstream: np.ndarray,
    region: RegionSelection,
    params: ParameterVector,
    dilation_px: float = 20.0,
    origin: tuple[float, float] = (0.0, 0.0),
) -> np.ndarray:
    """Zero the upstream outside the region's dilated bounding box.

    origin shifts the box into a crop's local frame ((x, y) of the crop in
    source pixels).
    """
    x0, y0, x1, y1 = region_box(region, params, dilation_px)
    x0 -= origin[0]
    x1 -= origin[0]
    y0 -= origin[1]
    y1 -= origin[1]
    h, w = upstream.shape
    cols = np.arange(w) + 0.5
    rows = np.arange(h) + 0.5
    keep = ((cols >= x0) & (cols <= x1))[None, :] & ((rows >= y0) & (rows <= y1))[:, None]
    return np.where(keep, upstream, 0.0)


def localize_crop_grads(
    grads: list[np.ndarray],
    batch: CropBatch,
    region: RegionSelection,
    params: ParameterVector,
    dilation_px: float = 20.0,
) -> list[np.ndarray]:
    return [
        localize_loss(g, region, params, dilation_px, origin=(rect[0], rect[1]))
        for g, rect in zip(grads, batch.crop_rects)
    ]
