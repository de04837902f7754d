"""Seeded square crops of a render and their scatter-add adjoint."""
from __future__ import annotations

import numpy as np

from ..errors import CropTooLarge, ShapeMismatch
from .types import CropBatch, RasterImage


def crop_augment(img: RasterImage, n: int, crop_px: int, rng_seed: int) -> CropBatch:
    """n seeded-uniform square crops; positions are deterministic per seed."""
    if n < 1:
        raise ValueError(f"need n >= 1 crops, got {n}")
    if crop_px > min(img.width, img.height):
        raise CropTooLarge(
            f"crop {crop_px}px exceeds source {img.width}x{img.height}"
        )
    rng = np.random.default_rng(rng_seed)
    max_x = img.width - crop_px
    max_y = img.height - crop_px
    crops = []
    rects = []
    for _ in range(n):
        x = int(rng.integers(0, max_x + 1))
        y = int(rng.integers(0, max_y + 1))
        crops.append(RasterImage(img.pixels[y : y + crop_px, x : x + crop_px].copy()))
        rects.append((x, y, crop_px, crop_px))
    return CropBatch(crops=crops, crop_rects=rects, source_shape=(img.height, img.width))


def crop_adjoint(batch: CropBatch, upstreams: list[np.ndarray]) -> np.ndarray:
    """Scatter-add per-crop upstream gradients back onto the source image.

    A source pixel covered by several crops accumulates every covering crop's
    contribution.
    """
    if len(upstreams) != len(batch.crop_rects):
        raise ShapeMismatch(
            f"{len(upstreams)} upstreams for {len(batch.crop_rects)} crops"
        )
    out = np.zeros(batch.source_shape, dtype=np.float64)
    for up, (x, y, w, h) in zip(upstreams, batch.crop_rects):
        up = np.asarray(up, dtype=np.float64)
        if up.shape != (h, w):
            raise ShapeMismatch(f"upstream shape {up.shape} != crop shape {(h, w)}")
        out[y : y + h, x : x + w] += up
    return out
