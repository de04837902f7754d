"""Deterministic offline stylize/texture providers.

Outputs are pure functions of the request. The stylize chain (blur, seeded
value-noise modulation, prompt-hashed tint) is tuned to keep the input
silhouette: thresholding its luminance at 0.5 stays within IoU >= 0.8 of the
input coverage thresholded at 0.5.
"""
from __future__ import annotations

import hashlib

import numpy as np
from scipy.ndimage import gaussian_filter

from .types import RenderedImage, StylizeRequest, TextureRequest

PROVIDER_ID = "mock-v1"


def _prompt_rng(prompt: str, seed: int, salt: bytes) -> np.random.Generator:
    h = hashlib.sha256(salt + prompt.encode("utf-8") + seed.to_bytes(8, "little", signed=True))
    return np.random.default_rng(int.from_bytes(h.digest()[:8], "big"))


def _value_noise(rng, shape, cells=16, amplitude=0.15) -> np.ndarray:
    """Smooth multiplicative field in [1 - a, 1 + a]."""
    coarse = rng.uniform(-1.0, 1.0, (cells, cells))
    ys = np.linspace(0, cells - 1, shape[0])
    xs = np.linspace(0, cells - 1, shape[1])
    y0 = np.clip(ys.astype(int), 0, cells - 2)
    x0 = np.clip(xs.astype(int), 0, cells - 2)
    fy = (ys - y0)[:, None]
    fx = (xs - x0)[None, :]
    c00 = coarse[np.ix_(y0, x0)]
    c01 = coarse[np.ix_(y0, x0 + 1)]
    c10 = coarse[np.ix_(y0 + 1, x0)]
    c11 = coarse[np.ix_(y0 + 1, x0 + 1)]
    smooth = (
        c00 * (1 - fy) * (1 - fx)
        + c01 * (1 - fy) * fx
        + c10 * fy * (1 - fx)
        + c11 * fy * fx
    )
    return 1.0 + amplitude * smooth


def _tint(rng) -> np.ndarray:
    """Bright per-channel weights; saturation capped to keep ink above 0.5."""
    hue = rng.uniform(0.0, 1.0, 3)
    hue /= max(hue.max(), 1e-9)
    return 1.0 - 0.35 * (1.0 - hue)


class MockProvider:
    provider_id = PROVIDER_ID

    def stylize(self, req: StylizeRequest) -> RenderedImage:
        rng = _prompt_rng(req.prompt, req.seed, b"sty")
        ink = req.image.pixels
        blurred = gaussian_filter(ink, sigma=1.0, truncate=2.0)
        noise = _value_noise(rng, ink.shape)
        tint = _tint(rng)
        mono = np.clip(blurred * noise, 0.0, 1.0)
        rgb = np.clip(mono[:, :, None] * tint[None, None, :] * 255.0, 0, 255).astype(np.uint8)
        return RenderedImage(
            rgb,
            provenance={
                "provider_id": self.provider_id,
                "seed": req.seed,
                "request_digest": req.digest(),
            },
        )

    def texture(self, req: TextureRequest) -> RenderedImage:
        rng = _prompt_rng(req.prompt, req.seed, b"tex")
        ink_mask = req.image.pixels >= 0.5
        h, w = req.image.pixels.shape
        palette = rng.uniform(0.35, 1.0, (3, 3))
        background = rng.uniform(0.02, 0.10, 3)
        fieldmix = np.stack(
            [_value_noise(rng, (h, w), cells=12, amplitude=1.0) - 1.0 for _ in range(3)]
        )
        weights = np.exp(2.0 * fieldmix)
        weights /= weights.sum(axis=0, keepdims=True)
        textured = np.einsum("khw,kc->hwc", weights, palette)
        out = np.where(ink_mask[:, :, None], textured, background[None, None, :])
        rgb = np.clip(out * 255.0, 0, 255).astype(np.uint8)
        return RenderedImage(
            rgb,
            provenance={
                "provider_id": self.provider_id,
                "seed": req.seed,
                "condition": req.condition,
                "request_digest": req.digest(),
            },
        )
