"""Stylize/texture request-response types shared by mock and HTTP providers."""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import numpy as np

from ..errors import InvalidParameter
from ..raster.types import RasterImage

CONDITIONS = ("canny", "depth", "scribble")


@dataclass(frozen=True)
class StylizeRequest:
    image: RasterImage            # the semantic layout render
    prompt: str
    strength: float = 0.8         # provider-side denoising strength knob
    seed: int = 0

    def __post_init__(self):
        if not self.prompt or not self.prompt.strip():
            raise InvalidParameter("stylize prompt must be non-empty")
        if not 0.0 <= self.strength <= 1.0:
            raise InvalidParameter("strength must be in [0, 1]")

    def digest(self) -> str:
        h = hashlib.sha256()
        h.update(b"stylize")
        h.update(np.ascontiguousarray(self.image.pixels).tobytes())
        h.update(str(self.image.pixels.shape).encode())
        h.update(self.prompt.encode("utf-8"))
        h.update(np.float64(self.strength).tobytes())
        h.update(int(self.seed).to_bytes(8, "little", signed=True))
        return h.hexdigest()


@dataclass(frozen=True)
class TextureRequest:
    image: RasterImage            # the stylized image, as grayscale coverage
    prompt: str
    condition: str = "scribble"
    original_font_image: RasterImage | None = None
    seed: int = 0

    def __post_init__(self):
        if not self.prompt or not self.prompt.strip():
            raise InvalidParameter("texture prompt must be non-empty")
        if self.condition not in CONDITIONS:
            raise InvalidParameter(
                f"condition must be one of {CONDITIONS}, got {self.condition!r}"
            )

    def digest(self) -> str:
        h = hashlib.sha256()
        h.update(b"texture")
        h.update(np.ascontiguousarray(self.image.pixels).tobytes())
        h.update(str(self.image.pixels.shape).encode())
        h.update(self.prompt.encode("utf-8"))
        h.update(self.condition.encode())
        if self.original_font_image is not None:
            h.update(np.ascontiguousarray(self.original_font_image.pixels).tobytes())
        h.update(int(self.seed).to_bytes(8, "little", signed=True))
        return h.hexdigest()


@dataclass
class RenderedImage:
    pixels: np.ndarray            # (h, w, 3) uint8
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        self.pixels = np.asarray(self.pixels, dtype=np.uint8)
        if self.pixels.ndim != 3 or self.pixels.shape[2] != 3:
            raise InvalidParameter(f"expected (h, w, 3) RGB, got {self.pixels.shape}")

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    def luminance(self) -> np.ndarray:
        p = self.pixels.astype(np.float64) / 255.0
        return 0.299 * p[:, :, 0] + 0.587 * p[:, :, 1] + 0.114 * p[:, :, 2]
