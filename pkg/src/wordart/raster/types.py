"""Raster-side value types."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import InvalidParameter
from ..glyph.geometry import IndexMap


@dataclass
class RasterImage:
    """Grayscale soft-coverage image; pixels[row, col] in [0, 1], 1 = ink."""
    pixels: np.ndarray

    def __post_init__(self):
        self.pixels = np.asarray(self.pixels, dtype=np.float64)
        if self.pixels.ndim != 2:
            raise InvalidParameter(f"pixels must be 2-D, got shape {self.pixels.shape}")

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]


@dataclass(frozen=True)
class RasterConfig:
    width: int
    height: int
    edge_softness: float = 1.0
    fill_rule: str = "nonzero"
    supersample: int = 1

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise InvalidParameter("raster dimensions must be positive")
        if not self.edge_softness > 0.0:
            raise InvalidParameter("edge_softness must be > 0")
        if self.fill_rule != "nonzero":
            raise InvalidParameter(f"unsupported fill rule {self.fill_rule!r}")
        if self.supersample < 1:
            raise InvalidParameter("supersample must be >= 1")


@dataclass
class AdjointResult:
    """dLoss/dtheta, aligned with the source parameter vector."""
    grad: np.ndarray
    index_map: IndexMap

    def __post_init__(self):
        self.grad = np.asarray(self.grad, dtype=np.float64)


@dataclass
class CropBatch:
    """Equal-size crops of one source image plus their source rectangles."""
    crops: list[RasterImage]
    crop_rects: list[tuple[int, int, int, int]]  # (x, y, w, h) in source px
    source_shape: tuple[int, int] = field(default=(0, 0))  # (height, width)
