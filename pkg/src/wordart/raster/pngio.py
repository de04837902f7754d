"""8-bit grayscale PNG persistence for coverage images."""
from __future__ import annotations

import io

import numpy as np
from PIL import Image

from .types import RasterImage


def encode_png(img: RasterImage) -> bytes:
    arr = np.clip(np.rint(img.pixels * 255.0), 0, 255).astype(np.uint8)
    buf = io.BytesIO()
    Image.fromarray(arr, mode="L").save(buf, format="PNG")
    return buf.getvalue()


def decode_png(data: bytes) -> RasterImage:
    with Image.open(io.BytesIO(data)) as im:
        arr = np.asarray(im.convert("L"), dtype=np.float64) / 255.0
    return RasterImage(arr)


def encode_rgb_png(pixels: np.ndarray) -> bytes:
    """(h, w, 3) uint8 -> PNG bytes."""
    buf = io.BytesIO()
    Image.fromarray(np.asarray(pixels, dtype=np.uint8), mode="RGB").save(buf, format="PNG")
    return buf.getvalue()


def decode_rgb_png(data: bytes) -> np.ndarray:
    with Image.open(io.BytesIO(data)) as im:
        return np.asarray(im.convert("RGB"), dtype=np.uint8)
