from .crops import crop_adjoint, crop_augment
from .pngio import decode_png, decode_rgb_png, encode_png, encode_rgb_png
from .render import RenderContext, backprop, rasterize, render_with_context
from .sdf import OutlineField, signed_distance
from .types import AdjointResult, CropBatch, RasterConfig, RasterImage

__all__ = [
    "AdjointResult",
    "CropBatch",
    "OutlineField",
    "RasterConfig",
    "RasterImage",
    "RenderContext",
    "backprop",
    "crop_adjoint",
    "crop_augment",
    "decode_png",
    "decode_rgb_png",
    "encode_png",
    "encode_rgb_png",
    "rasterize",
    "render_with_context",
    "signed_distance",
]
