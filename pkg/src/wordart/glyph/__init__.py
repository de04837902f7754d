from .geometry import (
    Contour,
    CubicSegment,
    GlyphOutline,
    IndexMap,
    Orientation,
    ParameterVector,
    Point2,
    elevate_quadratic,
    normalize_outline,
    parameterize,
    presplit_long_segments,
    rebalance_control_points,
    reconstruct,
    subdivide_segment,
)
from .svg import outline_to_path, outline_to_svg
from .ttf import TrueTypeFont, load_glyph

__all__ = [
    "Contour",
    "CubicSegment",
    "GlyphOutline",
    "IndexMap",
    "Orientation",
    "ParameterVector",
    "Point2",
    "TrueTypeFont",
    "elevate_quadratic",
    "load_glyph",
    "normalize_outline",
    "outline_to_path",
    "outline_to_svg",
    "parameterize",
    "presplit_long_segments",
    "rebalance_control_points",
    "reconstruct",
    "subdivide_segment",
]
