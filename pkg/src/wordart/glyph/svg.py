"""SVG path serialization of glyph outlines (absolute M/C/Z, 6 decimals)."""
from __future__ import annotations

from .geometry import GlyphOutline


def _fmt(v: float) -> str:
    return f"{v:.6f}"


def outline_to_path(outline: GlyphOutline) -> str:
    """One `d` attribute string covering every contour."""
    parts = []
    for contour in outline.contours:
        first = contour.segments[0]
        parts.append(f"M {_fmt(first.p0.x)} {_fmt(first.p0.y)}")
        for seg in contour.segments:
            parts.append(
                "C "
                + " ".join(
                    _fmt(v)
                    for v in (seg.p1.x, seg.p1.y, seg.p2.x, seg.p2.y, seg.p3.x, seg.p3.y)
                )
            )
        parts.append("Z")
    return " ".join(parts)


def outline_to_svg(outline: GlyphOutline, width: int, height: int, fill: str = "#000000") -> str:
    """Standalone SVG document with the outline as one nonzero-filled path."""
    d = outline_to_path(outline)
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">'
        f'<path d="{d}" fill="{fill}" fill-rule="nonzero"/></svg>'
    )
