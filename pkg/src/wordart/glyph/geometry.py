"""Glyph outline domain model: contours of cubic segments and the flat
trainable parameter vector over their distinct control points.

Closure and C0 continuity are exact (shared endpoints are the same float
values), and parameterize/reconstruct round-trips bit-exactly: a shared
on-curve endpoint is stored once and drives both adjacent segments.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

import numpy as np

from ..errors import DegenerateBBox, InvalidGeometry, InvalidParameter
from . import bezier


class Point2(NamedTuple):
    x: float
    y: float


class Orientation(Enum):
    CLOCKWISE = "clockwise"
    COUNTERCLOCKWISE = "counterclockwise"


@dataclass(frozen=True)
class CubicSegment:
    p0: Point2
    p1: Point2
    p2: Point2
    p3: Point2

    def as_array(self) -> np.ndarray:
        return np.array([self.p0, self.p1, self.p2, self.p3], dtype=np.float64)

    @staticmethod
    def from_array(a) -> "CubicSegment":
        return CubicSegment(
            Point2(float(a[0][0]), float(a[0][1])),
            Point2(float(a[1][0]), float(a[1][1])),
            Point2(float(a[2][0]), float(a[2][1])),
            Point2(float(a[3][0]), float(a[3][1])),
        )

    @property
    def degenerate(self) -> bool:
        return self.p0 == self.p3


@dataclass(frozen=True)
class Contour:
    segments: tuple[CubicSegment, ...]
    orientation: Orientation

    @staticmethod
    def closed(segments) -> "Contour":
        """Build a contour, validating closure and computing orientation."""
        segments = tuple(segments)
        if len(segments) < 2:
            raise InvalidGeometry(f"contour needs >= 2 segments, got {len(segments)}")
        for a, b in zip(segments, segments[1:] + segments[:1]):
            if a.p3 != b.p0:
                raise InvalidGeometry(f"contour not continuous: {a.p3} != {b.p0}")
        return Contour(segments, _orientation(segments))

    def point_count(self) -> int:
        """Distinct control points: 3 per segment (p3 shared with the next p0)."""
        return 3 * len(self.segments)


def _orientation(segments) -> Orientation:
    area = 0.0
    for seg in segments:
        pts = bezier.flatten_cubic(seg.as_array(), 24)
        x, y = pts[:, 0], pts[:, 1]
        area += float(np.sum(x[:-1] * y[1:] - x[1:] * y[:-1]))
    return Orientation.COUNTERCLOCKWISE if area > 0 else Orientation.CLOCKWISE


@dataclass(frozen=True)
class GlyphOutline:
    contours: tuple[Contour, ...]
    codepoint: int
    units_per_em: int
    advance_width: float
    bbox: tuple[Point2, Point2]

    @staticmethod
    def build(contours, codepoint: int, units_per_em: int, advance_width: float) -> "GlyphOutline":
        contours = tuple(contours)
        if contours:
            pts = np.concatenate([seg.as_array() for c in contours for seg in c.segments])
            lo = Point2(float(pts[:, 0].min()), float(pts[:, 1].min()))
            hi = Point2(float(pts[:, 0].max()), float(pts[:, 1].max()))
        else:
            lo = hi = Point2(0.0, 0.0)
        return GlyphOutline(contours, codepoint, units_per_em, advance_width, (lo, hi))

    def is_empty(self) -> bool:
        return not self.contours

    def segment_arrays(self) -> np.ndarray:
        """All segments stacked as (n, 4, 2); empty outline gives (0, 4, 2)."""
        segs = [seg.as_array() for c in self.contours for seg in c.segments]
        if not segs:
            return np.zeros((0, 4, 2))
        return np.stack(segs)


# --- flat parameterization -------------------------------------------------

PointRole = tuple[int, int, str]  # (contour index, segment index, "p0".."p3")


@dataclass(frozen=True)
class IndexMap:
    """Structure needed to rebuild an outline from the flat vector.

    segment_counts[i] is the number of cubics in contour i; distinct points
    are laid out contour-major as [s0.p0, s0.p1, s0.p2, s1.p0, ...] and
    entries[k] lists every (contour, segment, role) slot point k occupies.
    """
    segment_counts: tuple[int, ...]
    codepoint: int
    units_per_em: int
    advance_width: float
    entries: tuple[tuple[PointRole, ...], ...]

    @property
    def point_count(self) -> int:
        return sum(3 * n for n in self.segment_counts)

    def contour_point_range(self, contour_index: int) -> tuple[int, int]:
        start = sum(3 * n for n in self.segment_counts[:contour_index])
        return start, start + 3 * self.segment_counts[contour_index]


@dataclass
class ParameterVector:
    """The optimization variable: (x, y) interleaved over distinct points."""
    values: np.ndarray
    index_map: IndexMap

    def copy(self) -> "ParameterVector":
        return ParameterVector(self.values.copy(), self.index_map)

    def points(self) -> np.ndarray:
        return self.values.reshape(-1, 2)


def parameterize(outline: GlyphOutline) -> ParameterVector:
    values: list[float] = []
    entries: list[tuple[PointRole, ...]] = []
    counts = []
    for ci, contour in enumerate(outline.contours):
        n = len(contour.segments)
        counts.append(n)
        for sj, seg in enumerate(contour.segments):
            prev = (sj - 1) % n
            values.extend(seg.p0)
            entries.append(((ci, sj, "p0"), (ci, prev, "p3")))
            values.extend(seg.p1)
            entries.append(((ci, sj, "p1"),))
            values.extend(seg.p2)
            entries.append(((ci, sj, "p2"),))
    index_map = IndexMap(
        segment_counts=tuple(counts),
        codepoint=outline.codepoint,
        units_per_em=outline.units_per_em,
        advance_width=outline.advance_width,
        entries=tuple(entries),
    )
    return ParameterVector(np.array(values, dtype=np.float64), index_map)


def reconstruct(params: ParameterVector) -> GlyphOutline:
    values = np.asarray(params.values, dtype=np.float64)
    im = params.index_map
    if values.shape != (2 * im.point_count,):
        raise InvalidGeometry(
            f"parameter vector length {values.shape} does not match index map "
            f"({2 * im.point_count} expected)"
        )
    if not np.all(np.isfinite(values)):
        raise InvalidGeometry("parameter vector contains non-finite values")
    pts = values.reshape(-1, 2)
    contours = []
    base = 0
    for n in im.segment_counts:
        block = pts[base : base + 3 * n]
        segs = []
        for j in range(n):
            p0 = Point2(float(block[3 * j, 0]), float(block[3 * j, 1]))
            p1 = Point2(float(block[3 * j + 1, 0]), float(block[3 * j + 1, 1]))
            p2 = Point2(float(block[3 * j + 2, 0]), float(block[3 * j + 2, 1]))
            nxt = (3 * (j + 1)) % (3 * n)
            p3 = Point2(float(block[nxt, 0]), float(block[nxt, 1]))
            segs.append(CubicSegment(p0, p1, p2, p3))
        contours.append(Contour.closed(segs))
        base += 3 * n
    return GlyphOutline.build(contours, im.codepoint, im.units_per_em, im.advance_width)


# --- operations --------------------------------------------------------------

def elevate_quadratic(q0: Point2, q1: Point2, q2: Point2) -> CubicSegment:
    """Exact degree elevation of a quadratic to a cubic."""
    return CubicSegment.from_array(bezier.elevate_quadratic_points(q0, q1, q2))


def subdivide_segment(seg: CubicSegment, t: float) -> tuple[CubicSegment, CubicSegment]:
    """De Casteljau split; the halves trace the original exactly."""
    if not (0.0 < t < 1.0):
        raise InvalidParameter(f"split parameter must be in (0,1), got {t}")
    left, right = bezier.split_cubic(seg.as_array(), t)
    return CubicSegment.from_array(left), CubicSegment.from_array(right)


def rebalance_control_points(outline: GlyphOutline, min_points: int) -> GlyphOutline:
    """Subdivide the longest segment at t=0.5 until the distinct control-point
    count reaches min_points. Never merges; geometry is unchanged.
    """
    if outline.is_empty():
        return outline
    contours = [list(c.segments) for c in outline.contours]

    def total_points():
        return sum(3 * len(segs) for segs in contours)

    while total_points() < min_points:
        best = None
        best_len = -1.0
        for ci, segs in enumerate(contours):
            for sj, seg in enumerate(segs):
                length = bezier.cubic_arc_length(seg.as_array())
                if length > best_len:
                    best_len = length
                    best = (ci, sj)
        ci, sj = best
        left, right = subdivide_segment(contours[ci][sj], 0.5)
        contours[ci][sj : sj + 1] = [left, right]
    if total_points() == sum(3 * len(c.segments) for c in outline.contours):
        return outline
    return GlyphOutline.build(
        [Contour.closed(segs) for segs in contours],
        outline.codepoint,
        outline.units_per_em,
        outline.advance_width,
    )


def presplit_long_segments(outline: GlyphOutline, threshold: float) -> GlyphOutline:
    """Halve every segment whose flattened length exceeds threshold, repeatedly."""
    if outline.is_empty():
        return outline
    changed = False
    contours = []
    for c in outline.contours:
        segs = list(c.segments)
        i = 0
        while i < len(segs):
            if bezier.cubic_arc_length(segs[i].as_array()) > threshold:
                left, right = subdivide_segment(segs[i], 0.5)
                segs[i : i + 1] = [left, right]
                changed = True
            else:
                i += 1
        contours.append(Contour.closed(segs))
    if not changed:
        return outline
    return GlyphOutline.build(
        contours, outline.codepoint, outline.units_per_em, outline.advance_width
    )


def normalize_outline(outline: GlyphOutline, canvas_px: int) -> GlyphOutline:
    """Map the em box into the canvas with a 5% margin, y flipped to image
    convention (origin top-left). Uniform scale, so aspect is preserved.
    """
    if canvas_px < 8:
        raise InvalidParameter(f"canvas_px must be >= 8, got {canvas_px}")
    if outline.is_empty():
        return outline
    lo, hi = outline.bbox
    if hi.x - lo.x == 0.0 and hi.y - lo.y == 0.0:
        raise DegenerateBBox(f"outline for U+{outline.codepoint:04X} has zero-area bbox")
    margin = 0.05 * canvas_px
    scale = (canvas_px - 2.0 * margin) / outline.units_per_em

    def tx(p: Point2) -> Point2:
        return Point2(margin + p.x * scale, canvas_px - margin - p.y * scale)

    contours = [
        Contour.closed(
            [CubicSegment(tx(s.p0), tx(s.p1), tx(s.p2), tx(s.p3)) for s in c.segments]
        )
        for c in outline.contours
    ]
    return GlyphOutline.build(
        contours, outline.codepoint, outline.units_per_em, outline.advance_width * scale
    )


def normalize_transform(outline: GlyphOutline, canvas_px: int):
    """(scale, offset_x, offset_y) of normalize_outline, and the inverse map."""
    margin = 0.05 * canvas_px
    scale = (canvas_px - 2.0 * margin) / outline.units_per_em

    def forward(x, y):
        return margin + x * scale, canvas_px - margin - y * scale

    def inverse(px, py):
        return (px - margin) / scale, (canvas_px - margin - py) / scale

    return scale, forward, inverse
