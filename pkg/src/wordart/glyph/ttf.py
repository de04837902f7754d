"""Native TrueType outline reader: sfnt directory, cmap, loca, glyf, hmtx.

Only what glyph extraction needs. Quadratic on/off-curve runs are converted
to exact cubics on load (implied on-curve midpoints between consecutive
off-curve points are materialized first). Composite glyphs are resolved one
level deep; deeper nesting and CFF outlines are rejected.
"""
from __future__ import annotations

import struct
from dataclasses import dataclass

from ..errors import MalformedFont, MissingGlyph, UnsupportedOutlineFormat
from . import bezier
from .geometry import Contour, CubicSegment, GlyphOutline

_ON_CURVE = 0x01
_X_SHORT = 0x02
_Y_SHORT = 0x04
_REPEAT = 0x08
_X_SAME_OR_POS = 0x10
_Y_SAME_OR_POS = 0x20

_ARG_1_AND_2_ARE_WORDS = 0x0001
_ARGS_ARE_XY_VALUES = 0x0002
_WE_HAVE_A_SCALE = 0x0008
_MORE_COMPONENTS = 0x0020
_WE_HAVE_AN_X_AND_Y_SCALE = 0x0040
_WE_HAVE_A_TWO_BY_TWO = 0x0080


def _u16(data: bytes, off: int) -> int:
    return struct.unpack_from(">H", data, off)[0]


def _i16(data: bytes, off: int) -> int:
    return struct.unpack_from(">h", data, off)[0]


def _u32(data: bytes, off: int) -> int:
    return struct.unpack_from(">I", data, off)[0]


@dataclass
class _Tables:
    data: bytes
    directory: dict[str, tuple[int, int]]  # tag -> (offset, length)

    def get(self, tag: str) -> bytes:
        if tag not in self.directory:
            raise MalformedFont(f"font has no '{tag}' table")
        off, length = self.directory[tag]
        if off + length > len(self.data):
            raise MalformedFont(f"'{tag}' table extends past end of file")
        return self.data[off : off + length]


def _read_directory(data: bytes) -> _Tables:
    if len(data) < 12:
        raise MalformedFont("file too short for an sfnt header")
    version = _u32(data, 0)
    if version == 0x4F54544F:  # 'OTTO'
        raise UnsupportedOutlineFormat("CFF-outline (OpenType/OTTO) fonts are not supported")
    if version not in (0x00010000, 0x74727565):  # 1.0 or 'true'
        raise MalformedFont(f"unrecognized sfnt version 0x{version:08X}")
    num_tables = _u16(data, 4)
    directory = {}
    for i in range(num_tables):
        rec = 12 + 16 * i
        if rec + 16 > len(data):
            raise MalformedFont("table directory truncated")
        tag = data[rec : rec + 4].decode("latin-1")
        offset = _u32(data, rec + 8)
        length = _u32(data, rec + 12)
        directory[tag] = (offset, length)
    return _Tables(data, directory)


# --- cmap -------------------------------------------------------------------

def _parse_cmap(table: bytes) -> dict[int, int]:
    """Best unicode subtable as a codepoint -> glyph id dict."""
    if len(table) < 4:
        raise MalformedFont("cmap too short")
    n = _u16(table, 2)
    candidates = {}
    for i in range(n):
        rec = 4 + 8 * i
        plat = _u16(table, rec)
        enc = _u16(table, rec + 2)
        off = _u32(table, rec + 4)
        candidates[(plat, enc)] = off
    for key in ((3, 10), (0, 4), (0, 6), (3, 1), (0, 3), (0, 2), (0, 1), (0, 0)):
        if key in candidates:
            return _parse_cmap_subtable(table, candidates[key])
    raise MalformedFont(f"no usable unicode cmap subtable among {sorted(candidates)}")


def _parse_cmap_subtable(table: bytes, off: int) -> dict[int, int]:
    fmt = _u16(table, off)
    mapping: dict[int, int] = {}
    if fmt == 4:
        seg_x2 = _u16(table, off + 6)
        seg = seg_x2 // 2
        ends = [_u16(table, off + 14 + 2 * i) for i in range(seg)]
        starts = [_u16(table, off + 16 + seg_x2 + 2 * i) for i in range(seg)]
        deltas = [_i16(table, off + 16 + 2 * seg_x2 + 2 * i) for i in range(seg)]
        range_off_base = off + 16 + 3 * seg_x2
        range_offs = [_u16(table, range_off_base + 2 * i) for i in range(seg)]
        for i in range(seg):
            if starts[i] > ends[i]:
                continue
            for code in range(starts[i], ends[i] + 1):
                if code == 0xFFFF:
                    continue
                if range_offs[i] == 0:
                    gid = (code + deltas[i]) & 0xFFFF
                else:
                    idx = range_off_base + 2 * i + range_offs[i] + 2 * (code - starts[i])
                    if idx + 2 > len(table):
                        continue
                    gid = _u16(table, idx)
                    if gid != 0:
                        gid = (gid + deltas[i]) & 0xFFFF
                if gid != 0:
                    mapping[code] = gid
    elif fmt == 12:
        n_groups = _u32(table, off + 12)
        for g in range(n_groups):
            rec = off + 16 + 12 * g
            start = _u32(table, rec)
            end = _u32(table, rec + 4)
            gid0 = _u32(table, rec + 8)
            for code in range(start, end + 1):
                mapping[code] = gid0 + (code - start)
    elif fmt == 6:
        first = _u16(table, off + 6)
        count = _u16(table, off + 8)
        for i in range(count):
            gid = _u16(table, off + 10 + 2 * i)
            if gid != 0:
                mapping[first + i] = gid
    elif fmt == 0:
        for code in range(256):
            gid = table[off + 6 + code]
            if gid != 0:
                mapping[code] = gid
    else:
        raise MalformedFont(f"cmap subtable format {fmt} not supported")
    return mapping


# --- glyf -------------------------------------------------------------------

@dataclass
class _RawGlyph:
    """Expanded quadratic point data for one glyph, components applied."""
    points: list[list[tuple[float, float, bool]]]  # per contour: (x, y, on)


def _parse_simple_glyph(data: bytes, n_contours: int) -> _RawGlyph:
    end_pts = [_u16(data, 10 + 2 * i) for i in range(n_contours)]
    n_points = end_pts[-1] + 1 if end_pts else 0
    instr_len = _u16(data, 10 + 2 * n_contours)
    p = 12 + 2 * n_contours + instr_len

    flags = []
    while len(flags) < n_points:
        if p >= len(data):
            raise MalformedFont("glyf flags truncated")
        flag = data[p]
        p += 1
        flags.append(flag)
        if flag & _REPEAT:
            rep = data[p]
            p += 1
            flags.extend([flag] * rep)
    if len(flags) != n_points:
        raise MalformedFont("glyf flag count mismatch")

    xs = []
    x = 0
    for flag in flags:
        if flag & _X_SHORT:
            dx = data[p]
            p += 1
            x += dx if flag & _X_SAME_OR_POS else -dx
        elif not flag & _X_SAME_OR_POS:
            x += _i16(data, p)
            p += 2
        xs.append(x)
    ys = []
    y = 0
    for flag in flags:
        if flag & _Y_SHORT:
            dy = data[p]
            p += 1
            y += dy if flag & _Y_SAME_OR_POS else -dy
        elif not flag & _Y_SAME_OR_POS:
            y += _i16(data, p)
            p += 2
        ys.append(y)

    contours = []
    start = 0
    for end in end_pts:
        contours.append(
            [(float(xs[i]), float(ys[i]), bool(flags[i] & _ON_CURVE)) for i in range(start, end + 1)]
        )
        start = end + 1
    return _RawGlyph(contours)


def _parse_composite_glyph(data: bytes, loader, depth: int) -> _RawGlyph:
    contours: list[list[tuple[float, float, bool]]] = []
    p = 10
    more = True
    while more:
        flags = _u16(data, p)
        glyph_index = _u16(data, p + 2)
        p += 4
        if flags & _ARG_1_AND_2_ARE_WORDS:
            arg1, arg2 = struct.unpack_from(">hh", data, p)
            p += 4
        else:
            arg1, arg2 = struct.unpack_from(">bb", data, p)
            p += 2
        if not flags & _ARGS_ARE_XY_VALUES:
            raise UnsupportedOutlineFormat("point-matching composite arguments not supported")
        a = d = 1.0
        b = c = 0.0
        if flags & _WE_HAVE_A_SCALE:
            a = d = _f2dot14(data, p)
            p += 2
        elif flags & _WE_HAVE_AN_X_AND_Y_SCALE:
            a = _f2dot14(data, p)
            d = _f2dot14(data, p + 2)
            p += 4
        elif flags & _WE_HAVE_A_TWO_BY_TWO:
            a = _f2dot14(data, p)
            b = _f2dot14(data, p + 2)
            c = _f2dot14(data, p + 4)
            d = _f2dot14(data, p + 6)
            p += 8
        component = loader(glyph_index, depth + 1)
        for contour in component.points:
            contours.append(
                [
                    (a * x + c * y + arg1, b * x + d * y + arg2, on)
                    for (x, y, on) in contour
                ]
            )
        more = bool(flags & _MORE_COMPONENTS)
    return _RawGlyph(contours)


def _f2dot14(data: bytes, off: int) -> float:
    return _i16(data, off) / 16384.0


# --- quadratic runs -> cubic contours ----------------------------------------

def _contour_to_cubics(points: list[tuple[float, float, bool]]) -> list[CubicSegment] | None:
    """Convert one TrueType contour to closed cubic segments.

    Returns None for contours that carry no area (fewer than 2 distinct
    points), which some fonts emit for anchors.
    """
    pts = [(x, y, on) for (x, y, on) in points]
    if len(pts) < 2:
        return None
    if not any(on for (_, _, on) in pts):
        # All off-curve: every midpoint is an implied on-curve point.
        mid = (
            (pts[-1][0] + pts[0][0]) / 2.0,
            (pts[-1][1] + pts[0][1]) / 2.0,
            True,
        )
        pts = [mid] + pts
    else:
        while not pts[0][2]:
            pts = pts[1:] + pts[:1]

    # Materialize implied on-curve midpoints between consecutive off-curve points.
    expanded: list[tuple[float, float, bool]] = []
    for i, cur in enumerate(pts):
        expanded.append(cur)
        nxt = pts[(i + 1) % len(pts)]
        if not cur[2] and not nxt[2]:
            expanded.append(((cur[0] + nxt[0]) / 2.0, (cur[1] + nxt[1]) / 2.0, True))

    segments: list[CubicSegment] = []
    n = len(expanded)
    i = 0
    while i < n:
        cur = expanded[i]
        nxt = expanded[(i + 1) % n]
        assert cur[2], "walk must start each piece on-curve"
        if nxt[2]:
            if (cur[0], cur[1]) != (nxt[0], nxt[1]):
                segments.append(
                    CubicSegment.from_array(
                        bezier.line_as_cubic((cur[0], cur[1]), (nxt[0], nxt[1]))
                    )
                )
            i += 1
        else:
            after = expanded[(i + 2) % n]
            assert after[2], "implied midpoints guarantee on/off alternation"
            segments.append(
                CubicSegment.from_array(
                    bezier.elevate_quadratic_points(
                        (cur[0], cur[1]), (nxt[0], nxt[1]), (after[0], after[1])
                    )
                )
            )
            i += 2
    if len(segments) == 1:
        left, right = bezier.split_cubic(segments[0].as_array(), 0.5)
        segments = [CubicSegment.from_array(left), CubicSegment.from_array(right)]
    if not segments:
        return None
    return segments


# --- font -------------------------------------------------------------------

class TrueTypeFont:
    """Parsed tables of one TrueType font, ready for glyph extraction."""

    def __init__(self, font_bytes: bytes):
        try:
            tables = _read_directory(font_bytes)
            if "glyf" not in tables.directory:
                if "CFF " in tables.directory or "CFF2" in tables.directory:
                    raise UnsupportedOutlineFormat("font has CFF outlines, not glyf")
                raise MalformedFont("font has no glyf table")
            head = tables.get("head")
            self.units_per_em = _u16(head, 18)
            if self.units_per_em == 0:
                raise MalformedFont("unitsPerEm is zero")
            index_to_loc = _i16(head, 50)
            maxp = tables.get("maxp")
            self.num_glyphs = _u16(maxp, 4)
            self.cmap = _parse_cmap(tables.get("cmap"))
            loca = tables.get("loca")
            if index_to_loc == 0:
                self._loca = [
                    _u16(loca, 2 * i) * 2 for i in range(self.num_glyphs + 1)
                ]
            else:
                self._loca = [_u32(loca, 4 * i) for i in range(self.num_glyphs + 1)]
            self._glyf = tables.get("glyf")
            hhea = tables.get("hhea")
            num_h_metrics = _u16(hhea, 34)
            hmtx = tables.get("hmtx")
            self._advances = [_u16(hmtx, 4 * i) for i in range(num_h_metrics)]
        except struct.error as exc:
            raise MalformedFont(f"table parse failure: {exc}") from exc

    def glyph_id(self, codepoint: int) -> int:
        if codepoint not in self.cmap:
            raise MissingGlyph(f"U+{codepoint:04X} is not mapped in this font")
        return self.cmap[codepoint]

    def advance_width(self, glyph_id: int) -> float:
        if glyph_id < len(self._advances):
            return float(self._advances[glyph_id])
        return float(self._advances[-1]) if self._advances else 0.0

    def _glyph_data(self, glyph_id: int) -> bytes:
        if glyph_id + 1 >= len(self._loca):
            raise MalformedFont(f"glyph id {glyph_id} outside loca table")
        return self._glyf[self._loca[glyph_id] : self._loca[glyph_id + 1]]

    def _raw_glyph(self, glyph_id: int, depth: int = 0) -> _RawGlyph:
        if depth > 1:
            raise UnsupportedOutlineFormat(
                "composite glyphs nested deeper than one level are not supported"
            )
        data = self._glyph_data(glyph_id)
        if not data:
            return _RawGlyph([])
        n_contours = _i16(data, 0)
        if n_contours >= 0:
            return _parse_simple_glyph(data, n_contours)
        return _parse_composite_glyph(data, self._raw_glyph, depth)

    def outline(self, codepoint: int) -> GlyphOutline:
        gid = self.glyph_id(codepoint)
        raw = self._raw_glyph(gid)
        contours = []
        for contour_pts in raw.points:
            segs = _contour_to_cubics(contour_pts)
            if segs is not None:
                contours.append(Contour.closed(segs))
        return GlyphOutline.build(
            contours, codepoint, self.units_per_em, self.advance_width(gid)
        )


def load_glyph(font_bytes: bytes, codepoint: int) -> GlyphOutline:
    """Parse font_bytes and extract the closed cubic outline of codepoint."""
    return TrueTypeFont(font_bytes).outline(codepoint)
