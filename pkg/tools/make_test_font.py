#!/usr/bin/env python3
"""Generate the deterministic TrueType test font bundled under tests/fonts/.

Shapes are synthetic but exercise the parser paths that matter: multi-contour
glyphs with holes, all-off-curve contours, consecutive off-curve runs with
implied midpoints, straight-line contours, a one-level composite, and a
two-level composite that readers are expected to reject.

Run from the repo root:  python tools/make_test_font.py
"""
import math
from pathlib import Path

from fontTools.fontBuilder import FontBuilder
from fontTools.pens.ttGlyphPen import TTGlyphPen

UPEM = 1000
ADVANCE = 600


def rect(pen, x0, y0, x1, y1, reverse=False):
    pts = [(x0, y0), (x1, y0), (x1, y1), (x0, y1)]
    if reverse:
        pts = pts[::-1]
    pen.moveTo(pts[0])
    for p in pts[1:]:
        pen.lineTo(p)
    pen.closePath()


def circle_all_offcurve(pen, cx, cy, r, reverse=False):
    """Contour made only of off-curve points (implied on-curve midpoints)."""
    k = r / math.cos(math.pi / 8)
    pts = []
    for i in range(8):
        a = math.pi / 8 + i * math.pi / 4
        pts.append((round(cx + k * math.cos(a)), round(cy + k * math.sin(a))))
    if reverse:
        pts = pts[::-1]
    pen.moveTo(pts[0])
    pen.qCurveTo(*pts[1:], None)
    pen.closePath()


def ring(pen, cx, cy, r_outer, r_inner):
    circle_all_offcurve(pen, cx, cy, r_outer)
    circle_all_offcurve(pen, cx, cy, r_inner, reverse=True)


def blob(pen, cx, cy, r, lobes, phase):
    """On-curve points on a jittered circle joined by single off-curve points."""
    on = []
    for i in range(lobes):
        a = phase + 2 * math.pi * i / lobes
        rr = r * (1.0 + 0.25 * math.sin(3 * a + phase))
        on.append((round(cx + rr * math.cos(a)), round(cy + rr * math.sin(a))))
    pen.moveTo(on[0])
    for i in range(lobes):
        a0 = phase + 2 * math.pi * i / lobes
        a1 = phase + 2 * math.pi * (i + 1) / lobes
        am = (a0 + a1) / 2
        rr = r * (1.0 + 0.45 * math.cos(2 * am + phase))
        off = (round(cx + rr * math.cos(am)), round(cy + rr * math.sin(am)))
        pen.qCurveTo(off, on[(i + 1) % lobes])
    pen.closePath()


def star(pen, cx, cy, r_outer, r_inner, points=5):
    pts = []
    for i in range(points * 2):
        r = r_outer if i % 2 == 0 else r_inner
        a = math.pi / 2 + math.pi * i / points
        pts.append((round(cx + r * math.cos(a)), round(cy + r * math.sin(a))))
    pen.moveTo(pts[0])
    for p in pts[1:]:
        pen.lineTo(p)
    pen.closePath()


def double_off_wave(pen, y_base):
    """Consecutive off-curve pairs inside one qCurveTo (implied midpoints)."""
    pen.moveTo((100, y_base))
    pen.qCurveTo((200, y_base + 300), (350, y_base + 300), (500, y_base))
    pen.qCurveTo((400, y_base - 200), (200, y_base - 200), (100, y_base))
    pen.closePath()


def build():
    glyphs = {}

    def make(name, draw):
        pen = TTGlyphPen(None)
        draw(pen)
        glyphs[name] = pen.glyph()

    make(".notdef", lambda p: rect(p, 50, 0, 550, 700))
    pen = TTGlyphPen(None)
    glyphs["space"] = pen.glyph()  # no contours

    make("O", lambda p: ring(p, 300, 350, 280, 160))
    make("I", lambda p: rect(p, 220, 0, 380, 700))
    make("B", lambda p: (rect(p, 100, 0, 500, 700), rect(p, 200, 80, 400, 300, True),
                         rect(p, 200, 400, 400, 620, True)))
    make("S", lambda p: star(p, 300, 350, 300, 120))
    make("W", lambda p: double_off_wave(p, 350))
    make("o", lambda p: circle_all_offcurve(p, 300, 250, 200))

    # Assorted blobs: enough distinct quadratic glyphs for round-trip sweeps.
    for i, ch in enumerate("ACDEFGHJKLMNPQRTUVXYZ"):
        lobes = 4 + (i % 5)
        make(ch, lambda p, i=i, lobes=lobes: blob(p, 300, 350, 230, lobes, 0.37 * i))

    make("dieresis", lambda p: (rect(p, 150, 760, 250, 860), rect(p, 350, 760, 450, 860)))

    # One-level composite: A with a dieresis on top.
    pen = TTGlyphPen(glyphs)
    pen.addComponent("A", (1, 0, 0, 1, 0, 0))
    pen.addComponent("dieresis", (1, 0, 0, 1, 0, 40))
    glyphs["Adieresis"] = pen.glyph()

    # Two-level composite (component is itself a composite): must be rejected.
    pen = TTGlyphPen(glyphs)
    pen.addComponent("Adieresis", (1, 0, 0, 1, 0, 0))
    glyphs["Adieresis.deep"] = pen.glyph()

    # Scaled composite: half-size O beside a full I.
    pen = TTGlyphPen(glyphs)
    pen.addComponent("I", (1, 0, 0, 1, 0, 0))
    pen.addComponent("O", (0.5, 0, 0, 0.5, 250, 0))
    glyphs["Oslash.scaled"] = pen.glyph()

    order = [".notdef", "space"] + sorted(g for g in glyphs if g not in (".notdef", "space"))
    cmap = {ord(" "): "space", ord("Ä"): "Adieresis", 0x01DE: "Adieresis.deep",
            0x00D8: "Oslash.scaled",
            0x5B57: "B", 0x82B1: "S"}  # a couple of CJK aliases for CLI runs
    for name in order:
        if len(name) == 1:
            cmap[ord(name)] = name

    fb = FontBuilder(UPEM, isTTF=True)
    fb.setupGlyphOrder(order)
    fb.setupCharacterMap(cmap)
    fb.setupGlyf(glyphs)
    glyf = fb.font["glyf"]
    metrics = {}
    for name in order:
        g = glyf[name]
        g.recalcBounds(glyf)
        x_min = getattr(g, "xMin", 0) if g.numberOfContours != 0 else 0
        metrics[name] = (ADVANCE if name != "space" else 520, x_min)
    fb.setupHorizontalMetrics(metrics)
    fb.setupHorizontalHeader(ascent=800, descent=-200)
    fb.setupNameTable({"familyName": "WordArtTest", "styleName": "Regular"})
    fb.setupOS2(sTypoAscender=800, sTypoDescender=-200)
    fb.setupPost()
    out = Path(__file__).resolve().parent.parent / "tests" / "fonts" / "wordart_test.ttf"
    out.parent.mkdir(parents=True, exist_ok=True)
    fb.save(str(out))
    print(f"wrote {out} ({out.stat().st_size} bytes, {len(order)} glyphs)")


if __name__ == "__main__":
    build()
