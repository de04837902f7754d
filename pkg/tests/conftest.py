from pathlib import Path

import numpy as np
import pytest

from wordart.glyph.geometry import Contour, CubicSegment, GlyphOutline, Point2
from wordart.glyph import bezier

FONT_PATH = Path(__file__).parent / "fonts" / "wordart_test.ttf"

# Circle kappa: offset factor for a 4-cubic unit circle.
KAPPA = 0.5522847498307936


@pytest.fixture(scope="session")
def font_bytes() -> bytes:
    return FONT_PATH.read_bytes()


def circle_outline(cx=128.0, cy=128.0, r=64.0, codepoint=0x4F) -> GlyphOutline:
    quad = [(1, 0), (0, 1), (-1, 0), (0, -1)]
    segs = []
    for i in range(4):
        x0, y0 = quad[i]
        x1, y1 = quad[(i + 1) % 4]
        segs.append(
            CubicSegment(
                Point2(cx + r * x0, cy + r * y0),
                Point2(cx + r * (x0 - KAPPA * y0), cy + r * (y0 + KAPPA * x0)),
                Point2(cx + r * (x1 + KAPPA * y1), cy + r * (y1 - KAPPA * x1)),
                Point2(cx + r * x1, cy + r * y1),
            )
        )
    return GlyphOutline.build([Contour.closed(segs)], codepoint, 1000, 600.0)


def square_outline(x0=100.0, y0=100.0, side=60.0, codepoint=0x58) -> GlyphOutline:
    pts = [(x0, y0), (x0 + side, y0), (x0 + side, y0 + side), (x0, y0 + side)]
    segs = [
        CubicSegment.from_array(bezier.line_as_cubic(pts[i], pts[(i + 1) % 4]))
        for i in range(4)
    ]
    return GlyphOutline.build([Contour.closed(segs)], codepoint, 1000, 600.0)


def blob_outline(rng, n_seg=4, radius=60.0, center=(128.0, 128.0), jitter=12.0) -> GlyphOutline:
    """Random closed contour of n cubics around a jittered circle."""
    angles = np.linspace(0, 2 * np.pi, n_seg, endpoint=False) + rng.uniform(
        -0.3, 0.3, n_seg
    )
    r = radius * (1 + rng.uniform(-0.25, 0.25, n_seg))
    on = np.stack(
        [center[0] + r * np.cos(angles), center[1] + r * np.sin(angles)], axis=1
    )
    segs = []
    for i in range(n_seg):
        p0 = on[i]
        p3 = on[(i + 1) % n_seg]
        d = p3 - p0
        c1 = p0 + d / 3 + rng.uniform(-jitter, jitter, 2)
        c2 = p0 + 2 * d / 3 + rng.uniform(-jitter, jitter, 2)
        segs.append(
            CubicSegment(Point2(*p0), Point2(*c1), Point2(*c2), Point2(*p3))
        )
    return GlyphOutline.build([Contour.closed(segs)], 65, 1000, 600.0)


def random_cubic(rng, lo=0.0, hi=256.0):
    pts = rng.uniform(lo, hi, (4, 2))
    return CubicSegment.from_array(pts)


def oracle_distance_to_segment(q, ctrl) -> float:
    """Exact min distance point-to-cubic via the quintic stationarity roots.

    Independent of the production nearest-point path: builds |B(t) - q|^2 as
    a polynomial and evaluates it at the real roots of its derivative.
    """
    ctrl = np.asarray(ctrl, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    coef = bezier.power_coeffs(ctrl)  # rows c0..c3
    best = np.inf
    d_poly = np.zeros(7)
    for dim in range(2):
        b = np.array([coef[3, dim], coef[2, dim], coef[1, dim], coef[0, dim] - q[dim]])
        d_poly = np.polyadd(d_poly, np.polymul(b, b))
    roots = np.roots(np.polyder(d_poly))
    cands = [0.0, 1.0] + [
        float(r.real) for r in roots if abs(r.imag) < 1e-9 and 0.0 <= r.real <= 1.0
    ]
    for t in cands:
        p = bezier.eval_cubic(ctrl, t)
        best = min(best, float(np.hypot(p[0] - q[0], p[1] - q[1])))
    return best


def oracle_distance_to_outline(q, outline) -> float:
    return min(
        oracle_distance_to_segment(q, s.as_array())
        for c in outline.contours
        for s in c.segments
    )
