"""Vectorized cubic evaluation and nearest-point Newton kernels.

Cubics are kept in power basis; the Newton kernel works on flat candidate
arrays with separate x/y components so the rasterizer can refine hundreds of
thousands of (pixel, segment) pairs in a handful of numpy passes.
"""
from __future__ import annotations

import numpy as np


def power_coeffs_batch(segments: np.ndarray) -> np.ndarray:
    """(S, 4, 2) control points -> (S, 4, 2) power coefficients c0..c3."""
    p0 = segments[:, 0]
    p1 = segments[:, 1]
    p2 = segments[:, 2]
    p3 = segments[:, 3]
    return np.stack(
        [
            p0,
            3.0 * (p1 - p0),
            3.0 * (p2 - 2.0 * p1 + p0),
            p3 - 3.0 * p2 + 3.0 * p1 - p0,
        ],
        axis=1,
    )


def eval_poly(coeffs: np.ndarray, t: np.ndarray) -> np.ndarray:
    """One segment's (4, 2) coefficients at parameters t (n,) -> (n, 2)."""
    t = np.asarray(t, dtype=np.float64)[:, None]
    c0, c1, c2, c3 = coeffs
    return ((c3 * t + c2) * t + c1) * t + c0


def eval_poly_gather(coeffs: np.ndarray, seg: np.ndarray, t: np.ndarray) -> np.ndarray:
    """Per-element segment/parameter evaluation: (m,) seg ids, (m,) t -> (m, 2)."""
    c = coeffs[seg]
    tt = t[..., None]
    return ((c[..., 3, :] * tt + c[..., 2, :]) * tt + c[..., 1, :]) * tt + c[..., 0, :]


def bernstein_basis(t: np.ndarray) -> np.ndarray:
    """Cubic Bernstein weights, stacked on the last axis: (..., 4)."""
    t = np.asarray(t, dtype=np.float64)
    u = 1.0 - t
    return np.stack([u * u * u, 3.0 * u * u * t, 3.0 * u * t * t, t * t * t], axis=-1)


def _newton_steps(c, qx, qy, t, iters):
    """Damped Newton on D'(t) where D = |B(t) - q|^2; all arrays flat."""
    c0x, c1x, c2x, c3x = c[:, 0, 0], c[:, 1, 0], c[:, 2, 0], c[:, 3, 0]
    c0y, c1y, c2y, c3y = c[:, 0, 1], c[:, 1, 1], c[:, 2, 1], c[:, 3, 1]
    for _ in range(iters):
        bx = ((c3x * t + c2x) * t + c1x) * t + c0x
        by = ((c3y * t + c2y) * t + c1y) * t + c0y
        dbx = (3.0 * c3x * t + 2.0 * c2x) * t + c1x
        dby = (3.0 * c3y * t + 2.0 * c2y) * t + c1y
        d2bx = 6.0 * c3x * t + 2.0 * c2x
        d2by = 6.0 * c3y * t + 2.0 * c2y
        rx = bx - qx
        ry = by - qy
        f = rx * dbx + ry * dby                      # D'(t) / 2
        fp = dbx * dbx + dby * dby + rx * d2bx + ry * d2by  # D''(t) / 2
        # |fp| keeps the move downhill through concave stretches.
        step = f / np.maximum(np.abs(fp), 1e-9)
        t = np.clip(t - np.clip(step, -0.25, 0.25), 0.0, 1.0)
    bx = ((c3x * t + c2x) * t + c1x) * t + c0x
    by = ((c3y * t + c2y) * t + c1y) * t + c0y
    rx = bx - qx
    ry = by - qy
    return t, rx * rx + ry * ry


def newton_refine(coeffs, points, cand_seg, cand_t, iters: int):
    """Polish candidate parameters toward the nearest point on their segment.

    points (m, 2); cand_seg, cand_t (m, k). Runs a short shared polish on all
    candidates, keeps each point's best, and finishes only that one. Returns
    per-point (t, seg, D(t)).
    """
    m, k = cand_seg.shape
    flat_seg = cand_seg.ravel()
    c = coeffs[flat_seg]
    qx = np.repeat(points[:, 0], k)
    qy = np.repeat(points[:, 1], k)
    t = np.clip(np.asarray(cand_t, dtype=np.float64).ravel(), 0.0, 1.0)

    pre = min(2, iters)
    t, d2 = _newton_steps(c, qx, qy, t, pre)
    best = np.argmin(d2.reshape(m, k), axis=1)
    take = np.arange(m) * k + best
    t, d2 = _newton_steps(c[take], points[:, 0], points[:, 1], t[take], iters - pre)
    return t, flat_seg[take], d2
