"""Exact cubic Bezier algebra: evaluation, elevation, subdivision, flattening.

Segments are handled as (4, 2) float64 arrays of control points. All
operations here are closed-form; nothing is approximated except the
polyline flattenings, which are used for arc-length estimates and seeding
only, never to alter geometry.
"""
from __future__ import annotations

import numpy as np


def eval_cubic(ctrl: np.ndarray, t) -> np.ndarray:
    """Evaluate a cubic at parameter(s) t. ctrl is (4, 2); t scalar or (n,)."""
    t = np.asarray(t, dtype=np.float64)
    u = 1.0 - t
    b0 = u * u * u
    b1 = 3.0 * u * u * t
    b2 = 3.0 * u * t * t
    b3 = t * t * t
    return (
        np.multiply.outer(b0, ctrl[0])
        + np.multiply.outer(b1, ctrl[1])
        + np.multiply.outer(b2, ctrl[2])
        + np.multiply.outer(b3, ctrl[3])
    )


def eval_quadratic(ctrl: np.ndarray, t) -> np.ndarray:
    """Evaluate a quadratic at parameter(s) t. ctrl is (3, 2)."""
    t = np.asarray(t, dtype=np.float64)
    u = 1.0 - t
    return (
        np.multiply.outer(u * u, ctrl[0])
        + np.multiply.outer(2.0 * u * t, ctrl[1])
        + np.multiply.outer(t * t, ctrl[2])
    )


def elevate_quadratic_points(q0, q1, q2) -> np.ndarray:
    """Degree-elevate a quadratic to the cubic tracing the identical curve.

    c1 = q0 + 2/3 (q1 - q0), c2 = q2 + 2/3 (q1 - q2).
    """
    q0 = np.asarray(q0, dtype=np.float64)
    q1 = np.asarray(q1, dtype=np.float64)
    q2 = np.asarray(q2, dtype=np.float64)
    c1 = q0 + (2.0 / 3.0) * (q1 - q0)
    c2 = q2 + (2.0 / 3.0) * (q1 - q2)
    return np.array([q0, c1, c2, q2])


def line_as_cubic(p0, p1) -> np.ndarray:
    """Represent the straight segment p0..p1 as a cubic (controls at thirds)."""
    p0 = np.asarray(p0, dtype=np.float64)
    p1 = np.asarray(p1, dtype=np.float64)
    d = p1 - p0
    return np.array([p0, p0 + d / 3.0, p0 + 2.0 * d / 3.0, p1])


def split_cubic(ctrl: np.ndarray, t: float) -> tuple[np.ndarray, np.ndarray]:
    """De Casteljau split at t; left ends exactly where right begins."""
    p0, p1, p2, p3 = (np.asarray(p, dtype=np.float64) for p in ctrl)
    q0 = p0 + t * (p1 - p0)
    q1 = p1 + t * (p2 - p1)
    q2 = p2 + t * (p3 - p2)
    r0 = q0 + t * (q1 - q0)
    r1 = q1 + t * (q2 - q1)
    s = r0 + t * (r1 - r0)
    left = np.array([p0, q0, r0, s])
    right = np.array([s, r1, q2, p3])
    return left, right


def power_coeffs(ctrl: np.ndarray) -> np.ndarray:
    """Power-basis coefficients c so that B(t) = ((c3 t + c2) t + c1) t + c0.

    Returns (4, 2): rows are c0..c3. Broadcasting-friendly: ctrl may be
    (n, 4, 2), giving (n, 4, 2) back.
    """
    ctrl = np.asarray(ctrl, dtype=np.float64)
    p0, p1, p2, p3 = np.moveaxis(ctrl, -2, 0)
    c0 = p0
    c1 = 3.0 * (p1 - p0)
    c2 = 3.0 * (p2 - 2.0 * p1 + p0)
    c3 = p3 - 3.0 * p2 + 3.0 * p1 - p0
    return np.stack([c0, c1, c2, c3], axis=-2)


def flatten_cubic(ctrl: np.ndarray, n: int) -> np.ndarray:
    """Uniform-parameter polyline with n segments (n+1 points, endpoints exact)."""
    t = np.linspace(0.0, 1.0, n + 1)
    pts = eval_cubic(ctrl, t)
    pts[0] = ctrl[0]
    pts[-1] = ctrl[3]
    return pts


def polyline_length(pts: np.ndarray) -> float:
    return float(np.sum(np.linalg.norm(np.diff(pts, axis=0), axis=1)))


def cubic_arc_length(ctrl: np.ndarray, n: int = 16) -> float:
    """Arc length estimated from an n-piece uniform flattening."""
    return polyline_length(flatten_cubic(ctrl, n))
