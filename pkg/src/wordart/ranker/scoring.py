"""Feature-based quality score: a stand-in for a trained classifier.

Combines silhouette overlap with the reference glyph, ink-ratio
plausibility, connected-component agreement, and boundary smoothness.
Deterministic; higher is better.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from ..errors import ShapeMismatch
from ..providers.types import RenderedImage
from ..raster.types import RasterImage

INK_RATIO_RANGE = (0.05, 0.6)


@dataclass(frozen=True)
class ScoreWeights:
    iou: float = 1.0
    ink_ratio: float = 0.3
    components: float = 0.2
    smoothness: float = 0.2


def ink_mask(image) -> np.ndarray:
    if isinstance(image, RenderedImage):
        return image.luminance() >= 0.5
    if isinstance(image, RasterImage):
        return image.pixels >= 0.5
    return np.asarray(image, dtype=np.float64) >= 0.5


def _perimeter_area_ratio(mask: np.ndarray) -> float:
    area = mask.sum()
    if area == 0:
        return np.inf
    eroded = ndimage.binary_erosion(mask)
    perimeter = np.logical_xor(mask, eroded).sum()
    return perimeter * perimeter / area


def heuristic_score(candidate, reference: RasterImage, weights: ScoreWeights = ScoreWeights()) -> float:
    cand = ink_mask(candidate)
    ref = ink_mask(reference)
    if cand.shape != ref.shape:
        raise ShapeMismatch(f"candidate {cand.shape} vs reference {ref.shape}")

    union = np.logical_or(cand, ref).sum()
    iou = np.logical_and(cand, ref).sum() / union if union else 1.0

    ratio = cand.mean()
    lo, hi = INK_RATIO_RANGE
    outside = max(lo - ratio, ratio - hi, 0.0)
    ink_term = max(0.0, 1.0 - 8.0 * outside)

    cc_cand = ndimage.label(cand)[1]
    cc_ref = ndimage.label(ref)[1]
    cc_term = 1.0 / (1.0 + abs(cc_cand - cc_ref))

    ppa_cand = _perimeter_area_ratio(cand)
    ppa_ref = _perimeter_area_ratio(ref)
    if np.isinf(ppa_cand) or np.isinf(ppa_ref):
        smooth_term = 0.0
    else:
        smooth_term = 1.0 / (1.0 + abs(ppa_cand - ppa_ref) / max(ppa_ref, 1e-9))

    w = weights
    return float(
        w.iou * iou + w.ink_ratio * ink_term + w.components * cc_term + w.smoothness * smooth_term
    )
