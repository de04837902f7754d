"""Crop augmentation and its scatter-add adjoint."""
import numpy as np
import pytest

from wordart.errors import CropTooLarge, ShapeMismatch
from wordart.raster import RasterImage, crop_adjoint, crop_augment, decode_png, encode_png


def checker(h=64, w=64):
    y, x = np.indices((h, w))
    return RasterImage(((x + y) % 7) / 6.0)


def test_identity_crop():
    img = checker()
    batch = crop_augment(img, 1, 64, rng_seed=0)
    assert batch.crop_rects == [(0, 0, 64, 64)]
    assert np.array_equal(batch.crops[0].pixels, img.pixels)


def test_same_seed_same_rects():
    img = checker(128, 128)
    a = crop_augment(img, 5, 48, rng_seed=99)
    b = crop_augment(img, 5, 48, rng_seed=99)
    assert a.crop_rects == b.crop_rects
    c = crop_augment(img, 5, 48, rng_seed=100)
    assert c.crop_rects != a.crop_rects


def test_crops_match_source_windows():
    img = checker(96, 96)
    batch = crop_augment(img, 4, 32, rng_seed=7)
    for crop, (x, y, w, h) in zip(batch.crops, batch.crop_rects):
        assert 0 <= x <= 96 - 32 and 0 <= y <= 96 - 32
        assert np.array_equal(crop.pixels, img.pixels[y : y + h, x : x + w])


def test_crop_too_large():
    with pytest.raises(CropTooLarge):
        crop_augment(checker(32, 32), 1, 48, rng_seed=0)


def test_adjoint_equals_direct_overlap_sum():
    """Scatter-add must equal the brute-force per-pixel accumulation."""
    rng = np.random.default_rng(13)
    img = checker(80, 80)
    batch = crop_augment(img, 6, 40, rng_seed=3)
    ups = [rng.standard_normal((40, 40)) for _ in batch.crops]
    out = crop_adjoint(batch, ups)
    brute = np.zeros((80, 80))
    for up, (x, y, w, h) in zip(ups, batch.crop_rects):
        for r in range(h):
            for c in range(w):
                brute[y + r, x + c] += up[r, c]
    assert np.allclose(out, brute, atol=1e-12)


def test_adjoint_validates_shapes():
    img = checker(64, 64)
    batch = crop_augment(img, 2, 32, rng_seed=1)
    with pytest.raises(ShapeMismatch):
        crop_adjoint(batch, [np.zeros((32, 32))])
    with pytest.raises(ShapeMismatch):
        crop_adjoint(batch, [np.zeros((32, 32)), np.zeros((16, 16))])


def test_png_round_trip_8bit():
    img = checker(48, 40)
    back = decode_png(encode_png(img))
    assert back.pixels.shape == (48, 40)
    assert np.max(np.abs(back.pixels - img.pixels)) <= 1 / 255 + 1e-9
