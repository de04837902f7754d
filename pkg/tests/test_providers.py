"""Mock provider purity/silhouette guarantees and the HTTP wire format."""
import base64
import json
import threading
from http.server import BaseHTTPRequestHandler, HTTPServer

import numpy as np
import pytest

from wordart.errors import InvalidParameter, ProviderRejected, ProviderUnavailable
from wordart.glyph import load_glyph, normalize_outline, parameterize
from wordart.providers import (
    HttpProvider,
    MockProvider,
    StylizeRequest,
    TextureRequest,
)
from wordart.raster import RasterConfig, RasterImage, encode_rgb_png, rasterize


def render_char(font_bytes, ch, px=128):
    outline = normalize_outline(load_glyph(font_bytes, ord(ch)), px)
    return rasterize(parameterize(outline), RasterConfig(px, px))


def iou(a: np.ndarray, b: np.ndarray) -> float:
    inter = np.logical_and(a, b).sum()
    union = np.logical_or(a, b).sum()
    return inter / union if union else 1.0


def test_stylize_black_input_stays_near_black():
    req = StylizeRequest(RasterImage(np.zeros((64, 64))), prompt="cat", seed=1)
    out = MockProvider().stylize(req)
    assert out.pixels.mean() <= 10.0


def test_stylize_deterministic_bytes():
    img = RasterImage(np.random.default_rng(0).uniform(0, 1, (64, 64)))
    req = StylizeRequest(img, prompt="Rainbow, colorful, natural", seed=7)
    a = MockProvider().stylize(req)
    b = MockProvider().stylize(req)
    assert np.array_equal(a.pixels, b.pixels)
    assert a.provenance["request_digest"] == b.provenance["request_digest"]
    c = MockProvider().stylize(
        StylizeRequest(img, prompt="Rainbow, colorful, natural", seed=8)
    )
    assert not np.array_equal(a.pixels, c.pixels)


def test_stylize_preserves_silhouette_on_font_glyphs(font_bytes):
    provider = MockProvider()
    for ch in "OIBSWACDEF":
        img = render_char(font_bytes, ch)
        out = provider.stylize(StylizeRequest(img, prompt="Pizza, delicious", seed=3))
        got = out.luminance() >= 0.5
        want = img.pixels >= 0.5
        assert iou(got, want) >= 0.8, ch


def test_texture_condition_recorded_but_mask_identical():
    img = RasterImage((np.random.default_rng(1).uniform(0, 1, (64, 64)) > 0.5) * 1.0)
    a = MockProvider().texture(TextureRequest(img, prompt="gold", condition="scribble", seed=5))
    b = MockProvider().texture(TextureRequest(img, prompt="gold", condition="canny", seed=5))
    assert a.provenance["condition"] == "scribble"
    assert b.provenance["condition"] == "canny"
    assert a.provenance["request_digest"] != b.provenance["request_digest"]
    mask = img.pixels >= 0.5
    bg_a = a.pixels[~mask]
    bg_b = b.pixels[~mask]
    assert np.array_equal(bg_a, bg_b)  # condition is a passthrough tag for the mock


def test_texture_empty_ink_is_flat_background():
    img = RasterImage(np.zeros((48, 48)))
    out = MockProvider().texture(TextureRequest(img, prompt="jade", seed=2))
    flat = out.pixels.reshape(-1, 3)
    assert np.all(flat == flat[0])
    assert flat[0].mean() < 40


def test_texture_deterministic():
    img = RasterImage((np.indices((32, 32)).sum(axis=0) % 5 > 1) * 1.0)
    req = TextureRequest(img, prompt="bread", condition="depth", seed=11)
    assert np.array_equal(MockProvider().texture(req).pixels, MockProvider().texture(req).pixels)


def test_request_validation():
    img = RasterImage(np.zeros((8, 8)))
    with pytest.raises(InvalidParameter):
        StylizeRequest(img, prompt="")
    with pytest.raises(InvalidParameter):
        StylizeRequest(img, prompt="x", strength=1.5)
    with pytest.raises(InvalidParameter):
        TextureRequest(img, prompt="x", condition="sketchy")


def test_digest_collision_free_over_mutated_corpus():
    """Any change to any request field must change the digest."""
    rng = np.random.default_rng(4)
    base_img = rng.uniform(0, 1, (16, 16))
    digests = set()
    n = 0
    for seed in range(250):
        digests.add(StylizeRequest(RasterImage(base_img), "p", seed=seed).digest())
        n += 1
    for k in range(250):
        img = base_img.copy()
        img[k // 16, k % 16] += 0.25
        digests.add(StylizeRequest(RasterImage(img), "p", seed=0).digest())
        n += 1
    for k in range(250):
        digests.add(StylizeRequest(RasterImage(base_img), f"prompt {k}", seed=0).digest())
        n += 1
    for k in range(125):
        digests.add(TextureRequest(RasterImage(base_img), f"prompt {k}", seed=0).digest())
        digests.add(
            TextureRequest(RasterImage(base_img), f"prompt {k}", condition="canny", seed=0).digest()
        )
        n += 2
    assert len(digests) == n


class _StubProviderHandler(BaseHTTPRequestHandler):
    behavior = "ok"

    def do_POST(self):
        body = json.loads(self.rfile.read(int(self.headers["Content-Length"])))
        if self.behavior == "reject":
            payload = json.dumps({"code": "bad_prompt", "message": "prompt rejected"}).encode()
            self.send_response(422)
        else:
            img = np.full((8, 8, 3), 200, dtype=np.uint8)
            payload = json.dumps(
                {
                    "image_png_b64": base64.b64encode(encode_rgb_png(img)).decode(),
                    "model_id": "stub-model",
                    "echo_seed": body.get("seed"),
                }
            ).encode()
            self.send_response(200)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(payload)))
        self.end_headers()
        self.wfile.write(payload)

    def log_message(self, *args):
        pass


@pytest.fixture()
def stub_server():
    server = HTTPServer(("127.0.0.1", 0), _StubProviderHandler)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield f"http://127.0.0.1:{server.server_port}"
    server.shutdown()


def test_http_provider_round_trip(stub_server):
    _StubProviderHandler.behavior = "ok"
    provider = HttpProvider(stub_server)
    img = RasterImage(np.zeros((8, 8)))
    out = provider.stylize(StylizeRequest(img, prompt="x", seed=3))
    assert out.pixels.shape == (8, 8, 3)
    assert out.provenance["provider_id"] == "stub-model"
    tex = provider.texture(TextureRequest(img, prompt="x", condition="depth", seed=3))
    assert tex.provenance["condition"] == "depth"


def test_http_provider_rejection(stub_server):
    _StubProviderHandler.behavior = "reject"
    provider = HttpProvider(stub_server)
    with pytest.raises(ProviderRejected) as e:
        provider.stylize(StylizeRequest(RasterImage(np.zeros((8, 8))), prompt="x"))
    assert e.value.code == "bad_prompt"


def test_http_provider_unreachable():
    provider = HttpProvider("http://127.0.0.1:1", timeout=0.2)
    with pytest.raises(ProviderUnavailable):
        provider.stylize(StylizeRequest(RasterImage(np.zeros((8, 8))), prompt="x"))
