"""HTTP provider client for external stylize/texture services.

Wire format: POST {endpoint}/v1/stylize and /v1/texture with a JSON body of
{image_png_b64, prompt, strength | condition, seed}; 200 responses carry
{image_png_b64, model_id}; errors carry {code, message}.
"""
from __future__ import annotations

import base64
import threading

import requests

from ..errors import ProviderRejected, ProviderUnavailable
from ..raster.pngio import decode_rgb_png, encode_png
from .types import RenderedImage, StylizeRequest, TextureRequest


class HttpProvider:
    def __init__(self, endpoint: str, timeout: float = 60.0, max_in_flight: int = 4):
        self.endpoint = endpoint.rstrip("/")
        self.timeout = timeout
        self._gate = threading.Semaphore(max_in_flight)
        self.provider_id = f"http:{self.endpoint}"

    def _post(self, path: str, body: dict) -> dict:
        with self._gate:
            try:
                resp = requests.post(
                    f"{self.endpoint}{path}", json=body, timeout=self.timeout
                )
            except requests.RequestException as exc:
                raise ProviderUnavailable(f"provider unreachable: {exc}") from exc
        if resp.status_code != 200:
            try:
                err = resp.json()
                raise ProviderRejected(
                    err.get("message", resp.text[:200]), code=err.get("code")
                )
            except ValueError:
                raise ProviderRejected(resp.text[:200], code=resp.status_code) from None
        try:
            return resp.json()
        except ValueError as exc:
            raise ProviderRejected(f"non-JSON provider response: {exc}") from exc

    def stylize(self, req: StylizeRequest) -> RenderedImage:
        payload = self._post(
            "/v1/stylize",
            {
                "image_png_b64": base64.b64encode(encode_png(req.image)).decode(),
                "prompt": req.prompt,
                "strength": req.strength,
                "seed": req.seed,
            },
        )
        return self._decode(payload, req.digest(), req.seed)

    def texture(self, req: TextureRequest) -> RenderedImage:
        payload = self._post(
            "/v1/texture",
            {
                "image_png_b64": base64.b64encode(encode_png(req.image)).decode(),
                "prompt": req.prompt,
                "condition": req.condition,
                "seed": req.seed,
            },
        )
        out = self._decode(payload, req.digest(), req.seed)
        out.provenance["condition"] = req.condition
        return out

    def _decode(self, payload: dict, digest: str, seed: int) -> RenderedImage:
        try:
            pixels = decode_rgb_png(base64.b64decode(payload["image_png_b64"]))
        except (KeyError, ValueError) as exc:
            raise ProviderRejected(f"bad provider image payload: {exc}") from exc
        return RenderedImage(
            pixels,
            provenance={
                "provider_id": payload.get("model_id", self.provider_id),
                "seed": seed,
                "request_digest": digest,
            },
        )
