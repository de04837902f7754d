"""Guidance providers: the noise-residual estimator over a latent code, and
the mean-squared target guidance used as the desk-scale stand-in.

The estimator draws a uniform timestep and Gaussian noise per sample, asks
the denoiser for its noise prediction on the noised latent, and averages the
weighted residual (prediction - injected noise); the encoder adjoint pulls
the average back to pixel space. A perfect prediction cancels exactly, so a
perfect mock denoiser yields an exactly zero gradient.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import numpy as np

from ..errors import DenoiserFailure, ShapeMismatch
from ..raster.types import CropBatch, RasterImage


@dataclass(frozen=True)
class NoiseSchedule:
    """Per-timestep scale pairs (a_t, sigma_t) plus residual weights w_t."""
    T: int
    a_t: np.ndarray
    sigma_t: np.ndarray
    w_t: np.ndarray

    def __post_init__(self):
        for name in ("a_t", "sigma_t", "w_t"):
            arr = getattr(self, name)
            if arr.shape != (self.T,):
                raise ShapeMismatch(f"{name} must have length T={self.T}")
            if not np.all(arr > 0):
                raise ValueError(f"{name} must be positive everywhere")
        if not np.all(self.a_t**2 + self.sigma_t**2 <= 1.0 + 1e-9):
            raise ValueError("a_t^2 + sigma_t^2 must stay bounded by 1")


def cosine_schedule(T: int = 1000) -> NoiseSchedule:
    """a_t = cos(pi/2 * t/(T+1)), sigma_t = sin(...): positive, a^2+s^2 = 1."""
    t = np.arange(1, T + 1, dtype=np.float64)
    phase = 0.5 * np.pi * t / (T + 1)
    return NoiseSchedule(T=T, a_t=np.cos(phase), sigma_t=np.sin(phase), w_t=np.ones(T))


@dataclass
class GuidanceGrad:
    """Per-crop dLoss/dpixel images, aligned with a CropBatch."""
    per_crop: list[np.ndarray]


# --- encoders ----------------------------------------------------------------

class IdentityEncoder:
    """Latent space == pixel space."""

    def encode(self, batch: np.ndarray) -> np.ndarray:
        return batch

    def adjoint(self, dz: np.ndarray) -> np.ndarray:
        return dz


class AvgPoolEncoder:
    """Block-average downsampling; the adjoint spreads gradients uniformly."""

    def __init__(self, factor: int = 2):
        self.factor = factor

    def encode(self, batch: np.ndarray) -> np.ndarray:
        f = self.factor
        n, h, w = batch.shape
        if h % f or w % f:
            raise ShapeMismatch(f"pool factor {f} must divide crop dims {(h, w)}")
        return batch.reshape(n, h // f, f, w // f, f).mean(axis=(2, 4))

    def adjoint(self, dz: np.ndarray) -> np.ndarray:
        f = self.factor
        return np.repeat(np.repeat(dz, f, axis=1), f, axis=2) / (f * f)


# --- mock denoisers -----------------------------------------------------------

class PerfectDenoiser:
    """Returns exactly the injected noise: the residual vanishes."""

    def predict_noise(self, z_t, t, prompt_key, injected=None):
        if injected is None:
            raise DenoiserFailure("perfect mock needs the injected noise")
        return injected


class BiasedDenoiser:
    """Injected noise plus a constant field c: the estimator's mean is c."""

    def __init__(self, c):
        self.c = c

    def predict_noise(self, z_t, t, prompt_key, injected=None):
        if injected is None:
            raise DenoiserFailure("biased mock needs the injected noise")
        return injected + self.c


class NoisyBiasedDenoiser:
    """Bias plus fresh Gaussian noise, for sanity-checking estimator variance."""

    def __init__(self, c, noise_scale: float, seed: int = 0):
        self.c = c
        self.noise_scale = noise_scale
        self._rng = np.random.default_rng(seed)

    def predict_noise(self, z_t, t, prompt_key, injected=None):
        if injected is None:
            raise DenoiserFailure("noisy mock needs the injected noise")
        return injected + self.c + self.noise_scale * self._rng.standard_normal(z_t.shape)


class PromptFieldDenoiser:
    """Deterministic prompt-keyed bias field; the mock diffusion prior used by
    the pipeline so full runs exercise the estimator path end to end."""

    def __init__(self, strength: float = 0.6):
        self.strength = strength

    def _field(self, shape, prompt_key: str) -> np.ndarray:
        digest = hashlib.sha256(prompt_key.encode("utf-8")).digest()
        rng = np.random.default_rng(int.from_bytes(digest[:8], "big"))
        coarse = rng.standard_normal((8, 8))
        reps = (int(np.ceil(shape[0] / 8)), int(np.ceil(shape[1] / 8)))
        tiled = np.kron(coarse, np.ones(reps))[: shape[0], : shape[1]]
        return self.strength * tiled

    def predict_noise(self, z_t, t, prompt_key, injected=None):
        if injected is None:
            raise DenoiserFailure("prompt-field mock needs the injected noise")
        bias = self._field(z_t.shape[-2:], prompt_key)
        return injected + bias[None, :, :]


# --- estimators ---------------------------------------------------------------

def sds_gradient(
    denoiser,
    encoder,
    crops: CropBatch,
    prompt_key: str,
    schedule: NoiseSchedule,
    rng_seed: int,
    n_samples: int = 1,
) -> GuidanceGrad:
    """Monte-Carlo noise-residual gradient pulled back to crop pixels."""
    batch = np.stack([c.pixels for c in crops.crops])
    z = encoder.encode(batch)
    rng = np.random.default_rng(rng_seed)
    acc = np.zeros_like(z)
    for _ in range(n_samples):
        t = int(rng.integers(1, schedule.T + 1))
        eps = rng.standard_normal(z.shape)
        z_t = schedule.a_t[t - 1] * z + schedule.sigma_t[t - 1] * eps
        try:
            pred = denoiser.predict_noise(z_t, t, prompt_key, injected=eps)
        except Exception as exc:
            raise DenoiserFailure(f"denoiser failed at t={t}: {exc}") from exc
        acc += schedule.w_t[t - 1] * (pred - eps)
    dz = acc / n_samples
    dpix = encoder.adjoint(dz)
    return GuidanceGrad(per_crop=[dpix[i] for i in range(dpix.shape[0])])


def target_guidance(crops: CropBatch, target: RasterImage) -> tuple[GuidanceGrad, float]:
    """Mean-squared-difference pull toward a fixed target image.

    Per crop: dL/dX = 2 (X - T_crop) / pixel_count; the scalar loss is the
    sum of per-crop means, whose exact gradient that is.
    """
    if (target.height, target.width) != crops.source_shape:
        raise ShapeMismatch(
            f"target {target.pixels.shape} != source {crops.source_shape}"
        )
    grads = []
    loss = 0.0
    for crop, (x, y, w, h) in zip(crops.crops, crops.crop_rects):
        t_crop = target.pixels[y : y + h, x : x + w]
        diff = crop.pixels - t_crop
        grads.append(2.0 * diff / diff.size)
        loss += float(np.mean(diff * diff))
    return GuidanceGrad(per_crop=grads), loss


# --- providers for the optimization loop ---------------------------------------

class TargetGuidance:
    """Guidance provider wrapping target_guidance (pure, deterministic)."""

    def __init__(self, target: RasterImage):
        self.target = target

    def gradient(self, crops: CropBatch, iteration: int, rng_seed: int):
        return target_guidance(crops, self.target)


@dataclass
class SdsGuidance:
    """Guidance provider wrapping the noise-residual estimator.

    The reported loss is the mean squared residual magnitude, a monitoring
    surrogate (the estimator is not the gradient of a scalar objective).
    """
    denoiser: object
    encoder: object
    schedule: NoiseSchedule
    prompt_key: str
    n_samples: int = 1
    _last: float = field(default=0.0, init=False)

    def gradient(self, crops: CropBatch, iteration: int, rng_seed: int):
        gg = sds_gradient(
            self.denoiser,
            self.encoder,
            crops,
            self.prompt_key,
            self.schedule,
            rng_seed=rng_seed,
            n_samples=self.n_samples,
        )
        loss = float(np.mean([np.mean(g * g) for g in gg.per_crop]))
        return gg, loss
