"""Deterministic photo-like test rasters for desk-scale experiments.

Real corpora are large downloads; these generators produce images with the
properties the pipeline actually exercises: smooth shading, multi-scale
texture, hard edges, and regions that saturate near 0/255 where decoder
clamping perturbs the DC coefficients of a later re-compression.
"""
from __future__ import annotations

import numpy as np
from scipy.ndimage import gaussian_filter

from .jpeg.codec import ycbcr_to_rgb
from .types import PixelImage


def _octave(rng: np.random.Generator, shape: tuple[int, int], sigma: float) -> np.ndarray:
    noise = gaussian_filter(rng.standard_normal(shape), sigma, mode="reflect")
    std = noise.std()
    return noise / std if std > 0 else noise


def _luma_field(rng: np.random.Generator, height: int, width: int) -> np.ndarray:
    yy, xx = np.mgrid[0:height, 0:width].astype(np.float64)
    yy /= max(height - 1, 1)
    xx /= max(width - 1, 1)

    field = np.zeros((height, width))
    for sigma, amp in ((16.0, 48.0), (8.0, 30.0), (4.0, 18.0), (1.5, 10.0)):
        field += amp * _octave(rng, (height, width), sigma)

    gx, gy = rng.uniform(-70.0, 70.0, size=2)
    field += gx * (xx - 0.5) + gy * (yy - 0.5)

    # A few soft blobs; large amplitudes create saturated highlights and
    # shadows next to texture, which is where clamping errors concentrate.
    for _ in range(int(rng.integers(3, 7))):
        cy, cx = rng.uniform(0.1, 0.9, size=2)
        radius = rng.uniform(0.06, 0.25)
        amp = rng.choice([-1.0, 1.0]) * rng.uniform(60.0, 140.0)
        d2 = (yy - cy) ** 2 + (xx - cx) ** 2
        field += amp * np.exp(-d2 / (2.0 * radius**2))

    # One hard-edged panel for blocky high-contrast content.
    if rng.random() < 0.7:
        y0, x0 = rng.integers(0, max(height - 8, 1)), rng.integers(0, max(width - 8, 1))
        ph = int(rng.integers(height // 8, max(height // 2, height // 8 + 1)))
        pw = int(rng.integers(width // 8, max(width // 2, width // 8 + 1)))
        field[y0 : y0 + ph, x0 : x0 + pw] += rng.choice([-1.0, 1.0]) * rng.uniform(50.0, 110.0)

    return field + rng.uniform(105.0, 150.0)


def _patch_mask(rng: np.random.Generator, height: int, width: int) -> np.ndarray:
    if rng.random() < 0.5:
        y0 = int(rng.integers(0, max(height - 12, 1)))
        x0 = int(rng.integers(0, max(width - 12, 1)))
        ph = int(rng.integers(12, max(height // 2, 13)))
        pw = int(rng.integers(12, max(width // 2, 13)))
        mask = np.zeros((height, width), dtype=bool)
        mask[y0 : y0 + ph, x0 : x0 + pw] = True
        return mask
    yy, xx = np.mgrid[0:height, 0:width].astype(np.float64)
    cy, cx = rng.uniform(0.1, 0.9, size=2)
    radius = rng.uniform(0.1, 0.3)
    return (yy / height - cy) ** 2 + (xx / width - cx) ** 2 < radius**2


def _stripe_field(rng: np.random.Generator, height: int, width: int) -> np.ndarray:
    period = int(rng.integers(1, 4))
    amp = rng.uniform(38.0, 62.0)
    idx = np.arange(width) if rng.random() < 0.5 else np.arange(height)
    stripes = np.where((idx // period) % 2 == 0, amp, -amp)
    return np.broadcast_to(
        stripes[None, :] if stripes.size == width else stripes[:, None], (height, width)
    )


def _add_color_objects(
    rng: np.random.Generator, luma: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vivid hard-edged objects, most carrying striped high-contrast texture.

    Saturated chroma next to bright/dark texture is where JPEG decoding
    clamps RGB values, the content class that perturbs small DC
    coefficients across a re-compression.
    """
    height, width = luma.shape
    luma = luma.copy()
    cb = 128.0 + 18.0 * _octave(rng, (height, width), 12.0)
    cr = 128.0 + 18.0 * _octave(rng, (height, width), 12.0)
    for _ in range(int(rng.integers(5, 9))):
        mask = _patch_mask(rng, height, width)
        cb[mask] = rng.uniform(35.0, 220.0)
        cr[mask] = rng.uniform(35.0, 220.0)
        if rng.random() < 0.8:
            base = rng.uniform(108.0, 148.0)
            luma[mask] = base + _stripe_field(rng, height, width)[mask]
    return luma, cb, cr


def synthetic_photo(width: int, height: int, seed: int, color: bool = False) -> PixelImage:
    """One deterministic photo-like raster for the given seed."""
    rng = np.random.default_rng(seed)
    luma = _luma_field(rng, height, width)
    if not color:
        return PixelImage(np.clip(np.rint(luma), 0, 255).astype(np.uint8))
    luma, cb, cr = _add_color_objects(rng, luma)
    luma = np.clip(luma, 0.0, 255.0)
    cb = np.clip(np.rint(cb), 0, 255)
    cr = np.clip(np.rint(cr), 0, 255)
    return PixelImage(ycbcr_to_rgb(luma, cb, cr))


def synthetic_corpus(
    count: int, width: int, height: int, seed: int = 0, color: bool = False
) -> list[tuple[str, PixelImage]]:
    """Deterministic corpus of distinct images with stable ids."""
    return [
        (f"img{i:03d}", synthetic_photo(width, height, seed * 100003 + i, color))
        for i in range(count)
    ]
