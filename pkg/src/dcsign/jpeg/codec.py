"""Pixel-domain half of the codec: block splitting, quantization, color.

The decode direction (``coefficients_to_pixels``) reconstructs integer
pixels and is therefore the sole source of the rounding/clamping error
that double compression adds on top of quantization error.
"""
from __future__ import annotations

import numpy as np

from ..types import SUBSAMPLING_420, SUBSAMPLING_NONE, CoefficientImage, PixelImage
from .dct import fdct, idct
from .tables import check_quality, quality_to_quant_matrices


def round_half_away(x: np.ndarray) -> np.ndarray:
    """Round to nearest with halves away from zero (sign-symmetric)."""
    x = np.asarray(x, dtype=np.float64)
    return np.trunc(x + np.copysign(0.5, x))


def quantize(coeffs, quant) -> np.ndarray:
    """Divide coefficients by the quantization matrix and round."""
    blocks = np.asarray(coeffs, dtype=np.float64)
    q = np.asarray(quant, dtype=np.float64)
    return round_half_away(blocks / q).astype(np.int32)


def dequantize(blocks, quant) -> np.ndarray:
    """Multiply quantized coefficients back by the quantization matrix."""
    return np.asarray(blocks, dtype=np.int32) * np.asarray(quant, dtype=np.int32)


def _pad_to_blocks(plane: np.ndarray) -> np.ndarray:
    """Edge-replicate a plane so both dimensions are multiples of 8."""
    h, w = plane.shape
    return np.pad(plane, ((0, -h % 8), (0, -w % 8)), mode="edge")


def split_blocks(plane: np.ndarray) -> np.ndarray:
    """(h, w) plane with 8-multiple dims -> (n, 8, 8) blocks in raster order."""
    h, w = plane.shape
    return plane.reshape(h // 8, 8, w // 8, 8).swapaxes(1, 2).reshape(-1, 8, 8)


def join_blocks(blocks: np.ndarray, rows: int, cols: int) -> np.ndarray:
    """(rows*cols, 8, 8) blocks -> (rows*8, cols*8) plane."""
    return blocks.reshape(rows, cols, 8, 8).swapaxes(1, 2).reshape(rows * 8, cols * 8)


def rgb_to_ycbcr(rgb: np.ndarray) -> np.ndarray:
    """Full-range JFIF color transform, rounded and clamped to [0, 255]."""
    r = rgb[..., 0].astype(np.float64)
    g = rgb[..., 1].astype(np.float64)
    b = rgb[..., 2].astype(np.float64)
    y = 0.299 * r + 0.587 * g + 0.114 * b
    cb = 128.0 + (b - y) / 1.772
    cr = 128.0 + (r - y) / 1.402
    out = np.stack([y, cb, cr], axis=-1)
    return np.clip(round_half_away(out), 0, 255).astype(np.uint8)


def ycbcr_to_rgb(y: np.ndarray, cb: np.ndarray, cr: np.ndarray) -> np.ndarray:
    y = y.astype(np.float64)
    r = y + 1.402 * (cr.astype(np.float64) - 128.0)
    b = y + 1.772 * (cb.astype(np.float64) - 128.0)
    g = (y - 0.299 * r - 0.114 * b) / 0.587
    out = np.stack([r, g, b], axis=-1)
    return np.clip(round_half_away(out), 0, 255).astype(np.uint8)


def _downsample_420(plane: np.ndarray) -> np.ndarray:
    """2x2 box average; odd edges replicate before averaging."""
    padded = np.pad(plane, ((0, plane.shape[0] % 2), (0, plane.shape[1] % 2)), mode="edge")
    h, w = padded.shape
    boxes = padded.astype(np.float64).reshape(h // 2, 2, w // 2, 2).mean(axis=(1, 3))
    return round_half_away(boxes).astype(np.uint8)


def _upsample_420(plane: np.ndarray) -> np.ndarray:
    """Nearest-neighbor 2x replication."""
    return plane.repeat(2, axis=0).repeat(2, axis=1)


def _plane_to_coefficients(plane: np.ndarray, quant: np.ndarray) -> np.ndarray:
    shifted = _pad_to_blocks(plane).astype(np.float64) - 128.0
    return quantize(fdct(split_blocks(shifted)), quant)


def _plane_from_coefficients(blocks: np.ndarray, quant: np.ndarray, rows: int, cols: int,
                             w: int, h: int) -> np.ndarray:
    samples = idct(dequantize(blocks, quant).astype(np.float64)) + 128.0
    plane = join_blocks(samples, rows, cols)[:h, :w]
    return np.clip(round_half_away(plane), 0, 255).astype(np.uint8)


def pixels_to_coefficients(img: PixelImage, qf: int,
                           subsampling: str = SUBSAMPLING_420) -> CoefficientImage:
    """JPEG-encode a raster down to quantized coefficients.

    Color images are converted to YCbCr and chroma-subsampled (4:2:0 by
    default); every plane is edge-padded to the 8x8 block grid, level
    shifted, transformed and quantized with the tables for ``qf``.
    """
    qf = check_quality(qf)
    luma_q, chroma_q = quality_to_quant_matrices(qf)
    if img.channels == 1:
        plane = _plane_to_coefficients(img.pixels, luma_q)
        return CoefficientImage(img.width, img.height, (plane,), (luma_q,))
    if subsampling not in (SUBSAMPLING_NONE, SUBSAMPLING_420):
        raise ValueError(f"unknown subsampling {subsampling!r}")
    ycbcr = rgb_to_ycbcr(img.pixels)
    chroma = [ycbcr[..., 1], ycbcr[..., 2]]
    if subsampling == SUBSAMPLING_420:
        chroma = [_downsample_420(c) for c in chroma]
    planes = [_plane_to_coefficients(ycbcr[..., 0], luma_q)]
    planes += [_plane_to_coefficients(c, chroma_q) for c in chroma]
    return CoefficientImage(img.width, img.height, tuple(planes),
                            (luma_q, chroma_q, chroma_q), subsampling)


def coefficients_to_pixels(img: CoefficientImage) -> PixelImage:
    """Reconstruct the 8-bit raster from quantized coefficients.

    Per component: dequantize, inverse DCT, undo the level shift, round,
    clamp to [0, 255]; 4:2:0 chroma is replicated back to full resolution
    and 3-component images are converted YCbCr -> RGB.  The rounding and
    clamping here is exactly the error a later re-compression sees.
    """
    planes = []
    for c in range(img.components):
        w, h = img.component_size(c)
        rows, cols = img.component_grid(c)
        planes.append(_plane_from_coefficients(img.planes[c], img.quant[c], rows, cols, w, h))
    if img.components == 1:
        return PixelImage(planes[0])
    y, cb, cr = planes
    if img.subsampling == SUBSAMPLING_420:
        cb = _upsample_420(cb)[: img.height, : img.width]
        cr = _upsample_420(cr)[: img.height, : img.width]
    return PixelImage(ycbcr_to_rgb(y, cb, cr))


def recompress(data: bytes, qf: int) -> bytes:
    """Decode a JPEG stream, reconstruct pixels, re-encode at ``qf``.

    The output has the same pixel dimensions as the input; color images
    come back 4:2:0 as a re-compressing service would produce them.
    """
    from .decoder import decode_file
    from .encoder import encode_file

    qf = check_quality(qf)
    return encode_file(pixels_to_coefficients(coefficients_to_pixels(decode_file(data)), qf))
