"""Orthonormal 8x8 DCT-II in double precision.

The normalization maps a constant block of value c to DC = 8c, so
level-shifted 8-bit samples give DC coefficients in [-1024, 1016].
Both transforms accept single blocks (shape ``(8, 8)`` or flat ``(64,)``)
or batches (``(..., 8, 8)`` / ``(..., 64)``) and return the same layout.
"""
from __future__ import annotations

import numpy as np


def _basis() -> np.ndarray:
    k = np.arange(8).reshape(8, 1)
    x = np.arange(8).reshape(1, 8)
    t = np.cos((2 * x + 1) * k * np.pi / 16) * np.sqrt(2.0 / 8.0)
    t[0, :] = np.sqrt(1.0 / 8.0)
    return t


_T = _basis()
_TT = _T.T.copy()


def _as_blocks(a: np.ndarray) -> tuple[np.ndarray, bool]:
    a = np.asarray(a, dtype=np.float64)
    if a.shape[-1] == 64:
        return a.reshape(a.shape[:-1] + (8, 8)), True
    if a.shape[-2:] != (8, 8):
        raise ValueError(f"expected (..., 8, 8) or (..., 64) array, got shape {a.shape}")
    return a, False


def fdct(samples) -> np.ndarray:
    """Forward 2-D DCT of level-shifted samples."""
    blocks, flat = _as_blocks(samples)
    out = _T @ blocks @ _TT
    return out.reshape(out.shape[:-2] + (64,)) if flat else out


def idct(coeffs) -> np.ndarray:
    """Inverse 2-D DCT back to level-shifted samples."""
    blocks, flat = _as_blocks(coeffs)
    out = _TT @ blocks @ _T
    return out.reshape(out.shape[:-2] + (64,)) if flat else out
