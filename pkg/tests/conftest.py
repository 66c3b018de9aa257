"""Shared builders for random but well-formed test inputs."""
from __future__ import annotations

import numpy as np
import pytest

from dcsign import CoefficientImage, PixelImage
from dcsign.types import SUBSAMPLING_NONE, block_grid, chroma_size


def random_quant(rng: np.random.Generator) -> np.ndarray:
    return rng.integers(1, 256, (8, 8)).astype(np.int32)


def random_coefficient_image(
    rng: np.random.Generator,
    width: int,
    height: int,
    components: int = 1,
    subsampling: str = SUBSAMPLING_NONE,
    ac_density: float = 0.1,
) -> CoefficientImage:
    """Random image whose dequantized coefficients stay in coding range."""
    quant = [random_quant(rng) for _ in range(components)]
    if components == 3:
        quant[2] = quant[1].copy()
    planes = []
    for c in range(components):
        if c == 0 or subsampling == SUBSAMPLING_NONE:
            w, h = width, height
        else:
            w, h = chroma_size(width, height, subsampling)
        rows, cols = block_grid(w, h)
        n = rows * cols
        q = quant[c].astype(np.int64)
        blocks = np.zeros((n, 64), dtype=np.int32)
        lo, hi = int(np.ceil(-1024 / q[0, 0])), int(np.floor(1016 / q[0, 0]))
        blocks[:, 0] = rng.integers(lo, hi + 1, n)
        n_ac = int(ac_density * n * 63)
        for _ in range(n_ac):
            bi = int(rng.integers(0, n))
            k = int(rng.integers(1, 64))
            amax = int(1016 // q.reshape(64)[k])
            if amax:
                blocks[bi, k] = int(rng.integers(-amax, amax + 1))
        planes.append(blocks.reshape(n, 8, 8))
    sub = subsampling if components == 3 else SUBSAMPLING_NONE
    return CoefficientImage(width, height, tuple(planes), tuple(quant), sub)


def random_pixel_image(rng: np.random.Generator, width: int, height: int,
                       channels: int = 1) -> PixelImage:
    shape = (height, width) if channels == 1 else (height, width, 3)
    return PixelImage(rng.integers(0, 256, shape, dtype=np.uint8))


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)
