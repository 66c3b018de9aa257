"""Core value types: 8-bit rasters and quantized DCT coefficient images."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

SUBSAMPLING_NONE = "none"
SUBSAMPLING_420 = "4:2:0"


def block_grid(width: int, height: int) -> tuple[int, int]:
    """Rows and columns of 8x8 blocks covering a ``width`` x ``height`` plane."""
    return (height + 7) // 8, (width + 7) // 8


def chroma_size(width: int, height: int, subsampling: str) -> tuple[int, int]:
    """Pixel dimensions (width, height) of the chroma planes."""
    if subsampling == SUBSAMPLING_420:
        return (width + 1) // 2, (height + 1) // 2
    return width, height


@dataclass(eq=False)
class PixelImage:
    """An 8-bit raster, grayscale ``(h, w)`` or RGB ``(h, w, 3)``.

    The sample array is marked read-only on construction; instances are
    safe to share across threads.
    """

    pixels: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.pixels)
        if arr.dtype != np.uint8:
            raise ValueError(f"pixel samples must be uint8, got {arr.dtype}")
        if arr.ndim == 3 and arr.shape[2] == 1:
            arr = arr[:, :, 0]
        if not (arr.ndim == 2 or (arr.ndim == 3 and arr.shape[2] == 3)):
            raise ValueError(f"expected (h, w) or (h, w, 3) samples, got shape {arr.shape}")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError("image must have at least one pixel")
        arr.setflags(write=False)
        self.pixels = arr

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def channels(self) -> int:
        return 1 if self.pixels.ndim == 2 else 3

    def __eq__(self, other):
        if not isinstance(other, PixelImage):
            return NotImplemented
        return self.pixels.shape == other.pixels.shape and np.array_equal(
            self.pixels, other.pixels
        )


def _validate_quant(q: np.ndarray) -> np.ndarray:
    q = np.ascontiguousarray(q, dtype=np.int32)
    if q.shape != (8, 8):
        raise ValueError(f"quantization matrix must be 8x8, got {q.shape}")
    if q.min() < 1 or q.max() > 255:
        raise ValueError("quantization entries must lie in [1, 255]")
    q.setflags(write=False)
    return q


@dataclass(eq=False)
class CoefficientImage:
    """Quantized DCT coefficients of a baseline JPEG image.

    ``planes[c]`` is an ``(n_blocks, 8, 8)`` int32 array of quantized
    coefficients in natural (row, column) frequency order, blocks in raster
    order over the component's padded block grid; ``planes[c][:, 0, 0]``
    are the DC coefficients.  ``quant[c]`` is the 8x8 quantization matrix
    of component ``c``.  Component 0 is luma (or the single gray channel).
    """

    width: int
    height: int
    planes: tuple[np.ndarray, ...]
    quant: tuple[np.ndarray, ...]
    subsampling: str = SUBSAMPLING_NONE

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError("image dimensions must be positive")
        if len(self.planes) not in (1, 3):
            raise ValueError(f"expected 1 or 3 components, got {len(self.planes)}")
        if len(self.quant) != len(self.planes):
            raise ValueError("one quantization matrix is required per component")
        if self.subsampling not in (SUBSAMPLING_NONE, SUBSAMPLING_420):
            raise ValueError(f"unknown subsampling {self.subsampling!r}")
        if len(self.planes) == 1 and self.subsampling != SUBSAMPLING_NONE:
            raise ValueError("grayscale images carry no subsampled planes")
        planes = []
        for c, plane in enumerate(self.planes):
            arr = np.ascontiguousarray(plane, dtype=np.int32)
            rows, cols = self.component_grid(c)
            if arr.shape != (rows * cols, 8, 8):
                raise ValueError(
                    f"component {c}: expected {rows * cols} blocks of 8x8, got shape {arr.shape}"
                )
            arr.setflags(write=False)
            planes.append(arr)
        self.planes = tuple(planes)
        self.quant = tuple(_validate_quant(q) for q in self.quant)

    @property
    def components(self) -> int:
        return len(self.planes)

    @property
    def block_count(self) -> int:
        """Number of 8x8 blocks in the luma plane (including padding blocks)."""
        rows, cols = block_grid(self.width, self.height)
        return rows * cols

    def component_size(self, c: int) -> tuple[int, int]:
        """Pixel dimensions (width, height) of component ``c``."""
        if c == 0:
            return self.width, self.height
        return chroma_size(self.width, self.height, self.subsampling)

    def component_grid(self, c: int) -> tuple[int, int]:
        """Block grid (rows, cols) of component ``c``."""
        w, h = self.component_size(c)
        return block_grid(w, h)

    def dc_coefficients(self, c: int = 0) -> np.ndarray:
        """Quantized DC coefficients of component ``c``, blocks in raster order."""
        return self.planes[c][:, 0, 0]

    def __eq__(self, other):
        if not isinstance(other, CoefficientImage):
            return NotImplemented
        return (
            self.width == other.width
            and self.height == other.height
            and self.subsampling == other.subsampling
            and len(self.planes) == len(other.planes)
            and all(np.array_equal(a, b) for a, b in zip(self.planes, other.planes))
            and all(np.array_equal(a, b) for a, b in zip(self.quant, other.quant))
        )
