"""Binary PPM (P6) and PGM (P5) reading and writing, maxval 255."""
from __future__ import annotations

import os

import numpy as np

from .errors import PnmError
from .types import PixelImage


def _tokens(data: bytes):
    """Yield header tokens, treating '#' comments as whitespace."""
    i = 0
    n = len(data)
    while i < n:
        c = data[i : i + 1]
        if c == b"#":
            j = data.find(b"\n", i)
            if j < 0:
                raise PnmError("unterminated comment in header")
            i = j + 1
        elif c.isspace():
            i += 1
        else:
            j = i
            while j < n and not data[j : j + 1].isspace() and data[j : j + 1] != b"#":
                j += 1
            yield data[i:j], j
            i = j


def parse_pnm(data: bytes) -> PixelImage:
    """Parse binary PGM/PPM bytes into a :class:`PixelImage`."""
    tok = _tokens(data)
    try:
        magic, _ = next(tok)
    except StopIteration:
        raise PnmError("empty file") from None
    if magic == b"P5":
        channels = 1
    elif magic == b"P6":
        channels = 3
    else:
        raise PnmError(f"unsupported magic {magic!r} (only binary P5/P6)")
    try:
        (w_tok, _), (h_tok, _), (m_tok, end) = next(tok), next(tok), next(tok)
        width, height, maxval = int(w_tok), int(h_tok), int(m_tok)
    except (StopIteration, ValueError):
        raise PnmError("malformed header") from None
    if width < 1 or height < 1:
        raise PnmError("non-positive dimensions")
    if maxval != 255:
        raise PnmError(f"unsupported maxval {maxval} (only 255)")
    raster = data[end + 1 :]
    need = width * height * channels
    if len(raster) < need:
        raise PnmError(f"raster truncated: expected {need} bytes, found {len(raster)}")
    arr = np.frombuffer(raster[:need], dtype=np.uint8)
    shape = (height, width) if channels == 1 else (height, width, 3)
    return PixelImage(arr.reshape(shape).copy())


def serialize_pnm(img: PixelImage) -> bytes:
    magic = b"P5" if img.channels == 1 else b"P6"
    header = b"%s\n%d %d\n255\n" % (magic, img.width, img.height)
    return header + img.pixels.tobytes()


def read_pnm(path: str | os.PathLike) -> PixelImage:
    with open(path, "rb") as fh:
        return parse_pnm(fh.read())


def write_pnm(path: str | os.PathLike, img: PixelImage) -> None:
    with open(path, "wb") as fh:
        fh.write(serialize_pnm(img))
