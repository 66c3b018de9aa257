"""Ternary DC-sign features: extraction and binary (de)serialization.

A feature stores, per 8x8 luma block, one of {-1, 0, +1}: the sign of the
quantized DC coefficient with magnitudes up to a threshold suppressed to
zero.  Suppression is what makes the code survive the rounding and
clamping error that re-compression introduces.
"""
from __future__ import annotations

import hashlib
import struct
import zlib
from dataclasses import dataclass

import numpy as np

from .errors import CorruptRecordError
from .types import CoefficientImage, block_grid

MAGIC = b"DCSF"
VERSION = 1

_HEADER = struct.Struct("<4sBBIIIHH")

# 2-bit code points in the packed payload.
_PACK = {0: 0b00, 1: 0b01, -1: 0b10}
_UNPACK = np.array([0, 1, -1, 2], dtype=np.int8)  # 2 marks the reserved point


@dataclass(eq=False)
class TernaryFeature:
    """Per-block ternary codes for one enrolled image."""

    image_id: str
    width: int
    height: int
    th: int
    codes: np.ndarray  # int8, one entry per luma block in raster order

    def __post_init__(self):
        if self.th < 0:
            raise ValueError("threshold must be non-negative")
        if self.width < 1 or self.height < 1:
            raise ValueError("image dimensions must be positive")
        codes = np.ascontiguousarray(self.codes, dtype=np.int8)
        rows, cols = block_grid(self.width, self.height)
        if codes.shape != (rows * cols,):
            raise ValueError(
                f"expected {rows * cols} codes for {self.width}x{self.height}, "
                f"got {codes.shape}"
            )
        bad = np.setdiff1d(np.unique(codes), [-1, 0, 1])
        if bad.size:
            raise ValueError(f"codes must lie in {{-1, 0, +1}}, found {bad.tolist()}")
        codes.setflags(write=False)
        self.codes = codes

    @property
    def block_count(self) -> int:
        return len(self.codes)

    def __eq__(self, other):
        if not isinstance(other, TernaryFeature):
            return NotImplemented
        return (
            self.image_id == other.image_id
            and self.width == other.width
            and self.height == other.height
            and self.th == other.th
            and np.array_equal(self.codes, other.codes)
        )


def sgn(y) -> int:
    """Sign of a value: 1 if positive, 0 if zero, -1 if negative."""
    return (y > 0) - (y < 0)


def extract_feature(img: CoefficientImage, th: int, image_id: str) -> TernaryFeature:
    """Map each quantized luma DC coefficient to a ternary code.

    Coefficients strictly above ``th`` give +1, strictly below ``-th``
    give -1, and the closed band [-th, th] gives 0.  The comparison is in
    quantized units, matching what a decoder reads from the stream.
    """
    if th < 0:
        raise ValueError("threshold must be non-negative")
    dc = img.dc_coefficients(0)
    codes = np.zeros(dc.shape, dtype=np.int8)
    codes[dc > th] = 1
    codes[dc < -th] = -1
    return TernaryFeature(image_id, img.width, img.height, int(th), codes)


def default_image_id(data: bytes) -> str:
    """Content-derived id for an enrolled file; filenames are not stable."""
    return hashlib.sha256(data).hexdigest()


def _pack_codes(codes: np.ndarray) -> bytes:
    mapped = np.zeros(len(codes), dtype=np.uint8)
    mapped[codes == 1] = _PACK[1]
    mapped[codes == -1] = _PACK[-1]
    pad = -len(mapped) % 4
    if pad:
        mapped = np.concatenate([mapped, np.zeros(pad, dtype=np.uint8)])
    quads = mapped.reshape(-1, 4)
    packed = quads[:, 0] | (quads[:, 1] << 2) | (quads[:, 2] << 4) | (quads[:, 3] << 6)
    return packed.astype(np.uint8).tobytes()


def serialize(feature: TernaryFeature) -> bytes:
    """Encode a feature record (little-endian, CRC32-terminated)."""
    ident = feature.image_id.encode("utf-8")
    if len(ident) > 0xFFFF:
        raise ValueError("image id exceeds 65535 UTF-8 bytes")
    if feature.th > 0xFFFF:
        raise ValueError("threshold exceeds the u16 record field")
    header = _HEADER.pack(
        MAGIC, VERSION, 0,
        feature.width, feature.height, feature.block_count,
        feature.th, len(ident),
    )
    body = header + ident + _pack_codes(feature.codes)
    return body + struct.pack("<I", zlib.crc32(body) & 0xFFFFFFFF)


def deserialize(data: bytes) -> TernaryFeature:
    """Decode a feature record, validating structure and checksum."""
    if len(data) < _HEADER.size + 4:
        raise CorruptRecordError("record shorter than its fixed header", "truncated")
    magic, version, flags, width, height, m, th, id_len = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise CorruptRecordError(f"bad magic {magic!r}", "bad-magic")
    if version != VERSION:
        raise CorruptRecordError(f"unsupported record version {version}", "bad-version")
    if flags != 0:
        raise CorruptRecordError(f"unsupported flags 0x{flags:02x}", "bad-flags")
    payload_len = (m + 3) // 4
    expected = _HEADER.size + id_len + payload_len + 4
    if len(data) != expected:
        raise CorruptRecordError(
            f"record is {len(data)} bytes, layout requires {expected}", "length-mismatch"
        )
    crc = struct.unpack_from("<I", data, len(data) - 4)[0]
    if crc != zlib.crc32(data[:-4]) & 0xFFFFFFFF:
        raise CorruptRecordError("CRC32 mismatch", "bad-crc")
    try:
        ident = data[_HEADER.size : _HEADER.size + id_len].decode("utf-8")
    except UnicodeDecodeError:
        raise CorruptRecordError("image id is not valid UTF-8", "bad-id") from None
    packed = np.frombuffer(
        data, dtype=np.uint8, count=payload_len, offset=_HEADER.size + id_len
    )
    fields = np.empty(payload_len * 4, dtype=np.uint8)
    fields[0::4] = packed & 3
    fields[1::4] = (packed >> 2) & 3
    fields[2::4] = (packed >> 4) & 3
    fields[3::4] = (packed >> 6) & 3
    if (fields[:m] == 3).any():
        raise CorruptRecordError("reserved 2-bit code 11 in payload", "reserved-code")
    if fields[m:].any():
        raise CorruptRecordError("nonzero padding after final code", "bad-padding")
    codes = _UNPACK[fields[:m]]
    try:
        return TernaryFeature(ident, width, height, th, codes)
    except ValueError as exc:
        raise CorruptRecordError(str(exc), "bad-geometry") from None
