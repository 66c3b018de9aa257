"""Append-only single-file database of ternary feature records.

File layout (little-endian): magic "DCDB", version u8, 3 reserved bytes,
record count u32, then length-prefixed feature records.  The header count
is the commit point: bytes past the counted records are a torn append and
are truncated on the next open.
"""
from __future__ import annotations

import os
import struct
from dataclasses import dataclass

from . import feature as _feature
from .errors import CorruptRecordError, DuplicateImageIdError, IncompatibleStoreError
from .feature import TernaryFeature
from .types import CoefficientImage

MAGIC = b"DCDB"
VERSION = 1
_HEADER = struct.Struct("<4sB3sI")
_FRAME = struct.Struct("<I")


@dataclass
class FeatureStore:
    """Single-writer, multi-reader store; records are immutable once written."""

    path: str
    _records: list[TernaryFeature]
    _index: dict[str, TernaryFeature]
    _data_end: int

    @classmethod
    def open(cls, path: str | os.PathLike) -> "FeatureStore":
        """Open an existing store, or create an empty one if absent.

        Every record is CRC-verified on load; a record that fails names its
        ordinal.  Trailing bytes beyond the counted records are removed.
        """
        path = os.fspath(path)
        if not os.path.exists(path):
            with open(path, "wb") as fh:
                fh.write(_HEADER.pack(MAGIC, VERSION, b"\x00\x00\x00", 0))
                fh.flush()
                os.fsync(fh.fileno())
            return cls(path, [], {}, _HEADER.size)

        with open(path, "rb") as fh:
            data = fh.read()
        if len(data) < _HEADER.size:
            raise IncompatibleStoreError(f"{path}: shorter than the store header")
        magic, version, _reserved, count = _HEADER.unpack_from(data)
        if magic != MAGIC:
            raise IncompatibleStoreError(f"{path}: bad magic {magic!r}")
        if version != VERSION:
            raise IncompatibleStoreError(f"{path}: unsupported version {version}")

        records: list[TernaryFeature] = []
        index: dict[str, TernaryFeature] = {}
        pos = _HEADER.size
        for ordinal in range(count):
            if pos + _FRAME.size > len(data):
                raise CorruptRecordError(
                    f"{path}: record {ordinal} frame extends past end of file",
                    "truncated",
                )
            (length,) = _FRAME.unpack_from(data, pos)
            pos += _FRAME.size
            if pos + length > len(data):
                raise CorruptRecordError(
                    f"{path}: record {ordinal} body extends past end of file",
                    "truncated",
                )
            try:
                record = _feature.deserialize(data[pos : pos + length])
            except CorruptRecordError as exc:
                raise CorruptRecordError(
                    f"{path}: record {ordinal}: {exc}", exc.reason
                ) from None
            if record.image_id in index:
                raise CorruptRecordError(
                    f"{path}: record {ordinal} repeats id {record.image_id!r}",
                    "duplicate-id",
                )
            records.append(record)
            index[record.image_id] = record
            pos += length

        if pos < len(data):
            with open(path, "r+b") as fh:
                fh.truncate(pos)
        return cls(path, records, index, pos)

    def enroll(self, img: CoefficientImage, th: int, image_id: str) -> str:
        """Extract the feature of ``img`` and append it durably.

        The append is atomic at record granularity: the record bytes are
        flushed before the header count is advanced.
        """
        if image_id in self._index:
            raise DuplicateImageIdError(f"image id {image_id!r} already enrolled")
        record = _feature.extract_feature(img, th, image_id)
        blob = _feature.serialize(record)
        frame = _FRAME.pack(len(blob)) + blob
        with open(self.path, "r+b") as fh:
            fh.seek(self._data_end)
            fh.write(frame)
            fh.flush()
            os.fsync(fh.fileno())
            fh.seek(0)
            fh.write(_HEADER.pack(MAGIC, VERSION, b"\x00\x00\x00", len(self._records) + 1))
            fh.flush()
            os.fsync(fh.fileno())
        self._data_end += len(frame)
        self._records.append(record)
        self._index[image_id] = record
        return image_id

    def features(self) -> tuple[TernaryFeature, ...]:
        """Snapshot of all records in enrollment order."""
        return tuple(self._records)

    def get(self, image_id: str) -> TernaryFeature | None:
        return self._index.get(image_id)

    def __len__(self) -> int:
        return len(self._records)

    def __iter__(self):
        return iter(self.features())

    def __contains__(self, image_id: str) -> bool:
        return image_id in self._index
