"""Bit-level reader/writer for entropy-coded JPEG scan data.

The writer performs 0xFF byte stuffing; the reader operates on already
destuffed segment bytes (marker handling lives in the decoder).
"""
from __future__ import annotations


class BitstreamOverrun(Exception):
    """Read past the end of the available scan bits."""


class BitWriter:
    __slots__ = ("_acc", "_nbits", "_out")

    def __init__(self):
        self._acc = 0
        self._nbits = 0
        self._out = bytearray()

    def write(self, code: int, nbits: int) -> None:
        if nbits == 0:
            return
        self._acc = (self._acc << nbits) | code
        self._nbits += nbits
        while self._nbits >= 8:
            self._nbits -= 8
            byte = (self._acc >> self._nbits) & 0xFF
            self._out.append(byte)
            if byte == 0xFF:
                self._out.append(0x00)
        self._acc &= (1 << self._nbits) - 1

    def pad_to_byte(self) -> None:
        """Fill the last partial byte with 1 bits."""
        if self._nbits:
            n = 8 - self._nbits
            self.write((1 << n) - 1, n)

    def getvalue(self) -> bytes:
        return bytes(self._out)


class BitReader:
    __slots__ = ("_data", "_nbits", "pos")

    def __init__(self, data: bytes):
        self._data = data + b"\x00\x00\x00\x00"
        self._nbits = len(data) * 8
        self.pos = 0

    @property
    def bits_left(self) -> int:
        return self._nbits - self.pos

    def peek16(self) -> int:
        """Next 16 bits, zero-padded past the end of the data."""
        i = self.pos >> 3
        window = int.from_bytes(self._data[i : i + 3], "big")
        return (window >> (8 - (self.pos & 7))) & 0xFFFF

    def consume(self, nbits: int) -> None:
        if self.pos + nbits > self._nbits:
            raise BitstreamOverrun
        self.pos += nbits

    def read(self, nbits: int) -> int:
        if nbits == 0:
            return 0
        if self.pos + nbits > self._nbits:
            raise BitstreamOverrun
        i = self.pos >> 3
        window = int.from_bytes(self._data[i : i + 4], "big")
        val = (window >> (32 - nbits - (self.pos & 7))) & ((1 << nbits) - 1)
        self.pos += nbits
        return val
