"""Canonical Huffman codes as used by baseline JPEG DHT segments."""
from __future__ import annotations

from .bitio import BitReader


class InvalidHuffmanCode(Exception):
    """The next bits match no codeword of the table."""


class HuffmanTable:
    """One DC or AC code table, usable for both encoding and decoding.

    ``counts`` are the 16 per-length codeword counts of a DHT segment and
    ``symbols`` the symbol values in canonical order.  Decoding uses a
    16-bit prefix lookup table, so one symbol costs a single peek.
    """

    __slots__ = ("counts", "symbols", "enc_code", "enc_len", "_lut_sym", "_lut_len")

    def __init__(self, counts, symbols):
        counts = tuple(int(c) for c in counts)
        symbols = tuple(int(s) for s in symbols)
        if len(counts) != 16:
            raise ValueError("expected 16 codeword counts")
        if sum(counts) != len(symbols):
            raise ValueError("codeword counts do not match symbol count")
        if not symbols:
            raise ValueError("empty Huffman table")
        self.counts = counts
        self.symbols = symbols

        self.enc_code = [0] * 256
        self.enc_len = [0] * 256
        lut_sym = bytearray(1 << 16)
        lut_len = bytearray(1 << 16)

        code = 0
        k = 0
        for length in range(1, 17):
            for _ in range(counts[length - 1]):
                if code >= (1 << length):
                    raise ValueError("overfull Huffman code table")
                sym = symbols[k]
                k += 1
                self.enc_code[sym] = code
                self.enc_len[sym] = length
                first = code << (16 - length)
                span = 1 << (16 - length)
                lut_sym[first : first + span] = bytes([sym]) * span
                lut_len[first : first + span] = bytes([length]) * span
                code += 1
            code <<= 1
        self._lut_sym = bytes(lut_sym)
        self._lut_len = bytes(lut_len)

    def decode(self, reader: BitReader) -> int:
        window = reader.peek16()
        length = self._lut_len[window]
        if length == 0:
            raise InvalidHuffmanCode
        reader.consume(length)
        return self._lut_sym[window]


def extend(value: int, nbits: int) -> int:
    """Map ``nbits`` raw magnitude bits to the signed coefficient value."""
    if nbits == 0:
        return 0
    if value < (1 << (nbits - 1)):
        return value - (1 << nbits) + 1
    return value


def magnitude_category(value: int) -> int:
    """SSSS category of a signed value: bit length of its magnitude."""
    return abs(value).bit_length()


def magnitude_bits(value: int, nbits: int) -> int:
    """Raw bits encoding a signed value within its category."""
    return value if value >= 0 else value + (1 << nbits) - 1
