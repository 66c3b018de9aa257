"""Baseline JFIF encoder: quantized coefficients -> Huffman-coded stream.

Emits SOF0 with the image's quantization matrices and the fixed typical
Huffman tables, no restart markers, so identical input always yields an
identical byte stream.
"""
from __future__ import annotations

import struct

import numpy as np

from ..types import SUBSAMPLING_420, CoefficientImage
from .bitio import BitWriter
from .huffman import HuffmanTable, magnitude_bits, magnitude_category
from .tables import (
    AC_CHROMA_SPEC,
    AC_LUMA_SPEC,
    DC_CHROMA_SPEC,
    DC_LUMA_SPEC,
    ZIGZAG,
)

_MAX_DIM = 65535

_DC_LUMA = HuffmanTable(*DC_LUMA_SPEC)
_AC_LUMA = HuffmanTable(*AC_LUMA_SPEC)
_DC_CHROMA = HuffmanTable(*DC_CHROMA_SPEC)
_AC_CHROMA = HuffmanTable(*AC_CHROMA_SPEC)


def _segment(marker: int, payload: bytes) -> bytes:
    return struct.pack(">BBH", 0xFF, marker, 2 + len(payload)) + payload


def _app0_jfif() -> bytes:
    return _segment(0xE0, b"JFIF\x00" + struct.pack(">BBBHHBB", 1, 1, 0, 1, 1, 0, 0))


def _dqt(tables: list[np.ndarray]) -> bytes:
    payload = b""
    for tid, q in enumerate(tables):
        payload += struct.pack("B", tid) + bytes(q.reshape(64)[ZIGZAG].astype(np.uint8))
    return _segment(0xDB, payload)


def _sof0(img: CoefficientImage, samplings, quant_ids) -> bytes:
    payload = struct.pack(">BHHB", 8, img.height, img.width, img.components)
    for c in range(img.components):
        h, v = samplings[c]
        payload += struct.pack("BBB", c + 1, (h << 4) | v, quant_ids[c])
    return _segment(0xC0, payload)


def _dht(tables: list[tuple[int, int, HuffmanTable]]) -> bytes:
    payload = b""
    for table_class, tid, table in tables:
        payload += struct.pack("B", (table_class << 4) | tid)
        payload += bytes(table.counts) + bytes(table.symbols)
    return _segment(0xC4, payload)


def _sos(img: CoefficientImage) -> bytes:
    payload = struct.pack("B", img.components)
    for c in range(img.components):
        tid = 0 if c == 0 else 1
        payload += struct.pack("BB", c + 1, (tid << 4) | tid)
    payload += struct.pack("BBB", 0, 63, 0)
    return _segment(0xDA, payload)


def _quant_table_ids(img: CoefficientImage) -> tuple[list[np.ndarray], list[int]]:
    tables: list[np.ndarray] = []
    ids = []
    for q in img.quant:
        for tid, seen in enumerate(tables):
            if np.array_equal(seen, q):
                ids.append(tid)
                break
        else:
            tables.append(q)
            ids.append(len(tables) - 1)
    return tables, ids


def _padded_plane(img: CoefficientImage, c: int, h: int, v: int,
                  mcus_x: int, mcus_y: int) -> np.ndarray:
    """Component blocks as a (rows, cols, 64) zig-zag array covering the MCU grid.

    MCU rows/columns beyond the component's real block grid repeat the edge
    blocks; a decoder discards them, so their content only has to be valid.
    """
    rows, cols = img.component_grid(c)
    zz = img.planes[c].reshape(-1, 64)[:, ZIGZAG].reshape(rows, cols, 64)
    need_rows, need_cols = mcus_y * v, mcus_x * h
    if need_rows > rows or need_cols > cols:
        zz = np.pad(zz, ((0, need_rows - rows), (0, need_cols - cols), (0, 0)), mode="edge")
    return zz


def _encode_block(writer: BitWriter, zz: list, pred: int,
                  dc_table: HuffmanTable, ac_table: HuffmanTable) -> int:
    dc = zz[0]
    diff = dc - pred
    ssss = magnitude_category(diff)
    if ssss > 11:
        raise ValueError(f"DC difference {diff} exceeds the baseline coding range")
    writer.write(dc_table.enc_code[ssss], dc_table.enc_len[ssss])
    if ssss:
        writer.write(magnitude_bits(diff, ssss), ssss)

    last = 63
    while last > 0 and zz[last] == 0:
        last -= 1
    run = 0
    for k in range(1, last + 1):
        val = zz[k]
        if val == 0:
            run += 1
            continue
        while run >= 16:
            writer.write(ac_table.enc_code[0xF0], ac_table.enc_len[0xF0])
            run -= 16
        ssss = magnitude_category(val)
        if ssss > 10:
            raise ValueError(f"AC coefficient {val} exceeds the baseline coding range")
        sym = (run << 4) | ssss
        writer.write(ac_table.enc_code[sym], ac_table.enc_len[sym])
        writer.write(magnitude_bits(val, ssss), ssss)
        run = 0
    if last < 63:
        writer.write(ac_table.enc_code[0x00], ac_table.enc_len[0x00])
    return dc


def encode_file(img: CoefficientImage) -> bytes:
    """Serialize a coefficient image to a baseline JFIF byte stream."""
    if img.width > _MAX_DIM or img.height > _MAX_DIM:
        raise ValueError("image dimensions exceed the 16-bit JPEG limit")

    if img.components == 1:
        samplings = [(1, 1)]
    elif img.subsampling == SUBSAMPLING_420:
        samplings = [(2, 2), (1, 1), (1, 1)]
    else:
        samplings = [(1, 1)] * 3
    hmax = max(h for h, _ in samplings)
    vmax = max(v for _, v in samplings)
    mcus_x = (img.width + 8 * hmax - 1) // (8 * hmax)
    mcus_y = (img.height + 8 * vmax - 1) // (8 * vmax)

    quant_tables, quant_ids = _quant_table_ids(img)
    if img.components == 1:
        huff = [(0, 0, _DC_LUMA), (1, 0, _AC_LUMA)]
        comp_tables = [(_DC_LUMA, _AC_LUMA)]
    else:
        huff = [(0, 0, _DC_LUMA), (1, 0, _AC_LUMA), (0, 1, _DC_CHROMA), (1, 1, _AC_CHROMA)]
        comp_tables = [(_DC_LUMA, _AC_LUMA), (_DC_CHROMA, _AC_CHROMA), (_DC_CHROMA, _AC_CHROMA)]

    planes = [
        _padded_plane(img, c, *samplings[c], mcus_x, mcus_y)
        for c in range(img.components)
    ]

    writer = BitWriter()
    preds = [0] * img.components
    for my in range(mcus_y):
        for mx in range(mcus_x):
            for c in range(img.components):
                h, v = samplings[c]
                dc_table, ac_table = comp_tables[c]
                for dy in range(v):
                    for dx in range(h):
                        zz = planes[c][my * v + dy, mx * h + dx].tolist()
                        preds[c] = _encode_block(writer, zz, preds[c], dc_table, ac_table)
    writer.pad_to_byte()

    return b"".join([
        b"\xff\xd8",
        _app0_jfif(),
        _dqt(quant_tables),
        _sof0(img, samplings, quant_ids),
        _dht(huff),
        _sos(img),
        writer.getvalue(),
        b"\xff\xd9",
    ])
