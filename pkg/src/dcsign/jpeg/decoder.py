"""Baseline JFIF decoder: entropy layer only, no inverse transform.

Produces the quantized coefficient planes exactly as they were entropy
coded (DC differentials resolved to absolute values) together with the
stream's quantization matrices.  Restart markers are accepted; anything
outside the 8-bit sequential Huffman subset is rejected by name.
"""
from __future__ import annotations

import struct
from dataclasses import dataclass, field

import numpy as np

from ..errors import CorruptStreamError, UnsupportedFormatError
from ..types import SUBSAMPLING_420, SUBSAMPLING_NONE, CoefficientImage
from .bitio import BitReader, BitstreamOverrun
from .huffman import HuffmanTable, InvalidHuffmanCode, extend
from .tables import ZIGZAG

_SOF_NAMES = {
    0xC1: "SOF1 (extended sequential)",
    0xC2: "SOF2 (progressive)",
    0xC3: "SOF3 (lossless)",
    0xC5: "SOF5 (differential sequential)",
    0xC6: "SOF6 (differential progressive)",
    0xC7: "SOF7 (differential lossless)",
    0xC9: "SOF9 (arithmetic sequential)",
    0xCA: "SOF10 (arithmetic progressive)",
    0xCB: "SOF11 (arithmetic lossless)",
    0xCD: "SOF13",
    0xCE: "SOF14",
    0xCF: "SOF15",
}


@dataclass
class _Component:
    ident: int
    h: int
    v: int
    quant_id: int
    dc_id: int = 0
    ac_id: int = 0
    blocks: np.ndarray | None = None  # (rows, cols, 64) zig-zag order, MCU-padded
    rows: int = 0
    cols: int = 0


@dataclass
class _FrameState:
    width: int = 0
    height: int = 0
    components: list[_Component] = field(default_factory=list)
    quant: dict[int, np.ndarray] = field(default_factory=dict)
    dc_tables: dict[int, HuffmanTable] = field(default_factory=dict)
    ac_tables: dict[int, HuffmanTable] = field(default_factory=dict)
    restart_interval: int = 0


class _Parser:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0
        self.frame = _FrameState()

    def corrupt(self, message: str, offset: int | None = None) -> CorruptStreamError:
        return CorruptStreamError(message, self.pos if offset is None else offset)

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            raise self.corrupt("truncated stream", len(self.data))
        chunk = self.data[self.pos : self.pos + n]
        self.pos += n
        return chunk

    def u8(self) -> int:
        return self.take(1)[0]

    def u16(self) -> int:
        return struct.unpack(">H", self.take(2))[0]

    def next_marker(self) -> int:
        """Advance to the next marker, tolerating 0xFF fill bytes."""
        start = self.pos
        b = self.u8()
        if b != 0xFF:
            raise self.corrupt(f"expected marker, found byte 0x{b:02x}", start)
        code = self.u8()
        while code == 0xFF:
            code = self.u8()
        if code == 0x00:
            raise self.corrupt("stuffed byte outside entropy-coded data", start)
        return code

    def segment(self) -> bytes:
        length = self.u16()
        if length < 2:
            raise self.corrupt("segment length below header size", self.pos - 2)
        return self.take(length - 2)

    # -- marker segment handlers ------------------------------------------

    def read_dqt(self, payload: bytes, offset: int) -> None:
        pos = 0
        while pos < len(payload):
            pq_tq = payload[pos]
            pos += 1
            precision, tid = pq_tq >> 4, pq_tq & 0x0F
            if precision not in (0, 1):
                raise self.corrupt(f"bad DQT precision {precision}", offset)
            if tid > 3:
                raise self.corrupt(f"bad DQT table id {tid}", offset)
            n = 64 if precision == 0 else 128
            if pos + n > len(payload):
                raise self.corrupt("truncated DQT segment", offset)
            raw = payload[pos : pos + n]
            pos += n
            if precision == 0:
                values = np.frombuffer(raw, dtype=np.uint8).astype(np.int32)
            else:
                values = np.frombuffer(raw, dtype=">u2").astype(np.int32)
                if values.max() > 255:
                    raise UnsupportedFormatError(
                        "DQT with 16-bit entries above 255 is not baseline"
                    )
            if values.min() < 1:
                raise self.corrupt("quantization table contains a zero entry", offset)
            natural = np.empty(64, dtype=np.int32)
            natural[ZIGZAG] = values
            self.frame.quant[tid] = natural.reshape(8, 8)
        if pos != len(payload):
            raise self.corrupt("trailing bytes in DQT segment", offset)

    def read_dht(self, payload: bytes, offset: int) -> None:
        pos = 0
        while pos < len(payload):
            if pos + 17 > len(payload):
                raise self.corrupt("truncated DHT segment", offset)
            tc_th = payload[pos]
            table_class, tid = tc_th >> 4, tc_th & 0x0F
            if table_class not in (0, 1) or tid > 3:
                raise self.corrupt(f"bad DHT class/id byte 0x{tc_th:02x}", offset)
            counts = payload[pos + 1 : pos + 17]
            total = sum(counts)
            pos += 17
            if pos + total > len(payload):
                raise self.corrupt("truncated DHT segment", offset)
            symbols = payload[pos : pos + total]
            pos += total
            try:
                table = HuffmanTable(counts, symbols)
            except ValueError as exc:
                raise self.corrupt(f"invalid Huffman table: {exc}", offset) from exc
            if table_class == 0:
                self.frame.dc_tables[tid] = table
            else:
                self.frame.ac_tables[tid] = table

    def read_sof0(self, payload: bytes, offset: int) -> None:
        if self.frame.components:
            raise self.corrupt("multiple SOF segments", offset)
        if len(payload) < 6:
            raise self.corrupt("truncated SOF0 segment", offset)
        precision, height, width, ncomp = struct.unpack(">BHHB", payload[:6])
        if precision != 8:
            raise UnsupportedFormatError(f"SOF0 with {precision}-bit precision")
        if ncomp not in (1, 3):
            raise UnsupportedFormatError(f"SOF0 with {ncomp} components")
        if width < 1 or height < 1:
            raise self.corrupt("SOF0 with zero dimension", offset)
        if len(payload) != 6 + 3 * ncomp:
            raise self.corrupt("SOF0 length does not match component count", offset)
        comps = []
        for c in range(ncomp):
            ident, hv, tq = payload[6 + 3 * c : 9 + 3 * c]
            h, v = hv >> 4, hv & 0x0F
            if not (1 <= h <= 4 and 1 <= v <= 4):
                raise self.corrupt(f"bad sampling factors {h}x{v}", offset)
            comps.append(_Component(ident, h, v, tq))
        if ncomp == 3:
            factors = [(c.h, c.v) for c in comps]
            if factors not in ([(1, 1)] * 3, [(2, 2), (1, 1), (1, 1)]):
                desc = "/".join(f"{h}x{v}" for h, v in factors)
                raise UnsupportedFormatError(f"SOF0 sampling factors {desc}")
        self.frame.width = width
        self.frame.height = height
        self.frame.components = comps

    def read_sos(self, payload: bytes, offset: int) -> None:
        frame = self.frame
        if not frame.components:
            raise self.corrupt("SOS before SOF0", offset)
        if len(payload) < 1:
            raise self.corrupt("truncated SOS segment", offset)
        ns = payload[0]
        if len(payload) != 1 + 2 * ns + 3:
            raise self.corrupt("SOS length does not match component count", offset)
        if ns != len(frame.components):
            raise UnsupportedFormatError(
                "multi-scan stream: scan does not cover all frame components"
            )
        by_ident = {c.ident: c for c in frame.components}
        for i in range(ns):
            ident, tables = payload[1 + 2 * i : 3 + 2 * i]
            comp = by_ident.get(ident)
            if comp is None:
                raise self.corrupt(f"scan references unknown component {ident}", offset)
            if comp is not frame.components[i]:
                raise UnsupportedFormatError("scan components out of frame order")
            comp.dc_id, comp.ac_id = tables >> 4, tables & 0x0F
        ss, se, ahal = payload[-3:]
        if (ss, se, ahal) != (0, 63, 0):
            raise self.corrupt("bad spectral selection for a sequential scan", offset)

    # -- entropy-coded data ------------------------------------------------

    def split_scan_data(self) -> tuple[list[tuple[bytes, int]], int]:
        """Destuff the scan, splitting at restart markers.

        Returns (segments, terminator) where each segment is (payload bytes,
        absolute offset of its first byte) and terminator is the marker code
        that ended the scan.
        """
        data = self.data
        segments: list[tuple[bytes, int]] = []
        current = bytearray()
        seg_start = self.pos
        expected_rst = 0
        i = self.pos
        while True:
            j = data.find(b"\xff", i)
            if j < 0:
                raise self.corrupt("scan data ends without a terminating marker", len(data))
            current += data[i:j]
            if j + 1 >= len(data):
                raise self.corrupt("truncated marker in scan data", j)
            nxt = data[j + 1]
            if nxt == 0x00:
                current += b"\xff"
                i = j + 2
            elif nxt == 0xFF:
                i = j + 1
            elif 0xD0 <= nxt <= 0xD7:
                if self.frame.restart_interval == 0:
                    raise self.corrupt("restart marker without a DRI interval", j)
                if nxt - 0xD0 != expected_rst:
                    raise self.corrupt(
                        f"restart marker out of sequence (RST{nxt - 0xD0})", j
                    )
                expected_rst = (expected_rst + 1) & 7
                segments.append((bytes(current), seg_start))
                current = bytearray()
                i = j + 2
                seg_start = i
            else:
                segments.append((bytes(current), seg_start))
                self.pos = j
                return segments, nxt

    def decode_scan(self) -> None:
        frame = self.frame
        ncomp = len(frame.components)
        hmax = max(c.h for c in frame.components)
        vmax = max(c.v for c in frame.components)
        if ncomp == 1:
            # A single-component scan is never interleaved: the data units
            # cover the full-resolution block grid regardless of factors.
            comp = frame.components[0]
            comp.h = comp.v = hmax = vmax = 1
        mcus_x = (frame.width + 8 * hmax - 1) // (8 * hmax)
        mcus_y = (frame.height + 8 * vmax - 1) // (8 * vmax)

        for comp in frame.components:
            if comp.quant_id not in frame.quant:
                raise self.corrupt(f"missing quantization table {comp.quant_id}")
            if comp.dc_id not in frame.dc_tables:
                raise self.corrupt(f"missing DC Huffman table {comp.dc_id}")
            if comp.ac_id not in frame.ac_tables:
                raise self.corrupt(f"missing AC Huffman table {comp.ac_id}")
            comp.rows = mcus_y * comp.v
            comp.cols = mcus_x * comp.h
            comp.blocks = np.zeros((comp.rows, comp.cols, 64), dtype=np.int32)

        segments, terminator = self.split_scan_data()
        total_mcus = mcus_x * mcus_y
        interval = frame.restart_interval
        expected_segments = (
            1 if interval == 0 else (total_mcus + interval - 1) // interval
        )
        if len(segments) != expected_segments:
            raise self.corrupt(
                f"expected {expected_segments} entropy segment(s), found {len(segments)}"
            )

        tables = [
            (frame.dc_tables[c.dc_id], frame.ac_tables[c.ac_id])
            for c in frame.components
        ]
        mcu = 0
        for seg_index, (payload, seg_offset) in enumerate(segments):
            reader = BitReader(payload)
            preds = [0] * ncomp
            count = (
                total_mcus - mcu
                if interval == 0 or seg_index == len(segments) - 1
                else interval
            )
            try:
                for _ in range(count):
                    my, mx = divmod(mcu, mcus_x)
                    for ci, comp in enumerate(frame.components):
                        dc_table, ac_table = tables[ci]
                        for dy in range(comp.v):
                            for dx in range(comp.h):
                                preds[ci] = self._decode_block(
                                    reader,
                                    comp.blocks[my * comp.v + dy, mx * comp.h + dx],
                                    preds[ci],
                                    dc_table,
                                    ac_table,
                                )
                    mcu += 1
            except BitstreamOverrun:
                raise self.corrupt("entropy data ran out mid-block", seg_offset) from None
            except InvalidHuffmanCode:
                raise self.corrupt("invalid Huffman code in scan", seg_offset) from None

        marker_offset = self.pos
        code = self.next_marker()
        if code != 0xD9:
            if code == 0xDA:
                raise UnsupportedFormatError("multi-scan stream: second SOS")
            raise self.corrupt(f"expected EOI, found 0xff{code:02x}", marker_offset)
        assert terminator == code

    @staticmethod
    def _decode_block(reader: BitReader, out: np.ndarray, pred: int,
                      dc_table: HuffmanTable, ac_table: HuffmanTable) -> int:
        ssss = dc_table.decode(reader)
        if ssss > 11:
            raise InvalidHuffmanCode
        dc = pred + extend(reader.read(ssss), ssss)
        out[0] = dc
        k = 1
        while k < 64:
            sym = ac_table.decode(reader)
            run, ssss = sym >> 4, sym & 0x0F
            if ssss == 0:
                if run == 15:
                    k += 16
                    continue
                break  # EOB
            k += run
            if k > 63:
                raise InvalidHuffmanCode
            out[k] = extend(reader.read(ssss), ssss)
            k += 1
        return dc

    # -- top level -----------------------------------------------------------

    def parse(self) -> CoefficientImage:
        start = self.take(2)
        if start != b"\xff\xd8":
            raise self.corrupt("missing SOI marker", 0)
        while True:
            offset = self.pos
            code = self.next_marker()
            if code == 0xC0:
                self.read_sof0(self.segment(), offset)
            elif code in _SOF_NAMES:
                raise UnsupportedFormatError(_SOF_NAMES[code])
            elif code == 0xC4:
                self.read_dht(self.segment(), offset)
            elif code == 0xDB:
                self.read_dqt(self.segment(), offset)
            elif code == 0xDD:
                payload = self.segment()
                if len(payload) != 2:
                    raise self.corrupt("bad DRI length", offset)
                self.frame.restart_interval = struct.unpack(">H", payload)[0]
            elif code == 0xCC:
                raise UnsupportedFormatError("DAC (arithmetic coding conditioning)")
            elif code == 0xDC:
                raise UnsupportedFormatError("DNL (define number of lines)")
            elif 0xE0 <= code <= 0xEF or code == 0xFE:
                self.segment()  # APPn / COM: skipped
            elif code == 0xDA:
                self.read_sos(self.segment(), offset)
                self.decode_scan()
                return self.build_image()
            elif code == 0xD9:
                raise self.corrupt("EOI before any scan", offset)
            else:
                raise UnsupportedFormatError(f"marker 0xff{code:02x}")

    def build_image(self) -> CoefficientImage:
        frame = self.frame
        ncomp = len(frame.components)
        subsampling = SUBSAMPLING_NONE
        if ncomp == 3 and frame.components[0].h == 2:
            subsampling = SUBSAMPLING_420

        planes = []
        quant = []
        for c, comp in enumerate(frame.components):
            if c == 0:
                w, h = frame.width, frame.height
            elif subsampling == SUBSAMPLING_420:
                w, h = (frame.width + 1) // 2, (frame.height + 1) // 2
            else:
                w, h = frame.width, frame.height
            rows, cols = (h + 7) // 8, (w + 7) // 8
            zz = comp.blocks[:rows, :cols].reshape(-1, 64)
            natural = np.empty_like(zz)
            natural[:, ZIGZAG] = zz
            planes.append(natural.reshape(-1, 8, 8))
            quant.append(frame.quant[comp.quant_id])
        return CoefficientImage(
            frame.width, frame.height, tuple(planes), tuple(quant), subsampling
        )


def decode_file(data: bytes) -> CoefficientImage:
    """Parse a baseline JFIF stream down to its quantized coefficients."""
    return _Parser(bytes(data)).parse()
