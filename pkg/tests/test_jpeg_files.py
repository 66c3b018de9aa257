import io

import numpy as np
import pytest
from PIL import Image

import dcsign as dc
from conftest import random_coefficient_image
from dcsign import CorruptStreamError, UnsupportedFormatError
from dcsign.types import SUBSAMPLING_420, SUBSAMPLING_NONE


def _markers(data: bytes) -> list[int]:
    out, i = [], 0
    while i < len(data) - 1:
        if data[i] == 0xFF and data[i + 1] not in (0x00, 0xFF):
            out.append(data[i + 1])
            i += 2
        else:
            i += 1
    return out


def test_entropy_layer_is_lossless(rng):
    for _ in range(40):
        w, h = int(rng.integers(1, 64)), int(rng.integers(1, 64))
        comps = int(rng.choice([1, 3]))
        sub = (
            str(rng.choice([SUBSAMPLING_NONE, SUBSAMPLING_420]))
            if comps == 3
            else SUBSAMPLING_NONE
        )
        img = random_coefficient_image(rng, w, h, comps, sub)
        assert dc.decode_file(dc.encode_file(img)) == img


def test_minimal_single_block_stream_matches_hand_decoding():
    # one block, DC=5: DC category 3 is code 100, value bits 101, EOB 1010,
    # padded with ones -> bytes 0x96 0xBF
    blocks = np.zeros((1, 8, 8), np.int32)
    blocks[0, 0, 0] = 5
    img = dc.CoefficientImage(8, 8, (blocks,), (np.ones((8, 8), np.int32),))
    data = dc.encode_file(img)
    i = data.find(b"\xff\xda")
    scan_start = i + 2 + int.from_bytes(data[i + 2 : i + 4], "big")
    assert data[scan_start:-2] == bytes.fromhex("96bf")
    decoded = dc.decode_file(data)
    assert decoded.block_count == 1
    assert decoded.planes[0][0, 0, 0] == 5


def test_marker_walk_of_produced_stream(rng):
    img = random_coefficient_image(rng, 24, 16)
    data = dc.encode_file(img)
    markers = _markers(data)
    assert markers[0] == 0xD8 and markers[-1] == 0xD9
    assert markers.count(0xDB) == 1  # one DQT segment
    assert markers.count(0xC0) == 1
    assert markers.count(0xC4) == 1  # one DHT group
    assert markers.count(0xDA) == 1


def test_color_stream_carries_both_quant_tables(rng):
    img = random_coefficient_image(rng, 16, 16, 3, SUBSAMPLING_420)
    decoded = dc.decode_file(dc.encode_file(img))
    assert np.array_equal(decoded.quant[0], img.quant[0])
    assert np.array_equal(decoded.quant[1], img.quant[1])
    assert decoded.subsampling == SUBSAMPLING_420


def test_decode_encode_decode_idempotent(rng):
    img = random_coefficient_image(rng, 33, 21, 3, SUBSAMPLING_420)
    once = dc.encode_file(img)
    twice = dc.encode_file(dc.decode_file(once))
    assert once == twice


def test_restart_marker_stream_decodes():
    arr = np.asarray(dc.synthetic_photo(64, 48, seed=8).pixels)
    buf = io.BytesIO()
    Image.fromarray(arr, "L").save(buf, "JPEG", quality=85, restart_marker_blocks=3)
    data = buf.getvalue()
    assert 0xDD in _markers(data) and 0xD0 in _markers(data)
    decoded = dc.decode_file(data)
    assert (decoded.width, decoded.height) == (64, 48)


def test_progressive_rejected_by_name():
    arr = np.zeros((16, 16), np.uint8)
    buf = io.BytesIO()
    Image.fromarray(arr, "L").save(buf, "JPEG", progressive=True)
    with pytest.raises(UnsupportedFormatError, match="SOF2"):
        dc.decode_file(buf.getvalue())


def test_unsupported_subsampling_rejected_by_factors():
    arr = np.zeros((16, 16, 3), np.uint8)
    buf = io.BytesIO()
    Image.fromarray(arr, "RGB").save(buf, "JPEG", subsampling=1)  # 4:2:2
    with pytest.raises(UnsupportedFormatError, match="sampling factors"):
        dc.decode_file(buf.getvalue())


def test_twelve_bit_precision_rejected(rng):
    data = bytearray(dc.encode_file(random_coefficient_image(rng, 8, 8)))
    i = bytes(data).find(b"\xff\xc0")
    data[i + 4] = 12  # precision byte of SOF0
    with pytest.raises(UnsupportedFormatError, match="12-bit"):
        dc.decode_file(bytes(data))


def test_truncation_reports_byte_offset(rng):
    data = dc.encode_file(random_coefficient_image(rng, 40, 40))
    with pytest.raises(CorruptStreamError) as err:
        dc.decode_file(data[:60])
    assert err.value.offset <= 60


def test_truncated_scan_detected(rng):
    img = random_coefficient_image(rng, 48, 48, ac_density=0.4)
    data = dc.encode_file(img)
    with pytest.raises(CorruptStreamError):
        dc.decode_file(data[: len(data) - 40])


def test_missing_soi_rejected():
    with pytest.raises(CorruptStreamError, match="SOI"):
        dc.decode_file(b"\x00\x01\x02")


def test_eoi_before_scan_rejected():
    with pytest.raises(CorruptStreamError):
        dc.decode_file(b"\xff\xd8\xff\xd9")


def test_restart_marker_without_dri_rejected(rng):
    data = dc.encode_file(random_coefficient_image(rng, 8, 8))
    i = data.find(b"\xff\xda")
    scan_start = i + 2 + int.from_bytes(data[i + 2 : i + 4], "big")
    patched = data[:scan_start] + b"\xff\xd0" + data[scan_start:]
    with pytest.raises(CorruptStreamError, match="restart"):
        dc.decode_file(patched)


def test_arithmetic_coding_rejected(rng):
    data = bytearray(dc.encode_file(random_coefficient_image(rng, 8, 8)))
    i = bytes(data).find(b"\xff\xc0")
    data[i + 1] = 0xC9  # SOF9: arithmetic sequential
    with pytest.raises(UnsupportedFormatError, match="arithmetic"):
        dc.decode_file(bytes(data))


def test_zero_quant_entry_rejected(rng):
    data = bytearray(dc.encode_file(random_coefficient_image(rng, 8, 8)))
    i = bytes(data).find(b"\xff\xdb")
    data[i + 5] = 0  # first table entry
    with pytest.raises(CorruptStreamError, match="zero"):
        dc.decode_file(bytes(data))


def test_oversized_dimensions_rejected():
    blocks = np.zeros((8750, 8, 8), np.int32)  # ceil(70000/8) blocks wide
    img = dc.CoefficientImage(70000, 8, (blocks,), (np.ones((8, 8), np.int32),))
    with pytest.raises(ValueError, match="16-bit"):
        dc.encode_file(img)


def test_out_of_range_coefficients_unencodable():
    blocks = np.zeros((1, 8, 8), np.int32)
    blocks[0, 3, 3] = 1500  # AC category 11 exceeds baseline's 10
    img = dc.CoefficientImage(8, 8, (blocks,), (np.ones((8, 8), np.int32),))
    with pytest.raises(ValueError, match="AC"):
        dc.encode_file(img)


def test_white_image_is_a_recompression_fixed_point():
    # a constant-white image survives any re-compression chain: its DC
    # dequantizes past the clamp boundary and every sample clips back to 255
    white = dc.PixelImage(np.full((16, 16), 255, np.uint8))
    data = dc.encode_file(dc.pixels_to_coefficients(white, 95))
    again = dc.recompress(data, 71)
    out = np.asarray(dc.coefficients_to_pixels(dc.decode_file(again)).pixels)
    assert (out == 255).all()
    assert dc.decode_file(again).width == 16


def test_two_component_streams_rejected(rng):
    data = bytearray(dc.encode_file(random_coefficient_image(rng, 8, 8)))
    i = bytes(data).find(b"\xff\xc0")
    data[i + 9] = 2  # component count byte of SOF0
    with pytest.raises(UnsupportedFormatError, match="2 components"):
        dc.decode_file(bytes(data))


def test_tables_after_sof_are_accepted(rng):
    # DQT/DHT may legally arrive between SOF0 and SOS
    img = random_coefficient_image(rng, 24, 16)
    data = dc.encode_file(img)

    def segment(marker):
        i = data.find(marker)
        length = int.from_bytes(data[i + 2 : i + 4], "big")
        return i, data[i : i + 2 + length]

    dqt_at, dqt = segment(b"\xff\xdb")
    sof_at, sof = segment(b"\xff\xc0")
    assert dqt_at < sof_at
    reordered = data[:dqt_at] + sof + dqt + data[sof_at + len(sof):]
    assert dc.decode_file(reordered) == img
