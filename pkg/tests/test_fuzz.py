"""Malformed input never escapes the package's error types.

Byte-level mutations of valid artifacts must either decode successfully
(when the damage lands somewhere inert) or raise the package's own
exceptions; raw IndexError/struct.error/numpy errors reaching callers
would be a parsing bug.
"""
import numpy as np
import pytest

import dcsign as dc
from dcsign.errors import CorruptRecordError, DcsignError


def _mutate(rng: np.random.Generator, data: bytes, rounds: int) -> bytes:
    out = bytearray(data)
    for _ in range(rounds):
        kind = rng.random()
        if kind < 0.7 or len(out) < 6:
            out[int(rng.integers(0, len(out)))] = int(rng.integers(0, 256))
        elif kind < 0.85:
            del out[int(rng.integers(0, len(out)))]
        else:
            out.insert(int(rng.integers(0, len(out))), int(rng.integers(0, 256)))
    return bytes(out)


def test_decoder_exception_discipline(rng):
    gray = dc.encode_file(dc.pixels_to_coefficients(dc.synthetic_photo(48, 40, seed=2), 85))
    color = dc.encode_file(
        dc.pixels_to_coefficients(dc.synthetic_photo(33, 25, seed=3, color=True), 80)
    )
    for trial in range(800):
        data = _mutate(rng, gray if trial % 2 else color, int(rng.integers(1, 4)))
        try:
            dc.decode_file(data)
        except DcsignError:
            pass


def test_feature_codec_exception_discipline(rng):
    feature = dc.extract_feature(
        dc.pixels_to_coefficients(dc.synthetic_photo(64, 48, seed=4), 85), 14, "fuzz"
    )
    blob = dc.serialize_feature(feature)
    for _ in range(800):
        data = _mutate(rng, blob, int(rng.integers(1, 3)))
        try:
            dc.deserialize_feature(data)
        except CorruptRecordError:
            pass
        # a mutation that still deserializes would need a CRC32 collision


def test_store_open_exception_discipline(rng, tmp_path):
    path = tmp_path / "db.dcdb"
    store = dc.FeatureStore.open(path)
    img = dc.pixels_to_coefficients(dc.synthetic_photo(32, 32, seed=5), 85)
    store.enroll(img, 14, "a")
    store.enroll(img, 14, "b")
    pristine = path.read_bytes()
    for _ in range(300):
        path.write_bytes(_mutate(rng, pristine, int(rng.integers(1, 3))))
        try:
            dc.FeatureStore.open(path)
        except DcsignError:
            pass
    path.write_bytes(pristine)
    assert len(dc.FeatureStore.open(path)) == 2


def test_pnm_parser_exception_discipline(rng):
    img = dc.synthetic_photo(21, 17, seed=6)
    pristine = dc.serialize_pnm(img)
    for _ in range(300):
        data = _mutate(rng, pristine, int(rng.integers(1, 3)))
        try:
            dc.parse_pnm(data)
        except DcsignError:
            pass


def test_decoder_survives_pure_noise(rng):
    for _ in range(200):
        blob = rng.integers(0, 256, int(rng.integers(0, 400)), dtype=np.uint8).tobytes()
        with pytest.raises(DcsignError):
            dc.decode_file(b"\xff\xd8" + blob)
