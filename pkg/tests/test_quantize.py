import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from dcsign import dequantize, quantize
from dcsign.jpeg.codec import round_half_away


def _scalar_quantize(s: float, q: int) -> int:
    coeffs = np.full((8, 8), s)
    quant = np.full((8, 8), q, dtype=np.int32)
    return int(quantize(coeffs, quant)[0, 0])


def test_rounding_examples():
    assert _scalar_quantize(100.0, 16) == 6     # 6.25
    assert _scalar_quantize(-100.0, 16) == -6   # -6.25
    assert _scalar_quantize(8.0, 16) == 1       # exact half rounds away from zero
    assert _scalar_quantize(-8.0, 16) == -1


def test_round_half_away_cases():
    vals = np.array([0.5, -0.5, 1.5, -1.5, 2.4, -2.4, 2.6, -2.6, 0.0])
    want = np.array([1.0, -1.0, 2.0, -2.0, 2.0, -2.0, 3.0, -3.0, 0.0])
    assert np.array_equal(round_half_away(vals), want)


def test_dequantize_examples():
    blocks = np.zeros((8, 8), dtype=np.int32)
    blocks[0, 0] = 6
    quant = np.full((8, 8), 16, dtype=np.int32)
    out = dequantize(blocks, quant)
    assert out[0, 0] == 96
    assert (out.reshape(64)[1:] == 0).all()


def test_quantize_dequantize_half_step_example():
    coeffs = np.full((8, 8), 100.0)
    quant = np.full((8, 8), 16, dtype=np.int32)
    back = dequantize(quantize(coeffs, quant), quant)
    assert back[0, 0] == 96
    assert abs(96 - 100) <= 8


@given(
    s=st.floats(-2048, 2048, allow_nan=False, allow_infinity=False),
    q=st.integers(1, 255),
)
def test_half_step_bound_property(s, q):
    coeffs = np.full((8, 8), s)
    quant = np.full((8, 8), q, dtype=np.int32)
    back = dequantize(quantize(coeffs, quant), quant)
    assert np.abs(back - coeffs).max() <= q / 2 + 1e-9


def test_half_step_bound_vectorized(rng):
    n = 1_000_000
    s = rng.uniform(-1100, 1100, n)
    q = rng.integers(1, 256, n).astype(np.float64)
    back = round_half_away(s / q) * q
    assert (np.abs(back - s) <= q / 2 + 1e-9).all()


def test_sign_symmetry(rng):
    s = rng.uniform(0, 1100, (8, 8))
    q = np.full((8, 8), 17, dtype=np.int32)
    assert np.array_equal(quantize(s, q), -quantize(-s, q))
