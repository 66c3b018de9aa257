import numpy as np
import scipy.fft

from dcsign import fdct, idct


def test_zero_block_maps_to_zero():
    assert np.allclose(fdct(np.zeros((8, 8))), 0.0)
    assert np.allclose(idct(np.zeros((8, 8))), 0.0)


def test_constant_extremes_hit_dc_range():
    bright = fdct(np.full((8, 8), 127.0))
    assert abs(bright[0, 0] - 1016.0) < 1e-9
    assert np.abs(bright.reshape(64)[1:]).max() < 1e-9
    dark = fdct(np.full((8, 8), -128.0))
    assert abs(dark[0, 0] + 1024.0) < 1e-9


def test_constant_basis_inverse():
    coeffs = np.zeros((8, 8))
    coeffs[0, 0] = 8.0
    assert np.allclose(idct(coeffs), 1.0, atol=1e-12)


def test_round_trip_random_block(rng):
    x = rng.uniform(-128, 127, (8, 8))
    assert np.abs(idct(fdct(x)) - x).max() < 1e-9
    assert np.abs(fdct(idct(x)) - x).max() < 1e-9


def test_orthonormality_preserves_energy(rng):
    x = rng.uniform(-128, 127, (8, 8))
    fx = fdct(x)
    assert abs(np.linalg.norm(fx) - np.linalg.norm(x)) <= 1e-9 * np.linalg.norm(x)


def test_agrees_with_scipy_dctn(rng):
    # independent implementation of the same orthonormal transform
    x = rng.uniform(-128, 127, (8, 8))
    want = scipy.fft.dctn(x, norm="ortho")
    assert np.abs(fdct(x) - want).max() < 1e-9
    want_inv = scipy.fft.idctn(x, norm="ortho")
    assert np.abs(idct(x) - want_inv).max() < 1e-9


def test_batched_and_flat_layouts(rng):
    blocks = rng.uniform(-128, 127, (5, 8, 8))
    batched = fdct(blocks)
    assert batched.shape == (5, 8, 8)
    for i in range(5):
        assert np.allclose(batched[i], fdct(blocks[i]))
    flat = fdct(blocks.reshape(5, 64))
    assert flat.shape == (5, 64)
    assert np.allclose(flat, batched.reshape(5, 64))


def test_dc_range_bounds_hold_for_any_sample_block(rng):
    for _ in range(50):
        block = rng.integers(0, 256, (8, 8)).astype(np.float64) - 128.0
        dc = fdct(block)[0, 0]
        assert -1024.0 - 1e-9 <= dc <= 1016.0 + 1e-9
