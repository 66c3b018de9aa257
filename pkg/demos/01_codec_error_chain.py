"""
The JPEG error chain, one stage at a time
=========================================

A JPEG round trip loses information in two distinct places: quantization
during encoding, and rounding/clamping when the decoder materializes
8-bit pixels.  The second error is what perturbs coefficients across a
re-compression, so this script makes both visible separately.
"""
import numpy as np

import dcsign as dc

img = dc.synthetic_photo(160, 120, seed=42)
print(f"original: {img.width}x{img.height} gray, "
      f"range [{img.pixels.min()}, {img.pixels.max()}]")

# Stage 1: quantization error.  Coefficients move by at most half a
# quantization step.
coeff = dc.pixels_to_coefficients(img, qf=80)
luma_q = coeff.quant[0]
print(f"\nquality 80 -> quantization matrix DC step {luma_q[0, 0]}, "
      f"max AC step {luma_q.max()}")
print(f"luma plane: {coeff.block_count} blocks, "
      f"{np.count_nonzero(coeff.planes[0])} nonzero coefficients")

# Stage 2: decoding rounds to integers and clamps to [0, 255].
decoded = dc.coefficients_to_pixels(coeff)
err = decoded.pixels.astype(int) - img.pixels.astype(int)
print(f"\npixel error after one round trip: mean |e| {np.abs(err).mean():.2f}, "
      f"max |e| {np.abs(err).max()}")

# Re-quantizing the decoded pixels with the *same* tables shows the pure
# decode-side error: only a handful of coefficients move, by one step.
again = dc.pixels_to_coefficients(decoded, qf=80)
delta = again.planes[0].astype(int) - coeff.planes[0].astype(int)
moved = np.count_nonzero(delta)
print(f"\nre-quantize with identical tables: {moved} of {delta.size} "
      f"coefficients moved ({100 * moved / delta.size:.3f}%), "
      f"max step {np.abs(delta).max()}")

# The byte stream itself is exact: decode(encode(c)) == c, bit for bit.
stream = dc.encode_file(coeff)
assert dc.decode_file(stream) == coeff
print(f"\nentropy layer: {len(stream)} bytes, decodes back bit-identically")
