"""Baseline JFIF codec exposing quantized DCT coefficients in both directions."""

from .codec import (
    coefficients_to_pixels,
    dequantize,
    pixels_to_coefficients,
    quantize,
    recompress,
    round_half_away,
    rgb_to_ycbcr,
    ycbcr_to_rgb,
)
from .dct import fdct, idct
from .decoder import decode_file
from .encoder import encode_file
from .tables import quality_to_quant_matrices

__all__ = [
    "coefficients_to_pixels",
    "decode_file",
    "dequantize",
    "encode_file",
    "fdct",
    "idct",
    "pixels_to_coefficients",
    "quality_to_quant_matrices",
    "quantize",
    "recompress",
    "rgb_to_ycbcr",
    "round_half_away",
    "ycbcr_to_rgb",
]
