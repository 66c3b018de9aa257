"""Identification of double-compressed JPEG images from quantized DC signs.

The package bundles a baseline JFIF codec that exposes quantized DCT
coefficients, a ternary DC-sign feature with one suppression threshold,
an append-only feature store, the sign-comparison matcher, and the
calibration / precision-recall harnesses used to pick and validate the
threshold.
"""

from .calibrate import CalibrationReport, calibrate_threshold
from .errors import (
    CorruptRecordError,
    CorruptStreamError,
    DcsignError,
    DuplicateImageIdError,
    IncompatibleStoreError,
    PnmError,
    UnsupportedFormatError,
)
from .evaluate import Counts, ExperimentConfig, PRReport, precision_recall, run_experiment
from .feature import TernaryFeature, default_image_id, extract_feature, sgn
from .feature import deserialize as deserialize_feature
from .feature import serialize as serialize_feature
from .identify import Verdict, match_feature, query_store
from .jpeg import (
    coefficients_to_pixels,
    decode_file,
    dequantize,
    encode_file,
    fdct,
    idct,
    pixels_to_coefficients,
    quality_to_quant_matrices,
    quantize,
    recompress,
)
from .pnm import parse_pnm, read_pnm, serialize_pnm, write_pnm
from .store import FeatureStore
from .synth import synthetic_corpus, synthetic_photo
from .types import CoefficientImage, PixelImage

__version__ = "0.1.0"

__all__ = [
    "CalibrationReport",
    "CoefficientImage",
    "CorruptRecordError",
    "CorruptStreamError",
    "Counts",
    "DcsignError",
    "DuplicateImageIdError",
    "ExperimentConfig",
    "FeatureStore",
    "IncompatibleStoreError",
    "PRReport",
    "PixelImage",
    "PnmError",
    "TernaryFeature",
    "UnsupportedFormatError",
    "Verdict",
    "calibrate_threshold",
    "coefficients_to_pixels",
    "decode_file",
    "default_image_id",
    "dequantize",
    "deserialize_feature",
    "encode_file",
    "extract_feature",
    "fdct",
    "idct",
    "match_feature",
    "parse_pnm",
    "pixels_to_coefficients",
    "precision_recall",
    "quality_to_quant_matrices",
    "quantize",
    "query_store",
    "read_pnm",
    "recompress",
    "run_experiment",
    "serialize_feature",
    "serialize_pnm",
    "sgn",
    "synthetic_corpus",
    "synthetic_photo",
    "write_pnm",
]
