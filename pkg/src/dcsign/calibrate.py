"""Threshold selection by sweeping single -> double compression.

Every corpus image is compressed at each first-stage quality, decoded,
re-compressed at each second-stage quality, and the quantized luma DC
coefficients of the two generations are compared blockwise.  The largest
first-generation magnitude seen at a strict sign flip, plus one, is the
threshold that suppresses every observed flip.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .jpeg import coefficients_to_pixels, pixels_to_coefficients
from .jpeg.tables import check_quality
from .types import PixelImage


@dataclass(frozen=True)
class CalibrationReport:
    qf_singles: tuple[int, ...]
    qf_doubles: tuple[int, ...]
    inversions: int
    max_magnitude: int

    @property
    def recommended_th(self) -> int:
        """Smallest-with-margin threshold that zeroes every observed flip."""
        return self.max_magnitude + 1 if self.inversions else 0


def thread_count(threads: int | None = None) -> int:
    """Worker count for internal parallelism, capped by DCSIGN_THREADS."""
    if threads is None:
        threads = int(os.environ.get("DCSIGN_THREADS", "1"))
    return max(1, threads)


def _sweep_one(img: PixelImage, qf1: int, qf_doubles: Sequence[int]) -> tuple[int, int]:
    """(flip count, max flipped |DC|) for one image at one first-stage quality."""
    first = pixels_to_coefficients(img, qf1)
    dc1 = first.dc_coefficients(0)
    pixels = coefficients_to_pixels(first)
    inversions = 0
    max_mag = 0
    for qf2 in qf_doubles:
        dc2 = pixels_to_coefficients(pixels, qf2).dc_coefficients(0)
        flipped = ((dc1 > 0) & (dc2 < 0)) | ((dc1 < 0) & (dc2 > 0))
        n = int(np.count_nonzero(flipped))
        if n:
            inversions += n
            max_mag = max(max_mag, int(np.abs(dc1[flipped]).max()))
    return inversions, max_mag


def calibrate_threshold(
    corpus: Iterable[PixelImage],
    qf_singles: Sequence[int],
    qf_doubles: Sequence[int],
    threads: int | None = None,
) -> CalibrationReport:
    """Derive the flip-absorbing threshold over a corpus and quality grid.

    Only strict flips (+ to -, or - to +) count: a coefficient that decays
    to zero is already neutralized by the comparison's skip rule.
    """
    corpus = list(corpus)
    qf_singles = tuple(check_quality(q) for q in qf_singles)
    qf_doubles = tuple(check_quality(q) for q in qf_doubles)
    if not corpus:
        raise ValueError("corpus must not be empty")
    if not qf_singles or not qf_doubles:
        raise ValueError("quality factor grids must not be empty")

    tasks = [(img, qf1) for img in corpus for qf1 in qf_singles]
    workers = thread_count(threads)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda t: _sweep_one(t[0], t[1], qf_doubles), tasks))
    else:
        results = [_sweep_one(img, qf1, qf_doubles) for img, qf1 in tasks]

    inversions = sum(n for n, _ in results)
    max_magnitude = max((m for _, m in results), default=0)
    return CalibrationReport(qf_singles, qf_doubles, inversions, max_magnitude)


def format_report(report: CalibrationReport) -> str:
    """Line-oriented text table of the sweep outcome."""
    rows = [
        ("first-stage qualities", ", ".join(map(str, report.qf_singles))),
        ("second-stage qualities", ", ".join(map(str, report.qf_doubles))),
        ("sign inversions", str(report.inversions)),
        ("max inverted |DC|", str(report.max_magnitude)),
        ("recommended threshold", str(report.recommended_th)),
    ]
    width = max(len(name) for name, _ in rows)
    return "\n".join(f"{name:<{width}}  {value}" for name, value in rows)


def format_report_kv(report: CalibrationReport) -> str:
    """Machine-readable key=value block."""
    return (
        f"inversions={report.inversions}\n"
        f"max_magnitude={report.max_magnitude}\n"
        f"recommended_th={report.recommended_th}"
    )
