"""Positionwise sign comparison between an enrolled feature and a query.

The enrolled side carries thresholded ternary codes; the query side
contributes the raw signs of its quantized luma DC coefficients.  A block
where either side is zero is skipped; the first block where both are
nonzero and unequal decides "different originals".
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .feature import TernaryFeature
from .store import FeatureStore
from .types import CoefficientImage


@dataclass(frozen=True)
class Verdict:
    """Outcome of one feature/query comparison.

    ``matched`` is True iff no decisive mismatch was found;
    ``mismatch_block`` is the halting block index otherwise.
    """

    matched: bool
    mismatch_block: int | None = None

    def __post_init__(self):
        if self.matched != (self.mismatch_block is None):
            raise ValueError("matched verdicts carry no mismatch block")


def match_feature(feature: TernaryFeature, query: CoefficientImage) -> Verdict:
    """Decide whether ``query`` and the enrolled image share an original.

    Queries of different pixel dimensions never match (reported at block
    0); equal-size queries are compared blockwise with the zero-skip rule.
    """
    if (feature.width, feature.height) != (query.width, query.height):
        return Verdict(False, 0)
    query_signs = np.sign(query.dc_coefficients(0)).astype(np.int8)
    decisive = (feature.codes != 0) & (query_signs != 0) & (feature.codes != query_signs)
    hits = np.nonzero(decisive)[0]
    if hits.size:
        return Verdict(False, int(hits[0]))
    return Verdict(True)


def query_store(store: FeatureStore, query: CoefficientImage) -> list[str]:
    """Image ids of every enrolled feature the query matches, in enrollment order.

    All candidates are returned, not just the first: distinct enrolled
    images can both survive the sign test, and callers measuring false
    positives need to see that.
    """
    return [
        feature.image_id
        for feature in store.features()
        if match_feature(feature, query).matched
    ]
