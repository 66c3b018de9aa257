"""Querying benchmark: enrollment databases, re-compressed queries, P/R.

For each database quality, every original is single-compressed at that
quality and enrolled; every query is that same single-compressed file
re-compressed at a query quality.  Each query is matched against the whole
store, so precision penalizes every wrong id returned.
"""
from __future__ import annotations

import io
import os
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Mapping

from .calibrate import thread_count
from .identify import query_store
from .jpeg import decode_file, encode_file, pixels_to_coefficients, recompress
from .jpeg.tables import check_quality
from .store import FeatureStore
from .types import PixelImage


@dataclass(frozen=True)
class ExperimentConfig:
    """Inputs of one benchmark run.

    ``corpus`` holds (image_id, original raster) pairs; each database
    quality in ``db_qfs`` produces one enrollment store, and each entry of
    ``query_qfs`` one re-compression generation per enrolled image.
    """

    db_qfs: tuple[int, ...]
    query_qfs: tuple[int, ...]
    th: int
    corpus: tuple[tuple[str, PixelImage], ...]

    def __post_init__(self):
        object.__setattr__(self, "db_qfs", tuple(check_quality(q) for q in self.db_qfs))
        object.__setattr__(self, "query_qfs", tuple(check_quality(q) for q in self.query_qfs))
        object.__setattr__(self, "corpus", tuple(self.corpus))
        if self.th < 0:
            raise ValueError("threshold must be non-negative")
        if not self.db_qfs or not self.query_qfs:
            raise ValueError("quality factor lists must not be empty")
        if not self.corpus:
            raise ValueError("corpus must not be empty")
        ids = [image_id for image_id, _ in self.corpus]
        if len(set(ids)) != len(ids):
            raise ValueError("corpus image ids must be unique")


@dataclass(frozen=True)
class Counts:
    tp: int = 0
    fp: int = 0
    fn: int = 0

    def __add__(self, other: "Counts") -> "Counts":
        return Counts(self.tp + other.tp, self.fp + other.fp, self.fn + other.fn)


@dataclass(frozen=True)
class PRReport:
    """TP/FP/FN per (database quality, query quality) cell plus rollups."""

    cells: Mapping[tuple[int, int], Counts]
    per_db: Mapping[int, Counts]
    total: Counts


def precision_recall(tp: int, fp: int, fn: int) -> tuple[float | None, float | None]:
    """Precision and recall as percentages; None where the ratio is undefined."""
    if min(tp, fp, fn) < 0:
        raise ValueError("counts must be non-negative")
    precision = 100.0 * tp / (tp + fp) if tp + fp else None
    recall = 100.0 * tp / (tp + fn) if tp + fn else None
    return precision, recall


def _pct(value: float | None) -> str:
    return "n/a" if value is None else f"{value:.2f}"


def run_experiment(cfg: ExperimentConfig, threads: int | None = None) -> PRReport:
    """Execute the full enrollment/query protocol of the config.

    Returns exact match counts; every query contributes one TP or FN, plus
    one FP per wrong id it surfaces.
    """
    cells: dict[tuple[int, int], Counts] = {}
    workers = thread_count(threads)
    with tempfile.TemporaryDirectory(prefix="dcsign-eval-") as tmp:
        for db_qf in cfg.db_qfs:
            store = FeatureStore.open(os.path.join(tmp, f"db{db_qf}.dcdb"))
            singles: dict[str, bytes] = {}
            for image_id, original in cfg.corpus:
                enrolled = pixels_to_coefficients(original, db_qf)
                store.enroll(enrolled, cfg.th, image_id)
                singles[image_id] = encode_file(enrolled)

            def one_query(task: tuple[str, int]) -> tuple[str, int, list[str]]:
                image_id, query_qf = task
                query = decode_file(recompress(singles[image_id], query_qf))
                return image_id, query_qf, query_store(store, query)

            tasks = [
                (image_id, query_qf)
                for query_qf in cfg.query_qfs
                for image_id, _ in cfg.corpus
            ]
            if workers > 1:
                with ThreadPoolExecutor(max_workers=workers) as pool:
                    outcomes = list(pool.map(one_query, tasks))
            else:
                outcomes = [one_query(t) for t in tasks]

            for image_id, query_qf, returned in outcomes:
                hit = image_id in returned
                delta = Counts(
                    tp=int(hit),
                    fp=len(returned) - int(hit),
                    fn=int(not hit),
                )
                key = (db_qf, query_qf)
                cells[key] = cells.get(key, Counts()) + delta

    per_db = {
        db_qf: sum(
            (cells[(db_qf, q)] for q in cfg.query_qfs if (db_qf, q) in cells),
            Counts(),
        )
        for db_qf in cfg.db_qfs
    }
    total = sum(per_db.values(), Counts())
    return PRReport(cells, per_db, total)


def format_table(report: PRReport) -> str:
    """Aligned text table: one row per database plus per-query-quality detail."""
    lines = [f"{'scheme':<10}{'database':<14}{'p[%]':>8}{'r[%]':>8}"]
    for db_qf, counts in report.per_db.items():
        p, r = precision_recall(counts.tp, counts.fp, counts.fn)
        lines.append(f"{'proposed':<10}{f'DB(qf={db_qf})':<14}{_pct(p):>8}{_pct(r):>8}")
    lines.append("")
    lines.append(f"{'database':<14}{'query qf':>9}{'tp':>7}{'fp':>7}{'fn':>7}{'p[%]':>9}{'r[%]':>9}")
    for (db_qf, query_qf), counts in report.cells.items():
        p, r = precision_recall(counts.tp, counts.fp, counts.fn)
        lines.append(
            f"{f'DB(qf={db_qf})':<14}{query_qf:>9}{counts.tp:>7}{counts.fp:>7}"
            f"{counts.fn:>7}{_pct(p):>9}{_pct(r):>9}"
        )
    return "\n".join(lines)


def report_csv(report: PRReport) -> str:
    """CSV rows per cell, then per-database and overall aggregates."""
    out = io.StringIO()
    out.write("db_qf,query_qf,tp,fp,fn,precision,recall\n")

    def row(db, qf, c: Counts):
        p, r = precision_recall(c.tp, c.fp, c.fn)
        out.write(f"{db},{qf},{c.tp},{c.fp},{c.fn},{_pct(p)},{_pct(r)}\n")

    for (db_qf, query_qf), counts in report.cells.items():
        row(db_qf, query_qf, counts)
    for db_qf, counts in report.per_db.items():
        row(db_qf, "all", counts)
    row("all", "all", report.total)
    return out.getvalue()
