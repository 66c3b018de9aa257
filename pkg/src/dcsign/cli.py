"""Batch command-line front-end.

Exit codes: 0 success, 1 no match (domain outcome), 2 usage error,
3 I/O or format error.  Machine-readable output goes to stdout only;
diagnostics and human-oriented tables go to stderr.
"""
from __future__ import annotations

import argparse
import os
import sys

from . import calibrate as _calibrate
from . import evaluate as _evaluate
from .errors import DcsignError
from .feature import default_image_id
from .identify import query_store
from .jpeg import (
    coefficients_to_pixels,
    decode_file,
    encode_file,
    pixels_to_coefficients,
    recompress,
)
from .pnm import parse_pnm, read_pnm, serialize_pnm
from .store import FeatureStore
from .types import PixelImage

EXIT_OK = 0
EXIT_NO_MATCH = 1
EXIT_USAGE = 2
EXIT_IO = 3

DEFAULT_TH = 14


def _qf(text: str) -> int:
    value = int(text)
    if not 1 <= value <= 100:
        raise argparse.ArgumentTypeError(f"quality factor {value} outside [1, 100]")
    return value


def _qf_list(text: str) -> list[int]:
    try:
        values = [int(part) for part in text.split(",") if part]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("empty quality factor list")
    for v in values:
        if not 1 <= v <= 100:
            raise argparse.ArgumentTypeError(f"quality factor {v} outside [1, 100]")
    return values


def _non_negative(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("threshold must be non-negative")
    return value


def _load_pixels(path: str) -> PixelImage:
    """Read a raster file, sniffing PGM/PPM vs JPEG by magic bytes."""
    with open(path, "rb") as fh:
        data = fh.read()
    if data[:2] in (b"P5", b"P6"):
        return parse_pnm(data)
    if data[:2] == b"\xff\xd8":
        return coefficients_to_pixels(decode_file(data))
    raise DcsignError(f"{path}: neither a binary PGM/PPM nor a JPEG file")


def _corpus_files(directory: str) -> list[str]:
    names = sorted(os.listdir(directory))
    paths = [
        os.path.join(directory, name)
        for name in names
        if os.path.isfile(os.path.join(directory, name))
        and name.lower().endswith((".pgm", ".ppm", ".pnm", ".jpg", ".jpeg"))
    ]
    if not paths:
        raise DcsignError(f"{directory}: no .pgm/.ppm/.jpg corpus files found")
    return paths


def _threads() -> int | None:
    raw = os.environ.get("DCSIGN_THREADS")
    return int(raw) if raw else None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dcsign",
        description="Enroll, identify, and benchmark JPEG images by quantized DC signs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enroll", help="extract and store features of JPEG files")
    p.add_argument("--db", required=True, help="feature store path")
    p.add_argument("--th", type=_non_negative, default=DEFAULT_TH,
                   help=f"sign-suppression threshold (default {DEFAULT_TH})")
    p.add_argument("--id", help="explicit image id (single file only)")
    p.add_argument("files", nargs="+", metavar="FILE")

    p = sub.add_parser("identify", help="list enrolled images matching a query JPEG")
    p.add_argument("--db", required=True)
    p.add_argument("file", metavar="FILE")

    p = sub.add_parser("recompress", help="decode a JPEG and re-encode it at a quality")
    p.add_argument("--quality", type=_qf, required=True)
    p.add_argument("infile", metavar="IN")
    p.add_argument("outfile", metavar="OUT")

    p = sub.add_parser("calibrate", help="derive the flip-absorbing threshold over a corpus")
    p.add_argument("--qf-singles", type=_qf_list, required=True, metavar="LIST")
    p.add_argument("--qf-doubles", type=_qf_list, required=True, metavar="LIST")
    p.add_argument("directory", metavar="DIR")

    p = sub.add_parser("evaluate", help="run the precision/recall querying benchmark")
    p.add_argument("--db-qfs", type=_qf_list, required=True, metavar="LIST")
    p.add_argument("--query-qfs", type=_qf_list, required=True, metavar="LIST")
    p.add_argument("--th", type=_non_negative, default=DEFAULT_TH)
    p.add_argument("directory", metavar="DIR")

    p = sub.add_parser("decode", help="decode a JPEG to binary PGM/PPM")
    p.add_argument("infile", metavar="IN")
    p.add_argument("outfile", metavar="OUT")

    p = sub.add_parser("encode", help="encode a binary PGM/PPM as JPEG")
    p.add_argument("--quality", type=_qf, required=True)
    p.add_argument("infile", metavar="IN")
    p.add_argument("outfile", metavar="OUT")

    p = sub.add_parser("inspect", help="dump feature records from a store")
    p.add_argument("--db", required=True)
    p.add_argument("--id", help="only the record with this image id")

    return parser


def _cmd_enroll(args) -> int:
    if args.id is not None and len(args.files) > 1:
        print("error: --id is only valid with a single file", file=sys.stderr)
        return EXIT_USAGE
    store = FeatureStore.open(args.db)
    for path in args.files:
        with open(path, "rb") as fh:
            data = fh.read()
        image_id = args.id if args.id is not None else default_image_id(data)
        store.enroll(decode_file(data), args.th, image_id)
        print(image_id)
    return EXIT_OK


def _cmd_identify(args) -> int:
    store = FeatureStore.open(args.db)
    with open(args.file, "rb") as fh:
        query = decode_file(fh.read())
    matches = query_store(store, query)
    for image_id in matches:
        print(image_id)
    return EXIT_OK if matches else EXIT_NO_MATCH


def _cmd_recompress(args) -> int:
    with open(args.infile, "rb") as fh:
        data = fh.read()
    out = recompress(data, args.quality)
    with open(args.outfile, "wb") as fh:
        fh.write(out)
    return EXIT_OK


def _cmd_calibrate(args) -> int:
    corpus = [_load_pixels(path) for path in _corpus_files(args.directory)]
    report = _calibrate.calibrate_threshold(
        corpus, args.qf_singles, args.qf_doubles, threads=_threads()
    )
    print(_calibrate.format_report(report), file=sys.stderr)
    print(_calibrate.format_report_kv(report))
    return EXIT_OK


def _cmd_evaluate(args) -> int:
    paths = _corpus_files(args.directory)
    corpus = []
    for path in paths:
        stem = os.path.splitext(os.path.basename(path))[0]
        corpus.append((stem, _load_pixels(path)))
    cfg = _evaluate.ExperimentConfig(
        db_qfs=tuple(args.db_qfs),
        query_qfs=tuple(args.query_qfs),
        th=args.th,
        corpus=tuple(corpus),
    )
    report = _evaluate.run_experiment(cfg, threads=_threads())
    print(_evaluate.format_table(report), file=sys.stderr)
    print(_evaluate.report_csv(report), end="")
    return EXIT_OK


def _cmd_decode(args) -> int:
    with open(args.infile, "rb") as fh:
        img = coefficients_to_pixels(decode_file(fh.read()))
    with open(args.outfile, "wb") as fh:
        fh.write(serialize_pnm(img))
    return EXIT_OK


def _cmd_encode(args) -> int:
    img = read_pnm(args.infile)
    data = encode_file(pixels_to_coefficients(img, args.quality))
    with open(args.outfile, "wb") as fh:
        fh.write(data)
    return EXIT_OK


def _cmd_inspect(args) -> int:
    store = FeatureStore.open(args.db)
    records = store.features()
    if args.id is not None:
        record = store.get(args.id)
        if record is None:
            return EXIT_NO_MATCH
        records = (record,)
    for f in records:
        plus = int((f.codes == 1).sum())
        minus = int((f.codes == -1).sum())
        zero = f.block_count - plus - minus
        print(
            f"id={f.image_id} width={f.width} height={f.height} "
            f"blocks={f.block_count} th={f.th} plus={plus} zero={zero} minus={minus}"
        )
    return EXIT_OK


_COMMANDS = {
    "enroll": _cmd_enroll,
    "identify": _cmd_identify,
    "recompress": _cmd_recompress,
    "calibrate": _cmd_calibrate,
    "evaluate": _cmd_evaluate,
    "decode": _cmd_decode,
    "encode": _cmd_encode,
    "inspect": _cmd_inspect,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return _COMMANDS[args.command](args)
    except (DcsignError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


def run() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    run()
