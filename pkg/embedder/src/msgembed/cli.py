"""CLI: ``embed --in <jsonl> --out <vec> --model <id> --batch <n>``.

Exit codes: 0 success, 1 input error, 2 bad arguments, 3 model load
failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .core import DEFAULT_MODEL, DEVICES, EmbedJob, InputError, run_job
from .encoders import ModelLoadError, SentenceTransformerEncoder

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_USAGE = 2
EXIT_MODEL = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="embed",
        description="Encode message text into the engine's vector file format.",
    )
    parser.add_argument("--in", dest="input", type=Path, required=True,
                        metavar="JSONL", help="input with 'id' and 'text' per line")
    parser.add_argument("--out", dest="output", type=Path, required=True,
                        metavar="VEC", help="vector file (resumed if present)")
    parser.add_argument("--model", default=DEFAULT_MODEL,
                        help=f"sentence-transformers model id (default {DEFAULT_MODEL})")
    parser.add_argument("--batch", type=int, default=64, help="batch size")
    parser.add_argument("--device", choices=DEVICES, default="cpu")
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    args = build_parser().parse_args(argv)
    try:
        job = EmbedJob(input=args.input, output=args.output,
                       model_id=args.model, batch_size=args.batch,
                       device=args.device)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        encoder = SentenceTransformerEncoder(job.model_id, job.device)
    except ModelLoadError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MODEL
    try:
        stats = run_job(job, encoder)
    except (InputError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    print(f"{stats.total} records: {stats.encoded} encoded, "
          f"{stats.reused} reused, {stats.empty_text} empty -> {job.output}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
