"""Command-line wrapper: one invocation per export job."""

from __future__ import annotations

import argparse
import sys

from .exporter import ExportError, ExportJob, export_scores


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="export-scores",
        description="Score a corpus under a neural checkpoint and write a "
        "crossmi score file.",
    )
    parser.add_argument("--model", required=True, help="model directory or hub name")
    parser.add_argument("--tgt-file", required=True, help="target side, one sentence per line")
    parser.add_argument("--tgt-lang", required=True)
    parser.add_argument("--src-file", help="source side; omit for a language-model job")
    parser.add_argument("--src-lang")
    parser.add_argument("--output", required=True, help="score file to write")
    parser.add_argument("--batch-size", type=int, default=16)
    parser.add_argument("--model-tag", default="", help="tag recorded in the file")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if (args.src_file is None) != (args.src_lang is None):
        print("error: --src-file and --src-lang go together", file=sys.stderr)
        return 1
    job = ExportJob(
        model_path=args.model,
        tgt_path=args.tgt_file,
        tgt_lang=args.tgt_lang,
        src_path=args.src_file,
        src_lang=args.src_lang,
        output_path=args.output,
        batch_size=args.batch_size,
        model_tag=args.model_tag,
    )
    try:
        out = export_scores(job)
    except (ExportError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
