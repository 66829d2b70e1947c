"""Command-line front end.

Subcommands mirror the pipeline stages (prepare, bpe, score, metrics,
correlate, bootstrap, report) plus `run` for the whole chain.  Each takes a
declarative JSON config; common fields can be overridden by flags.  Exit
codes: 0 success, 1 validation error, 2 runtime error.  The environment
variable CROSSMI_OUTPUT_DIR overrides the configured output directory.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys

from . import pipeline
from .errors import CrossmiError, PipelineError, ValidationError

OUTPUT_DIR_ENV = "CROSSMI_OUTPUT_DIR"

_STAGE_FUNCS = {
    "prepare": pipeline.stage_prepare,
    "bpe": pipeline.stage_bpe,
    "score": pipeline.stage_score,
    "metrics": pipeline.stage_metrics,
    "correlate": pipeline.stage_correlate,
    "bootstrap": pipeline.stage_bootstrap,
    "report": pipeline.stage_report,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="crossmi",
        description="Translation-difficulty measurements via cross-mutual information.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("run",) + pipeline.STAGES:
        p = sub.add_parser(name, help=f"{name} stage" if name != "run" else "all stages")
        p.add_argument("--config", required=True, help="JSON run configuration")
        p.add_argument("--output-dir", help="override output directory")
        p.add_argument("--pivot", help="override pivot language")
        p.add_argument("--seed", type=int, help="override master seed")
        p.add_argument("--split-seed", type=int, help="override split seed")
        p.add_argument("--n-valid", type=int, help="override validation size")
        p.add_argument("--n-test", type=int, help="override test size")
        p.add_argument("--bpe-merges", type=int, help="override BPE merge count")
        p.add_argument("--scorer", choices=("builtin", "score-files"))
        p.add_argument("--lm-order", type=int, help="override n-gram order")
        p.add_argument("--mix-lambda", type=float, help="override mixture weight")
    return parser


def _apply_overrides(config: pipeline.RunConfig, args: argparse.Namespace) -> None:
    mapping = {
        "output_dir": args.output_dir,
        "pivot": args.pivot,
        "seed": args.seed,
        "split_seed": args.split_seed,
        "n_valid": args.n_valid,
        "n_test": args.n_test,
        "bpe_merges": args.bpe_merges,
        "scorer": args.scorer,
        "lm_order": args.lm_order,
        "mix_lambda": args.mix_lambda,
    }
    for fieldname, value in mapping.items():
        if value is not None:
            setattr(config, fieldname, value)
    env_dir = os.environ.get(OUTPUT_DIR_ENV)
    if env_dir:
        config.output_dir = env_dir


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        config = pipeline.RunConfig.load(args.config)
        _apply_overrides(config, args)
        config.validate()
        if args.command == "run":
            result = pipeline.run_pipeline(config)
            for report in result.reports:
                bleu = "" if report.bleu is None else f"\tBLEU {report.bleu:.1f}"
                print(
                    f"{report.direction}\tH_lm {report.h_lm:.1f}\t"
                    f"H_mt {report.h_mt:.1f}\tXMI {report.xmi:.1f}{bleu}"
                )
        else:
            _STAGE_FUNCS[args.command](config)
            print(f"{args.command}: done (outputs in {config.output_dir})")
    except (ValidationError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except PipelineError as exc:
        if isinstance(exc.cause, (ValidationError, FileNotFoundError)):
            print(f"error: {exc}", file=sys.stderr)
            return 1
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CrossmiError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # anything unexpected is a runtime error
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
