"""``statement-net <subcommand> --config <path> [overrides]``

Exit codes: 0 success, 1 validation error, 2 data error, 3 internal invariant
violation. ``STATEMENT_NET_OUTPUT_DIR`` overrides the configured output
directory (a ``--output-dir`` flag still wins).
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import __version__, pipeline
from .config import load_config
from .errors import StatementNetError

COMMANDS = {
    "run": (pipeline.cmd_run, "run every stage and write the report bundle and manifest"),
    "ingest-stats": (pipeline.cmd_ingest_stats, "per-source article counts and date ranges"),
    "extract": (pipeline.cmd_extract, "tag entities and select statement sentences"),
    "network": (pipeline.cmd_network, "build the statement network from statements.jsonl"),
    "cores": (pipeline.cmd_cores, "k-core decomposition of the network"),
    "trajectories": (pipeline.cmd_trajectories, "core-rank trajectories over cumulative monthly snapshots"),
    "buckets": (pipeline.cmd_buckets, "hierarchy buckets of per-period networks"),
    "overlap": (pipeline.cmd_overlap, "overlap between consecutive hierarchy buckets"),
    "daily-counts": (pipeline.cmd_daily_counts, "edge events per day for each source"),
}


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="YAML pipeline config")
    common.add_argument("--output-dir", type=Path)
    common.add_argument("--corpus", type=Path)
    tagger = common.add_mutually_exclusive_group()
    tagger.add_argument("--gazetteer", type=Path)
    tagger.add_argument("--external-tags", type=Path, help="directory of <article_id>.tags files")
    common.add_argument("--merge-rules", type=Path)
    common.add_argument("--lexicon", type=Path, help="speech-verb surface forms, one per line")
    common.add_argument("--require-both", action="store_const", const=True, default=None,
                        help="a statement needs a speech verb and a quotation mark")
    common.add_argument("--no-quote-trigger", dest="quote_trigger", action="store_const", const=False,
                        default=None, help="quotation marks alone do not qualify a sentence")
    common.add_argument("--include-headline", action="store_const", const=True, default=None)
    common.add_argument("--on-error", choices=("fail", "skip"), help="malformed corpus lines")
    common.add_argument("--series-months", type=int)
    common.add_argument("--bucket-months", type=int)
    common.add_argument("--threshold", dest="bucket_threshold", type=int,
                        help="bucket members need a core number above this")
    common.add_argument("--overlap-metric", choices=("jaccard", "containment"))
    common.add_argument("--node", dest="trajectory_nodes", action="append",
                        help="track this node (repeatable; default: final top core)")
    common.add_argument("-v", "--verbose", action="store_true")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="statement-net",
        description="Extract statement networks from news corpora and analyze their core structure over time.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    common = _common_options()
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, parents=[common], help=help_text)
        if name == "daily-counts":
            p.add_argument("--source", help="only this source")
    return parser


OVERRIDE_KEYS = (
    "output_dir", "corpus", "gazetteer", "external_tags", "merge_rules", "lexicon", "require_both",
    "quote_trigger", "include_headline", "on_error", "series_months", "bucket_months",
    "bucket_threshold", "overlap_metric", "trajectory_nodes",
)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    overrides = {k: getattr(args, k) for k in OVERRIDE_KEYS}
    func = COMMANDS[args.command][0]
    try:
        cfg = load_config(args.config, overrides).validate()
        if args.command == "daily-counts":
            line = func(cfg, args.source)
        else:
            line = func(cfg)
    except StatementNetError as exc:
        where = getattr(exc, "stage", None)
        prefix = f"error in stage {where}" if where else "error"
        print(f"statement-net {args.command}: {prefix}: {exc}", file=sys.stderr)
        return exc.exit_code
    print(line)
    return 0


if __name__ == "__main__":
    sys.exit(main())
