"""Command-line driver wiring catalog -> baskets -> mining -> rules -> report.

Subcommands:
    mine   full pipeline; ranked rule table to --out, stats and diagnostics
           to stderr.
    stats  catalog statistics only, one row per input file.

Exit codes: 0 success, 1 usage or configuration problem, 2 data problem
(nothing parseable, or nothing left after filtering).
"""

from __future__ import annotations

import argparse
import datetime as dt
import sys
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Sequence

from . import apriori, baskets, catalog, report, rules

DEFAULT_REGIONS_RESOURCE = "regions_tr.txt"
DEFAULT_NORMMAP_RESOURCE = "normalize_tr.txt"

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


@dataclass
class RunConfig:
    """Resolved settings for one pipeline run."""

    inputs: list[Path]
    fmt: str = "canonical-csv"
    date_from: dt.date | None = None
    date_to: dt.date | None = None
    min_ml: float = 2.0
    regions_path: Path | None = None
    normmap_path: Path | None = None
    min_support: float = 0.05
    min_confidence: float = 0.25
    top_k: int = 30
    denominator: str = "active-days"
    out: str = "-"
    out_format: str = "csv"
    workers: int = 1
    whitelist: frozenset[str] = field(default_factory=frozenset)
    normmap: catalog.NormalizationMap = field(default_factory=catalog.NormalizationMap)


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad usage; the CLI contract reserves 2 for data errors
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--input",
        action="append",
        required=True,
        metavar="PATH",
        help="catalog file; repeat for several files",
    )
    parser.add_argument(
        "--format",
        choices=catalog.FORMATS,
        default="canonical-csv",
        help="input format (default: %(default)s)",
    )
    parser.add_argument("--from", dest="date_from", type=dt.date.fromisoformat, metavar="DATE")
    parser.add_argument("--to", dest="date_to", type=dt.date.fromisoformat, metavar="DATE")
    parser.add_argument("--min-ml", type=float, default=2.0, help="ML threshold (default: %(default)s)")
    parser.add_argument("--regions", metavar="PATH", help="region whitelist file (default: shipped list)")
    parser.add_argument("--normmap", metavar="PATH", help="location normalization map (default: shipped map)")
    parser.add_argument("--out", default="-", metavar="PATH", help="output file, - for stdout")
    parser.add_argument(
        "--out-format",
        choices=report.FORMATS,
        default="csv",
        help="output format (default: %(default)s)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="eqmine", description="Daily co-occurrence rule mining over earthquake catalogs.")
    sub = parser.add_subparsers(dest="command", required=True)

    mine = sub.add_parser("mine", help="run the full mining pipeline")
    _add_common_flags(mine)
    mine.add_argument("--min-support", type=float, default=0.05, help="support fraction (default: %(default)s)")
    mine.add_argument("--min-confidence", type=float, default=0.25, help="confidence floor (default: %(default)s)")
    mine.add_argument("--top-k", type=int, default=30, help="rules kept by confidence (default: %(default)s)")
    mine.add_argument(
        "--denominator",
        choices=baskets.DENOMINATORS,
        default="active-days",
        help="support denominator (default: %(default)s)",
    )
    mine.add_argument("--workers", type=int, default=1, help="counting shards (default: %(default)s)")

    stats = sub.add_parser("stats", help="catalog statistics only")
    _add_common_flags(stats)
    return parser


def _default_lines(resource: str) -> list[str]:
    text = resources.files("eqmine").joinpath("data", resource).read_text(encoding="utf-8")
    return text.splitlines()


def _build_config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(
        inputs=[Path(p) for p in args.input],
        fmt=args.format,
        date_from=args.date_from,
        date_to=args.date_to,
        min_ml=args.min_ml,
        regions_path=Path(args.regions) if args.regions else None,
        normmap_path=Path(args.normmap) if args.normmap else None,
        out=args.out,
        out_format=args.out_format,
    )
    if args.command == "mine":
        cfg.min_support = args.min_support
        cfg.min_confidence = args.min_confidence
        cfg.top_k = args.top_k
        cfg.denominator = args.denominator
        cfg.workers = args.workers
    if cfg.date_from is not None and cfg.date_to is not None and cfg.date_from > cfg.date_to:
        raise ValueError(f"--from {cfg.date_from} is after --to {cfg.date_to}")
    if cfg.workers < 1:
        raise ValueError(f"--workers {cfg.workers} below 1")
    if cfg.regions_path is not None:
        cfg.whitelist = catalog.load_region_list(cfg.regions_path)
    else:
        cfg.whitelist = catalog.parse_region_list(_default_lines(DEFAULT_REGIONS_RESOURCE))
    if cfg.normmap_path is not None:
        cfg.normmap = catalog.load_normalization_map(cfg.normmap_path, cfg.whitelist)
    else:
        cfg.normmap = catalog.parse_normalization_map(
            _default_lines(DEFAULT_NORMMAP_RESOURCE), cfg.whitelist
        )
    return cfg


def _read_one(path: Path, cfg: RunConfig) -> list[catalog.EventRecord]:
    with open(path, encoding="utf-8") as fh:
        records, issues = catalog.parse_catalog(fh, cfg.fmt)
    for issue in issues:
        print(f"{path}:{issue.line}: skipped: {issue.reason}", file=sys.stderr)
    if issues:
        print(f"{path}: skipped {len(issues)} malformed line(s)", file=sys.stderr)
    return records


def _prepare(path: Path, cfg: RunConfig) -> list[catalog.EventRecord]:
    records = _read_one(path, cfg)
    records = catalog.filter_date_range(records, cfg.date_from, cfg.date_to)
    normalized, unmapped = catalog.normalize_events(records, cfg.normmap)
    for name, count in unmapped.most_common():
        print(f"{path}: unmapped location {name!r}: {count} event(s)", file=sys.stderr)
    return normalized


def _write_out(cfg: RunConfig, text: str) -> None:
    if cfg.out == "-":
        sys.stdout.write(text)
    else:
        Path(cfg.out).write_text(text, encoding="utf-8")


def run_mine(cfg: RunConfig) -> int:
    policy = catalog.FilterPolicy(
        region_whitelist=cfg.whitelist, min_ml=cfg.min_ml, drop_missing_ml=True
    )
    records: list[catalog.EventRecord] = []
    for path in cfg.inputs:
        records.extend(_prepare(path, cfg))
    label = "+".join(p.stem for p in cfg.inputs)
    stats = catalog.compute_stats(records, policy)
    sys.stderr.write(report.emit_stats_table([(label, stats)]))
    filtered = catalog.filter_events(records, policy)
    date_range = None
    if cfg.date_from is not None and cfg.date_to is not None:
        date_range = (cfg.date_from, cfg.date_to)
    db = baskets.basketize(filtered, date_range=date_range, denominator=cfg.denominator)
    table = apriori.frequent_itemsets(
        db, apriori.MiningConfig(min_support=cfg.min_support), workers=cfg.workers
    )
    ranked = rules.rank_rules(
        rules.generate_rules(table, min_confidence=cfg.min_confidence),
        rules.RankingPolicy(min_confidence=cfg.min_confidence, top_k=cfg.top_k),
    )
    _write_out(cfg, report.emit_rule_table(ranked, db, fmt=cfg.out_format))
    return EXIT_OK


def run_stats(cfg: RunConfig) -> int:
    policy = catalog.FilterPolicy(
        region_whitelist=cfg.whitelist, min_ml=cfg.min_ml, drop_missing_ml=True
    )
    rows = []
    for path in cfg.inputs:
        events = _prepare(path, cfg)
        rows.append((path.stem, catalog.compute_stats(events, policy)))
    _write_out(cfg, report.emit_stats_table(rows, fmt=cfg.out_format))
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = _build_config(args)
        if args.command == "mine":
            return run_mine(cfg)
        return run_stats(cfg)
    except (catalog.EmptyCatalogError, baskets.EmptyDatabaseError) as exc:
        print(f"eqmine: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (OSError, ValueError) as exc:
        print(f"eqmine: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
