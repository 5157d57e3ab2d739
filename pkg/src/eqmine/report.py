"""Rule and stats tables as semicolon-CSV or Markdown, byte-deterministic.

Itemset cells read ``(NAME1, NAME2)`` with names in lexicographic order, so the
CSV separator is ``;``. Metric cells carry exactly three decimals (round half
to even), except the literal ``inf`` for an unbounded conviction.
"""

from __future__ import annotations

import math
from typing import Sequence

from .baskets import TransactionDb
from .catalog import CatalogStats
from .rules import AssociationRule

RULE_COLUMNS = ("antecedent", "consequent", "support", "confidence", "lift", "leverage", "conviction")
STATS_COLUMNS = ("label", "n_all", "n_within_borders", "n_ml_ge_threshold", "max_ml")

FORMATS = ("csv", "markdown")


def format_metric(value: float) -> str:
    if math.isinf(value):
        return "inf"
    return f"{value:.3f}"


def format_itemset(itemset: Sequence[int], db: TransactionDb) -> str:
    names = [db.item_name(i) for i in sorted(itemset)]
    return f"({', '.join(names)})"


def _rule_cells(rule: AssociationRule, db: TransactionDb) -> list[str]:
    return [
        format_itemset(rule.antecedent, db),
        format_itemset(rule.consequent, db),
        format_metric(rule.support),
        format_metric(rule.confidence),
        format_metric(rule.lift),
        format_metric(rule.leverage),
        format_metric(rule.conviction),
    ]


def _emit_csv(header: Sequence[str], rows: Sequence[Sequence[str]], title: str) -> str:
    lines = []
    if title:
        lines.append(f"# {title}")
    lines.append(";".join(header))
    lines.extend(";".join(row) for row in rows)
    return "\n".join(lines) + "\n"


def _emit_markdown(header: Sequence[str], rows: Sequence[Sequence[str]], title: str) -> str:
    lines = []
    if title:
        lines.append(f"## {title}")
        lines.append("")
    lines.append("| " + " | ".join(header) + " |")
    lines.append("|" + " --- |" * len(header))
    lines.extend("| " + " | ".join(row) + " |" for row in rows)
    return "\n".join(lines) + "\n"


def emit_rule_table(
    rules: Sequence[AssociationRule],
    db: TransactionDb,
    fmt: str = "csv",
    title: str = "",
) -> str:
    """Render ranked rules in the given order as a CSV or Markdown document."""
    rows = [_rule_cells(rule, db) for rule in rules]
    if fmt == "csv":
        return _emit_csv(RULE_COLUMNS, rows, title)
    if fmt == "markdown":
        return _emit_markdown(RULE_COLUMNS, rows, title)
    raise ValueError(f"unknown report format {fmt!r}")


def _stats_cells(label: str, stats: CatalogStats) -> list[str]:
    max_ml = "-" if stats.max_ml is None else f"{stats.max_ml:.1f}"
    return [
        label,
        str(stats.n_all),
        str(stats.n_within_borders),
        str(stats.n_ml_ge_threshold),
        max_ml,
    ]


def emit_stats_table(
    stats_rows: Sequence[tuple[str, CatalogStats]],
    fmt: str = "csv",
    title: str = "",
) -> str:
    """Render one labelled stats row per catalog, in the given order."""
    rows = [_stats_cells(label, stats) for label, stats in stats_rows]
    if fmt == "csv":
        return _emit_csv(STATS_COLUMNS, rows, title)
    if fmt == "markdown":
        return _emit_markdown(STATS_COLUMNS, rows, title)
    raise ValueError(f"unknown report format {fmt!r}")
