#!/usr/bin/env python3
"""Regenerate the golden fixture report from the brute-force oracle.

The pipeline CLI must reproduce this file byte for byte at default settings.
Ingestion (parsing, normalization, filtering, basketization) comes from the
library, but every mined number, the ranking, and the cell formatting are
produced here independently of the miner, rules, and report modules.

Usage: python scripts/regen_golden.py [--check]
"""

from __future__ import annotations

import math
import sys
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(REPO / "tests"))

import oracle  # noqa: E402

from eqmine import baskets, catalog  # noqa: E402

FIXTURE = REPO / "tests" / "data" / "fixture_catalog.csv"
GOLDEN = REPO / "tests" / "data" / "golden_report.csv"

MIN_ML = 2.0
MIN_SUPPORT = 0.05
MIN_CONFIDENCE = 0.25
TOP_K = 30


def fmt(value: float) -> str:
    return "inf" if math.isinf(value) else f"{value:.3f}"


def itemset_cell(ids, names) -> str:
    return "(" + ", ".join(names[i] for i in sorted(ids)) + ")"


def main(argv: list[str]) -> int:
    whitelist = catalog.load_region_list(REPO / "src" / "eqmine" / "data" / "regions_tr.txt")
    nmap = catalog.load_normalization_map(
        REPO / "src" / "eqmine" / "data" / "normalize_tr.txt", whitelist
    )
    with open(FIXTURE, encoding="utf-8") as fh:
        records, issues = catalog.parse_catalog(fh, "canonical-csv")
    if issues:
        raise SystemExit(f"fixture must parse cleanly, got {issues}")
    normalized, _ = catalog.normalize_events(records, nmap)
    policy = catalog.FilterPolicy(region_whitelist=whitelist, min_ml=MIN_ML)
    kept = catalog.filter_events(normalized, policy)
    db = baskets.basketize(kept)

    raw_baskets = [set(b.items) for b in db.baskets]
    rules = oracle.brute_rules(
        raw_baskets, len(db.names), MIN_SUPPORT, MIN_CONFIDENCE, db.n_transactions
    )
    rows = oracle.rank_two_step(
        [(x, y, metrics) for (x, y), metrics in rules.items()], TOP_K
    )

    lines = ["antecedent;consequent;support;confidence;lift;leverage;conviction"]
    for antecedent, consequent, (supp, conf, lift, lev, conv) in rows:
        lines.append(
            ";".join(
                [
                    itemset_cell(antecedent, db.names),
                    itemset_cell(consequent, db.names),
                    fmt(supp),
                    fmt(conf),
                    fmt(lift),
                    fmt(lev),
                    fmt(conv),
                ]
            )
        )
    text = "\n".join(lines) + "\n"

    if "--check" in argv:
        current = GOLDEN.read_text(encoding="utf-8")
        if current != text:
            print("golden report is stale", file=sys.stderr)
            return 1
        print(f"golden report up to date ({len(rows)} rules)")
        return 0
    GOLDEN.write_text(text, encoding="utf-8")
    print(f"wrote {GOLDEN} ({len(rows)} rules)")
    return 0


if __name__ == "__main__":
    raise SystemExit(main(sys.argv[1:]))
