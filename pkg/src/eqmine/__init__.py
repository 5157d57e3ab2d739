"""Association rule mining over earthquake catalogs, one day = one basket."""

from .apriori import (
    Itemset,
    MiningConfig,
    SupportTable,
    candidate_join_prune,
    count_support,
    frequent_itemsets,
    support_count_threshold,
)
from .baskets import (
    Basket,
    EmptyDatabaseError,
    TransactionDb,
    basketize,
    db_from_day_regions,
    dump_baskets,
)
from .catalog import (
    CatalogStats,
    EmptyCatalogError,
    EventRecord,
    FilterPolicy,
    NormalizationMap,
    ParseIssue,
    compute_stats,
    emit_canonical_csv,
    filter_date_range,
    filter_events,
    fold_location,
    load_normalization_map,
    load_region_list,
    normalize_events,
    normalize_location,
    parse_catalog,
)
from .report import emit_rule_table, emit_stats_table
from .rules import (
    AssociationRule,
    RankingPolicy,
    confidence,
    conviction,
    generate_rules,
    leverage,
    lift,
    rank_rules,
    rule_metrics,
)

__version__ = "0.1.0"

__all__ = [
    "AssociationRule",
    "Basket",
    "CatalogStats",
    "EmptyCatalogError",
    "EmptyDatabaseError",
    "EventRecord",
    "FilterPolicy",
    "Itemset",
    "MiningConfig",
    "NormalizationMap",
    "ParseIssue",
    "RankingPolicy",
    "SupportTable",
    "TransactionDb",
    "basketize",
    "candidate_join_prune",
    "compute_stats",
    "confidence",
    "conviction",
    "count_support",
    "db_from_day_regions",
    "dump_baskets",
    "emit_canonical_csv",
    "emit_rule_table",
    "emit_stats_table",
    "filter_date_range",
    "filter_events",
    "fold_location",
    "frequent_itemsets",
    "generate_rules",
    "leverage",
    "lift",
    "load_normalization_map",
    "load_region_list",
    "normalize_events",
    "normalize_location",
    "parse_catalog",
    "rank_rules",
    "rule_metrics",
    "support_count_threshold",
]
