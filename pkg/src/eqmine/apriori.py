"""Apriori frequent-itemset mining with exact transaction counts.

Itemsets are canonical tuples of item ids (strictly ascending). Counting uses
integer bitmasks over the baskets; Python ints are arbitrary precision, so one
representation covers every dictionary size.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from .baskets import EmptyDatabaseError, TransactionDb

Itemset = tuple[int, ...]


@dataclass(frozen=True)
class MiningConfig:
    min_support: float = 0.05
    max_itemset_size: int | None = None

    def __post_init__(self) -> None:
        if not 0.0 < self.min_support <= 1.0:
            raise ValueError(f"min_support {self.min_support} outside (0, 1]")
        if self.max_itemset_size is not None and self.max_itemset_size < 1:
            raise ValueError(f"max_itemset_size {self.max_itemset_size} below 1")


@dataclass(frozen=True)
class SupportTable:
    """Exact transaction counts for every frequent itemset."""

    counts: dict[Itemset, int]
    n_transactions: int

    def support(self, itemset: Itemset) -> float:
        return self.counts[itemset] / self.n_transactions


def support_count_threshold(min_support: float, n_transactions: int) -> int:
    """Smallest transaction count that meets the support fraction.

    The epsilon absorbs float excess when min_support * n lands a hair above
    an exact integer (e.g. 0.07 * 100 == 7.000000000000001).
    """
    return max(1, math.ceil(min_support * n_transactions - 1e-9))


def _mask(ids: Iterable[int]) -> int:
    m = 0
    for i in ids:
        m |= 1 << i
    return m


def _count_chunk(basket_masks: Sequence[int], cand_masks: Sequence[int]) -> list[int]:
    return [sum(1 for bm in basket_masks if bm & cm == cm) for cm in cand_masks]


def count_support(
    db: TransactionDb, candidates: Sequence[Itemset], workers: int = 1
) -> dict[Itemset, int]:
    """Exact count of baskets containing each candidate (superset inclusive).

    With ``workers`` > 1 the baskets are split into contiguous shards counted
    in parallel and merged by addition, which cannot change the result.
    """
    basket_masks = [_mask(b.items) for b in db.baskets]
    cand_masks = [_mask(c) for c in candidates]
    if workers <= 1 or len(basket_masks) < 2 * workers:
        totals = _count_chunk(basket_masks, cand_masks)
    else:
        step = (len(basket_masks) + workers - 1) // workers
        shards = [basket_masks[i : i + step] for i in range(0, len(basket_masks), step)]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda shard: _count_chunk(shard, cand_masks), shards))
        totals = [sum(col) for col in zip(*parts)]
    return dict(zip((tuple(c) for c in candidates), totals))


def candidate_join_prune(frequent_k: Sequence[Itemset]) -> list[Itemset]:
    """Join size-k itemsets sharing their first k-1 ids, prune by closure.

    Inputs must be canonical and lexicographically sorted. A joined candidate
    survives only if every k-subset of it is itself in ``frequent_k``.
    """
    frequent = set(frequent_k)
    out: list[Itemset] = []
    items = list(frequent_k)
    for i, a in enumerate(items):
        for b in items[i + 1 :]:
            if a[:-1] != b[:-1]:
                break  # sorted input: later b share even less of the prefix
            cand = a + (b[-1],)
            if all(cand[:j] + cand[j + 1 :] in frequent for j in range(len(cand))):
                out.append(cand)
    return out


def frequent_itemsets(
    db: TransactionDb, cfg: MiningConfig | None = None, workers: int = 1
) -> SupportTable:
    """All itemsets whose count meets ceil(min_support * n_transactions).

    Level-wise Apriori: count candidates, keep the frequent ones, join and
    prune to form the next level. Returns an empty table (not an error) when
    no single item is frequent.
    """
    if cfg is None:
        cfg = MiningConfig()
    if not db.baskets or db.n_transactions <= 0:
        raise EmptyDatabaseError("cannot mine an empty transaction database")
    threshold = support_count_threshold(cfg.min_support, db.n_transactions)
    counts: dict[Itemset, int] = {}
    level: list[Itemset] = [(i,) for i in range(len(db.names))]
    size = 1
    while level and (cfg.max_itemset_size is None or size <= cfg.max_itemset_size):
        level_counts = count_support(db, level, workers=workers)
        frequent = [s for s in level if level_counts[s] >= threshold]
        counts.update((s, level_counts[s]) for s in frequent)
        level = candidate_join_prune(frequent)
        size += 1
    return SupportTable(counts=counts, n_transactions=db.n_transactions)


def dump_itemsets(table: SupportTable, db: TransactionDb) -> str:
    """Debug text: ``NAME1+NAME2 <TAB> count <TAB> support`` per itemset."""
    lines = []
    for itemset in sorted(table.counts):
        names = "+".join(db.item_name(i) for i in itemset)
        count = table.counts[itemset]
        lines.append(f"{names}\t{count}\t{count / table.n_transactions:.6f}")
    return "\n".join(lines) + ("\n" if lines else "")


def proper_subsets(itemset: Itemset) -> Iterable[Itemset]:
    """Non-empty proper subsets, canonical order."""
    for size in range(1, len(itemset)):
        yield from combinations(itemset, size)
