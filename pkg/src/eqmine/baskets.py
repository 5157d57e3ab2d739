"""Daily transaction baskets built from a normalized, filtered event stream.

Each calendar day with at least one qualifying event becomes one transaction
whose items are the distinct canonical regions recorded that day. Item ids are
dense and assigned in lexicographic region-name order, so id order and name
order agree everywhere downstream.
"""

from __future__ import annotations

import datetime as dt
from dataclasses import dataclass
from typing import Iterable, Mapping

from .catalog import EventRecord

DENOMINATORS = ("active-days", "all-days")


class EmptyDatabaseError(ValueError):
    """No baskets survived basketization."""


@dataclass(frozen=True)
class Basket:
    day: dt.date
    items: frozenset[int]

    def __post_init__(self) -> None:
        if not self.items:
            raise ValueError(f"empty basket on {self.day}")


@dataclass(frozen=True)
class TransactionDb:
    """Item dictionary plus day-ordered baskets.

    ``names[i]`` is the region behind item id ``i``; ``n_transactions`` is the
    support denominator (the basket count, or the day span in all-days mode).
    """

    names: tuple[str, ...]
    baskets: tuple[Basket, ...]
    n_transactions: int

    def __post_init__(self) -> None:
        if tuple(sorted(set(self.names))) != self.names:
            raise ValueError("item names must be unique and lexicographically sorted")
        if self.n_transactions < len(self.baskets):
            raise ValueError("n_transactions below basket count")
        days = [b.day for b in self.baskets]
        if any(a >= b for a, b in zip(days, days[1:])):
            raise ValueError("basket days must be strictly increasing")

    def item_name(self, item_id: int) -> str:
        if not 0 <= item_id < len(self.names):
            raise KeyError(f"unknown item id {item_id}")
        return self.names[item_id]

    def item_id(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown item name {name!r}") from None


def db_from_day_regions(
    day_regions: Mapping[dt.date, Iterable[str]],
    denominator: str = "active-days",
) -> TransactionDb:
    """Build a TransactionDb from a day -> region-names mapping."""
    grouped = {day: frozenset(regions) for day, regions in day_regions.items() if regions}
    if not grouped:
        raise EmptyDatabaseError("no baskets: no days with events")
    names = tuple(sorted({region for regions in grouped.values() for region in regions}))
    ids = {name: i for i, name in enumerate(names)}
    days = sorted(grouped)
    baskets = tuple(
        Basket(day, frozenset(ids[r] for r in grouped[day])) for day in days
    )
    if denominator == "active-days":
        n_transactions = len(baskets)
    elif denominator == "all-days":
        n_transactions = (days[-1] - days[0]).days + 1
    else:
        raise ValueError(f"unknown denominator mode {denominator!r}")
    return TransactionDb(names=names, baskets=baskets, n_transactions=n_transactions)


def basketize(
    events: Iterable[EventRecord],
    date_range: tuple[dt.date, dt.date] | None = None,
    denominator: str = "active-days",
) -> TransactionDb:
    """Group events into daily baskets of distinct regions.

    Args:
        events: normalized, filtered records; every ``region`` must be set.
        date_range: optional closed (start, end) interval; events outside it
            are dropped. In all-days mode the interval also fixes the
            denominator day span.
        denominator: "active-days" counts days with at least one basket,
            "all-days" counts every day of the range (or of the observed span).

    Raises:
        EmptyDatabaseError: no events remained to form a basket.
    """
    if denominator not in DENOMINATORS:
        raise ValueError(f"unknown denominator mode {denominator!r}")
    if date_range is not None and date_range[0] > date_range[1]:
        raise ValueError(f"empty date range: {date_range[0]} > {date_range[1]}")
    grouped: dict[dt.date, set[str]] = {}
    for ev in events:
        if ev.region is None:
            raise ValueError(f"event at {ev.date} {ev.time} has no canonical region")
        if date_range is not None and not date_range[0] <= ev.date <= date_range[1]:
            continue
        grouped.setdefault(ev.date, set()).add(ev.region)
    if not grouped:
        raise EmptyDatabaseError("no baskets: no events in range")
    db = db_from_day_regions(grouped, denominator="active-days")
    if denominator == "all-days":
        if date_range is not None:
            span = (date_range[1] - date_range[0]).days + 1
        else:
            days = sorted(grouped)
            span = (days[-1] - days[0]).days + 1
        db = TransactionDb(names=db.names, baskets=db.baskets, n_transactions=span)
    return db


def dump_baskets(db: TransactionDb) -> str:
    """Debug text: one ``YYYY-MM-DD: NAME1,NAME2`` line per basket, names sorted."""
    lines = []
    for basket in db.baskets:
        names = sorted(db.item_name(i) for i in basket.items)
        lines.append(f"{basket.day.isoformat()}: {','.join(names)}")
    return "\n".join(lines) + ("\n" if lines else "")
