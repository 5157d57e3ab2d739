"""Seismic catalog ingestion: parsing, location normalization, filtering, stats.

Two on-disk formats are understood. The canonical CSV is the interchange
format of this package (header ``date,time,lat,lon,depth_km,md,ml,mw,location``,
empty string for an absent magnitude). The KOERI text format is a tolerant
whitespace-split reader for catalog exports whose columns are
date, time, lat, lon, depth, MD, ML, MW followed by a free-form location tail;
the magnitude placeholder ``-.-`` means absent.
"""

from __future__ import annotations

import csv
import datetime as dt
import io
import re
import unicodedata
from collections import Counter
from dataclasses import dataclass, field, replace
from typing import IO, Iterable, Iterator

CANONICAL_HEADER = ("date", "time", "lat", "lon", "depth_km", "md", "ml", "mw", "location")

KOERI_MISSING = "-.-"

FORMATS = ("canonical-csv", "koeri-text")

# Trailing solution-quality tokens some KOERI exports append after the location.
_QUALITY_TOKEN = re.compile(r"^(?:ILKSEL|REVIZE\w*)$")

_DATE = re.compile(r"^(\d{4})[.\-/](\d{1,2})[.\-/](\d{1,2})$")
_TIME = re.compile(r"^(\d{1,2}):(\d{1,2}):(\d{1,2})(?:\.\d+)?$")
_PAREN_SUFFIX = re.compile(r"\(([^()]*)\)$")


class EmptyCatalogError(ValueError):
    """No well-formed event records could be read from a source."""


@dataclass(frozen=True)
class EventRecord:
    """One parsed catalog row.

    ``region`` stays None until :func:`normalize_location` has resolved the
    raw location; magnitudes are None when the catalog leaves them blank.
    """

    date: dt.date
    time: dt.time
    latitude: float
    longitude: float
    depth_km: float
    raw_location: str
    md: float | None = None
    ml: float | None = None
    mw: float | None = None
    region: str | None = None

    def __post_init__(self) -> None:
        if not -90.0 <= self.latitude <= 90.0:
            raise ValueError(f"latitude {self.latitude} outside [-90, 90]")
        if not -180.0 <= self.longitude <= 180.0:
            raise ValueError(f"longitude {self.longitude} outside [-180, 180]")
        if self.depth_km < 0.0:
            raise ValueError(f"depth {self.depth_km} is negative")
        for name in ("md", "ml", "mw"):
            value = getattr(self, name)
            if value is not None and not 0.0 <= value <= 10.0:
                raise ValueError(f"{name} {value} outside [0, 10]")
        if not self.raw_location.strip():
            raise ValueError("empty location")


@dataclass(frozen=True)
class ParseIssue:
    """Line-level diagnostic for a skipped catalog row."""

    line: int
    reason: str


@dataclass(frozen=True)
class NormalizationMap:
    """Lookup table resolving raw location tokens to canonical region names.

    ``entries`` maps folded sub-regional tokens (districts, aliases) to a
    canonical name; ``passthrough`` lists canonical names kept as-is, such as
    province names and named seas. Every value of ``entries`` must itself
    resolve to itself, so normalization is idempotent.
    """

    entries: dict[str, str] = field(default_factory=dict)
    passthrough: frozenset[str] = frozenset()

    def __post_init__(self) -> None:
        for key, value in self.entries.items():
            if value not in self.passthrough and self.entries.get(value) != value:
                raise ValueError(f"map value {value!r} (for key {key!r}) is not canonical")
        overlap = self.passthrough & self.entries.keys()
        if overlap:
            raise ValueError(f"passthrough names also appear as map keys: {sorted(overlap)}")


@dataclass(frozen=True)
class FilterPolicy:
    """Border and magnitude filter applied before basketization."""

    region_whitelist: frozenset[str]
    min_ml: float = 2.0
    drop_missing_ml: bool = True

    def __post_init__(self) -> None:
        if self.min_ml < 0.0:
            raise ValueError(f"min_ml {self.min_ml} is negative")
        if not self.region_whitelist:
            raise ValueError("region whitelist is empty")


@dataclass(frozen=True)
class CatalogStats:
    """Event counts before and after the border and magnitude filters."""

    n_all: int
    n_within_borders: int
    n_ml_ge_threshold: int
    max_ml: float | None


def fold_location(raw: str) -> str:
    """Uppercase, fold diacritics, and collapse whitespace runs."""
    upper = unicodedata.normalize("NFKD", raw.upper())
    stripped = "".join(ch for ch in upper if not unicodedata.combining(ch))
    return " ".join(stripped.split())


def _lookup(token: str, nmap: NormalizationMap) -> str | None:
    if token in nmap.entries:
        return nmap.entries[token]
    if token in nmap.passthrough:
        return token
    return None


def normalize_location(raw: str, nmap: NormalizationMap) -> str | None:
    """Resolve a raw location string to a canonical region name.

    The folded string is resolved in this order: a parenthesized suffix
    ("DISTRICT (PROVINCE)" resolves to PROVINCE when PROVINCE is canonical),
    then a direct map entry, then passthrough membership. Returns None when
    nothing matches; that is a value, not an error.
    """
    if not raw.strip():
        raise ValueError("empty location")
    key = fold_location(raw)
    suffix = _PAREN_SUFFIX.search(key)
    if suffix is not None:
        resolved = _lookup(suffix.group(1).strip(), nmap)
        if resolved is not None:
            return resolved
    return _lookup(key, nmap)


def normalize_events(
    events: Iterable[EventRecord], nmap: NormalizationMap
) -> tuple[list[EventRecord], Counter[str]]:
    """Set ``region`` on every record; unresolved raw locations are counted.

    Returns the re-written records (order preserved) and a Counter of folded
    location strings that stayed unmapped.
    """
    out: list[EventRecord] = []
    unmapped: Counter[str] = Counter()
    for ev in events:
        region = normalize_location(ev.raw_location, nmap)
        if region is None:
            unmapped[fold_location(ev.raw_location)] += 1
        out.append(replace(ev, region=region))
    return out, unmapped


def filter_events(events: Iterable[EventRecord], policy: FilterPolicy) -> list[EventRecord]:
    """Keep whitelist members that pass the magnitude threshold, order preserved.

    Records without an ML value are dropped unless the policy says to keep them.
    """
    kept = []
    for ev in events:
        if ev.region not in policy.region_whitelist:
            continue
        if ev.ml is None:
            if policy.drop_missing_ml:
                continue
        elif ev.ml < policy.min_ml:
            continue
        kept.append(ev)
    return kept


def filter_date_range(
    events: Iterable[EventRecord],
    start: dt.date | None = None,
    end: dt.date | None = None,
) -> list[EventRecord]:
    """Keep records whose date falls inside the closed interval, order preserved."""
    if start is not None and end is not None and start > end:
        raise ValueError(f"empty date range: {start} > {end}")
    return [
        ev
        for ev in events
        if (start is None or ev.date >= start) and (end is None or ev.date <= end)
    ]


def compute_stats(events: Iterable[EventRecord], policy: FilterPolicy) -> CatalogStats:
    """Count all records, whitelist members, and threshold passers.

    ``max_ml`` is taken over whitelist members only and is None when no such
    record carries an ML value.
    """
    events = list(events)
    within = [ev for ev in events if ev.region in policy.region_whitelist]
    mls = [ev.ml for ev in within if ev.ml is not None]
    return CatalogStats(
        n_all=len(events),
        n_within_borders=len(within),
        n_ml_ge_threshold=sum(1 for ml in mls if ml >= policy.min_ml),
        max_ml=max(mls, default=None),
    )


def _parse_date(token: str) -> dt.date:
    m = _DATE.match(token)
    if m is None:
        raise ValueError(f"bad date {token!r}")
    return dt.date(int(m.group(1)), int(m.group(2)), int(m.group(3)))


def _parse_time(token: str) -> dt.time:
    m = _TIME.match(token)
    if m is None:
        raise ValueError(f"bad time {token!r}")
    return dt.time(int(m.group(1)), int(m.group(2)), int(m.group(3)))


def _parse_magnitude(token: str) -> float | None:
    token = token.strip()
    if token == "" or token == KOERI_MISSING:
        return None
    return float(token)


def _records_from_canonical(stream: IO[str]) -> Iterator[tuple[int, EventRecord | ParseIssue]]:
    reader = csv.reader(stream)
    try:
        header = next(reader)
    except StopIteration:
        raise EmptyCatalogError("empty catalog source") from None
    if tuple(h.strip() for h in header) != CANONICAL_HEADER:
        raise ValueError(f"unexpected header {header!r}, want {','.join(CANONICAL_HEADER)}")
    for row in reader:
        line = reader.line_num
        if not row:
            continue
        try:
            if len(row) != len(CANONICAL_HEADER):
                raise ValueError(f"expected {len(CANONICAL_HEADER)} fields, got {len(row)}")
            yield line, EventRecord(
                date=dt.date.fromisoformat(row[0].strip()),
                time=dt.time.fromisoformat(row[1].strip()),
                latitude=float(row[2]),
                longitude=float(row[3]),
                depth_km=float(row[4]),
                raw_location=row[8],
                md=_parse_magnitude(row[5]),
                ml=_parse_magnitude(row[6]),
                mw=_parse_magnitude(row[7]),
            )
        except ValueError as exc:
            yield line, ParseIssue(line, str(exc))


def _strip_quality_token(tail: str) -> str:
    parts = tail.split()
    while parts and _QUALITY_TOKEN.match(fold_location(parts[-1])):
        parts.pop()
    return " ".join(parts)


def _records_from_koeri(stream: IO[str]) -> Iterator[tuple[int, EventRecord | ParseIssue]]:
    for line_no, line in enumerate(stream, start=1):
        if not line.strip():
            continue
        try:
            parts = line.split(None, 8)
            if len(parts) < 9:
                raise ValueError(f"expected 8 columns plus location, got {len(parts)} fields")
            location = _strip_quality_token(parts[8].strip())
            yield line_no, EventRecord(
                date=_parse_date(parts[0]),
                time=_parse_time(parts[1]),
                latitude=float(parts[2]),
                longitude=float(parts[3]),
                depth_km=float(parts[4]),
                raw_location=location,
                md=_parse_magnitude(parts[5]),
                ml=_parse_magnitude(parts[6]),
                mw=_parse_magnitude(parts[7]),
            )
        except ValueError as exc:
            yield line_no, ParseIssue(line_no, str(exc))


def parse_catalog(
    stream: IO[str], fmt: str = "canonical-csv"
) -> tuple[list[EventRecord], list[ParseIssue]]:
    """Read a catalog from a text stream.

    Args:
        stream: readable text stream in the declared format.
        fmt: "canonical-csv" or "koeri-text".

    Returns:
        (records, issues). Malformed lines are skipped and reported as issues;
        record order follows the source.

    Raises:
        EmptyCatalogError: no line yielded a well-formed record.
        ValueError: unknown format, or a canonical file without its header.
    """
    if fmt == "canonical-csv":
        rows = _records_from_canonical(stream)
    elif fmt == "koeri-text":
        rows = _records_from_koeri(stream)
    else:
        raise ValueError(f"unknown catalog format {fmt!r}")
    records: list[EventRecord] = []
    issues: list[ParseIssue] = []
    for _, item in rows:
        if isinstance(item, ParseIssue):
            issues.append(item)
        else:
            records.append(item)
    if not records:
        raise EmptyCatalogError("no well-formed event records in source")
    return records, issues


def _format_float(value: float) -> str:
    # str() keeps the shortest digit string that round-trips the double
    return str(value)


def _format_magnitude(value: float | None) -> str:
    return "" if value is None else _format_float(value)


def emit_canonical_csv(records: Iterable[EventRecord]) -> str:
    """Serialize records in the canonical CSV format (lossless round-trip)."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CANONICAL_HEADER)
    for ev in records:
        writer.writerow(
            [
                ev.date.isoformat(),
                ev.time.isoformat(),
                _format_float(ev.latitude),
                _format_float(ev.longitude),
                _format_float(ev.depth_km),
                _format_magnitude(ev.md),
                _format_magnitude(ev.ml),
                _format_magnitude(ev.mw),
                ev.raw_location,
            ]
        )
    return buf.getvalue()


def _data_lines(lines: Iterable[str]) -> Iterator[str]:
    for line in lines:
        stripped = line.strip()
        if stripped and not stripped.startswith("#"):
            yield stripped


def parse_region_list(lines: Iterable[str]) -> frozenset[str]:
    """One canonical region name per line; ``#`` starts a comment."""
    return frozenset(fold_location(line) for line in _data_lines(lines))


def parse_normalization_map(lines: Iterable[str], passthrough: frozenset[str]) -> NormalizationMap:
    """``KEY=VALUE`` lines mapping location tokens to canonical names."""
    entries: dict[str, str] = {}
    for line in _data_lines(lines):
        key, sep, value = line.partition("=")
        if not sep or not key.strip() or not value.strip():
            raise ValueError(f"bad map line {line!r}, want KEY=VALUE")
        entries[fold_location(key)] = fold_location(value)
    return NormalizationMap(entries=entries, passthrough=passthrough)


def load_region_list(path) -> frozenset[str]:
    with open(path, encoding="utf-8") as fh:
        return parse_region_list(fh)


def load_normalization_map(path, passthrough: frozenset[str]) -> NormalizationMap:
    with open(path, encoding="utf-8") as fh:
        return parse_normalization_map(fh, passthrough)
