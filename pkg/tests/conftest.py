import datetime as dt
from pathlib import Path

import pytest

from eqmine import baskets, catalog

DATA_DIR = Path(__file__).parent / "data"
PKG_DATA = Path(__file__).parent.parent / "src" / "eqmine" / "data"


def day(n: int) -> dt.date:
    return dt.date(2021, 3, n)


@pytest.fixture(scope="session")
def fixture_catalog_path() -> Path:
    return DATA_DIR / "fixture_catalog.csv"


@pytest.fixture(scope="session")
def golden_report_path() -> Path:
    return DATA_DIR / "golden_report.csv"


@pytest.fixture(scope="session")
def whitelist():
    return catalog.load_region_list(PKG_DATA / "regions_tr.txt")


@pytest.fixture(scope="session")
def nmap(whitelist):
    return catalog.load_normalization_map(PKG_DATA / "normalize_tr.txt", whitelist)


@pytest.fixture
def make_db():
    """Build a TransactionDb from a list of name-baskets, one per day."""

    def _make(basket_items, denominator="active-days"):
        mapping = {
            dt.date(2021, 1, 1) + dt.timedelta(days=i): set(items)
            for i, items in enumerate(basket_items)
        }
        return baskets.db_from_day_regions(mapping, denominator=denominator)

    return _make


@pytest.fixture
def five_basket_db(make_db):
    return make_db([{"A", "B", "C"}, {"A", "B"}, {"A", "C"}, {"B", "C"}, {"A", "B", "C"}])


def make_event(
    day_of_month: int = 1,
    region: str | None = None,
    ml: float | None = 2.5,
    raw_location: str = "ELAZIG",
    time: dt.time = dt.time(12, 0, 0),
    md: float | None = None,
    mw: float | None = None,
) -> catalog.EventRecord:
    return catalog.EventRecord(
        date=day(day_of_month),
        time=time,
        latitude=38.5,
        longitude=39.2,
        depth_km=7.0,
        raw_location=raw_location,
        md=md,
        ml=ml,
        mw=mw,
        region=region,
    )
