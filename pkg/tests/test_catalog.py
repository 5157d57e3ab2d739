import dataclasses
import datetime as dt
import io

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import day, make_event
from eqmine import catalog
from eqmine.catalog import (
    CatalogStats,
    EmptyCatalogError,
    EventRecord,
    FilterPolicy,
    NormalizationMap,
    compute_stats,
    emit_canonical_csv,
    filter_date_range,
    filter_events,
    fold_location,
    normalize_events,
    normalize_location,
    parse_catalog,
    parse_normalization_map,
    parse_region_list,
)
from strategies import event_records, locations

NMAP = NormalizationMap(
    entries={"K.MARAS": "KAHRAMANMARAS", "SARIKAMIS": "KARS"},
    passthrough=frozenset(
        ["ELAZIG", "KAHRAMANMARAS", "KARS", "MALATYA", "MARMARA DENIZI", "MUGLA"]
    ),
)


def parse_text(text: str, fmt: str = "canonical-csv"):
    return parse_catalog(io.StringIO(text), fmt)


class TestParseCanonical:
    HEADER = "date,time,lat,lon,depth_km,md,ml,mw,location\n"

    def test_single_line_fields(self):
        text = self.HEADER + "2019-08-08,14:25:30,37.80,29.00,10.0,,6.0,,DENIZLI\n"
        records, issues = parse_text(text)
        assert issues == []
        (rec,) = records
        assert rec.date == dt.date(2019, 8, 8)
        assert rec.time == dt.time(14, 25, 30)
        assert rec.latitude == 37.80
        assert rec.longitude == 29.00
        assert rec.depth_km == 10.0
        assert rec.md is None and rec.mw is None
        assert rec.ml == 6.0
        assert rec.raw_location == "DENIZLI"
        assert rec.region is None

    def test_empty_ml_field_means_absent(self):
        text = self.HEADER + "2019-08-08,14:25:30,37.80,29.00,10.0,2.1,,3.0,DENIZLI\n"
        records, _ = parse_text(text)
        assert records[0].ml is None
        assert records[0].md == 2.1
        assert records[0].mw == 3.0

    def test_malformed_lines_become_issues_and_order_is_kept(self):
        text = self.HEADER + (
            "2019-01-02,01:00:00,39.0,32.0,5.0,,2.5,,ANKARA\n"
            "2019-01-03,xx:00:00,39.0,32.0,5.0,,2.5,,ANKARA\n"
            "2019-01-04,02:00:00,999,32.0,5.0,,2.5,,ANKARA\n"
            "2019-01-05,03:00:00,39.0,32.0,5.0,,2.5,,IZMIR\n"
        )
        records, issues = parse_text(text)
        assert [r.raw_location for r in records] == ["ANKARA", "IZMIR"]
        assert [r.date.day for r in records] == [2, 5]
        assert [i.line for i in issues] == [3, 4]

    def test_wrong_header_rejected(self):
        with pytest.raises(ValueError, match="header"):
            parse_text("a,b,c\n1,2,3\n")

    def test_zero_wellformed_lines_is_empty_catalog(self):
        with pytest.raises(EmptyCatalogError):
            parse_text(self.HEADER + "garbage,line\n")

    def test_empty_source_is_empty_catalog(self):
        with pytest.raises(EmptyCatalogError):
            parse_text("")

    def test_unknown_format_rejected(self):
        with pytest.raises(ValueError, match="format"):
            parse_text(self.HEADER, "excel")


class TestParseKoeri:
    def test_missing_magnitude_placeholder(self):
        line = "2020.01.24 17:55:11  38.3593   39.0630        8.1      -.-  6.5  6.8   SIVRICE (ELAZIG)\n"
        records, issues = parse_text(line, "koeri-text")
        assert issues == []
        (rec,) = records
        assert rec.md is None
        assert rec.ml == 6.5
        assert rec.mw == 6.8
        assert rec.raw_location == "SIVRICE (ELAZIG)"

    def test_missing_ml_round_trips_through_emitter(self):
        line = "2020.01.24 17:55:11  38.36   39.06   8.1   2.0  -.-  -.-   SIVRICE (ELAZIG)\n"
        records, issues = parse_text(line, "koeri-text")
        assert issues == []
        assert records[0].ml is None
        again, issues2 = parse_text(emit_canonical_csv(records))
        assert issues2 == []
        assert again == records

    def test_quality_token_stripped_from_location_tail(self):
        line = "2023.02.06 01:17:32  37.1789   37.0832        8.6      -.-  7.4  7.7   PAZARCIK (KAHRAMANMARAS)             İlksel\n"
        records, _ = parse_text(line, "koeri-text")
        assert records[0].raw_location == "PAZARCIK (KAHRAMANMARAS)"

    def test_header_lines_are_skipped_with_issues(self):
        text = (
            "Tarih      Saat      Enlem     Boylam    Der(km)  MD   ML   MW   Yer\n"
            "---------- --------  --------  --------  -------  ---  ---  ---  ---\n"
            "2020.01.24 17:55:11  38.36     39.06     8.1      -.-  6.5  -.-  SIVRICE (ELAZIG)\n"
        )
        records, issues = parse_text(text, "koeri-text")
        assert len(records) == 1
        assert len(issues) == 2

    def test_date_separator_variants(self):
        for token in ("2020.01.24", "2020-01-24", "2020/01/24"):
            line = f"{token} 17:55:11 38.36 39.06 8.1 -.- 6.5 -.- ELAZIG\n"
            records, _ = parse_text(line, "koeri-text")
            assert records[0].date == dt.date(2020, 1, 24)


class TestEventRecordInvariants:
    @pytest.mark.parametrize("field,value", [
        ("latitude", 91.0),
        ("latitude", -90.5),
        ("longitude", 181.0),
        ("depth_km", -1.0),
        ("ml", 10.5),
        ("md", -0.1),
        ("raw_location", "   "),
    ])
    def test_invariant_violations_raise(self, field, value):
        with pytest.raises(ValueError):
            dataclasses.replace(make_event(), **{field: value})


class TestNormalize:
    def test_parenthesized_province_wins(self):
        assert normalize_location("SIVRICE (ELAZIG)", NMAP) == "ELAZIG"

    def test_named_sea_passes_through(self):
        assert normalize_location("MARMARA DENIZI", NMAP) == "MARMARA DENIZI"

    def test_idempotent_on_canonical_name(self):
        once = normalize_location("MARMARA DENIZI", NMAP)
        assert normalize_location(once, NMAP) == once

    def test_diacritics_fold(self):
        assert normalize_location("SİVRİCE (ELAZIĞ)", NMAP) == "ELAZIG"
        assert normalize_location("MUĞLA", NMAP) == "MUGLA"

    def test_alias_entry(self):
        assert normalize_location("K.MARAS", NMAP) == "KAHRAMANMARAS"
        assert normalize_location("PAZARCIK (K.MARAS)", NMAP) == "KAHRAMANMARAS"

    def test_district_entry_maps_to_province(self):
        assert normalize_location("SARIKAMIS", NMAP) == "KARS"

    def test_unmapped_is_none_not_error(self):
        assert normalize_location("GIRIT ADASI", NMAP) is None

    def test_empty_raw_rejected(self):
        with pytest.raises(ValueError):
            normalize_location("  ", NMAP)

    def test_case_and_whitespace_folding(self):
        assert normalize_location("  marmara   denizi ", NMAP) == "MARMARA DENIZI"

    @given(locations())
    def test_idempotence_property(self, raw):
        result = normalize_location(raw, NMAP)
        if result is not None:
            assert normalize_location(result, NMAP) == result

    def test_shipped_files_resolve_real_locations(self, nmap):
        assert normalize_location("SIVRICE (ELAZIG)", nmap) == "ELAZIG"
        assert normalize_location("SILIVRI ACIKLARI-ISTANBUL (MARMARA DENIZI)", nmap) == "MARMARA DENIZI"
        assert normalize_location("AKHISAR (MANISA)", nmap) == "MANISA"
        assert normalize_location("K.MARAS", nmap) == "KAHRAMANMARAS"
        assert normalize_location("ONIKI ADALAR (AKDENIZ)", nmap) == "AKDENIZ"

    def test_normalize_events_counts_unmapped(self):
        events = [
            make_event(raw_location="ELAZIG"),
            make_event(raw_location="GIRIT ADASI"),
            make_event(raw_location="GIRIT  ADASI"),
        ]
        normalized, unmapped = normalize_events(events, NMAP)
        assert [e.region for e in normalized] == ["ELAZIG", None, None]
        assert unmapped == {"GIRIT ADASI": 2}


class TestNormalizationMapInvariants:
    def test_value_must_be_canonical(self):
        with pytest.raises(ValueError, match="not canonical"):
            NormalizationMap(entries={"X": "NOWHERE"}, passthrough=frozenset(["ELAZIG"]))

    def test_self_mapping_value_is_canonical(self):
        nm = NormalizationMap(entries={"FOO": "FOO"}, passthrough=frozenset(["ELAZIG"]))
        assert normalize_location("foo", nm) == "FOO"

    def test_passthrough_key_overlap_rejected(self):
        with pytest.raises(ValueError, match="passthrough"):
            NormalizationMap(entries={"ELAZIG": "ELAZIG"}, passthrough=frozenset(["ELAZIG"]))


# The spec'd 10-record filter fixture: 5 keepers, 2 within-borders but below
# the threshold, 2 foreign, 1 foreign and below the threshold.
WHITELIST = frozenset(["ANKARA", "DENIZLI", "IZMIR", "VAN", "KONYA", "BURSA", "SIVAS"])


def ten_record_fixture():
    rows = [
        ("ANKARA", 2.0),
        ("DENIZLI", 3.5),
        ("IZMIR", 2.1),
        ("VAN", 5.0),
        ("KONYA", 2.7),
        ("BURSA", 1.9),
        ("SIVAS", 0.5),
        (None, 4.0),
        (None, 2.2),
        (None, 1.0),
    ]
    return [make_event(day_of_month=i + 1, region=r, ml=ml) for i, (r, ml) in enumerate(rows)]


class TestFilter:
    def test_threshold_is_inclusive(self):
        policy = FilterPolicy(region_whitelist=frozenset(["ELAZIG"]), min_ml=2.0)
        kept = filter_events([make_event(region="ELAZIG", ml=2.0)], policy)
        assert len(kept) == 1

    def test_unmapped_region_dropped(self):
        policy = FilterPolicy(region_whitelist=WHITELIST)
        assert filter_events([make_event(region=None, ml=3.0)], policy) == []

    def test_ten_record_fixture_keeps_five(self):
        policy = FilterPolicy(region_whitelist=WHITELIST, min_ml=2.0)
        kept = filter_events(ten_record_fixture(), policy)
        assert [e.region for e in kept] == ["ANKARA", "DENIZLI", "IZMIR", "VAN", "KONYA"]

    def test_missing_ml_dropped_by_default_kept_on_request(self):
        events = [make_event(region="ANKARA", ml=None)]
        strict = FilterPolicy(region_whitelist=WHITELIST)
        lax = FilterPolicy(region_whitelist=WHITELIST, drop_missing_ml=False)
        assert filter_events(events, strict) == []
        assert filter_events(events, lax) == events

    def test_low_ml_dropped_even_when_missing_kept(self):
        lax = FilterPolicy(region_whitelist=WHITELIST, drop_missing_ml=False)
        assert filter_events([make_event(region="ANKARA", ml=1.0)], lax) == []

    def test_output_is_subsequence_and_idempotent(self):
        policy = FilterPolicy(region_whitelist=WHITELIST, min_ml=2.0)
        events = ten_record_fixture()
        once = filter_events(events, policy)
        positions = [next(i for i, o in enumerate(events) if o is e) for e in once]
        assert positions == sorted(positions)
        assert filter_events(once, policy) == once

    def test_policy_validation(self):
        with pytest.raises(ValueError):
            FilterPolicy(region_whitelist=frozenset())
        with pytest.raises(ValueError):
            FilterPolicy(region_whitelist=WHITELIST, min_ml=-1.0)


class TestStats:
    POLICY = FilterPolicy(region_whitelist=WHITELIST, min_ml=2.0)

    def test_ten_record_fixture_counts(self):
        stats = compute_stats(ten_record_fixture(), self.POLICY)
        assert stats == CatalogStats(10, 7, 5, 5.0)

    def test_empty_catalog(self):
        assert compute_stats([], self.POLICY) == CatalogStats(0, 0, 0, None)

    def test_max_ml_ignores_foreign_events(self):
        events = [make_event(region=None, ml=9.0), make_event(region="VAN", ml=3.0)]
        assert compute_stats(events, self.POLICY).max_ml == 3.0

    def test_max_ml_absent_when_no_whitelisted_ml(self):
        events = [make_event(region="VAN", ml=None)]
        stats = compute_stats(events, self.POLICY)
        assert stats == CatalogStats(1, 1, 0, None)

    @given(st.lists(st.tuples(st.booleans(), st.none() | st.floats(0, 10, allow_nan=False))))
    def test_chain_inequality(self, rows):
        events = [
            make_event(region="VAN" if inside else None, ml=ml) for inside, ml in rows
        ]
        stats = compute_stats(events, self.POLICY)
        assert stats.n_all >= stats.n_within_borders >= stats.n_ml_ge_threshold >= 0
        assert stats.n_all == len(events)


class TestDateRange:
    def test_closed_interval(self):
        events = [make_event(day_of_month=d) for d in (1, 5, 9)]
        assert filter_date_range(events, day(1), day(5)) == events[:2]
        assert filter_date_range(events, None, day(4)) == events[:1]
        assert filter_date_range(events, day(6), None) == events[2:]

    def test_bad_range_rejected(self):
        with pytest.raises(ValueError):
            filter_date_range([], day(5), day(1))


class TestRoundTrip:
    def test_example_round_trip(self):
        text = (
            "date,time,lat,lon,depth_km,md,ml,mw,location\n"
            "2019-08-08,14:25:30,37.8,29.0,10.0,,6.0,,DENIZLI\n"
        )
        records, _ = parse_text(text)
        assert emit_canonical_csv(records) == text

    @given(st.lists(event_records(), min_size=1, max_size=20))
    def test_parse_emit_parse_is_identity(self, records):
        emitted = emit_canonical_csv(records)
        again, issues = parse_text(emitted)
        assert issues == []
        assert again == records
        assert emit_canonical_csv(again) == emitted


class TestDataFileParsing:
    def test_region_list_skips_comments_and_folds(self):
        lines = ["# comment", "", "Elazığ", " MARMARA DENIZI "]
        assert parse_region_list(lines) == frozenset(["ELAZIG", "MARMARA DENIZI"])

    def test_map_lines(self):
        nm = parse_normalization_map(
            ["# c", "k.maras = kahramanmaras"], frozenset(["KAHRAMANMARAS"])
        )
        assert nm.entries == {"K.MARAS": "KAHRAMANMARAS"}

    def test_bad_map_line_rejected(self):
        with pytest.raises(ValueError, match="KEY=VALUE"):
            parse_normalization_map(["no-separator"], frozenset(["X"]))

    def test_shipped_whitelist_shape(self, whitelist):
        assert len(whitelist) == 86  # 81 provinces + 5 named seas/lakes
        assert "MARMARA DENIZI" in whitelist
        assert "KAHRAMANMARAS" in whitelist

    def test_fold_location(self):
        assert fold_location("Elazığ") == "ELAZIG"
        assert fold_location("MUĞLA") == "MUGLA"
        assert fold_location("ılgın  (konya) ") == "ILGIN (KONYA)"
