from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import key, make_instance
from tempoguard.events import Event, EventKey, LABEL_ANOMALY_TI, LABEL_UNLABELED
from tempoguard.ingest import (
    IngestConfig,
    format_timestamp,
    instances_from_jsonl,
    instances_to_jsonl,
    parse_log,
    parse_log_jsonl,
    parse_timestamp,
    segment,
    serialize_log,
)

# Independently computed: 2021-10-01T13:00:01 UTC in epoch milliseconds.
EPOCH_13_00_01 = 1_633_093_201_000


def test_parse_timestamp_accepts_epoch_milliseconds():
    assert parse_timestamp("1633093201000") == EPOCH_13_00_01


def test_parse_timestamp_accepts_iso_with_zulu_suffix():
    assert parse_timestamp("2021-10-01T13:00:01Z") == EPOCH_13_00_01


def test_parse_timestamp_accepts_iso_with_explicit_offset():
    assert parse_timestamp("2021-10-01T15:00:01+02:00") == EPOCH_13_00_01


def test_parse_timestamp_treats_naive_iso_as_utc():
    assert parse_timestamp("2021-10-01T13:00:01") == EPOCH_13_00_01


def test_parse_timestamp_accepts_slash_date_format():
    assert parse_timestamp("10/1/2021 13:00:01") == EPOCH_13_00_01


def test_parse_timestamp_keeps_milliseconds():
    assert parse_timestamp("2021-10-01T13:00:01.234Z") == EPOCH_13_00_01 + 234


def test_parse_timestamp_names_the_bad_token():
    with pytest.raises(ValueError, match="next tuesday"):
        parse_timestamp("next tuesday")


@given(ms=st.integers(min_value=0, max_value=4 * 10**12))
def test_timestamp_format_parse_round_trip(ms):
    assert parse_timestamp(format_timestamp(ms)) == ms


SAMPLE_LOG = """timestamp,device,attribute,value
2021-10-01T13:00:01Z,M1,motion,active
2021-10-01T13:00:02Z,L1,switch,on
2021-10-01T13:01:00Z,L1,switch,off
"""


def test_parse_log_reads_four_column_csv():
    events = parse_log(SAMPLE_LOG)
    assert len(events) == 3
    assert events[0].key == EventKey("M1", "motion", "active")
    assert events[0].timestamp_ms == EPOCH_13_00_01
    assert [e.timestamp_ms - events[0].timestamp_ms for e in events] == [0, 1000, 59000]


def test_parse_log_infers_attribute_for_legacy_three_columns():
    text = (
        "timestamp,device,value\n"
        "2021-10-01T13:00:01Z,M1,active\n"
        "2021-10-01T13:00:02Z,C1,closed\n"
        "2021-10-01T13:00:03Z,L1,on\n"
        "2021-10-01T13:00:04Z,X9,74\n"
    )
    events = parse_log(text)
    assert [e.key.attribute for e in events] == ["motion", "contact", "switch", "state"]


def test_parse_log_requires_a_header():
    with pytest.raises(ValueError, match="header"):
        parse_log("2021-10-01T13:00:01Z,M1,motion,active\n")


def test_parse_log_rejects_empty_text():
    with pytest.raises(ValueError, match="header"):
        parse_log("")


def test_parse_log_names_line_of_malformed_row():
    text = "timestamp,device,attribute,value\n2021-10-01T13:00:01Z,M1,motion\n"
    with pytest.raises(ValueError, match="line 2"):
        parse_log(text)


def test_parse_log_names_line_and_token_of_bad_timestamp():
    text = "timestamp,device,attribute,value\nyesterday,M1,motion,active\n"
    with pytest.raises(ValueError, match=r"line 2.*yesterday"):
        parse_log(text)


def test_parse_log_sorts_rows_by_timestamp():
    text = (
        "timestamp,device,attribute,value\n"
        "2021-10-01T13:00:02Z,L1,switch,on\n"
        "2021-10-01T13:00:01Z,M1,motion,active\n"
    )
    events = parse_log(text)
    assert [e.key.device for e in events] == ["M1", "L1"]


def test_parse_log_skips_blank_lines():
    assert len(parse_log(SAMPLE_LOG + "\n\n")) == 3


def test_serialize_log_round_trips_csv():
    events = parse_log(SAMPLE_LOG)
    assert parse_log(serialize_log(events, "csv")) == events


def test_serialize_log_round_trips_jsonl():
    events = parse_log(SAMPLE_LOG)
    assert parse_log_jsonl(serialize_log(events, "jsonl")) == events


def test_serialize_log_rejects_unknown_format():
    with pytest.raises(ValueError, match="unknown log format"):
        serialize_log([], "xml")


def _events(*gaps: int) -> list[Event]:
    ts = 1_000_000
    out = [Event(ts, key("A"), "on")]
    for gap in gaps:
        ts += gap
        out.append(Event(ts, key("B"), "on"))
    return out


def test_segment_splits_on_gaps_at_or_over_threshold():
    events = _events(1000, 120_000, 1000)
    parts = segment(events, IngestConfig(gap_ms=120_000))
    assert [len(p.events) for p in parts] == [2, 2]


def test_segment_keeps_gaps_under_threshold_together():
    events = _events(1000, 119_999, 1000)
    parts = segment(events, IngestConfig(gap_ms=120_000))
    assert [len(p.events) for p in parts] == [4]


def test_segment_drops_short_segments():
    events = _events(200_000, 1000)  # lone first event, then a pair
    parts = segment(events, IngestConfig(gap_ms=120_000, min_segment_len=2))
    assert [len(p.events) for p in parts] == [2]


def test_segment_assigns_sequential_source_ids():
    events = _events(1000, 200_000, 1000, 200_000, 1000)
    parts = segment(events)
    assert [p.source_id for p in parts] == ["seg-0000", "seg-0001", "seg-0002"]
    assert all(p.label == LABEL_UNLABELED for p in parts)


def test_segment_rejects_unordered_events():
    events = [Event(2000, key("A"), "on"), Event(1000, key("B"), "on")]
    with pytest.raises(ValueError, match="time-ordered"):
        segment(events)


def test_ingest_config_validates_fields():
    with pytest.raises(ValueError):
        IngestConfig(gap_ms=0)
    with pytest.raises(ValueError):
        IngestConfig(min_segment_len=0)


def test_instances_jsonl_round_trip_preserves_labels_and_ids():
    instances = [
        make_instance("AB", [1500], label=LABEL_ANOMALY_TI, source_id="seg-0007"),
        make_instance("CD", [2500], source_id="seg-0008"),
    ]
    assert instances_from_jsonl(instances_to_jsonl(instances)) == instances


def test_instances_from_jsonl_names_bad_line():
    with pytest.raises(ValueError, match="line 1"):
        instances_from_jsonl("not json\n")


@given(
    gaps=st.lists(st.integers(min_value=0, max_value=10**6), min_size=1, max_size=6),
    t0=st.integers(min_value=0, max_value=10**12),
)
def test_instance_round_trip_is_identity(gaps, t0):
    inst = make_instance("ABCDEFG"[: len(gaps) + 1], gaps, t0=t0, source_id="seg-0000")
    assert instances_from_jsonl(instances_to_jsonl([inst])) == [inst]
