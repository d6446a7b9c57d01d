"""Event-log parsing, idle-gap segmentation, and the on-disk file formats.

The canonical log format is CSV with header ``timestamp,device,attribute,value``.
A three-column legacy form ``timestamp,device,value`` is accepted too; its
attribute is inferred from well-known state values (falling back to "state").
A JSON-lines twin carries the same four fields, one object per line.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from datetime import datetime, timezone

from tempoguard.events import ActivityInstance, Event, EventKey, LABEL_UNLABELED

LOG_HEADER = ("timestamp", "device", "attribute", "value")
LEGACY_HEADER = ("timestamp", "device", "value")

# Attribute inferred for the 3-column legacy form, keyed by the state value.
ATTRIBUTE_FOR_VALUE = {
    "active": "motion",
    "inactive": "motion",
    "open": "contact",
    "closed": "contact",
    "on": "switch",
    "off": "switch",
}


@dataclass(frozen=True)
class IngestConfig:
    """Knobs for turning a raw log into activity instances."""

    gap_ms: int = 120_000
    min_segment_len: int = 2

    def __post_init__(self) -> None:
        if self.gap_ms <= 0:
            raise ValueError("gap_ms must be > 0")
        if self.min_segment_len < 1:
            raise ValueError("min_segment_len must be >= 1")


def parse_timestamp(token: str) -> int:
    """Parse one timestamp token to epoch milliseconds UTC.

    Accepted forms: integer epoch milliseconds, ISO-8601 (naive assumed UTC,
    trailing Z accepted), and "M/D/YYYY HH:MM:SS" interpreted as UTC.
    """
    token = token.strip()
    if token.isdigit():
        return int(token)
    dt = None
    iso = token[:-1] + "+00:00" if token.endswith(("Z", "z")) else token
    try:
        dt = datetime.fromisoformat(iso)
    except ValueError:
        try:
            dt = datetime.strptime(token, "%m/%d/%Y %H:%M:%S")
        except ValueError:
            raise ValueError(f"unparseable timestamp {token!r}") from None
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    dt = dt.astimezone(timezone.utc)
    epoch_s = int(dt.timestamp())
    return epoch_s * 1000 + dt.microsecond // 1000


def format_timestamp(ms: int) -> str:
    """ISO-8601 UTC with millisecond precision ("...T13:00:01Z" / "...T13:00:01.234Z")."""
    dt = datetime.fromtimestamp(ms // 1000, tz=timezone.utc)
    text = dt.strftime("%Y-%m-%dT%H:%M:%S")
    frac = ms % 1000
    if frac:
        text += f".{frac:03d}"
    return text + "Z"


def _row_to_event(fields: list[str], legacy: bool, lineno: int) -> Event:
    fields = [f.strip() for f in fields]
    expected = 3 if legacy else 4
    if len(fields) != expected or any(not f for f in fields):
        raise ValueError(f"line {lineno}: expected {expected} non-empty columns, got {fields!r}")
    try:
        ts = parse_timestamp(fields[0])
    except ValueError as exc:
        raise ValueError(f"line {lineno}: {exc}") from None
    if legacy:
        device, value = fields[1], fields[2]
        attribute = ATTRIBUTE_FOR_VALUE.get(value, "state")
    else:
        device, attribute, value = fields[1], fields[2], fields[3]
    return Event(timestamp_ms=ts, key=EventKey(device, attribute, value), raw_value=value)


def parse_log(text: str) -> list[Event]:
    """Parse CSV log content into time-ordered events.

    The header row is required. Out-of-order rows are stably sorted by
    timestamp, so equal timestamps keep file order.
    """
    reader = csv.reader(io.StringIO(text))
    events: list[Event] = []
    header: tuple[str, ...] | None = None
    legacy = False
    for lineno, fields in enumerate(reader, start=1):
        if not fields or all(not f.strip() for f in fields):
            continue
        if header is None:
            header = tuple(f.strip().lower() for f in fields)
            if header == LOG_HEADER:
                legacy = False
            elif header == LEGACY_HEADER:
                legacy = True
            else:
                raise ValueError(
                    f"line {lineno}: expected header {','.join(LOG_HEADER)} "
                    f"(or legacy {','.join(LEGACY_HEADER)}), got {','.join(header)}"
                )
            continue
        events.append(_row_to_event(fields, legacy, lineno))
    if header is None:
        raise ValueError("empty log: header row required")
    events.sort(key=lambda e: e.timestamp_ms)  # stable: ties keep file order
    return events


def parse_log_jsonl(text: str) -> list[Event]:
    """Parse the JSON-lines twin of the CSV log format."""
    events: list[Event] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ValueError(f"line {lineno}: invalid JSON ({exc})") from None
        try:
            events.append(_event_from_obj(obj))
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
    events.sort(key=lambda e: e.timestamp_ms)
    return events


def _event_from_obj(obj: dict) -> Event:
    ts = obj["timestamp"]
    ts_ms = int(ts) if isinstance(ts, int) else parse_timestamp(str(ts))
    value = str(obj["value"])
    return Event(
        timestamp_ms=ts_ms,
        key=EventKey(str(obj["device"]), str(obj["attribute"]), value),
        raw_value=value,
    )


def _event_to_obj(event: Event) -> dict:
    return {
        "timestamp": format_timestamp(event.timestamp_ms),
        "device": event.key.device,
        "attribute": event.key.attribute,
        "value": event.raw_value,
    }


def serialize_log(events: list[Event], fmt: str = "csv") -> str:
    """Render events back to log text; the inverse of parse_log / parse_log_jsonl."""
    if fmt == "csv":
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(LOG_HEADER)
        for e in events:
            writer.writerow(
                [format_timestamp(e.timestamp_ms), e.key.device, e.key.attribute, e.raw_value]
            )
        return out.getvalue()
    if fmt == "jsonl":
        return "".join(json.dumps(_event_to_obj(e)) + "\n" for e in events)
    raise ValueError(f"unknown log format {fmt!r}")


def segment(events: list[Event], cfg: IngestConfig | None = None) -> list[ActivityInstance]:
    """Split a time-ordered event list into activity instances at idle gaps.

    Consecutive events closer than cfg.gap_ms share a segment; segments with
    fewer than cfg.min_segment_len events are dropped.
    """
    cfg = cfg or IngestConfig()
    for a, b in zip(events, events[1:]):
        if b.timestamp_ms < a.timestamp_ms:
            raise ValueError("events must be time-ordered before segmentation")
    instances: list[ActivityInstance] = []
    run: list[Event] = []

    def flush() -> None:
        if len(run) >= cfg.min_segment_len:
            instances.append(
                ActivityInstance(
                    events=tuple(run),
                    label=LABEL_UNLABELED,
                    source_id=f"seg-{len(instances):04d}",
                )
            )

    for event in events:
        if run and event.timestamp_ms - run[-1].timestamp_ms >= cfg.gap_ms:
            flush()
            run = []
        run.append(event)
    if run:
        flush()
    return instances


def instances_to_jsonl(instances: list[ActivityInstance]) -> str:
    """One JSON object per instance: {"source_id", "label", "events": [...]}."""
    lines = []
    for inst in instances:
        lines.append(
            json.dumps(
                {
                    "source_id": inst.source_id,
                    "label": inst.label,
                    "events": [_event_to_obj(e) for e in inst.events],
                }
            )
        )
    return "".join(line + "\n" for line in lines)


def instances_from_jsonl(text: str) -> list[ActivityInstance]:
    instances: list[ActivityInstance] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
            instances.append(
                ActivityInstance(
                    events=tuple(_event_from_obj(e) for e in obj["events"]),
                    label=obj.get("label", LABEL_UNLABELED),
                    source_id=obj.get("source_id", ""),
                )
            )
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
    return instances
