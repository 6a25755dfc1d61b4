"""XES event logs: parsing, trace variants and activity statistics."""

from __future__ import annotations

import gzip
import io
import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone
from typing import BinaryIO, Iterable, Union

from .errors import MalformedXml, MissingActivity
from .tree import TreeNode, leaf_labels

Scalar = Union[str, int, float, bool, datetime]


@dataclass(frozen=True)
class Event:
    case_id: str
    activity: str
    complete_time: datetime | None = None
    attributes: dict[str, Scalar] = field(default_factory=dict)


@dataclass(frozen=True)
class Trace:
    case_id: str
    events: tuple[Event, ...]

    @property
    def activities(self) -> tuple[str, ...]:
        return tuple(e.activity for e in self.events)


@dataclass(frozen=True)
class EventLog:
    traces: tuple[Trace, ...]
    source_name: str = ""

    @property
    def activity_alphabet(self) -> set[str]:
        return {e.activity for t in self.traces for e in t.events}


@dataclass(frozen=True)
class TraceVariant:
    variant_id: int
    activities: tuple[str, ...]
    case_count: int
    case_ids: tuple[str, ...]
    frequency_share: float = 1.0


_FRACTION = re.compile(r"(\.\d{6})\d+")


def _parse_timestamp(value: str) -> datetime:
    """ISO-8601 with optional Z suffix, normalized to UTC at ms precision."""
    text = value.strip()
    if text.endswith(("Z", "z")):
        text = text[:-1] + "+00:00"
    text = _FRACTION.sub(r"\1", text)  # fromisoformat caps at microseconds
    try:
        ts = datetime.fromisoformat(text)
    except ValueError as exc:
        raise MalformedXml(f"bad time:timestamp value {value!r}") from exc
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    ts = ts.astimezone(timezone.utc)
    millis = round(ts.microsecond / 1000)
    if millis == 1000:
        ts = ts.replace(microsecond=0) + timedelta(seconds=1)
    else:
        ts = ts.replace(microsecond=millis * 1000)
    return ts


_SCALAR_TAGS = {"string", "int", "float", "boolean", "date", "id"}


def _attribute_value(tag: str, raw: str) -> Scalar:
    if tag == "int":
        return int(raw)
    if tag == "float":
        return float(raw)
    if tag == "boolean":
        return raw.strip().lower() == "true"
    if tag == "date":
        return _parse_timestamp(raw)
    return raw


def _local(tag: str) -> str:
    return tag.rpartition("}")[2]


def _order_events(events: list[Event]) -> tuple[Event, ...]:
    # Stable sort on the last seen timestamp: untimestamped events inherit
    # their predecessor's position, file order breaks ties.
    keys: list[datetime] = []
    last = datetime.min.replace(tzinfo=timezone.utc)
    for event in events:
        if event.complete_time is not None:
            last = event.complete_time
        keys.append(last)
    order = sorted(range(len(events)), key=lambda i: keys[i])
    return tuple(events[i] for i in order)


def parse_xes(source: Union[bytes, BinaryIO], source_name: str = "") -> EventLog:
    """Parse an XES document (plain or gzip) into an EventLog.

    Only concept:name and time:timestamp are interpreted; all other scalar
    attributes ride along in Event.attributes. Unknown elements are skipped.
    """
    if isinstance(source, bytes):
        data = source
    else:
        data = source.read()
    if data[:2] == b"\x1f\x8b":
        try:
            data = gzip.decompress(data)
        except OSError as exc:
            raise MalformedXml(f"bad gzip stream: {exc}") from exc

    traces: list[Trace] = []
    trace_index = 0
    try:
        context = ET.iterparse(io.BytesIO(data), events=("end",))
        for _, elem in context:
            if _local(elem.tag) != "trace":
                continue
            case_id: str | None = None
            events: list[Event] = []
            raw_events: list[ET.Element] = []
            for child in elem:
                tag = _local(child.tag)
                if tag == "event":
                    raw_events.append(child)
                elif tag == "string" and child.get("key") == "concept:name":
                    case_id = child.get("value")
            if case_id is None:
                case_id = f"case_{trace_index}"
            for raw in raw_events:
                act: str | None = None
                ts: datetime | None = None
                attrs: dict[str, Scalar] = {}
                for attr in raw:
                    tag = _local(attr.tag)
                    if tag not in _SCALAR_TAGS:
                        continue
                    key, value = attr.get("key"), attr.get("value")
                    if key is None or value is None:
                        continue
                    if key == "concept:name":
                        act = value
                    elif key == "time:timestamp":
                        ts = _parse_timestamp(value)
                    else:
                        attrs[key] = _attribute_value(tag, value)
                if not act:
                    raise MissingActivity(trace_index)
                events.append(Event(case_id, act, ts, attrs))
            traces.append(Trace(case_id, _order_events(events)))
            trace_index += 1
            elem.clear()
    except ET.ParseError as exc:
        raise MalformedXml(f"not well-formed XML: {exc}") from exc
    return EventLog(tuple(traces), source_name)


def parse_xes_file(path) -> EventLog:
    with open(path, "rb") as handle:
        return parse_xes(handle.read(), source_name=str(path))


def extract_variants(log: EventLog) -> list[TraceVariant]:
    """Deduplicate traces into variants, most frequent first.

    Ties are broken lexicographically on the activity sequence so the
    ranking is reproducible for a fixed input file.
    """
    groups: dict[tuple[str, ...], list[str]] = {}
    for trace in log.traces:
        groups.setdefault(trace.activities, []).append(trace.case_id)
    ranked = sorted(groups.items(), key=lambda kv: (-len(kv[1]), kv[0]))
    total = len(log.traces)
    return [
        TraceVariant(variant_id=i, activities=acts, case_count=len(cases),
                     case_ids=tuple(cases), frequency_share=len(cases) / total)
        for i, (acts, cases) in enumerate(ranked)
    ]


def list_activities(log: EventLog, model: TreeNode | None = None
                    ) -> list[tuple[str, int, bool]]:
    """(activity, event count, present in model) rows, sorted by name."""
    counts: dict[str, int] = {}
    for trace in log.traces:
        for event in trace.events:
            counts[event.activity] = counts.get(event.activity, 0) + 1
    modeled = leaf_labels(model) if model is not None else set()
    return [(a, counts[a], a in modeled) for a in sorted(counts)]
