"""Shared test helpers: XES builders and a serializer for round-trips."""

from __future__ import annotations

import xml.etree.ElementTree as ET
from datetime import datetime, timezone

from treedisc.eventlog import EventLog


def xes_document(traces: list[dict]) -> bytes:
    """Build an XES byte string from [{'case_id':…, 'events':[(act, iso_ts|None), …]}]."""
    log = ET.Element("log")
    for trace in traces:
        trace_el = ET.SubElement(log, "trace")
        if trace.get("case_id") is not None:
            ET.SubElement(trace_el, "string", key="concept:name", value=trace["case_id"])
        for event in trace.get("events", []):
            activity, ts = event if isinstance(event, tuple) else (event, None)
            event_el = ET.SubElement(trace_el, "event")
            if activity is not None:
                ET.SubElement(event_el, "string", key="concept:name", value=activity)
            if ts is not None:
                ET.SubElement(event_el, "date", key="time:timestamp", value=ts)
    return ET.tostring(log, encoding="utf-8", xml_declaration=True)


def simple_xes(*traces: list[str]) -> bytes:
    """XES with one trace per activity list, no timestamps."""
    return xes_document([
        {"case_id": f"c{i}", "events": [(a, None) for a in acts]}
        for i, acts in enumerate(traces)
    ])


# A road-fine event fragment: three cases, complete timestamps only.
ROAD_FINE_ROWS = [
    ("A1", "Create Fine", "2006-07-24T00:00:00+00:00"),
    ("A1", "Send Fine", "2006-12-05T00:00:00+00:00"),
    ("A100", "Create Fine", "2006-08-02T00:00:00+00:00"),
    ("A100", "Send Fine", "2006-12-12T00:00:00+00:00"),
    ("A100", "Insert Fine Notification", "2007-01-15T00:00:00+00:00"),
    ("A100", "Add penalty", "2007-03-16T00:00:00+00:00"),
    ("A100", "Send for Credit Collection", "2009-03-30T00:00:00+00:00"),
    ("A10000", "Create Fine", "2007-03-09T00:00:00+00:00"),
    ("A10000", "Send Fine", "2007-07-17T00:00:00+00:00"),
    ("A10000", "Add penalty", "2007-10-01T00:00:00+00:00"),
    ("A10000", "Payment", "2008-09-09T00:00:00+00:00"),
]


def road_fine_fragment_xes() -> bytes:
    cases: dict[str, list[tuple[str, str]]] = {}
    for case_id, activity, ts in ROAD_FINE_ROWS:
        cases.setdefault(case_id, []).append((activity, ts))
    return xes_document([
        {"case_id": cid, "events": events} for cid, events in cases.items()
    ])


def serialize_xes(log: EventLog) -> bytes:
    """Write an EventLog back out; test-only inverse of parse_xes."""
    root = ET.Element("log")
    for trace in log.traces:
        trace_el = ET.SubElement(root, "trace")
        ET.SubElement(trace_el, "string", key="concept:name", value=trace.case_id)
        for event in trace.events:
            event_el = ET.SubElement(trace_el, "event")
            ET.SubElement(event_el, "string", key="concept:name", value=event.activity)
            if event.complete_time is not None:
                ET.SubElement(event_el, "date", key="time:timestamp",
                              value=event.complete_time.isoformat())
    return ET.tostring(root, encoding="utf-8", xml_declaration=True)
