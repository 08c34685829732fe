"""Event data ingestion.

Parses XES and CSV event data into an in-memory log of activity instances.
Events carrying ``lifecycle:transition`` values ``start``/``complete`` are
matched into one instance per execution (FIFO per case and label); events
with a single timestamp become atomic instances with ``start == complete``.

Timestamps are normalized to UTC microseconds since the Unix epoch, so every
ordering comparison downstream is an exact integer comparison.
"""

from __future__ import annotations

import csv
import gzip
import io
import re
import xml.etree.ElementTree as ET
from collections import deque
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone
from itertools import groupby
from pathlib import Path
from typing import IO, Iterable, Sequence

MICROS_PER_SECOND = 1_000_000

_EPOCH = datetime(1970, 1, 1, tzinfo=timezone.utc)
_MICROSECOND = timedelta(microseconds=1)

# "MM/DD/YYYY HH:MM" style rows, optionally with seconds.
_SLASH_FORMATS = ("%m/%d/%Y %H:%M:%S", "%m/%d/%Y %H:%M")

_FRACTION_RE = re.compile(r"\.(\d+)")
_COMPACT_OFFSET_RE = re.compile(r"([+-]\d{2})(\d{2})$")


class ParseError(ValueError):
    """Input that cannot be parsed at all (bad XML, missing CSV columns)."""


def parse_timestamp(text: str) -> int:
    """Parse an RFC 3339 or ``MM/DD/YYYY HH:MM`` timestamp to UTC microseconds.

    Naive timestamps are interpreted as UTC. Raises ValueError for
    unsupported input.
    """
    raw = text.strip()
    dt = _parse_iso(raw)
    if dt is None:
        for fmt in _SLASH_FORMATS:
            try:
                dt = datetime.strptime(raw, fmt)
                break
            except ValueError:
                continue
    if dt is None:
        raise ValueError(f"unsupported timestamp format: {text!r}")
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return (dt - _EPOCH) // _MICROSECOND


def _parse_iso(raw: str) -> datetime | None:
    # Normalize the RFC 3339 variants datetime.fromisoformat (3.10) rejects:
    # trailing 'Z', fractional seconds that are not 3/6 digits, '+0200' offsets.
    s = raw
    if s.endswith(("Z", "z")):
        s = s[:-1] + "+00:00"
    s = _COMPACT_OFFSET_RE.sub(r"\1:\2", s)
    s = _FRACTION_RE.sub(lambda m: "." + m.group(1)[:6].ljust(6, "0"), s, count=1)
    try:
        return datetime.fromisoformat(s)
    except ValueError:
        return None


def format_timestamp(micros: int) -> str:
    """Render UTC microseconds as an RFC 3339 string (exact round-trip)."""
    return (_EPOCH + timedelta(microseconds=micros)).isoformat()


@dataclass(frozen=True, slots=True)
class ActivityInstance:
    """One execution of an activity within a case.

    ``start_ts``/``complete_ts`` are UTC microseconds; an atomic activity has
    ``start_ts == complete_ts``.
    """

    id: int | str
    case_id: str
    label: str
    start_ts: int
    complete_ts: int

    def __post_init__(self) -> None:
        if self.start_ts > self.complete_ts:
            raise ValueError(
                f"instance {self.id!r}: start {self.start_ts} after complete {self.complete_ts}"
            )


def instance_sort_key(instance: ActivityInstance) -> tuple[int, int, str, str]:
    """Total deterministic order: start, complete, label, then id."""
    return (instance.start_ts, instance.complete_ts, instance.label, str(instance.id))


@dataclass(frozen=True, slots=True)
class SourceMeta:
    """Provenance of a parsed log: file name, format, and parse diagnostics."""

    file_name: str | None = None
    format: str = "memory"
    warnings: tuple[str, ...] = ()
    errors: tuple[str, ...] = ()


@dataclass(frozen=True, slots=True)
class EventLog:
    """A set of activity instances with unique ids."""

    instances: tuple[ActivityInstance, ...]
    source_meta: SourceMeta = field(default_factory=SourceMeta)

    def __post_init__(self) -> None:
        ids = {a.id for a in self.instances}
        if len(ids) != len(self.instances):
            raise ValueError("event log contains duplicate instance ids")

    def __len__(self) -> int:
        return len(self.instances)


@dataclass(frozen=True, slots=True)
class Trace:
    """The activity instances of one case, in deterministic order."""

    case_id: str
    instances: tuple[ActivityInstance, ...]

    def __post_init__(self) -> None:
        for a in self.instances:
            if a.case_id != self.case_id:
                raise ValueError(
                    f"instance {a.id!r} belongs to case {a.case_id!r}, not {self.case_id!r}"
                )
        object.__setattr__(
            self, "instances", tuple(sorted(self.instances, key=instance_sort_key))
        )


def group_by_case(log: EventLog) -> list[Trace]:
    """Split an event log into one trace per distinct case id."""
    ordered = sorted(
        log.instances, key=lambda a: (a.case_id,) + instance_sort_key(a)
    )
    return [
        Trace(case_id=case_id, instances=tuple(group))
        for case_id, group in groupby(ordered, key=lambda a: a.case_id)
    ]


def pair_events(
    events: Sequence[tuple[str, str, int]],
    *,
    case_id: str = "",
    id_start: int = 0,
    warnings: list[str] | None = None,
) -> list[ActivityInstance]:
    """Match start events to complete events, first-in-first-out per label.

    ``events`` are ``(label, kind, timestamp)`` triples of a single case with
    ``kind`` in ``{"start", "complete"}``, sorted by timestamp (stable on
    ties). Unmatched events degrade to atomic instances; a message is appended
    to ``warnings`` for each.
    """
    out: list[ActivityInstance] = []
    pending: dict[str, deque[int]] = {}
    next_id = id_start

    def emit(label: str, start: int, complete: int) -> None:
        nonlocal next_id
        out.append(ActivityInstance(next_id, case_id, label, start, complete))
        next_id += 1

    def warn(message: str) -> None:
        if warnings is not None:
            warnings.append(message)

    for label, kind, ts in events:
        if kind == "start":
            pending.setdefault(label, deque()).append(ts)
        elif kind == "complete":
            queue = pending.get(label)
            if queue:
                emit(label, queue.popleft(), ts)
            else:
                emit(label, ts, ts)
                warn(f"case {case_id!r}: unmatched complete event for {label!r}")
        else:
            raise ValueError(f"unknown event kind: {kind!r}")

    leftovers = sorted(
        (ts, label) for label, queue in pending.items() for ts in queue
    )
    for ts, label in leftovers:
        emit(label, ts, ts)
        warn(f"case {case_id!r}: unmatched start event for {label!r}")
    return out


@dataclass(frozen=True, slots=True)
class ColumnMap:
    """Names of the case-id, label, start and complete columns of a CSV file."""

    case: str = "case"
    label: str = "label"
    start: str = "start"
    complete: str = "complete"

    def fields(self) -> tuple[str, str, str, str]:
        return (self.case, self.label, self.start, self.complete)


def parse_csv(
    source: str | Path | IO[str] | IO[bytes],
    mapping: ColumnMap | None = None,
) -> EventLog:
    """Parse a row-per-instance CSV file into an event log.

    Expects a header row; ``mapping`` names the four required columns. Rows
    with unparseable timestamps are rejected with a warning, rows whose start
    lies after their complete with an error entry. Instance ids are assigned
    by row order.
    """
    mapping = mapping or ColumnMap()
    file_name, stream, close = _open_text(source)
    warnings: list[str] = []
    errors: list[str] = []
    instances: list[ActivityInstance] = []
    try:
        reader = csv.DictReader(stream)
        header = reader.fieldnames or []
        missing = [c for c in mapping.fields() if c not in header]
        if missing:
            raise ParseError(
                f"missing required column(s) {missing} in header {header}"
            )
        for row_no, row in enumerate(reader, start=1):
            cells = [row.get(c) for c in mapping.fields()]
            if any(cell is None for cell in cells):
                warnings.append(f"row {row_no} rejected: short row")
                continue
            case_raw, label, start_raw, complete_raw = cells
            try:
                start = parse_timestamp(start_raw)
                complete = parse_timestamp(complete_raw)
            except ValueError as exc:
                warnings.append(f"row {row_no} rejected: {exc}")
                continue
            if start > complete:
                errors.append(
                    f"row {row_no} rejected: start {start_raw!r} after complete {complete_raw!r}"
                )
                continue
            instances.append(
                ActivityInstance(row_no, str(case_raw), label, start, complete)
            )
    finally:
        if close:
            stream.close()
    meta = SourceMeta(file_name, "csv", tuple(warnings), tuple(errors))
    return EventLog(tuple(instances), meta)


def write_csv(log: EventLog, dest: IO[str]) -> None:
    """Serialize a log with the default column names; inverse of parse_csv."""
    writer = csv.writer(dest, lineterminator="\n")
    writer.writerow(ColumnMap().fields())
    for a in sorted(log.instances, key=lambda a: (a.case_id,) + instance_sort_key(a)):
        writer.writerow(
            (a.case_id, a.label, format_timestamp(a.start_ts), format_timestamp(a.complete_ts))
        )


_PAIRABLE = ("start", "complete")


def parse_xes(source: str | Path | IO[bytes]) -> EventLog:
    """Parse an XES file (optionally gzip-compressed) into an event log.

    Follows the IEEE 1849-2016 element structure log > trace > event with
    key/value attribute children. The trace-level ``concept:name`` becomes the
    case id (``case_<n>`` when absent). Events whose lifecycle is ``start`` or
    ``complete`` are paired via :func:`pair_events`; any other or missing
    lifecycle yields an atomic instance. Events without ``concept:name`` or
    ``time:timestamp`` are skipped with a warning.
    """
    file_name, stream, close = _open_binary(source)
    warnings: list[str] = []
    instances: list[ActivityInstance] = []
    next_id = 0
    trace_no = 0
    try:
        context = ET.iterparse(stream, events=("start", "end"))
        root = None
        for event, elem in context:
            tag = elem.tag.rpartition("}")[2]
            if event == "start":
                if root is None:
                    root = elem
                continue
            if tag != "trace":
                continue
            trace_no += 1
            case_id, paired, atomic = _read_trace(elem, trace_no, warnings)
            batch = pair_events(
                paired, case_id=case_id, id_start=next_id, warnings=warnings
            )
            next_id += len(batch)
            for label, ts in atomic:
                batch.append(ActivityInstance(next_id, case_id, label, ts, ts))
                next_id += 1
            instances.extend(batch)
            elem.clear()
            if root is not None:
                # Drop processed trace elements so large logs stream in
                # bounded memory.
                for child in list(root):
                    if child is not elem:
                        root.remove(child)
    except ET.ParseError as exc:
        line, column = exc.position
        raise ParseError(
            f"malformed XES XML at line {line}, column {column}: {exc.msg}"
        ) from exc
    finally:
        if close:
            stream.close()
    meta = SourceMeta(file_name, "xes", tuple(warnings), ())
    return EventLog(tuple(instances), meta)


def _read_trace(
    elem: ET.Element, trace_no: int, warnings: list[str]
) -> tuple[str, list[tuple[str, str, int]], list[tuple[str, int]]]:
    case_id = None
    paired: list[tuple[str, str, int, int]] = []
    atomic: list[tuple[str, int]] = []
    event_no = 0
    for child in elem:
        tag = child.tag.rpartition("}")[2]
        if tag == "event":
            event_no += 1
            attrs = {
                sub.attrib.get("key"): sub.attrib.get("value", "") for sub in child
            }
            label = attrs.get("concept:name")
            ts_raw = attrs.get("time:timestamp")
            if label is None or ts_raw is None:
                warnings.append(
                    f"trace {trace_no}: event {event_no} skipped "
                    "(missing concept:name or time:timestamp)"
                )
                continue
            try:
                ts = parse_timestamp(ts_raw)
            except ValueError as exc:
                warnings.append(f"trace {trace_no}: event {event_no} skipped ({exc})")
                continue
            lifecycle = attrs.get("lifecycle:transition", "").strip().lower()
            if lifecycle in _PAIRABLE:
                paired.append((label, lifecycle, ts, event_no))
            else:
                atomic.append((label, ts))
        elif tag == "string" and child.attrib.get("key") == "concept:name":
            case_id = child.attrib.get("value")
    if case_id is None:
        case_id = f"case_{trace_no}"
    # Stable sort by timestamp, keeping document order on ties.
    paired.sort(key=lambda e: (e[2], e[3]))
    return case_id, [(label, kind, ts) for label, kind, ts, _ in paired], atomic


def _open_text(source) -> tuple[str | None, IO[str], bool]:
    if isinstance(source, (str, Path)):
        path = Path(source)
        return path.name, path.open("r", encoding="utf-8", newline=""), True
    if isinstance(source, io.TextIOBase):
        return getattr(source, "name", None), source, False
    data = source.read()
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    return getattr(source, "name", None), io.StringIO(data), True


def _open_binary(source) -> tuple[str | None, IO[bytes], bool]:
    if isinstance(source, (str, Path)):
        path = Path(source)
        with path.open("rb") as probe:
            magic = probe.read(2)
        if magic == b"\x1f\x8b":
            return path.name, gzip.open(path, "rb"), True
        return path.name, path.open("rb"), True
    stream = source
    name = getattr(source, "name", None)
    if not stream.seekable():
        stream = io.BytesIO(stream.read())
    magic = stream.read(2)
    stream.seek(0)
    if magic == b"\x1f\x8b":
        # Closing the gzip wrapper leaves the caller's stream open.
        return name, gzip.open(stream, "rb"), True
    return name, stream, False
