"""In-memory OCEL 2.0 log model.

An :class:`OcelLog` is immutable once constructed. Its collections are stored
in a canonical sorted order so that two logs built from the same facts in a
different order compare equal.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from datetime import datetime, timezone
from functools import cached_property
from typing import Iterable, Mapping, NamedTuple, Union

from dateutil.parser import isoparse

AttributeValue = Union[str, int, float, bool, datetime]

#: Attribute datatypes understood by the JSON carrier.
DATATYPES = ("string", "integer", "float", "boolean", "time")

UTC = timezone.utc


def parse_timestamp(text: str) -> datetime:
    """Parse an ISO-8601 string into an aware UTC datetime.

    Strings without an offset are taken to be UTC already.
    """
    value = isoparse(text)
    if value.tzinfo is None:
        return value.replace(tzinfo=UTC)
    return value.astimezone(UTC)


def format_timestamp(value: datetime) -> str:
    """Render ``value`` as ``YYYY-MM-DDTHH:MM:SS.sssZ``.

    Sub-millisecond precision, when present, is kept (six fraction digits) so
    that formatting never loses information.
    """
    if value.tzinfo is not None:
        value = value.astimezone(UTC)
    precision = "microseconds" if value.microsecond % 1000 else "milliseconds"
    return value.replace(tzinfo=None).isoformat(timespec=precision) + "Z"


@dataclass(frozen=True)
class EventRecord:
    id: str
    type: str
    time: datetime


@dataclass(frozen=True)
class ObjectRecord:
    id: str
    type: str


@dataclass(frozen=True)
class ObjectAttributeValue:
    """One timed assignment ``oaval(object, name, time) = value``."""

    object: str
    name: str
    time: datetime
    value: AttributeValue


class Relation(NamedTuple):
    """A qualified E2O or O2O relationship."""

    source: str
    qualifier: str
    target: str


class Violation(NamedTuple):
    kind: str
    message: str
    ids: tuple[str, ...] = ()

    def __str__(self) -> str:
        return f"{self.kind}: {self.message}"


def value_matches(value: object, datatype: str) -> bool:
    """Type-aware check of an attribute value against its declared datatype."""
    if datatype == "string":
        return isinstance(value, str)
    if datatype == "integer":
        return isinstance(value, int) and not isinstance(value, bool)
    if datatype == "float":
        return isinstance(value, float)
    if datatype == "boolean":
        return isinstance(value, bool)
    if datatype == "time":
        return isinstance(value, datetime) and value.tzinfo is not None
    return False


def _value_key(value: AttributeValue) -> tuple[str, str]:
    return (type(value).__name__, repr(value))


def _time_key(value: object) -> tuple:
    # malformed times must still sort so that validate_log can report them
    if isinstance(value, datetime) and value.tzinfo is not None:
        return (0, value)
    return (1, repr(value))


def _freeze_types(types: Mapping[str, Mapping[str, str]] | None) -> dict[str, dict[str, str]]:
    if not types:
        return {}
    return {name: dict(sorted(attrs.items())) for name, attrs in sorted(types.items())}


@dataclass(frozen=True)
class OcelLog:
    """An object-centric event log.

    ``event_types`` and ``object_types`` map each declared type to its
    attributes and their datatypes; an attribute belongs to the type that
    declares it. ``event_attr_values`` is keyed by ``(event id, attribute)``.
    ``object_attr_values`` is kept as a sequence of timed entries so that
    conflicting writes at one instant stay visible to :func:`validate_log`.
    """

    events: tuple[EventRecord, ...] = ()
    objects: tuple[ObjectRecord, ...] = ()
    event_types: Mapping[str, Mapping[str, str]] = field(default_factory=dict)
    object_types: Mapping[str, Mapping[str, str]] = field(default_factory=dict)
    event_attr_values: Mapping[tuple[str, str], AttributeValue] = field(default_factory=dict)
    object_attr_values: tuple[ObjectAttributeValue, ...] = ()
    e2o: tuple[Relation, ...] = ()
    o2o: tuple[Relation, ...] = ()

    __hash__ = None  # type: ignore[assignment]

    def __post_init__(self) -> None:
        canon = object.__setattr__
        canon(self, "events", tuple(sorted(set(self.events), key=lambda e: (_time_key(e.time), e.id, e.type))))
        canon(self, "objects", tuple(sorted(set(self.objects), key=lambda o: (o.id, o.type))))
        canon(self, "event_types", _freeze_types(self.event_types))
        canon(self, "object_types", _freeze_types(self.object_types))
        canon(self, "event_attr_values", dict(sorted(dict(self.event_attr_values).items())))
        unique = {(v.object, v.name, _time_key(v.time), _value_key(v.value)): v for v in self.object_attr_values}
        canon(self, "object_attr_values", tuple(unique[k] for k in sorted(unique)))
        canon(self, "e2o", tuple(sorted({Relation(*r) for r in self.e2o})))
        canon(self, "o2o", tuple(sorted({Relation(*r) for r in self.o2o})))

    @cached_property
    def _events_by_id(self) -> dict[str, EventRecord]:
        return {e.id: e for e in self.events}

    @cached_property
    def _objects_by_id(self) -> dict[str, ObjectRecord]:
        return {o.id: o for o in self.objects}

    @cached_property
    def _event_attrs(self) -> dict[str, dict[str, AttributeValue]]:
        attrs: dict[str, dict[str, AttributeValue]] = {}
        for (eid, name), value in self.event_attr_values.items():
            attrs.setdefault(eid, {})[name] = value
        return attrs

    @cached_property
    def _history(self) -> dict[tuple[str, str], tuple[list[datetime], list[AttributeValue]]]:
        history: dict[tuple[str, str], tuple[list[datetime], list[AttributeValue]]] = {}
        for entry in self.object_attr_values:
            times, values = history.setdefault((entry.object, entry.name), ([], []))
            times.append(entry.time)
            values.append(entry.value)
        return history

    @cached_property
    def _change_times(self) -> dict[str, list[datetime]]:
        per_object: dict[str, set[datetime]] = {}
        for entry in self.object_attr_values:
            per_object.setdefault(entry.object, set()).add(entry.time)
        return {o: sorted(ts) for o, ts in per_object.items()}

    def event(self, event_id: str) -> EventRecord:
        return self._events_by_id[event_id]

    def object(self, object_id: str) -> ObjectRecord:
        return self._objects_by_id[object_id]

    def has_object(self, object_id: str) -> bool:
        return object_id in self._objects_by_id

    def event_attributes(self, event_id: str) -> dict[str, AttributeValue]:
        """All defined attribute values of one event."""
        return dict(self._event_attrs.get(event_id, {}))

    def resolve_attribute_at(self, object_id: str, attribute: str, at: datetime) -> AttributeValue | None:
        """Current value of ``attribute`` for the object at time ``at``.

        That is the value recorded at the latest instant not after ``at``, or
        ``None`` when the attribute has no value yet.
        """
        if object_id not in self._objects_by_id:
            raise KeyError(f"unknown object {object_id!r}")
        history = self._history.get((object_id, attribute))
        if history is None:
            return None
        times, values = history
        i = bisect.bisect_right(times, at)
        return values[i - 1] if i else None

    def change_times(self, object_id: str) -> list[datetime]:
        """Ascending, duplicate-free instants at which the object has a recorded value."""
        if object_id not in self._objects_by_id:
            raise KeyError(f"unknown object {object_id!r}")
        return list(self._change_times.get(object_id, ()))

    def observed_event_types(self) -> set[str]:
        return {e.type for e in self.events}

    def timestamps(self) -> Iterable[datetime]:
        yield from (e.time for e in self.events)
        yield from (v.time for v in self.object_attr_values)


def validate_log(log: OcelLog) -> list[Violation]:
    """Check the structural constraints of an OCEL log.

    Returns one :class:`Violation` per offending element; an empty list means
    the log is well formed.
    """
    found: list[Violation] = []

    def report(kind: str, message: str, *ids: str) -> None:
        found.append(Violation(kind, message, ids))

    event_ids: dict[str, EventRecord] = {}
    for e in log.events:
        if not e.id:
            report("empty-id", "event with empty id")
        if e.id in event_ids:
            report("duplicate-id", f"event id {e.id!r} used more than once", e.id)
        event_ids[e.id] = e
        if not isinstance(e.time, datetime) or e.time.tzinfo is None:
            report("invalid-timestamp", f"event {e.id!r} has no valid UTC time", e.id)
        if e.type not in log.event_types:
            report("undeclared-type", f"event {e.id!r} has undeclared type {e.type!r}", e.id)

    object_ids: dict[str, ObjectRecord] = {}
    for o in log.objects:
        if not o.id:
            report("empty-id", "object with empty id")
        if o.id in object_ids:
            report("duplicate-id", f"object id {o.id!r} used more than once", o.id)
        object_ids[o.id] = o
        if o.id in event_ids:
            report("overlapping-ids", f"id {o.id!r} names both an event and an object", o.id)
        if o.type not in log.object_types:
            report("undeclared-type", f"object {o.id!r} has undeclared type {o.type!r}", o.id)

    for (eid, name), value in log.event_attr_values.items():
        event = event_ids.get(eid)
        if event is None:
            report("dangling-reference", f"attribute {name!r} set on unknown event {eid!r}", eid)
            continue
        declared = log.event_types.get(event.type, {})
        if name not in declared:
            report(
                "attribute-type-mismatch",
                f"attribute {name!r} of event {eid!r} is not declared for type {event.type!r}",
                eid,
            )
        elif not value_matches(value, declared[name]):
            report(
                "value-type-mismatch",
                f"attribute {name!r} of event {eid!r} expects {declared[name]}, got {value!r}",
                eid,
            )

    seen: dict[tuple[str, str, datetime], AttributeValue] = {}
    for entry in log.object_attr_values:
        obj = object_ids.get(entry.object)
        if obj is None:
            report(
                "dangling-reference",
                f"attribute {entry.name!r} set on unknown object {entry.object!r}",
                entry.object,
            )
            continue
        if not isinstance(entry.time, datetime) or entry.time.tzinfo is None:
            report("invalid-timestamp", f"attribute {entry.name!r} of {entry.object!r} has no valid time", entry.object)
            continue
        declared = log.object_types.get(obj.type, {})
        if entry.name not in declared:
            report(
                "attribute-type-mismatch",
                f"attribute {entry.name!r} of object {entry.object!r} is not declared for type {obj.type!r}",
                entry.object,
            )
        elif not value_matches(entry.value, declared[entry.name]):
            report(
                "value-type-mismatch",
                f"attribute {entry.name!r} of object {entry.object!r} expects "
                f"{declared[entry.name]}, got {entry.value!r}",
                entry.object,
            )
        key = (entry.object, entry.name, entry.time)
        if key in seen:
            report(
                "attribute-conflict",
                f"attribute {entry.name!r} of object {entry.object!r} has two values at {format_timestamp(entry.time)}",
                entry.object,
            )
        seen[key] = entry.value

    for rel in log.e2o:
        if rel.source not in event_ids:
            report("dangling-reference", f"e2o refers to unknown event {rel.source!r}", rel.source)
        if rel.target not in object_ids:
            report("dangling-reference", f"e2o from {rel.source!r} refers to unknown object {rel.target!r}", rel.target)
    for rel in log.o2o:
        for end in (rel.source, rel.target):
            if end not in object_ids:
                report("dangling-reference", f"o2o refers to unknown object {end!r}", end)

    for kind, types in (("event", log.event_types), ("object", log.object_types)):
        for type_name, attrs in types.items():
            for name, datatype in attrs.items():
                if datatype not in DATATYPES:
                    report(
                        "unknown-datatype",
                        f"{kind} type {type_name!r} declares {name!r} with datatype {datatype!r}",
                        type_name,
                    )
    return found
