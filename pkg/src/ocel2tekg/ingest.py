"""Reading and writing the OCEL 2.0 JSON exchange format."""

from __future__ import annotations

import json
import logging
import math
from datetime import datetime, timedelta
from pathlib import Path
from typing import Any

from .ocel import (
    UTC,
    AttributeValue,
    EventRecord,
    ObjectAttributeValue,
    ObjectRecord,
    OcelLog,
    Relation,
    Violation,
    format_timestamp,
    parse_timestamp,
    validate_log,
)

logger = logging.getLogger(__name__)

_DATATYPE_ALIASES = {
    "string": "string",
    "str": "string",
    "integer": "integer",
    "int": "integer",
    "float": "float",
    "double": "float",
    "boolean": "boolean",
    "bool": "boolean",
    "time": "time",
    "date": "time",
    "datetime": "time",
    "timestamp": "time",
}

_EPOCH = datetime(1970, 1, 1, tzinfo=UTC)


class OcelParseError(ValueError):
    """Base class for everything :func:`parse_ocel_json` raises.

    ``path`` is a JSON path into the offending document (``$`` for the root).
    """

    def __init__(self, message: str, path: str = "$") -> None:
        super().__init__(f"{path}: {message}")
        self.path = path


class OcelSyntaxError(OcelParseError):
    def __init__(self, message: str, offset: int) -> None:
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


class OcelSchemaError(OcelParseError):
    pass


class OcelValidationError(OcelParseError):
    def __init__(self, violations: list[Violation]) -> None:
        lines = "; ".join(str(v) for v in violations)
        super().__init__(f"{len(violations)} violation(s): {lines}")
        self.violations = violations


def _reject_constant(name: str) -> Any:
    raise ValueError(f"non-finite number {name} is not allowed")


def _finite_float(text: str) -> float:
    value = float(text)
    if not math.isfinite(value):
        raise ValueError(f"number {text} is out of range")
    return value


def _decode(data: bytes | str) -> Any:
    if isinstance(data, bytes):
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise OcelSyntaxError(f"invalid UTF-8: {exc.reason}", exc.start) from None
    else:
        text = data
    try:
        return json.loads(text, parse_constant=_reject_constant, parse_float=_finite_float)
    except json.JSONDecodeError as exc:
        raise OcelSyntaxError(exc.msg, len(text[: exc.pos].encode("utf-8", "surrogatepass"))) from None
    except ValueError as exc:
        raise OcelSyntaxError(str(exc), 0) from None
    except RecursionError:
        raise OcelSyntaxError("document nested too deeply", 0) from None


class _Reader:
    """Walks a decoded document, converting it into log components."""

    def __init__(self) -> None:
        self.event_types: dict[str, dict[str, str]] = {}
        self.object_types: dict[str, dict[str, str]] = {}
        self.events: list[EventRecord] = []
        self.objects: list[ObjectRecord] = []
        self.event_values: dict[tuple[str, str], AttributeValue] = {}
        self.object_values: list[ObjectAttributeValue] = []
        self.untimed: list[tuple[str, str, AttributeValue]] = []
        self.e2o: list[Relation] = []
        self.o2o: list[Relation] = []

    @staticmethod
    def field(node: dict, key: str, path: str, kind: type | tuple[type, ...], required: bool = True) -> Any:
        if key not in node or node[key] is None:
            if required:
                raise OcelSchemaError(f"missing field {key!r}", path)
            return None
        value = node[key]
        if not isinstance(value, kind) or isinstance(value, bool) and bool not in _as_tuple(kind):
            raise OcelSchemaError(f"field {key!r} has wrong type {type(value).__name__}", f"{path}.{key}")
        return value

    def items(self, node: dict, key: str, path: str, required: bool = False) -> list[tuple[str, dict]]:
        values = self.field(node, key, path, list, required) or []
        out = []
        for i, item in enumerate(values):
            item_path = f"{path}.{key}[{i}]"
            if not isinstance(item, dict):
                raise OcelSchemaError("expected an object", item_path)
            out.append((item_path, item))
        return out

    def time(self, node: dict, key: str, path: str) -> datetime:
        text = self.field(node, key, path, str)
        try:
            return parse_timestamp(text)
        except (ValueError, OverflowError, TypeError):
            raise OcelSchemaError(f"unparseable timestamp {text!r}", f"{path}.{key}") from None

    def read(self, doc: Any) -> None:
        if not isinstance(doc, dict):
            raise OcelSchemaError("document root must be an object")
        for key, target in (("eventTypes", self.event_types), ("objectTypes", self.object_types)):
            for path, item in self.items(doc, key, "$", required=True):
                name = self.field(item, "name", path, str)
                if name in target:
                    raise OcelSchemaError(f"duplicate type {name!r}", f"{path}.name")
                attrs: dict[str, str] = {}
                for apath, attr in self.items(item, "attributes", path):
                    aname = self.field(attr, "name", apath, str)
                    atype = self.field(attr, "type", apath, str)
                    if aname in attrs:
                        raise OcelSchemaError(f"duplicate attribute {aname!r}", f"{apath}.name")
                    if atype.lower() not in _DATATYPE_ALIASES:
                        raise OcelSchemaError(f"unknown datatype {atype!r}", f"{apath}.type")
                    attrs[aname] = _DATATYPE_ALIASES[atype.lower()]
                target[name] = attrs

        ids: set[str] = set()
        objects = self.items(doc, "objects", "$", required=True)
        events = self.items(doc, "events", "$", required=True)
        for path, item in objects:
            oid = self.field(item, "id", path, str)
            otype = self.field(item, "type", path, str)
            if otype not in self.object_types:
                raise OcelSchemaError(f"undeclared object type {otype!r}", f"{path}.type")
            if oid in ids:
                raise OcelSchemaError(f"duplicate id {oid!r}", f"{path}.id")
            ids.add(oid)
            self.objects.append(ObjectRecord(oid, otype))
            declared = self.object_types[otype]
            for apath, attr in self.items(item, "attributes", path):
                name = self.field(attr, "name", apath, str)
                value = self.value(attr, apath, declared.get(name))
                if attr.get("time") is None:
                    self.untimed.append((oid, name, value))
                else:
                    self.object_values.append(ObjectAttributeValue(oid, name, self.time(attr, "time", apath), value))
            for rpath, rel in self.items(item, "relationships", path):
                self.o2o.append(Relation(oid, self.qualifier(rel, rpath), self.field(rel, "objectId", rpath, str)))

        for path, item in events:
            eid = self.field(item, "id", path, str)
            etype = self.field(item, "type", path, str)
            if etype not in self.event_types:
                raise OcelSchemaError(f"undeclared event type {etype!r}", f"{path}.type")
            if eid in ids:
                raise OcelSchemaError(f"duplicate id {eid!r}", f"{path}.id")
            ids.add(eid)
            self.events.append(EventRecord(eid, etype, self.time(item, "time", path)))
            declared = self.event_types[etype]
            for apath, attr in self.items(item, "attributes", path):
                name = self.field(attr, "name", apath, str)
                if "time" in attr:
                    raise OcelSchemaError("event attributes cannot carry a time", f"{apath}.time")
                value = self.value(attr, apath, declared.get(name))
                if (eid, name) in self.event_values and self.event_values[(eid, name)] != value:
                    raise OcelSchemaError(f"conflicting values for attribute {name!r}", apath)
                self.event_values[(eid, name)] = value
            for rpath, rel in self.items(item, "relationships", path):
                self.e2o.append(Relation(eid, self.qualifier(rel, rpath), self.field(rel, "objectId", rpath, str)))

    def qualifier(self, rel: dict, path: str) -> str:
        return self.field(rel, "qualifier", path, str, required=False) or ""

    def value(self, attr: dict, path: str, datatype: str | None) -> AttributeValue:
        if "value" not in attr:
            raise OcelSchemaError("missing field 'value'", path)
        raw = attr["value"]
        vpath = f"{path}.value"
        if datatype is None:
            # undeclared attribute: keep the raw scalar for validate_log to report
            if isinstance(raw, (str, int, float, bool)):
                return raw
            raise OcelSchemaError(f"unsupported value {type(raw).__name__}", vpath)
        try:
            return _coerce(raw, datatype)
        except (TypeError, ValueError, OverflowError):
            raise OcelSchemaError(f"value {raw!r} is not a valid {datatype}", vpath) from None

    def build(self) -> OcelLog:
        if self.untimed:
            known = [e.time for e in self.events] + [v.time for v in self.object_values]
            try:
                start = (min(known) if known else _EPOCH) - timedelta(milliseconds=1)
            except OverflowError:
                raise OcelSchemaError("no representable instant precedes the earliest timestamp") from None
            logger.warning(
                "%d object attribute value(s) without time; assigning %s",
                len(self.untimed),
                format_timestamp(start),
            )
            for oid, name, value in self.untimed:
                self.object_values.append(ObjectAttributeValue(oid, name, start, value))
        return OcelLog(
            events=tuple(self.events),
            objects=tuple(self.objects),
            event_types=self.event_types,
            object_types=self.object_types,
            event_attr_values=self.event_values,
            object_attr_values=tuple(self.object_values),
            e2o=tuple(self.e2o),
            o2o=tuple(self.o2o),
        )


def _as_tuple(kind: type | tuple[type, ...]) -> tuple[type, ...]:
    return kind if isinstance(kind, tuple) else (kind,)


def _coerce(raw: Any, datatype: str) -> AttributeValue:
    if datatype == "string":
        if isinstance(raw, str):
            return raw
    elif datatype == "integer":
        if isinstance(raw, int) and not isinstance(raw, bool):
            return raw
        if isinstance(raw, float) and raw.is_integer():
            return int(raw)
        if isinstance(raw, str):
            return int(raw)
    elif datatype == "float":
        if isinstance(raw, (int, float, str)) and not isinstance(raw, bool):
            value = float(raw)
            if not math.isfinite(value):
                raise ValueError(raw)
            return value
    elif datatype == "boolean":
        if isinstance(raw, bool):
            return raw
        if isinstance(raw, str) and raw.lower() in ("true", "false"):
            return raw.lower() == "true"
    elif datatype == "time":
        if isinstance(raw, str):
            return parse_timestamp(raw)
    raise TypeError(raw)


def parse_ocel_json(data: bytes | str, *, validate: bool = True) -> OcelLog:
    """Parse an OCEL 2.0 JSON document.

    Raises :class:`OcelSyntaxError` for malformed JSON, :class:`OcelSchemaError`
    for documents that do not have the expected shape, and (unless
    ``validate`` is false) :class:`OcelValidationError` when the resulting log
    breaks one of the log constraints.
    """
    reader = _Reader()
    reader.read(_decode(data))
    log = reader.build()
    if validate:
        violations = validate_log(log)
        if violations:
            raise OcelValidationError(violations)
    return log


def read_ocel_json(path: str | Path, *, validate: bool = True) -> OcelLog:
    return parse_ocel_json(Path(path).read_bytes(), validate=validate)


def _encode_value(value: AttributeValue) -> Any:
    if isinstance(value, datetime):
        return format_timestamp(value)
    return value


def _relationships(rels: list[Relation]) -> list[dict[str, str]]:
    return [{"objectId": r.target, "qualifier": r.qualifier} for r in rels]


def to_document(log: OcelLog) -> dict[str, Any]:
    """The JSON-ready dictionary for ``log``."""
    o2o: dict[str, list[Relation]] = {}
    for rel in log.o2o:
        o2o.setdefault(rel.source, []).append(rel)
    e2o: dict[str, list[Relation]] = {}
    for rel in log.e2o:
        e2o.setdefault(rel.source, []).append(rel)
    object_values: dict[str, list[ObjectAttributeValue]] = {}
    for entry in log.object_attr_values:
        object_values.setdefault(entry.object, []).append(entry)

    def declare(types):
        return [
            {"name": name, "attributes": [{"name": a, "type": t} for a, t in attrs.items()]}
            for name, attrs in types.items()
        ]

    return {
        "objectTypes": declare(log.object_types),
        "eventTypes": declare(log.event_types),
        "objects": [
            {
                "id": o.id,
                "type": o.type,
                "attributes": [
                    {"name": v.name, "time": format_timestamp(v.time), "value": _encode_value(v.value)}
                    for v in object_values.get(o.id, ())
                ],
                "relationships": _relationships(o2o.get(o.id, [])),
            }
            for o in log.objects
        ],
        "events": [
            {
                "id": e.id,
                "type": e.type,
                "time": format_timestamp(e.time),
                "attributes": [
                    {"name": name, "value": _encode_value(value)} for name, value in log.event_attributes(e.id).items()
                ],
                "relationships": _relationships(e2o.get(e.id, [])),
            }
            for e in log.events
        ],
    }


def write_ocel_json(log: OcelLog) -> bytes:
    return json.dumps(to_document(log), indent=2, allow_nan=False).encode("utf-8")
