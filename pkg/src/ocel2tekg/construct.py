"""Creating tEKG nodes from log elements, and id-carrying edges between them."""

from __future__ import annotations

import logging
from datetime import datetime
from typing import Union

from .lpg import Graph, PropertyValue
from .ocel import EventRecord, ObjectRecord, OcelLog

logger = logging.getLogger(__name__)

Snapshot = tuple[ObjectRecord, datetime]
#: Anything a node can be created for: an event, an object, an event type,
#: a snapshot, a pair of objects, or a pair of snapshots.
LogElement = Union[EventRecord, ObjectRecord, str, Snapshot, tuple[ObjectRecord, ObjectRecord], tuple[Snapshot, Snapshot]]


def _is_snapshot(x: object) -> bool:
    return isinstance(x, tuple) and len(x) == 2 and isinstance(x[0], ObjectRecord) and isinstance(x[1], datetime)


def _merge(props: dict[str, PropertyValue], extra: dict[str, PropertyValue], owner: str) -> None:
    for key, value in extra.items():
        if key in props:
            logger.warning("attribute %r of %s clashes with a reserved property and is dropped", key, owner)
            continue
        props[key] = value


def node_properties(x: LogElement, log: OcelLog) -> dict[str, PropertyValue]:
    if isinstance(x, EventRecord):
        props: dict[str, PropertyValue] = {"id": x.id, "act": x.type, "time": x.time}
        _merge(props, log.event_attributes(x.id), f"event {x.id}")
        return props
    if isinstance(x, ObjectRecord):
        return {"id": x.id, "type": x.type}
    if isinstance(x, str):
        return {"id": x, "type": x}
    if _is_snapshot(x):
        obj, at = x
        props = {"id": (obj.id, at), "type": obj.type, "time": at}
        values = {}
        for name in log.object_types.get(obj.type, {}):
            value = log.resolve_attribute_at(obj.id, name, at)
            if value is not None:
                values[name] = value
        _merge(props, values, f"snapshot of {obj.id}")
        return props
    if isinstance(x, tuple) and len(x) == 2:
        first, second = x
        if isinstance(first, ObjectRecord) and isinstance(second, ObjectRecord):
            return {"id": (first.id, second.id), "type": (first.type, second.type)}
        if _is_snapshot(first) and _is_snapshot(second):
            (o1, t1), (o2, t2) = first, second
            return {"id": ((o1.id, t1), (o2.id, t2)), "type": (o1.type, o2.type)}
    raise TypeError(f"cannot create a node for {x!r}")


def add_node(x: LogElement, label: str, g: Graph, log: OcelLog) -> int:
    """Create a node labelled ``label`` for log element ``x``.

    The properties depend on what ``x`` is: events get ``id``, ``act``,
    ``time`` and their attribute values; objects and event types get ``id``
    and ``type``; a snapshot ``(object, t)`` gets ``id=(object id, t)``,
    ``type``, ``time`` and every attribute of its object type that has a
    value at ``t``; pairs of objects or snapshots get paired ``id`` and
    ``type``.
    """
    return g.create_node(label, node_properties(x, log))


def add_edge(g: Graph, n1: int, n2: int, label: str, qual: str | None = None) -> int:
    """Create an edge whose ``id`` pairs the ids of its endpoints.

    ``qual`` is stored when given; the empty string counts as a qualifier.
    """
    props: dict[str, PropertyValue] = {"id": (g.node(n1).properties.get("id"), g.node(n2).properties.get("id"))}
    if qual is not None:
        props["qual"] = qual
    return g.create_edge(n1, n2, label, props)
