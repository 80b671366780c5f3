"""Labeled property graphs and EKG/tEKG schema checks.

Node and edge handles are dense integers handed out in creation order, and
every iteration below follows that order, so building the same graph twice
yields identical handles and identical exports.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime
from typing import Iterable, Iterator, NamedTuple, Union

Atomic = Union[str, int, float, bool, datetime]
PropertyValue = Union[Atomic, tuple]

#: Deepest pair nesting a property may have: ``((a, t1), (b, t2))``.
MAX_DEPTH = 2
#: Edge ids pair up the ids of both endpoints, which are themselves up to
#: ``MAX_DEPTH`` deep.
MAX_EDGE_ID_DEPTH = MAX_DEPTH + 1


class GraphError(LookupError):
    pass


def property_depth(value: object) -> int:
    """Nesting depth of a property value; raises ``TypeError`` for unsupported shapes."""
    if isinstance(value, (str, int, float, bool, datetime)):
        return 0
    if isinstance(value, tuple) and len(value) == 2:
        return 1 + max(property_depth(value[0]), property_depth(value[1]))
    raise TypeError(f"unsupported property value {value!r}")


def check_property(key: str, value: object, limit: int = MAX_DEPTH) -> None:
    if not isinstance(key, str) or not key:
        raise TypeError(f"property names must be non-empty strings, got {key!r}")
    depth = property_depth(value)
    if depth > limit:
        raise ValueError(f"property {key!r} nests {depth} levels deep (limit {limit})")


@dataclass
class Node:
    handle: int
    label: str
    properties: dict[str, PropertyValue] = field(default_factory=dict)


@dataclass
class Edge:
    handle: int
    source: int
    target: int
    label: str
    properties: dict[str, PropertyValue] = field(default_factory=dict)


class Graph:
    """A mutable labeled property graph with per-label and adjacency indexes."""

    def __init__(self) -> None:
        self._nodes: dict[int, Node] = {}
        self._edges: dict[int, Edge] = {}
        self._next_node = 0
        self._next_edge = 0
        # dicts used as insertion-ordered sets
        self._nodes_by_label: dict[str, dict[int, None]] = {}
        self._edges_by_label: dict[str, dict[int, None]] = {}
        self._out: dict[int, dict[int, None]] = {}
        self._in: dict[int, dict[int, None]] = {}

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._nodes == other._nodes and self._edges == other._edges

    def __repr__(self) -> str:
        return f"Graph({len(self._nodes)} nodes, {len(self._edges)} edges)"

    def create_node(self, label: str, properties: dict[str, PropertyValue] | None = None) -> int:
        props = dict(properties or {})
        for key, value in props.items():
            check_property(key, value)
        handle = self._next_node
        self._next_node += 1
        self._nodes[handle] = Node(handle, label, props)
        self._nodes_by_label.setdefault(label, {})[handle] = None
        self._out[handle] = {}
        self._in[handle] = {}
        return handle

    def create_edge(
        self, source: int, target: int, label: str, properties: dict[str, PropertyValue] | None = None
    ) -> int:
        for end in (source, target):
            if end not in self._nodes:
                raise GraphError(f"no node with handle {end}")
        props = dict(properties or {})
        for key, value in props.items():
            check_property(key, value, MAX_EDGE_ID_DEPTH if key == "id" else MAX_DEPTH)
        handle = self._next_edge
        self._next_edge += 1
        self._edges[handle] = Edge(handle, source, target, label, props)
        self._edges_by_label.setdefault(label, {})[handle] = None
        self._out[source][handle] = None
        self._in[target][handle] = None
        return handle

    def remove_edge(self, handle: int) -> None:
        edge = self._edges.pop(handle, None)
        if edge is None:
            raise GraphError(f"no edge with handle {handle}")
        del self._edges_by_label[edge.label][handle]
        del self._out[edge.source][handle]
        del self._in[edge.target][handle]

    def set_property(self, handle: int, key: str, value: PropertyValue, *, edge: bool = False) -> None:
        element = self.edge(handle) if edge else self.node(handle)
        check_property(key, value, MAX_EDGE_ID_DEPTH if edge and key == "id" else MAX_DEPTH)
        element.properties[key] = value

    def node(self, handle: int) -> Node:
        try:
            return self._nodes[handle]
        except KeyError:
            raise GraphError(f"no node with handle {handle}") from None

    def edge(self, handle: int) -> Edge:
        try:
            return self._edges[handle]
        except KeyError:
            raise GraphError(f"no edge with handle {handle}") from None

    def has_edge(self, handle: int) -> bool:
        return handle in self._edges

    def nodes(self) -> Iterator[Node]:
        return iter(list(self._nodes.values()))

    def edges(self) -> Iterator[Edge]:
        return iter(list(self._edges.values()))

    def number_of_nodes(self) -> int:
        return len(self._nodes)

    def number_of_edges(self) -> int:
        return len(self._edges)

    def nodes_with_label(self, label: str) -> list[int]:
        return list(self._nodes_by_label.get(label, ()))

    def edges_with_label(self, label: str) -> list[int]:
        return list(self._edges_by_label.get(label, ()))

    def node_labels(self) -> list[str]:
        return [label for label, members in self._nodes_by_label.items() if members]

    def edge_labels(self) -> list[str]:
        return [label for label, members in self._edges_by_label.items() if members]

    def out_edges(self, node: int, label: str | None = None) -> list[Edge]:
        edges = (self._edges[h] for h in self._out[node])
        return [e for e in edges if label is None or e.label == label]

    def in_edges(self, node: int, label: str | None = None) -> list[Edge]:
        edges = (self._edges[h] for h in self._in[node])
        return [e for e in edges if label is None or e.label == label]

    def edges_between(self, source: int, target: int, label: str | None = None) -> list[Edge]:
        return [e for e in self.out_edges(source, label) if e.target == target]


class SchemaTriple(NamedTuple):
    source: str
    edge: str
    target: str


EKG_SCHEMA = frozenset(
    {
        SchemaTriple("Log", "has", "Event"),
        SchemaTriple("Event", "observed", "Class"),
        SchemaTriple("Class", "dfc", "Class"),
        SchemaTriple("Event", "df", "Event"),
        SchemaTriple("Event", "corr", "Entity"),
        SchemaTriple("Entity", "rel", "Entity"),
        SchemaTriple("Entity", "derived", "Entity"),
    }
)

TEKG_SCHEMA = EKG_SCHEMA | {
    SchemaTriple("Event", "corr", "Snapshot"),
    SchemaTriple("Snapshot", "rel", "Snapshot"),
    SchemaTriple("Entity", "snapshot", "Snapshot"),
    SchemaTriple("Snapshot", "derived", "Snapshot"),
}


class SchemaViolation(NamedTuple):
    edge: int
    triple: SchemaTriple

    def __str__(self) -> str:
        s, l, t = self.triple
        return f"edge {self.edge}: ({s})-[{l}]->({t}) is not admitted by the schema"


def conforms_to(g: Graph, schema: Iterable[SchemaTriple]) -> list[SchemaViolation]:
    """Edges whose (source label, edge label, target label) is not in ``schema``."""
    allowed = frozenset(schema)
    found = []
    for e in g.edges():
        triple = SchemaTriple(g.node(e.source).label, e.label, g.node(e.target).label)
        if triple not in allowed:
            found.append(SchemaViolation(e.handle, triple))
    return found


class NodeViolation(NamedTuple):
    node: int
    message: str

    def __str__(self) -> str:
        return f"node {self.node}: {self.message}"


def _is_pair(value: object, left: type, right: type) -> bool:
    return isinstance(value, tuple) and len(value) == 2 and isinstance(value[0], left) and isinstance(value[1], right)


def _is_type_value(value: object) -> bool:
    return isinstance(value, str) or _is_pair(value, str, str)


def _is_snapshot_id(value: object) -> bool:
    return _is_pair(value, str, datetime)


def ekg_node_violations(g: Graph) -> list[NodeViolation]:
    """Check the property contract for Event and Entity nodes.

    Reified entities carry a pair of object types, so ``type`` may be a pair
    of strings as well as a single one.
    """
    found: list[NodeViolation] = []
    for handle in g.nodes_with_label("Event"):
        props = g.node(handle).properties
        if not isinstance(props.get("id"), str):
            found.append(NodeViolation(handle, "Event id must be an event identifier"))
        if not isinstance(props.get("act"), str):
            found.append(NodeViolation(handle, "Event act must be an event type"))
        if not isinstance(props.get("time"), datetime):
            found.append(NodeViolation(handle, "Event time must be a timestamp"))
    for handle in g.nodes_with_label("Entity"):
        props = g.node(handle).properties
        ident = props.get("id")
        if not (isinstance(ident, str) or _is_pair(ident, str, str)):
            found.append(NodeViolation(handle, "Entity id must be an object id or a pair of them"))
        if not _is_type_value(props.get("type")):
            found.append(NodeViolation(handle, "Entity type must be an object type"))
    return found


def tekg_node_violations(g: Graph) -> list[NodeViolation]:
    """EKG node contract plus the Snapshot contract."""
    found = ekg_node_violations(g)
    for handle in g.nodes_with_label("Snapshot"):
        props = g.node(handle).properties
        ident = props.get("id")
        if not (_is_snapshot_id(ident) or _is_pair(ident, tuple, tuple) and all(map(_is_snapshot_id, ident))):
            found.append(NodeViolation(handle, "Snapshot id must be (object, time) or a pair of those"))
        if not _is_type_value(props.get("type")):
            found.append(NodeViolation(handle, "Snapshot type must be an object type"))
    return found
