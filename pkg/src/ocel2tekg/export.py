"""Serializing graphs as Cypher, GraphML and JSON Lines, plus summary statistics."""

from __future__ import annotations

import enum
import json
import re
import xml.etree.ElementTree as ET
from collections import Counter
from dataclasses import asdict, dataclass, field
from datetime import datetime
from typing import Any

from .lpg import Edge, Graph, Node, PropertyValue
from .ocel import format_timestamp, parse_timestamp


class ExportFormat(str, enum.Enum):
    CYPHER = "cypher"
    GRAPHML = "graphml"
    JSONL = "jsonl"


#: Names used for df edge properties by existing EKG tooling.
DF_ALIASES = {"ent": "EntityID", "type": "EntityType"}

_IDENTIFIER = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_ESCAPE = re.compile(r"([\\(),])")


def composite_string(value: PropertyValue) -> str:
    """Canonical scalar form of a property value, e.g. ``((a1,2024-...Z),(c1,...))``.

    Backslashes, parentheses and commas inside strings are backslash-escaped
    so distinct pairs of strings never collide.
    """
    if isinstance(value, tuple):
        return f"({composite_string(value[0])},{composite_string(value[1])})"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, datetime):
        return format_timestamp(value)
    if isinstance(value, str):
        return _ESCAPE.sub(r"\\\1", value)
    return repr(value)


def _export_properties(element: Node | Edge) -> dict[str, PropertyValue]:
    props = dict(element.properties)
    if isinstance(element, Edge) and element.label == "df":
        for name, alias in DF_ALIASES.items():
            if name in props and alias not in props:
                props[alias] = props[name]
    return props


def _cypher_name(name: str) -> str:
    if _IDENTIFIER.match(name):
        return name
    return "`" + name.replace("`", "``") + "`"


def _cypher_value(value: PropertyValue) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, float)):
        return repr(value)
    if isinstance(value, str):
        return json.dumps(value)
    return json.dumps(composite_string(value))


def _cypher_map(props: dict[str, Any]) -> str:
    return "{" + ", ".join(f"{_cypher_name(k)}: {_cypher_value(v)}" for k, v in props.items()) + "}"


def to_cypher(g: Graph) -> str:
    """One CREATE per node and one MATCH ... CREATE per edge.

    Nodes carry a ``_handle`` property so relationship statements can find
    their endpoints.
    """
    lines = []
    for node in g.nodes():
        props = {"_handle": node.handle, **_export_properties(node)}
        lines.append(f"CREATE (:{_cypher_name(node.label)} {_cypher_map(props)});")
    for edge in g.edges():
        props = _export_properties(edge)
        rel = f"[:{_cypher_name(edge.label)} {_cypher_map(props)}]" if props else f"[:{_cypher_name(edge.label)}]"
        lines.append(
            f"MATCH (s {{_handle: {edge.source}}}), (t {{_handle: {edge.target}}}) CREATE (s)-{rel}->(t);"
        )
    return "".join(line + "\n" for line in lines)


GRAPHML_NS = "http://graphml.graphdrawing.org/xmlns"


def _graphml_type(values: list[PropertyValue]) -> str:
    if all(isinstance(v, bool) for v in values):
        return "boolean"
    if all(isinstance(v, int) and not isinstance(v, bool) for v in values):
        return "long"
    if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in values):
        return "double"
    return "string"


def _graphml_text(value: PropertyValue, kind: str) -> str:
    if kind == "boolean":
        return "true" if value else "false"
    if kind in ("long", "double"):
        return repr(value)
    return value if isinstance(value, str) else composite_string(value)


def to_graphml(g: Graph) -> bytes:
    """GraphML 1.0 document; the label is the ``label`` attribute of each node/edge element."""
    ns = f"{{{GRAPHML_NS}}}"
    root = ET.Element(f"{ns}graphml")
    domains: dict[str, list[tuple[Node | Edge, dict[str, PropertyValue]]]] = {
        "node": [(n, _export_properties(n)) for n in g.nodes()],
        "edge": [(e, _export_properties(e)) for e in g.edges()],
    }
    keys: dict[tuple[str, str], tuple[str, str]] = {}
    for domain, elements in domains.items():
        values: dict[str, list[PropertyValue]] = {}
        for _, props in elements:
            for name, value in props.items():
                values.setdefault(name, []).append(value)
        for i, name in enumerate(sorted(values)):
            key_id = f"{domain[0]}{i}"
            kind = _graphml_type(values[name])
            keys[(domain, name)] = (key_id, kind)
            ET.SubElement(
                root, f"{ns}key", {"id": key_id, "for": domain, "attr.name": name, "attr.type": kind}
            )
    graph = ET.SubElement(root, f"{ns}graph", {"id": "G", "edgedefault": "directed"})
    for node, props in domains["node"]:
        el = ET.SubElement(graph, f"{ns}node", {"id": f"n{node.handle}", "label": node.label})
        for name, value in props.items():
            key_id, kind = keys[("node", name)]
            ET.SubElement(el, f"{ns}data", {"key": key_id}).text = _graphml_text(value, kind)
    for edge, props in domains["edge"]:
        el = ET.SubElement(
            graph,
            f"{ns}edge",
            {"id": f"e{edge.handle}", "source": f"n{edge.source}", "target": f"n{edge.target}", "label": edge.label},
        )
        for name, value in props.items():
            key_id, kind = keys[("edge", name)]
            ET.SubElement(el, f"{ns}data", {"key": key_id}).text = _graphml_text(value, kind)
    ET.register_namespace("", GRAPHML_NS)
    ET.indent(root)
    return ET.tostring(root, encoding="utf-8", xml_declaration=True) + b"\n"


def _encode(value: PropertyValue) -> Any:
    if isinstance(value, tuple):
        return [_encode(v) for v in value]
    if isinstance(value, datetime):
        return {"$time": format_timestamp(value)}
    return value


def _decode(value: Any) -> PropertyValue:
    if isinstance(value, list):
        if len(value) != 2:
            raise ValueError(f"composite values are pairs, got {value!r}")
        return (_decode(value[0]), _decode(value[1]))
    if isinstance(value, dict):
        return parse_timestamp(value["$time"])
    return value


def to_jsonl(g: Graph) -> str:
    """Nodes then edges, one JSON object per line, each with a ``kind`` field.

    Timestamps are written as ``{"$time": ...}`` and pairs as two-element
    arrays so that :func:`load_jsonl` restores the exact property values.
    """
    lines = []
    for node in g.nodes():
        props = {k: _encode(v) for k, v in node.properties.items()}
        lines.append({"kind": "node", "handle": node.handle, "label": node.label, "properties": props})
    for edge in g.edges():
        props = {k: _encode(v) for k, v in edge.properties.items()}
        lines.append(
            {
                "kind": "edge",
                "handle": edge.handle,
                "source": edge.source,
                "target": edge.target,
                "label": edge.label,
                "properties": props,
            }
        )
    return "".join(json.dumps(line, allow_nan=False) + "\n" for line in lines)


def load_jsonl(data: str | bytes) -> Graph:
    """Rebuild a graph from :func:`to_jsonl` output. Handles are renumbered."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    g = Graph()
    nodes: dict[int, int] = {}
    for line in data.splitlines():
        if not line.strip():
            continue
        record = json.loads(line)
        props = {k: _decode(v) for k, v in record["properties"].items()}
        if record["kind"] == "node":
            nodes[record["handle"]] = g.create_node(record["label"], props)
        elif record["kind"] == "edge":
            g.create_edge(nodes[record["source"]], nodes[record["target"]], record["label"], props)
        else:
            raise ValueError(f"unknown record kind {record['kind']!r}")
    return g


def export(g: Graph, fmt: ExportFormat | str) -> bytes:
    fmt = ExportFormat(fmt)
    if fmt is ExportFormat.CYPHER:
        return to_cypher(g).encode("utf-8")
    if fmt is ExportFormat.GRAPHML:
        return to_graphml(g)
    return to_jsonl(g).encode("utf-8")


@dataclass
class GraphStats:
    nodes: int = 0
    edges: int = 0
    snapshots: int = 0
    nodes_by_label: dict[str, int] = field(default_factory=dict)
    edges_by_label: dict[str, int] = field(default_factory=dict)
    df_by_owner_kind: dict[str, int] = field(default_factory=dict)
    snapshots_by_object_type: dict[str, int] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


def graph_stats(g: Graph) -> GraphStats:
    """Counts per node label, edge label, df owner label and object type.

    ``snapshots`` counts plain (object, time) snapshots; reified snapshots are
    included in ``nodes_by_label["Snapshot"]`` only.
    """
    owner_label = {}
    for label in ("Entity", "Snapshot"):
        for n in g.nodes_with_label(label):
            owner_label[g.node(n).properties.get("id")] = label
    df_kinds: Counter[str] = Counter({"Entity": 0, "Snapshot": 0})
    for r in g.edges_with_label("df"):
        df_kinds[owner_label.get(g.edge(r).properties.get("ent"), "unknown")] += 1
    per_type: Counter[str] = Counter()
    for n in g.nodes_with_label("Snapshot"):
        props = g.node(n).properties
        if isinstance(props.get("id"), tuple) and isinstance(props["id"][1], datetime):
            per_type[props["type"]] += 1
    return GraphStats(
        nodes=g.number_of_nodes(),
        edges=g.number_of_edges(),
        snapshots=sum(per_type.values()),
        nodes_by_label={label: len(g.nodes_with_label(label)) for label in sorted(g.node_labels())},
        edges_by_label={label: len(g.edges_with_label(label)) for label in sorted(g.edge_labels())},
        df_by_owner_kind=dict(df_kinds),
        snapshots_by_object_type=dict(sorted(per_type.items())),
    )
