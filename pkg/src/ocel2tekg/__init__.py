"""Convert OCEL 2.0 object-centric event logs into temporal event knowledge graphs."""

from .dfs import add_dfs, add_raw_dfs, identify_informative, prune_redundant
from .export import ExportFormat, GraphStats, export, graph_stats, load_jsonl
from .ingest import (
    OcelParseError,
    OcelSchemaError,
    OcelSyntaxError,
    OcelValidationError,
    parse_ocel_json,
    read_ocel_json,
    write_ocel_json,
)
from .lpg import EKG_SCHEMA, TEKG_SCHEMA, Graph, SchemaTriple, conforms_to, tekg_node_violations
from .ocel import EventRecord, ObjectAttributeValue, ObjectRecord, OcelLog, Relation, Violation, validate_log
from .transform import InvalidLogError, TekgBuilder, TransformConfig, transform

__all__ = [
    "EKG_SCHEMA",
    "TEKG_SCHEMA",
    "EventRecord",
    "ExportFormat",
    "Graph",
    "GraphStats",
    "InvalidLogError",
    "ObjectAttributeValue",
    "ObjectRecord",
    "OcelLog",
    "OcelParseError",
    "OcelSchemaError",
    "OcelSyntaxError",
    "OcelValidationError",
    "Relation",
    "SchemaTriple",
    "TekgBuilder",
    "TransformConfig",
    "Violation",
    "add_dfs",
    "add_raw_dfs",
    "conforms_to",
    "export",
    "graph_stats",
    "identify_informative",
    "load_jsonl",
    "parse_ocel_json",
    "prune_redundant",
    "read_ocel_json",
    "tekg_node_violations",
    "transform",
    "validate_log",
    "write_ocel_json",
]
