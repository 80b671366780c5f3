"""OCEL 2.0 log to temporal event knowledge graph."""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from datetime import datetime

from .construct import LogElement, add_edge, add_node
from .dfs import add_class_dfc, add_dfs
from .lpg import Graph
from .ocel import OcelLog, Violation, validate_log

LOG_NODE_ID = "log"


class InvalidLogError(ValueError):
    def __init__(self, violations: list[Violation]) -> None:
        super().__init__(f"log has {len(violations)} violation(s); first: {violations[0]}")
        self.violations = violations


@dataclass(frozen=True)
class TransformConfig:
    """Switches for the two places where the construction admits a choice.

    ``reify_update_edges`` also reifies the ``rel`` edges that chain the
    snapshots of one object. ``include_class_dfc`` adds ``dfc`` edges between
    Class nodes whose events are connected by a df edge.
    """

    reify_update_edges: bool = False
    include_class_dfc: bool = False


class TekgBuilder:
    """Builds a tEKG phase by phase.

    ``registry`` maps every log element a node was created for to its handle;
    ``element_of`` is the inverse. :meth:`build` runs all phases in order;
    tests may run a prefix of them and inspect the intermediate graph.
    """

    def __init__(self, log: OcelLog, config: TransformConfig | None = None) -> None:
        self.log = log
        self.config = config or TransformConfig()
        self.graph = Graph()
        self.registry: dict[LogElement, int] = {}
        self.element_of: dict[int, LogElement] = {}
        self.log_node: int | None = None
        # object id -> ascending (time, snapshot handle)
        self.snapshots: dict[str, list[tuple[datetime, int]]] = {}

    def _add(self, x: LogElement, label: str) -> int:
        n = add_node(x, label, self.graph, self.log)
        self.registry[x] = n
        self.element_of[n] = x
        return n

    def build(self) -> Graph:
        self.add_log_node()
        self.add_classes()
        self.add_events()
        self.add_objects()
        self.link_o2o()
        self.reify_relations()
        self.link_e2o()
        add_dfs(self.graph)
        if self.config.include_class_dfc:
            add_class_dfc(self.graph)
        return self.graph

    def add_log_node(self) -> None:
        self.log_node = self.graph.create_node("Log", {"id": LOG_NODE_ID})

    def add_classes(self) -> None:
        for c in sorted(self.log.observed_event_types()):
            self._add(c, "Class")

    def add_events(self) -> None:
        for e in self.log.events:
            n = self._add(e, "Event")
            add_edge(self.graph, self.log_node, n, "has")
            add_edge(self.graph, n, self.registry[e.type], "observed")

    def add_objects(self) -> None:
        for o in self.log.objects:
            n = self._add(o, "Entity")
            chain = self.snapshots[o.id] = []
            for t in self.log.change_times(o.id):
                s = self._add((o, t), "Snapshot")
                add_edge(self.graph, n, s, "snapshot")
                chain.append((t, s))
            for (_, s1), (_, s2) in zip(chain, chain[1:]):
                add_edge(self.graph, s1, s2, "rel", "update")

    def latest_snapshot(self, object_id: str, at: datetime) -> int | None:
        """Snapshot of the object valid at ``at``: the latest one not after it."""
        chain = self.snapshots[object_id]
        i = bisect.bisect_right(chain, at, key=lambda entry: entry[0]) if chain else 0
        return chain[i - 1][1] if i else None

    def link_o2o(self) -> None:
        for o1, q, o2 in self.log.o2o:
            add_edge(self.graph, self.registry[self.log.object(o1)], self.registry[self.log.object(o2)], "rel", q)
            self.link_o2o_snapshots(o1, q, o2)

    def link_o2o_snapshots(self, o1: str, q: str, o2: str) -> None:
        """Connect each snapshot of ``o1`` to the snapshot of ``o2`` valid at its time."""
        for t, os1 in self.snapshots[o1]:
            os2 = self.latest_snapshot(o2, t)
            if os2 is not None:
                add_edge(self.graph, os1, os2, "rel", q)

    def _is_lifecycle_edge(self, x1: LogElement, x2: LogElement) -> bool:
        return self.graph.node(self.registry[x1]).label == "Snapshot" and x1[0] == x2[0]

    def reify_relations(self) -> None:
        """One reified node per distinct pair of rel-connected nodes."""
        for r in self.graph.edges_with_label("rel"):
            edge = self.graph.edge(r)
            x1, x2 = self.element_of[edge.source], self.element_of[edge.target]
            if not self.config.reify_update_edges and self._is_lifecycle_edge(x1, x2):
                continue
            if (x1, x2) in self.registry:
                continue
            label = self.graph.node(edge.source).label
            assert label == self.graph.node(edge.target).label, "rel edge joins differently labelled nodes"
            n = self._add((x1, x2), label)
            add_edge(self.graph, n, edge.source, "derived")
            add_edge(self.graph, n, edge.target, "derived")

    def link_e2o(self) -> None:
        """Correlate events with entities, their snapshots, and nodes derived from either."""
        seen: set[tuple[int, int, str]] = set()

        def corr(source: int, target: int, q: str) -> None:
            if (source, target, q) not in seen:
                seen.add((source, target, q))
                add_edge(self.graph, source, target, "corr", q)

        def with_derived(source: int, target: int, q: str) -> None:
            corr(source, target, q)
            for d in self.graph.in_edges(target, "derived"):
                corr(source, d.source, q)

        for eid, q, oid in self.log.e2o:
            event = self.log.event(eid)
            ne = self.registry[event]
            with_derived(ne, self.registry[self.log.object(oid)], q)
            os1 = self.latest_snapshot(oid, event.time)
            if os1 is not None:
                with_derived(ne, os1, q)


def transform(log: OcelLog, config: TransformConfig | None = None) -> Graph:
    """Convert a validated OCEL log into a tEKG.

    Raises :class:`InvalidLogError` when the log breaks a log constraint.
    """
    violations = validate_log(log)
    if violations:
        raise InvalidLogError(violations)
    return TekgBuilder(log, config).build()
