"""Directly-follows edges over a tEKG.

Three phases: add a df edge between consecutive events of every node that
events correlate to, mark which of those edges carry new information, and drop
the uninformative ones that merely duplicate a constituent's edge.
"""

from __future__ import annotations

from .construct import add_edge
from .lpg import Graph

OWNER_LABELS = ("Entity", "Snapshot")


def _event_key(g: Graph, handle: int) -> tuple:
    props = g.node(handle).properties
    return (props["time"], props["id"])


def correlated_events(g: Graph, owner: int) -> list[int]:
    """Distinct events with a corr edge to ``owner``, ordered by (time, id)."""
    events = dict.fromkeys(e.source for e in g.in_edges(owner, "corr"))
    return sorted(events, key=lambda h: _event_key(g, h))


def add_raw_dfs(g: Graph) -> list[int]:
    """Link consecutive correlated events of every corr target; returns the new edges.

    Events sharing a timestamp are ordered by id, so every owner yields a
    single chain. An edge already present with the same endpoints and ``ent``
    is not added again.
    """
    created = []
    for node in g.nodes():
        events = correlated_events(g, node.handle)
        if len(events) < 2:
            continue
        ent, etype = node.properties.get("id"), node.properties.get("type")
        for e1, e2 in zip(events, events[1:]):
            if any(r.properties.get("ent") == ent for r in g.edges_between(e1, e2, "df")):
                continue
            r = add_edge(g, e1, e2, "df")
            g.set_property(r, "type", etype, edge=True)
            g.set_property(r, "ent", ent, edge=True)
            created.append(r)
    return created


def _parallel_df(g: Graph) -> dict[tuple[int, int], list[int]]:
    parallel: dict[tuple[int, int], list[int]] = {}
    for r in g.edges_with_label("df"):
        edge = g.edge(r)
        parallel.setdefault((edge.source, edge.target), []).append(r)
    return parallel


def identify_informative(g: Graph) -> set[int]:
    """df edges that are not duplicated by a df edge of a derived-from node.

    An edge owned by a reified node is uninformative when one of the nodes it
    is derived from owns a df edge between the same two events.
    """
    parallel = _parallel_df(g)
    informative: set[int] = set()
    for label in OWNER_LABELS:
        owners = {g.node(n).properties.get("id"): n for n in g.nodes_with_label(label)}
        for r in g.edges_with_label("df"):
            edge = g.edge(r)
            owner = owners.get(edge.properties.get("ent"))
            if owner is None:
                continue
            constituent_ids = {
                g.node(d.target).properties.get("id")
                for d in g.out_edges(owner, "derived")
                if g.node(d.target).label == label
            }
            duplicated = any(
                g.edge(other).properties.get("ent") in constituent_ids
                for other in parallel[(edge.source, edge.target)]
            )
            if not duplicated:
                informative.add(r)
    return informative


def prune_redundant(g: Graph, informative: set[int]) -> list[int]:
    """Remove uninformative df edges that run parallel to another df edge.

    An uninformative edge survives when informative edges with the same
    ``ent`` lead into its source and out of its target. Returns the removed
    handles.
    """
    removed = []
    for r1 in g.edges_with_label("df"):
        if r1 in informative or not g.has_edge(r1):
            continue
        edge = g.edge(r1)
        if not any(r2.handle != r1 for r2 in g.edges_between(edge.source, edge.target, "df")):
            continue
        ent = edge.properties.get("ent")
        before = any(r3.handle in informative and r3.properties.get("ent") == ent for r3 in g.in_edges(edge.source, "df"))
        after = any(r4.handle in informative and r4.properties.get("ent") == ent for r4 in g.out_edges(edge.target, "df"))
        if not (before and after):
            g.remove_edge(r1)
            removed.append(r1)
    return removed


def add_dfs(g: Graph) -> Graph:
    add_raw_dfs(g)
    prune_redundant(g, identify_informative(g))
    return g


def add_class_dfc(g: Graph) -> list[int]:
    """Lift df edges to Class nodes: one dfc edge per pair of classes that df connects."""
    created = []
    seen = {(e.source, e.target) for e in map(g.edge, g.edges_with_label("dfc"))}
    for r in g.edges_with_label("df"):
        edge = g.edge(r)
        sources = [o.target for o in g.out_edges(edge.source, "observed")]
        targets = [o.target for o in g.out_edges(edge.target, "observed")]
        for c1 in sources:
            for c2 in targets:
                if (c1, c2) not in seen:
                    seen.add((c1, c2))
                    created.append(add_edge(g, c1, c2, "dfc"))
    return created
