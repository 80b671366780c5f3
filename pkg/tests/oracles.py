"""Brute-force reference computations, kept independent of the library code paths."""

from __future__ import annotations

from datetime import datetime

from ocel2tekg.ocel import OcelLog


def scan_resolve(log: OcelLog, object_id: str, attribute: str, at: datetime):
    """Value with the greatest time <= ``at`` found by scanning every oaval entry."""
    best = None
    for entry in log.object_attr_values:
        if entry.object == object_id and entry.name == attribute and entry.time <= at:
            if best is None or entry.time > best.time:
                best = entry
    return None if best is None else best.value


def scan_change_times(log: OcelLog, object_id: str) -> list[datetime]:
    times = []
    for entry in log.object_attr_values:
        if entry.object == object_id and entry.time not in times:
            times.append(entry.time)
    times.sort()
    return times


def sort_and_pair(events: list[tuple]) -> set[tuple]:
    """Consecutive pairs of ``(time, id)`` tuples after sorting; returns id pairs."""
    ordered = sorted(events)
    return {(a[1], b[1]) for a, b in zip(ordered, ordered[1:])}


def df_oracle(g) -> set[tuple]:
    """Expected surviving df edges as (source event id, target event id, ent) triples.

    ``g`` is a graph with corr and derived edges but no df edges. Works on
    plain sets of ids: pair up each owner's events, drop an owner's pair when
    a constituent has the same pair, unless that owner also has pairs ending
    at the source and starting at the target which are themselves kept.
    """
    events_of: dict = {}
    for r in g.edges_with_label("corr"):
        edge = g.edge(r)
        src = g.node(edge.source).properties
        events_of.setdefault(g.node(edge.target).properties["id"], set()).add((src["time"], src["id"]))
    raw = set()
    for ent, events in events_of.items():
        raw |= {(a, b, ent) for a, b in sort_and_pair(list(events))}

    parts: dict = {}
    for r in g.edges_with_label("derived"):
        edge = g.edge(r)
        parts.setdefault(g.node(edge.source).properties["id"], set()).add(g.node(edge.target).properties["id"])
    uninformative = {(a, b, ent) for a, b, ent in raw if any((a, b, c) in raw for c in parts.get(ent, ()))}
    informative = raw - uninformative

    def sandwiched(a, b, ent):
        return any(x[1] == a and x[2] == ent for x in informative) and any(
            x[0] == b and x[2] == ent for x in informative
        )

    return informative | {t for t in uninformative if sandwiched(*t)}


def df_triples(g) -> set[tuple]:
    out = set()
    for r in g.edges_with_label("df"):
        edge = g.edge(r)
        out.add((g.node(edge.source).properties["id"], g.node(edge.target).properties["id"], edge.properties["ent"]))
    return out
