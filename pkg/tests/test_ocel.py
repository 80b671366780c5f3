import random
from datetime import timedelta

import pytest
from conftest import T1, T2, T3, T4, T5
from generators import BASE, random_log
from hypothesis import given
from hypothesis import strategies as st
from oracles import scan_change_times, scan_resolve

from ocel2tekg.ocel import (
    EventRecord,
    ObjectAttributeValue,
    ObjectRecord,
    OcelLog,
    Relation,
    format_timestamp,
    parse_timestamp,
    validate_log,
)


def small_log(**overrides):
    base = dict(
        events=(EventRecord("e1", "Read", T2), EventRecord("e2", "Read", T3)),
        objects=(ObjectRecord("a1", "Assignment"), ObjectRecord("c1", "Course")),
        event_types={"Read": {"student": "string"}},
        object_types={"Assignment": {"Points": "integer", "Grade": "string"}, "Course": {}},
        event_attr_values={("e1", "student"): "s1"},
        object_attr_values=(
            ObjectAttributeValue("a1", "Points", T1, 2),
            ObjectAttributeValue("a1", "Points", T4, 3),
        ),
        e2o=(Relation("e1", "assignment", "a1"),),
        o2o=(Relation("c1", "has", "a1"),),
    )
    base.update(overrides)
    return OcelLog(**base)


class TestResolveAttributeAt:
    def test_value_before_change_is_kept(self):
        assert small_log().resolve_attribute_at("a1", "Points", T2) == 2

    def test_change_visible_at_its_own_instant(self):
        assert small_log().resolve_attribute_at("a1", "Points", T4) == 3

    def test_never_assigned_attribute_is_absent(self):
        log = small_log()
        for t in (T1, T2, T5):
            assert log.resolve_attribute_at("a1", "Grade", t) is None

    def test_before_first_change_is_absent(self):
        assert small_log().resolve_attribute_at("a1", "Points", T1 - timedelta(milliseconds=1)) is None

    def test_unknown_object(self):
        with pytest.raises(KeyError):
            small_log().resolve_attribute_at("zz", "Points", T1)

    @pytest.mark.parametrize("seed", range(10))
    def test_matches_linear_scan(self, seed):
        rng = random.Random(seed)
        log = random_log(rng, max_events=40, max_objects=10, max_changes=8)
        for o in log.objects:
            probes = scan_change_times(log, o.id) + [e.time for e in log.events] + [BASE - timedelta(days=1)]
            for t in probes:
                for name in log.object_types[o.type]:
                    assert log.resolve_attribute_at(o.id, name, t) == scan_resolve(log, o.id, name, t)


history = st.dictionaries(st.integers(0, 1000), st.integers(-100, 100), max_size=15)


def history_log(points: dict[int, int]) -> OcelLog:
    return OcelLog(
        objects=(ObjectRecord("o", "T"),),
        object_types={"T": {"x": "integer"}},
        object_attr_values=tuple(
            ObjectAttributeValue("o", "x", BASE + timedelta(seconds=s), v) for s, v in points.items()
        ),
    )


@given(history, st.integers(-10, 1100))
def test_resolve_is_piecewise_constant_and_right_continuous(points, probe):
    log = history_log(points)
    at = BASE + timedelta(seconds=probe)
    earlier = [s for s in points if s <= probe]
    expected = points[max(earlier)] if earlier else None
    assert log.resolve_attribute_at("o", "x", at) == expected


@given(history)
def test_change_times_strictly_ascending(points):
    log = history_log(points)
    times = log.change_times("o")
    assert all(a < b for a, b in zip(times, times[1:]))
    assert times == scan_change_times(log, "o")


class TestChangeTimes:
    def test_running_example(self, running_log):
        assert running_log.change_times("a1") == [T1, T4]

    def test_no_attributes(self):
        assert small_log().change_times("c1") == []

    def test_shared_instant_listed_once(self):
        log = small_log(object_attr_values=(
            ObjectAttributeValue("a1", "Points", T1, 2),
            ObjectAttributeValue("a1", "Grade", T1, "A"),
        ))
        assert log.change_times("a1") == [T1]
        assert len([v for v in log.object_attr_values if v.object == "a1"]) == 2

    def test_unknown_object(self):
        with pytest.raises(KeyError):
            small_log().change_times("nope")


class TestValidateLog:
    def test_well_formed(self, running_log):
        assert validate_log(running_log) == []
        assert validate_log(small_log()) == []

    def test_event_attribute_of_other_type(self):
        log = small_log(event_types={"Read": {}, "Write": {"student": "string"}})
        violations = validate_log(log)
        assert [v.kind for v in violations] == ["attribute-type-mismatch"]
        assert violations[0].ids == ("e1",)

    def test_dangling_e2o(self):
        log = small_log(e2o=(Relation("e1", "q", "ghost"),))
        violations = validate_log(log)
        assert [v.kind for v in violations] == ["dangling-reference"]
        assert "ghost" in violations[0].ids

    def test_equal_timestamp_conflict(self):
        log = small_log(object_attr_values=(
            ObjectAttributeValue("a1", "Points", T1, 2),
            ObjectAttributeValue("a1", "Points", T1, 5),
        ))
        assert [v.kind for v in validate_log(log)] == ["attribute-conflict"]

    def test_identical_duplicate_is_not_a_conflict(self):
        entry = ObjectAttributeValue("a1", "Points", T1, 2)
        assert validate_log(small_log(object_attr_values=(entry, entry))) == []

    def test_value_type_is_checked_without_coercion(self):
        log = small_log(object_attr_values=(ObjectAttributeValue("a1", "Points", T1, True),))
        assert [v.kind for v in validate_log(log)] == ["value-type-mismatch"]

    def test_overlapping_and_duplicate_ids(self):
        log = small_log(
            objects=(ObjectRecord("a1", "Assignment"), ObjectRecord("c1", "Course"), ObjectRecord("e1", "Course"),
                     ObjectRecord("c1", "Assignment")),
        )
        kinds = sorted(v.kind for v in validate_log(log))
        assert kinds == ["duplicate-id", "overlapping-ids"]

    def test_undeclared_type(self):
        log = small_log(events=(EventRecord("e1", "Read", T2), EventRecord("e2", "Jump", T3)))
        assert [v.kind for v in validate_log(log)] == ["undeclared-type"]

    @pytest.mark.parametrize("seed", range(20))
    def test_seeded_violations_are_found_exactly(self, seed):
        rng = random.Random(seed)
        log = random_log(rng, max_events=30, max_objects=8, max_changes=4)
        assert validate_log(log) == []
        injected = []
        events, objects = list(log.events), list(log.objects)
        e2o, o2o, values = list(log.e2o), list(log.o2o), list(log.object_attr_values)
        if rng.random() < 0.5:
            e2o.append(Relation(events[0].id if events else "e-missing", "q", "o-missing"))
            injected += ["dangling-reference"] * (1 if events else 2)
        if rng.random() < 0.5:
            o2o.append(Relation(objects[0].id, "q", "o-missing"))
            injected.append("dangling-reference")
        if rng.random() < 0.5 and values:
            v = values[0]
            other = "zz" if not isinstance(v.value, str) else 12345
            values.append(ObjectAttributeValue(v.object, v.name, v.time, other))
            injected += ["attribute-conflict", "value-type-mismatch"]
        if rng.random() < 0.5:
            values.append(ObjectAttributeValue(objects[0].id, "undeclared", BASE, 1))
            injected.append("attribute-type-mismatch")
        broken = OcelLog(
            events=tuple(events), objects=tuple(objects), event_types=log.event_types,
            object_types=log.object_types, event_attr_values=log.event_attr_values,
            object_attr_values=tuple(values), e2o=tuple(e2o), o2o=tuple(o2o),
        )
        assert sorted(v.kind for v in validate_log(broken)) == sorted(injected)


class TestObservedEventTypes:
    def test_empty(self):
        assert OcelLog().observed_event_types() == set()

    def test_running_example(self, running_log):
        scanned = set()
        for e in running_log.events:
            scanned.add(e.type)
        assert running_log.observed_event_types() == scanned == {
            "Publish Assignment", "Read Instruction", "Submit Assignment", "Update Points", "Release Course",
        }

    def test_same_type_twice(self):
        assert small_log().observed_event_types() == {"Read"}


def test_equality_ignores_order():
    a = small_log()
    b = small_log(
        events=tuple(reversed(a.events)),
        object_attr_values=tuple(reversed(a.object_attr_values)),
        objects=tuple(reversed(a.objects)),
    )
    assert a == b


def test_timestamp_helpers_round_trip():
    t = parse_timestamp("2024-03-01T10:00:00.123+02:00")
    assert format_timestamp(t) == "2024-03-01T08:00:00.123Z"
    assert parse_timestamp(format_timestamp(t)) == t
    fine = parse_timestamp("2024-03-01T10:00:00.123456Z")
    assert parse_timestamp(format_timestamp(fine)) == fine
    assert format_timestamp(parse_timestamp("0001-01-01T00:00:00Z")) == "0001-01-01T00:00:00.000Z"
