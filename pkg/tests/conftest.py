from __future__ import annotations

import sys
from datetime import datetime, timezone
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from ocel2tekg import TekgBuilder, read_ocel_json, transform  # noqa: E402

DATA = Path(__file__).parent / "data"
RUNNING_EXAMPLE = DATA / "running_example.jsonocel"

# instants of the running example
T1 = datetime(2023, 9, 1, 8, tzinfo=timezone.utc)
T2 = datetime(2023, 9, 5, 10, tzinfo=timezone.utc)
T3 = datetime(2023, 9, 20, 16, tzinfo=timezone.utc)
T4 = datetime(2024, 8, 15, 9, tzinfo=timezone.utc)
T5 = datetime(2024, 9, 1, 8, tzinfo=timezone.utc)
T6 = datetime(2024, 9, 5, 10, tzinfo=timezone.utc)
T7 = datetime(2024, 9, 20, 16, tzinfo=timezone.utc)


@pytest.fixture
def running_log():
    return read_ocel_json(RUNNING_EXAMPLE)


@pytest.fixture
def running_graph(running_log):
    return transform(running_log)


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(name): exit criterion reported in the terminal summary")


_results: dict[str, str] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    name = marker.args[0]
    if report.when == "call" or (report.when == "setup" and report.failed):
        previous = _results.get(name, "PASS")
        _results[name] = "FAIL" if report.failed or previous == "FAIL" else "PASS"


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_results, key=lambda n: int(n.split(".")[0])):
        terminalreporter.write_line(f"[{_results[name]}] {name}")


def pre_df_graph(log, config=None):
    """Graph after every construction phase except df edges."""
    b = TekgBuilder(log, config)
    b.add_log_node()
    b.add_classes()
    b.add_events()
    b.add_objects()
    b.link_o2o()
    b.reify_relations()
    b.link_e2o()
    return b.graph
