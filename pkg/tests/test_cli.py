import json
import subprocess
import sys

import pytest
from conftest import RUNNING_EXAMPLE

from ocel2tekg.cli import main
from ocel2tekg.export import load_jsonl


def test_transform_writes_file(tmp_path):
    out = tmp_path / "g.cypher"
    assert main(["transform", str(RUNNING_EXAMPLE), "--format", "cypher", "--out", str(out)]) == 0
    assert out.read_text().count("CREATE (:Event") == 7


def test_transform_to_stdout(capsysbinary):
    assert main(["transform", str(RUNNING_EXAMPLE)]) == 0
    g = load_jsonl(capsysbinary.readouterr().out)
    assert g.number_of_nodes() == 20


def test_transform_flags(capsys):
    assert main(["stats", str(RUNNING_EXAMPLE), "--class-dfc", "--reify-update-edges"]) == 0
    stats = json.loads(capsys.readouterr().out)
    assert stats["edges_by_label"]["dfc"] > 0
    assert stats["nodes_by_label"]["Snapshot"] == 5


def test_stats(capsys):
    assert main(["stats", str(RUNNING_EXAMPLE)]) == 0
    stats = json.loads(capsys.readouterr().out)
    assert stats["snapshots"] == 3
    assert stats["nodes"] == 20


def broken_log(tmp_path):
    raw = json.loads(RUNNING_EXAMPLE.read_bytes())
    raw["events"][0]["relationships"].append({"objectId": "ghost", "qualifier": "x"})
    path = tmp_path / "broken.jsonocel"
    path.write_text(json.dumps(raw))
    return path


def test_validate_reports_violation(tmp_path, capsys):
    assert main(["validate", str(broken_log(tmp_path))]) == 1
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 1 and "ghost" in lines[0]


def test_validate_clean_log(capsys):
    assert main(["validate", str(RUNNING_EXAMPLE)]) == 0
    assert capsys.readouterr().out == ""


def test_transform_refuses_invalid_log(tmp_path, capsys):
    assert main(["transform", str(broken_log(tmp_path))]) == 1
    assert "dangling-reference" in capsys.readouterr().err


def test_unparsable_input(tmp_path, capsys):
    path = tmp_path / "bad.jsonocel"
    path.write_text("{not json")
    assert main(["transform", str(path)]) == 1
    captured = capsys.readouterr()
    assert captured.out == "" and "bad.jsonocel" in captured.err


def test_missing_file(tmp_path, capsys):
    assert main(["stats", str(tmp_path / "nope.json")]) == 1
    assert capsys.readouterr().err


@pytest.mark.parametrize("argv", [["transform"], ["transform", "x", "--format", "dot"], ["frobnicate"], []])
def test_bad_arguments_exit_2(argv):
    with pytest.raises(SystemExit) as info:
        main(argv)
    assert info.value.code == 2


def test_module_entry_point_honours_log_level(tmp_path):
    raw = json.loads(RUNNING_EXAMPLE.read_bytes())
    raw["objects"][0]["attributes"].append({"name": raw["objects"][0]["attributes"][0]["name"],
                                            "value": raw["objects"][0]["attributes"][0]["value"]})
    path = tmp_path / "untimed.jsonocel"
    path.write_text(json.dumps(raw))
    cmd = [sys.executable, "-m", "ocel2tekg", "stats", str(path)]
    loud = subprocess.run(cmd, capture_output=True, text=True, env={"OCEL2TEKG_LOG_LEVEL": "warn"})
    quiet = subprocess.run(cmd, capture_output=True, text=True, env={"OCEL2TEKG_LOG_LEVEL": "error"})
    assert loud.returncode == quiet.returncode == 0
    assert "WARNING" in loud.stderr
    assert quiet.stderr == ""
