"""Tests for the movstab command line."""

import json

import pytest
from conftest import PROJECTS_DIR

from movstab.cli import main

P1XP1 = str(PROJECTS_DIR / "p1xp1" / "bundle.json")
BLOWUP = str(PROJECTS_DIR / "blowup_p2" / "bundle.json")


def _json(capsys):
    return json.loads(capsys.readouterr().out)


def test_no_command_prints_help(capsys):
    assert main([]) == 0
    assert "movstab" in capsys.readouterr().out


def test_version(capsys):
    with pytest.raises(SystemExit) as info:
        main(["--version"])
    assert info.value.code == 0
    assert "movstab" in capsys.readouterr().out


def test_run_single_bundle(capsys):
    assert main(["run", P1XP1]) == 0
    data = _json(capsys)
    assert data["bundle"] == "p1xp1"
    assert data["exit_code"] == 0


def test_run_several_bundles(capsys, corpus_paths):
    assert main(["run", "--workers", "2", *map(str, corpus_paths)]) == 0
    data = _json(capsys)
    assert [r["bundle"] for r in data] == ["p1xp1", "blowup_p2", "p2", "ruled_counterexample"]


def test_run_only_and_text(capsys):
    assert main(["run", P1XP1, "--only", "slope", "--format", "text"]) == 0
    out = capsys.readouterr().out
    assert "slope: ok" in out
    assert "signature" not in out


def test_validate(capsys):
    assert main(["validate", P1XP1]) == 0
    assert _json(capsys)["summary"]["queries"] == 26


def test_stability_shortcut(capsys):
    assert main(["stability", P1XP1, "--at", "1,1"]) == 0
    result = _json(capsys)["entries"][0]["result"]
    assert result == {"semistable": True, "stable": False, "slope": "1"}


def test_precondition_failure_sets_exit_code(capsys):
    assert main(["stability", P1XP1, "--at=-1,1"]) == 3
    entry = _json(capsys)["entries"][0]
    assert entry["error"]["message"] == "polarization not movable"


def test_malformed_polarization_is_a_schema_error(capsys):
    assert main(["hn", P1XP1, "--at", "1,x"]) == 2


def test_segment_shortcut(capsys):
    assert main(["segment", P1XP1, "--from", "1,0", "--to", "0,1", "--format", "text"]) == 0
    assert "semistable set: {1/2}" in capsys.readouterr().out


def test_walls_and_cone_shortcuts(capsys):
    assert main(["walls", P1XP1]) == 0
    walls = _json(capsys)["entries"][0]["result"]
    assert [w["member"] for w in walls] == [0, 1]
    assert main(["cone", BLOWUP, "--which", "nef", "--contains", "2,-1", "--mode", "interior"]) == 0
    assert _json(capsys)["entries"][0]["result"]["contains"] is True


def test_zariski_shortcut(capsys):
    assert main(["zariski", BLOWUP, "--divisor", "2,1"]) == 0
    result = _json(capsys)["entries"][0]["result"]
    assert result["positive"] == ["2", "0"]
    assert result["support"] == [{"curve": ["0", "1"], "coefficient": "1"}]


def test_numeric_gates(capsys):
    assert main(["flat-higher", "--n", "3", "--c1H", "0", "--c1sqH", "2", "--c2H", "2", "--rank", "2"]) == 0
    assert _json(capsys)["entries"][0]["result"]["label"] == "gate-passed"
    assert main(["torus-gate", "--n", "3", "--c2H", "1", "--no-kx-trivial"]) == 0
    result = _json(capsys)["entries"][0]["result"]
    assert result["failures"] == ["c2·H^(n-2) ≠ 0", "K_X not numerically trivial"]


def test_output_file(tmp_path, capsys):
    target = tmp_path / "out" / "report.json"
    assert main(["run", P1XP1, "--output", str(target)]) == 0
    assert json.loads(target.read_text(encoding="utf-8"))["bundle"] == "p1xp1"
    assert "Saved report" in capsys.readouterr().err


def test_missing_bundle(tmp_path, capsys):
    assert main(["run", str(tmp_path / "absent.json")]) == 2
    assert _json(capsys)["errors"][0]["type"] == "SchemaError"


def test_cone_dualize(capsys):
    assert main(["cone", BLOWUP, "--which", "eff", "--dualize", "--contains", "1,1", "--mode", "interior"]) == 0
    result = _json(capsys)["entries"][0]["result"]
    assert sorted(result["cone"]["generators"]) == [["1", "-1"], ["1", "0"]]
    assert result["contains"] is False
    assert main(["cone", BLOWUP, "--which", "eff", "--contains", "1,1", "--mode", "interior"]) == 0
    assert _json(capsys)["entries"][0]["result"]["contains"] is True


def test_zariski_curves_file(tmp_path, capsys):
    listed = tmp_path / "curves.json"
    listed.write_text(json.dumps([["0", "1"]]), encoding="utf-8")
    assert main(["zariski", BLOWUP, "--divisor", "2,1", "--curves", str(listed)]) == 0
    assert _json(capsys)["entries"][0]["result"]["positive"] == ["2", "0"]

    wrapped = tmp_path / "wrapped.json"
    wrapped.write_text(json.dumps({"curves": []}), encoding="utf-8")
    assert main(["zariski", BLOWUP, "--divisor", "2,1", "--curves", str(wrapped)]) == 3
    assert _json(capsys)["entries"][0]["error"]["message"] == "candidate list insufficient"


def test_zariski_bad_curves_file(tmp_path, capsys):
    broken = tmp_path / "curves.json"
    broken.write_text("5", encoding="utf-8")
    assert main(["zariski", BLOWUP, "--divisor", "2,1", "--curves", str(broken)]) == 2
    assert _json(capsys)["errors"][0]["type"] == "SchemaError"
    assert main(["zariski", BLOWUP, "--divisor", "2,1", "--curves", str(tmp_path / "absent.json")]) == 2


def test_alpha_is_an_alias_of_at(capsys):
    assert main(["stability", P1XP1, "--alpha", "1,1"]) == 0
    assert _json(capsys)["entries"][0]["result"]["semistable"] is True
