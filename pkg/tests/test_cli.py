import json

import pytest

from qbrst import io
from qbrst.cli import main
from qbrst.presets import load_preset
from qbrst.scalar import Field


def test_validate_presets(capsys):
    assert main(["validate", "--preset", "sl2"]) == 0
    assert "all checks pass" in capsys.readouterr().out


def test_export_preset_round_trip(tmp_path):
    out = tmp_path / "gl11.json"
    assert main(["export-preset", "--preset", "gl1|1", "--out", str(out)]) == 0
    again = io.read_spec(out)
    assert io.spec_hash(again) == io.spec_hash(load_preset("gl1|1", Field()))
    assert main(["validate", "--input", str(out)]) == 0


def test_bad_literal_reports_position(tmp_path, capsys):
    rec = io.spec_record(load_preset("sl2", Field()))
    rec["c"][0][2] = "q+/2"
    path = tmp_path / "bad.json"
    path.write_text(io.dumps(rec))
    assert main(["validate", "--input", str(path)]) == 2
    err = capsys.readouterr().err
    assert "line" in err and "column" in err


@pytest.mark.parametrize("argv", [
    [],
    ["validate"],
    ["validate", "--preset", "nope"],
    ["uqgl", "--preset", "uq-gl", "--n", "5"],
    ["brst", "--preset", "sl2", "--q", "1"],
    ["brst", "--preset", "sl2", "--symbolic", "--q", "2"],
    ["brst", "--preset", "sl2", "--chi-cap", "99"],
])
def test_usage_errors_exit_two(argv, capsys):
    assert main(argv) == 2
    assert capsys.readouterr().err.startswith(("error", "usage"))


def _verify(path, jobs, capsys):
    code = main(["verify", str(path), "--format", "json", "--jobs", str(jobs)])
    rec = json.loads(capsys.readouterr().out)
    return code, rec


def test_brst_verify_deterministic_across_jobs(tmp_path, capsys):
    art = tmp_path / "sl2.brst.json"
    assert main(["brst", "--preset", "sl2", "--gamma-cap", "2", "--out", str(art)]) == 0
    capsys.readouterr()
    c1, r1 = _verify(art, 1, capsys)
    c4, r4 = _verify(art, 4, capsys)
    assert c1 == c4 == 0
    assert r1["sections"] == r4["sections"]


def test_tampered_artifact_is_rejected(tmp_path, capsys):
    art = tmp_path / "sl2.brst.json"
    assert main(["brst", "--preset", "sl2", "--gamma-cap", "2", "--out", str(art)]) == 0
    rec = json.loads(art.read_text())
    rec["spec"]["c"][0][2] = "5"
    art.write_text(json.dumps(rec))
    capsys.readouterr()
    assert main(["verify", str(art)]) == 2
