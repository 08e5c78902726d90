import json

import pytest
from conftest import cli

from toric_hms.cli import run
from toric_hms.jsonio import dumps
from toric_hms.resources import default_config_document


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip() else None), err


def test_catalog_list(capsys):
    code, doc, err = call(capsys, "catalog", "list")
    assert code == 0
    assert [d["name"] for d in doc] == ["P2", "P1xP1", "Bl1P2", "Bl2P2", "Bl3P2"]
    assert [d["normalized_volume"] for d in doc] == [3, 4, 4, 5, 6]


def test_fan_validate(capsys, tmp_path):
    code, doc, _ = call(capsys, "fan", "validate", "Bl3P2")
    assert code == 0 and doc["ok"]
    bad = tmp_path / "fan.json"
    bad.write_text(json.dumps({"name": "bad", "rays": [[1, 0], [0, 1], [-1, 0], [0, -1], [2, 1]]}))
    code, doc, _ = call(capsys, "fan", "validate", str(bad))
    assert code == 1 and not doc["ok"]
    broken = tmp_path / "broken.json"
    broken.write_text("{")
    assert call(capsys, "fan", "validate", str(broken))[0] == 2


def test_unknown_surface(capsys):
    code, doc, err = call(capsys, "fan", "validate", "NOPE")
    assert code == 2 and doc is None and "unknown surface" in err


def test_argparse_errors_exit_2(capsys):
    assert run(["mirror", "branch-trace", "Bl3P2"]) == 2
    assert "--path" in capsys.readouterr().err
    assert run(["nonsense"]) == 2
    capsys.readouterr()


def test_critical_points(capsys, tmp_path):
    out = tmp_path / "cp.json"
    code, doc, err = call(capsys, "mirror", "critical-points", "P2", "--json", str(out))
    assert code == 0 and len(doc) == 3
    assert json.loads(out.read_text()) == doc
    assert "Morse conditions hold" in err
    code, doc, _ = call(capsys, "mirror", "critical-points", "P2", "--coeffs", "1,0;2,0;3,0")
    assert code == 0 and len(doc) == 3


def test_branch_trace(capsys, tmp_path):
    svg = tmp_path / "t.svg"
    code, doc, err = call(capsys, "mirror", "branch-trace", "Bl3P2", "--path", "1", "--svg", str(svg))
    assert code == 0 and doc["trajectory"]["collision"]
    assert doc["ties"] and "warning" in err
    assert svg.read_text().count('class="root"') == 4
    assert call(capsys, "mirror", "branch-trace", "Bl3P2", "--path", "7")[0] == 2
    assert call(capsys, "mirror", "branch-trace", "P2", "--path", "1")[0] == 2


def test_algebra_commands(capsys):
    code, doc, _ = call(capsys, "algebra", "build")
    assert code == 0 and doc["objects"] == 6
    code, doc, _ = call(capsys, "algebra", "diff-appendix")
    assert code == 0 and len(doc["mismatches"]) == 1
    assert call(capsys, "algebra", "check")[0] == 0
    code, doc, _ = call(capsys, "algebra", "check", "--appendix")
    assert code == 1 and doc["violations"][0]["objects"] == [3, 4, 5, 6]


def test_fukaya_validate(capsys, tmp_path):
    code, doc, _ = call(capsys, "fukaya", "validate", "--config", "default")
    assert code == 0 and doc["ok"] and doc["grading"]["feasible"]
    assert {m["index"] for m in doc["maslov"]} == {0}
    broken = default_config_document()
    broken["punctures"].append("(1/2,0)")
    path = tmp_path / "c.json"
    path.write_text(json.dumps(broken))
    code, doc, _ = call(capsys, "fukaya", "validate", "--config", str(path))
    assert code == 1 and not doc["ok"]
    assert call(capsys, "fukaya", "validate", "--config", str(tmp_path / "missing.json"))[0] == 2
    broken["punctures"][0] = ["1/2", "0"]
    path.write_text(json.dumps(broken))
    assert call(capsys, "fukaya", "validate", "--config", str(path))[0] == 2


def test_fukaya_build(capsys):
    code, doc, _ = call(capsys, "fukaya", "build", "--config", "default")
    assert code == 0 and doc["objects"] == 6


def test_fukaya_triangles(capsys):
    code, doc, _ = call(capsys, "fukaya", "triangles", "--config", "default", "--triple", "1,4,6",
                        "--p1", "x1", "--p2", "x1v")
    assert code == 0
    (group,) = doc["groups"]
    assert len(group["triangles"]) == 1 and group["label"] == "e1"
    code, doc, _ = call(capsys, "fukaya", "triangles", "--config", "default", "--triple", "3,4,6",
                        "--p1", "x3", "--p2", "x1v")
    assert code == 0 and doc["groups"] == []
    code, doc, _ = call(capsys, "fukaya", "triangles", "--config", "default", "--triple", "1,4,5",
                        "--p1", "0", "--p2", "0")
    assert code == 0 and "label" not in doc["p1"]
    assert call(capsys, "fukaya", "triangles", "--config", "default", "--triple", "1,2,4",
                "--p1", "0", "--p2", "0")[0] == 2
    assert call(capsys, "fukaya", "triangles", "--config", "default", "--triple", "4,1,6",
                "--p1", "0", "--p2", "0")[0] == 2


def test_solve_config(capsys, tmp_path):
    out = tmp_path / "cfg.json"
    code, doc, _ = call(capsys, "solve", "config", "--surface", "Bl3P2", "--out", str(out))
    assert code == 0 and doc == default_config_document()
    code, doc, _ = call(capsys, "solve", "config", "--surface", "Bl3P2", "--budget", "1")
    assert code == 1 and doc["found"] is False and doc["searched"][0]["budget_exhausted"]
    assert call(capsys, "solve", "config", "--surface", "P2")[0] == 2


def test_verify_hms(capsys, tmp_path):
    cert = tmp_path / "cert.json"
    code, doc, _ = call(capsys, "verify", "hms", "--surface", "Bl3P2", "--config", "default",
                        "--emit-certificate", str(cert))
    assert code == 0 and doc["ok"] and doc["verification"]["ok"]
    assert json.loads(cert.read_text()) == doc["certificate"]
    assert call(capsys, "verify", "hms", "--surface", "P1xP1", "--config", "default")[0] == 2


def test_verify_hms_fails_on_moved_puncture(capsys, tmp_path):
    doc = default_config_document()
    doc["punctures"][0] = "(1/2,1/2)"
    path = tmp_path / "c.json"
    path.write_text(json.dumps(doc))
    code, out, _ = call(capsys, "verify", "hms", "--surface", "Bl3P2", "--config", str(path))
    assert code == 1 and out["reason"] == "invalid config"
    # a puncture moved into another face keeps the config valid but breaks the match
    doc["punctures"][0] = "(1/2,1/100)"
    path.write_text(json.dumps(doc))
    code, out, _ = call(capsys, "verify", "hms", "--surface", "Bl3P2", "--config", str(path))
    assert code == 1 and not out["ok"] and "reason" not in out
    assert out["search"]["leaves"] == 0 and out["search"]["pruned"] == out["search"]["total"]


def test_render_torus(capsys, tmp_path):
    svg = tmp_path / "t.svg"
    code, doc, _ = call(capsys, "render", "torus", "--config", "default", "--svg", str(svg))
    assert code == 0 and (doc["cycles"], doc["punctures"], doc["dots"], doc["labels"]) == (6, 6, 6, 0)
    cert = tmp_path / "cert.json"
    call(capsys, "verify", "hms", "--surface", "Bl3P2", "--config", "default", "--emit-certificate", str(cert))
    code, doc, _ = call(capsys, "render", "torus", "--config", "default", "--svg", str(svg),
                        "--certificate", str(cert))
    assert code == 0 and doc["labels"] == 21
    cert.write_text("[")
    assert call(capsys, "render", "torus", "--config", "default", "--svg", str(svg),
                "--certificate", str(cert))[0] == 2


def test_module_entry_point():
    rc, doc, stdout, _ = cli("algebra", "build")
    assert rc == 0 and stdout == dumps(doc) + "\n"
