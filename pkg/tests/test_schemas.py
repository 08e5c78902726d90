import json

import jsonschema
import pytest

from toric_hms.catalog import SURFACES, load_surface
from toric_hms.cli import run
from toric_hms.resources import default_config_document, load_schema, schema_names

VALIDATOR = jsonschema.Draft202012Validator


def validate(doc, name):
    VALIDATOR(load_schema(name)).validate(doc)


def output(capsys, *argv, code=0):
    assert run(list(argv)) == code
    return json.loads(capsys.readouterr().out)


@pytest.mark.parametrize("name", schema_names())
def test_schemas_are_well_formed(name):
    VALIDATOR.check_schema(load_schema(name))


def test_schema_list():
    assert set(schema_names()) >= {"fan", "catalog", "critical_points", "branch_trace", "algebra", "diff",
                                   "associativity", "config", "config_report", "triangles", "certificate",
                                   "verify", "render", "solve_failure"}


@pytest.mark.parametrize("name", SURFACES)
def test_fans(name):
    validate(load_surface(name).to_json(), "fan")


def test_default_config():
    validate(default_config_document(), "config")


def test_config_schema_rejects_bad_documents():
    doc = default_config_document()
    doc["cycles"][0]["class"] = [1, 0, 0]
    with pytest.raises(jsonschema.ValidationError):
        validate(doc, "config")


def test_catalog_and_fan_reports(capsys):
    validate(output(capsys, "catalog", "list"), "catalog")
    validate(output(capsys, "fan", "validate", "P2"), "fan_report")


def test_mirror_outputs(capsys):
    validate(output(capsys, "mirror", "critical-points", "Bl3P2"), "critical_points")
    validate(output(capsys, "mirror", "branch-trace", "Bl3P2", "--path", "6"), "branch_trace")


def test_algebra_outputs(capsys):
    validate(output(capsys, "algebra", "build"), "algebra")
    validate(output(capsys, "algebra", "build", "--appendix"), "algebra")
    validate(output(capsys, "algebra", "diff-appendix"), "diff")
    validate(output(capsys, "algebra", "check"), "associativity")
    validate(output(capsys, "algebra", "check", "--appendix", code=1), "associativity")


def test_fukaya_outputs(capsys):
    validate(output(capsys, "fukaya", "validate", "--config", "default"), "config_report")
    validate(output(capsys, "fukaya", "build", "--config", "default"), "algebra")
    validate(output(capsys, "fukaya", "triangles", "--config", "default", "--triple", "1,4,5",
                    "--p1", "x1", "--p2", "x1v^x2v"), "triangles")


def test_verify_and_solve_outputs(capsys, tmp_path):
    doc = output(capsys, "verify", "hms", "--surface", "Bl3P2", "--config", "default")
    validate(doc, "verify")
    validate(doc["certificate"], "certificate")
    validate(output(capsys, "solve", "config", "--surface", "Bl3P2", "--budget", "1", code=1), "solve_failure")
    bad = default_config_document()
    bad["punctures"][0] = "(1/2,1/2)"
    path = tmp_path / "c.json"
    path.write_text(json.dumps(bad))
    validate(output(capsys, "verify", "hms", "--surface", "Bl3P2", "--config", str(path), code=1), "verify")


def test_render_output(capsys, tmp_path):
    validate(output(capsys, "render", "torus", "--config", "default", "--svg", str(tmp_path / "t.svg")), "render")
