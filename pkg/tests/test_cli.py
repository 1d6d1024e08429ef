import json

import pytest

from jordankit import load_config, main, parse_arguments, resolve_settings
from jordankit.primitives import PermElement
from jordankit.survey import parse_records

S3_DEFINITION = {
    "name": "S3",
    "generators": [
        PermElement.from_cycles(3, [0, 1]).to_literal(),
        PermElement.from_cycles(3, [0, 1, 2]).to_literal(),
    ],
}

SMALL_CATALOG = """\
- {name: C6, family: cyclic, params: {m: 6}}
- {name: "SL(2,3)", family: SL, params: {n: 2, p: 3}}
- {name: S3xC2, family: product, params: {left: {family: symmetric, params: {n: 3}}, right: {family: cyclic, params: {m: 2}}}}
"""


@pytest.fixture
def workdir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    (tmp_path / "s3.json").write_text(json.dumps(S3_DEFINITION))
    (tmp_path / "catalog.yml").write_text(SMALL_CATALOG)
    return tmp_path


def run(capsys, *arguments):
    status = main(list(arguments))
    captured = capsys.readouterr()
    return status, captured.out, captured.err


def test_closure(workdir, capsys):
    status, out, err = run(capsys, "closure", "s3.json")
    assert status == 0
    payload = json.loads(out)
    assert payload["order"] == 6
    assert payload["exponent"] == 6
    assert payload["is_abelian"] is False
    assert "WARNING: config file not found" in err


def test_closure_respects_the_cap(workdir, capsys):
    status, out, err = run(capsys, "closure", "s3.json", "--cap", "5")
    assert status == 1
    assert out == ""
    assert "Error:" in err


def test_analyze_catalog_entry(workdir, capsys):
    status, out, _ = run(capsys, "analyze", "--entry", "SL(2,3)", "--p", "3")
    assert status == 0
    report = json.loads(out)
    assert report["min_index"] == 12
    assert report["center_order"] == 2
    assert report["sylow_is_normal"] is False


def test_analyze_group_file(workdir, capsys):
    status, out, _ = run(capsys, "analyze", "--group", "s3.json", "--p", "2")
    assert status == 0
    report = json.loads(out)
    assert report["min_index"] == 2
    assert report["chermak_delgado_order"] == 3


def test_analyze_needs_one_source(workdir, capsys):
    status, _, err = run(capsys, "analyze")
    assert status == 1
    assert "--group or --entry" in err
    status, _, _ = run(capsys, "analyze", "--entry", "no-such-group")
    assert status == 1


def test_invalid_prime(workdir, capsys):
    status, _, err = run(capsys, "analyze", "--entry", "S3", "--p", "4")
    assert status == 1
    assert "--p needs to be a prime" in err


def test_witness_product(workdir, capsys):
    status, out, _ = run(capsys, "witness", "product", "--entry", "S3xS3")
    assert status == 0
    report = json.loads(out)
    assert report["construction"] == "product"
    assert report["index"] == 4
    assert report["bound"] == 4
    assert all(report["certificates"].values())


def test_witness_quotient_constructions(workdir, capsys):
    status, out, _ = run(capsys, "witness", "quotient", "--entry", "SL(2,3)/Z", "--p", "3")
    assert status == 0
    assert json.loads(out)["index"] == 12
    status, out, _ = run(
        capsys, "witness", "quotient", "--entry", "S3xC2/A3", "--p", "3", "--construction", "sylow-split",
    )
    assert status == 0
    assert json.loads(out)["index"] == 1


def test_witness_missing_structure(workdir, capsys):
    status, _, err = run(capsys, "witness", "product", "--entry", "S3")
    assert status == 1
    assert "S3 has no direct product structure" in err


def test_witness_falsified_bound_exits_with_2(workdir, capsys):
    status, out, err = run(
        capsys, "witness", "quotient", "--entry", "S3xC2/A3", "--p", "3",
        "--construction", "sylow-split", "--bound", "0",
    )
    assert status == 2
    assert json.loads(out)["bound_satisfied"] is False
    assert "Bound falsified" in err


def test_witness_complement(workdir, capsys):
    status, out, _ = run(capsys, "witness", "sz", "--entry", "C3:C4", "--kernel", "sylow:3")
    assert status == 0
    payload = json.loads(out)
    assert payload["kernel_order"] == 3
    assert payload["complement_order"] == 4


def test_witness_conjugate_intersection(workdir, capsys):
    status, out, _ = run(capsys, "witness", "conj-intersect", "--entry", "D5", "--chermak-delgado")
    assert status == 0
    report = json.loads(out)
    assert report["index"] == 2
    assert "chermak_delgado_index" in report["chain_values"]


def test_witness_lifting(workdir, capsys):
    status, out, _ = run(capsys, "witness", "lifting", "--entry", "C3:C4>C3", "--r", "1")
    assert status == 0
    payload = json.loads(out)
    assert payload["kernel_order"] == 3
    assert payload["quotient_order"] == 4
    # 3 does not divide 4
    assert payload["holds"] is False


def test_constants(workdir, capsys):
    (workdir / "profile.yml").write_text("c_G: 2\nr_G: 1\nn: 2\nkp_order: 1\nell_X: 2\n")
    status, out, _ = run(capsys, "constants", "profile.yml", "--jn", "60", "--jpn", "1")
    assert status == 0
    payload = json.loads(out)
    assert payload["J_G"] == 7200
    assert payload["e_G"] == 12
    assert payload["J_X"] == 7200
    assert payload["profile"]["c_G"] == 2


def test_constants_rejects_bad_profiles(workdir, capsys):
    (workdir / "profile.yml").write_text("c_G: 0\nr_G: 1\nn: 2\nkp_order: 1\n")
    status, _, _ = run(capsys, "constants", "profile.yml", "--jn", "60", "--jpn", "1")
    assert status == 1


def test_survey_and_fit(workdir, capsys):
    status, out, _ = run(
        capsys, "survey", "--catalog", "catalog.yml", "--p", "2", "--quiet", "--out", "survey.jsonl",
    )
    assert status == 0
    assert out == ""
    records = parse_records((workdir / "survey.jsonl").read_text(), "jsonl")
    assert [r.name for r in records] == ["C6", "SL(2,3)", "S3xC2"]
    assert records[0].ratio == "1/4"

    status, out, err = run(capsys, "fit", "survey.jsonl")
    assert status == 0
    fitted = [json.loads(line) for line in out.splitlines()]
    assert {f["family"] for f in fitted} == {"cyclic", "SL", "product"}
    assert "Fitted J'" in err


def test_survey_csv_to_stdout(workdir, capsys):
    status, out, _ = run(capsys, "survey", "--catalog", "catalog.yml", "--format", "csv", "--quiet")
    assert status == 0
    assert len(parse_records(out, "csv")) == 3


def test_survey_probe_exits_with_2(workdir, capsys):
    status, _, err = run(
        capsys, "survey", "--catalog", "catalog.yml", "--p", "3", "--jp", "1", "--e", "1", "--quiet",
    )
    assert status == 2
    assert "Bound falsified on SL(2,3)" in err


def test_survey_error_exits_with_1(workdir, capsys):
    (workdir / "catalog.yml").write_text("- {name: A2, family: alternating, params: {n: 2}}\n")
    status, _, err = run(capsys, "survey", "--catalog", "catalog.yml", "--quiet")
    assert status == 1
    assert "ERROR: A2" in err


def test_config_file_supplies_defaults(workdir, capsys):
    (workdir / "config.yml").write_text("p: 3\nformat: csv\n")
    status, out, err = run(capsys, "survey", "--catalog", "catalog.yml", "--quiet")
    assert status == 0
    assert "Using config.yml found in current directory" in err
    records = parse_records(out, "csv")
    assert {r.p for r in records} == {3}
    # flags win over the config file
    status, out, _ = run(capsys, "survey", "--catalog", "catalog.yml", "--quiet", "--format", "jsonl")
    assert parse_records(out, "jsonl")[0].p == 3


def test_explicit_config_path(workdir, capsys):
    (workdir / "other.yml").write_text("cap: 4\n")
    status, _, err = run(capsys, "closure", "s3.json", "--config", "other.yml")
    assert status == 1
    assert "Using provided config file: other.yml" in err


def test_resolve_settings(workdir):
    args = parse_arguments().parse_args(["survey", "--jobs", "2", "--p", "defining"])
    settings = resolve_settings(args, {"seed": 5, "jobs": 4, "unrelated": 1})
    assert settings["jobs"] == 2
    assert settings["seed"] == 5
    assert settings["p"] == "defining"
    assert "unrelated" not in settings
    with pytest.raises(ValueError):
        resolve_settings(parse_arguments().parse_args(["survey", "--jobs", "0"]), {})
    with pytest.raises(ValueError):
        resolve_settings(parse_arguments().parse_args(["survey", "--format", "xml"]), {})


def test_missing_config_file(workdir):
    assert load_config() == {}
    with pytest.raises(FileNotFoundError):
        load_config("missing.yml")
