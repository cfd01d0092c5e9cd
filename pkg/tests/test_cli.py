"""CLI behavior: formats, determinism, exit codes, schema-valid JSON."""

import json
from importlib import resources

import jsonschema
import pytest
from click.testing import CliRunner

from qcf.cli import main


@pytest.fixture(scope="module")
def schema():
    text = resources.files("qcf").joinpath("schemas/report.schema.json").read_text()
    return json.loads(text)


@pytest.fixture
def runner():
    return CliRunner()


def invoke(runner, args, **kwargs):
    result = runner.invoke(main, args, catch_exceptions=False, **kwargs)
    return result


def test_intervals_text(runner):
    res = invoke(runner, ["intervals", "--model", "sphere", "--dim", "3"])
    assert res.exit_code == 0
    assert "S^3: tau in (-3/8, 1/3) -> StrictlyStable" in res.output


def test_intervals_json_schema(runner, schema):
    res = invoke(runner, ["intervals", "--model", "sphere:3", "--format", "json"])
    assert res.exit_code == 0
    obj = json.loads(res.stdout)
    jsonschema.validate(obj, schema)
    assert obj["kind"] == "interval"
    assert obj["lo"] == "-3/8"
    assert obj["hi"] == "1/3"
    assert obj["lo_open"] and obj["hi_open"]


def test_intervals_unbounded_side(runner, schema):
    res = invoke(runner, ["intervals", "--model", "hyperbolic", "--dim", "3",
                          "--format", "json"])
    obj = json.loads(res.stdout)
    jsonschema.validate(obj, schema)
    assert obj["hi"] == "inf"
    assert obj["verdict_inside"] == "StableBoundOnly"


def test_point_verdict_json(runner, schema):
    res = invoke(runner, ["intervals", "--model", "product", "--m", "2",
                          "--tau", "0", "--format", "json"])
    assert res.exit_code == 0
    obj = json.loads(res.stdout)
    jsonschema.validate(obj, schema)
    assert obj["kind"] == "verdict"
    assert obj["verdict"] == "FailsTT"
    assert obj["witness"] == "4"
    assert obj["tau"] == {"num": 0, "den": 1}


def test_verdict_csv(runner):
    res = invoke(runner, ["intervals", "--model", "product:2", "--tau", "0",
                          "--format", "csv"])
    lines = res.output.splitlines()
    assert lines[0] == "model,tau,verdict,witness"
    assert lines[1] == "product:2,0,FailsTT,4"


def test_unknown_model_exit_code(runner):
    res = runner.invoke(main, ["intervals", "--model", "banana"])
    assert res.exit_code == 2
    assert "unknown model" in res.stderr
    assert "sphere:3" in res.stderr  # the listing names what exists


def test_insufficient_data_exit_code(runner):
    res = runner.invoke(main, ["intervals", "--model", "hyperbolic",
                               "--dim", "5", "--tau", "-1/6"])
    assert res.exit_code == 3
    assert "lambda_1" in res.stderr


def test_lambda1_override_flows_through(runner):
    res = invoke(runner, ["intervals", "--model", "hyperbolic", "--dim", "5",
                          "--tau", "-1/6", "--lambda1", "9/2"])
    assert res.exit_code == 0
    assert "StableBoundOnly" in res.output


def test_rigidity_text_includes_bach(runner):
    res = invoke(runner, ["rigidity", "--model", "product:2"])
    assert res.exit_code == 0
    assert "tau = -1/2 (mu = 0)" in res.output
    assert "Bach-rigid: yes; strict Weyl minimizer: yes" in res.output


def test_rigidity_json_schema(runner, schema):
    res = invoke(runner, ["rigidity", "--model", "cp", "--m", "2",
                          "--format", "json"])
    obj = json.loads(res.stdout)
    jsonschema.validate(obj, schema)
    assert obj["kind"] == "rigidity"
    assert obj["exceptional_taus"][0]["tau"] == "1/6"
    assert obj["bach"]["bach_rigid"] is True


def test_rigidity_mu_option(runner):
    res = invoke(runner, ["rigidity", "--model", "hyperbolic", "--dim", "5",
                          "--mu", "-5", "--format", "csv"])
    assert res.exit_code == 0
    lines = res.output.splitlines()
    assert lines[0] == "tau,mu,kernel"
    assert lines[1].startswith("-11/40,-5")


def test_berger_text(runner):
    res = invoke(runner, ["berger", "--tau", "1/3"])
    assert res.exit_code == 0
    assert "f_tau(1) = 24" in res.output
    assert "d3 = 568.8888" in res.output


def test_berger_json_with_critical_points(runner, schema):
    res = invoke(runner, ["berger", "--tau", "-2/5", "--critical",
                          "--derivatives", "1", "--format", "json"])
    obj = json.loads(res.stdout)
    jsonschema.validate(obj, schema)
    assert obj["kind"] == "berger"
    assert obj["tau"] == "-2/5"
    s2 = [p["s_squared"] for p in obj["critical_points"]]
    assert s2 == ["2/13", "1"]
    assert len(obj["derivatives"]) == 1


def test_curve_csv_header_and_determinism(runner):
    args = ["curve", "--family", "berger", "--tau", "1/3", "--points", "5",
            "--derivatives", "2"]
    first = invoke(runner, args).output
    second = invoke(runner, args).output
    assert first == second
    lines = first.splitlines()
    assert lines[0] == "param,value,d1,d2,d3,err1,err2,err3"
    assert len(lines) == 6
    # derivative columns filled, d3/err3 empty
    assert lines[1].split(",")[2] != ""
    assert lines[1].split(",")[4] == ""


def test_curve_jobs_do_not_change_output(runner):
    base = ["curve", "--family", "product", "--tau", "-1/2", "--points", "7"]
    seq = invoke(runner, base).output
    par = invoke(runner, base + ["--jobs", "4"]).output
    assert seq == par


def test_curve_json_schema(runner, schema):
    res = invoke(runner, ["curve", "--family", "product", "--tau", "0",
                          "--points", "3", "--format", "json"])
    obj = json.loads(res.stdout)
    jsonschema.validate(obj, schema)
    assert obj["kind"] == "curve"
    assert len(obj["rows"]) == 3
    assert obj["rows"][0]["d1"] is None


def test_grad_json_schema_and_values(runner, schema):
    res = invoke(runner, ["grad", "--group", "su2", "--diag", "1,1,2",
                          "--tau", "1/4", "--format", "json"])
    obj = json.loads(res.stdout)
    jsonschema.validate(obj, schema)
    assert obj["kind"] == "grad"
    diag = [obj["gradient"][i][i] for i in range(3)]
    assert diag == pytest.approx([-22.0, -22.0, 68.0], abs=1e-9)
    assert obj["divergence_norm"] < 1e-10


def test_grad_rejects_bad_diag(runner):
    res = runner.invoke(main, ["grad", "--diag", "1,1", "--tau", "0"])
    assert res.exit_code == 2
    res = runner.invoke(main, ["grad", "--diag", "1,-1,1", "--tau", "0"])
    assert res.exit_code == 2
    res = runner.invoke(main, ["grad", "--diag", "a,b,c", "--tau", "0"])
    assert res.exit_code == 2


def test_symbol_degenerate_phrase(runner):
    res = invoke(runner, ["symbol", "--dim", "5", "--tau", "-5/16",
                          "--trials", "2"])
    assert res.exit_code == 0
    assert "degenerate; kernel contains the metric direction" in res.output


def test_symbol_json_schema(runner, schema):
    res = invoke(runner, ["symbol", "--dim", "4", "--tau", "0.1",
                          "--trials", "5", "--format", "json"])
    obj = json.loads(res.stdout)
    jsonschema.validate(obj, schema)
    assert obj["kind"] == "symbol"
    assert obj["injective"] is True


def test_symbol_requires_tau(runner):
    res = runner.invoke(main, ["symbol", "--dim", "4"])
    assert res.exit_code == 2
    assert "--tau" in res.stderr


def test_conformal_killing_json(runner, schema):
    res = invoke(runner, ["symbol", "--dim", "2", "--conformal-killing",
                          "--format", "json"])
    obj = json.loads(res.stdout)
    jsonschema.validate(obj, schema)
    assert obj["kind"] == "conformal_killing"
    assert obj["degenerate"] is True

    res = invoke(runner, ["symbol", "--dim", "3", "--conformal-killing"])
    assert "injective" in res.output


def test_bishop_json_schema(runner, schema):
    res = invoke(runner, ["bishop", "--vol-g", "19.74", "--vol-gt", "21.7",
                          "--dim", "3", "--ftilde0", "700",
                          "--ric-upper-ok", "--ric-lower-ok",
                          "--format", "json"])
    obj = json.loads(res.stdout)
    jsonschema.validate(obj, schema)
    assert obj["kind"] == "bishop"
    assert obj["conclusion"] == "VolumeAtLeast"


def test_verify_filter_and_exit(runner, schema):
    res = invoke(runner, ["verify", "--filter", "gauss"])
    assert res.exit_code == 0
    assert "[PASS] 09-gauss-bonnet" in res.output
    assert "overall: PASS" in res.output
    assert "elapsed:" in res.stderr
    assert "elapsed:" not in res.stdout

    res = invoke(runner, ["verify", "--filter", "gauss", "--format", "json"])
    obj = json.loads(res.stdout)
    jsonschema.validate(obj, schema)
    assert obj["kind"] == "verify"
    assert obj["all_passed"] is True


def test_verify_fails_on_corrupted_catalog(runner, tmp_path, monkeypatch):
    from qcf.catalog import builtin_catalog

    obj = builtin_catalog()["cp:2"].to_json()
    obj["tt"]["known"][0]["mu"] = "30"
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"schema_version": 1, "models": [obj]}))
    monkeypatch.setenv("QCF_CATALOG", str(path))
    res = runner.invoke(main, ["verify", "--filter", "catalog"])
    assert res.exit_code == 1
    assert "[FAIL] 00-catalog" in res.output
    assert "complex-projective identity" in res.output


def test_verify_stdout_byte_identical(runner):
    a = invoke(runner, ["verify", "--filter", "intervals"])
    b = invoke(runner, ["verify", "--filter", "intervals"])
    assert a.stdout == b.stdout
