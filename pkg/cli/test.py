import json
from pathlib import Path

import numpy as np
import pytest
from pydantic import ValidationError

from oracles.annulus import annulus_lowest_eigenvalue
from oracles.types import AnnulusSpec
from transverse.errors import NumericalError

from . import run as run_module
from .checks import iter_checks
from .report import format_float, render_csv, render_report
from .run import EXIT_CONFIG, EXIT_HYPOTHESIS, EXIT_NUMERICAL, EXIT_OK, execute, load_config, main, run
from .types import CheckResult, RunConfig, SurfaceConfig

DATA = Path(__file__).parent / "data"
FLAT = np.pi ** 2 / 4


def config(name, **updates):
    base = load_config(str(DATA / name))
    return RunConfig.model_validate({**base.model_dump(by_alias=True), **updates}) if updates else base


# ----- report rendering -----

def test_format_float():
    assert format_float(0.1) == "0.10000000000000001"
    assert format_float(2.0) == "2"
    assert format_float(float("nan")) == "null"
    assert format_float(-float("inf")) == "null"
    assert format_float(np.float64(1.5)) == "1.5"


def test_render_report_layout():
    text = render_report({"b": 1, "a": [1.5, None, True], "c": {}, "d": []})
    assert text == '{\n  "b": 1,\n  "a": [\n    1.5,\n    null,\n    true\n  ],\n  "c": {},\n  "d": []\n}\n'
    assert list(json.loads(text)) == ["b", "a", "c", "d"]


def test_render_report_models_keep_field_order():
    check = CheckResult(name="x", passed=False, value=float("inf"), reference=0.25)
    parsed = json.loads(render_report(check))
    assert list(parsed) == ["name", "passed", "value", "reference", "tolerance", "detail"]
    assert parsed["value"] is None
    assert parsed["passed"] is False


def test_render_csv():
    rows = [
        {"param": 0.0, "lambda1": FLAT, "error_estimate": 1e-12, "flags": []},
        {"param": 1.0, "lambda1": 1.4458, "error_estimate": 2e-9, "flags": ["raw-decreasing", "free-endpoint"]},
    ]
    lines = render_csv(rows).splitlines()
    assert lines[0] == "param,lambda1,error_estimate,flags"
    assert lines[1] == f"0,{format(FLAT, '.17g')},9.9999999999999998e-13,"
    assert lines[2].endswith(",raw-decreasing|free-endpoint")


# ----- configuration -----

def test_sample_configs_validate():
    for path in sorted(DATA.glob("*.json")):
        assert load_config(str(path)).a > 0


@pytest.mark.parametrize("payload", [
    {"mode": "bound", "a": 1.0},
    {"mode": "lambda1", "a": 1.0},
    {"mode": "sweep", "a": 1.0, "pair": {"kappa1": 0, "kappa2": 0}},
    {"mode": "lambda1", "a": 1.0, "pair": {"kappa1": 0, "kappa2": 0}, "grid_n": 2},
    {"mode": "lambda1", "a": 0.0, "pair": {"kappa1": 0, "kappa2": 0}},
    {"mode": "plot", "a": 1.0},
])
def test_invalid_configs(payload):
    with pytest.raises(ValidationError):
        RunConfig.model_validate(payload)


def test_surface_source_exclusive():
    with pytest.raises(ValidationError):
        SurfaceConfig(name="sphere", chart="sphere.txt")
    with pytest.raises(ValidationError):
        SurfaceConfig()


def test_sweep_aliases():
    cfg = config("sweep_kappa2.json")
    assert cfg.sweep.start == 0.0 and cfg.sweep.stop == 1.0 and cfg.sweep.steps == 11
    assert cfg.sweep.model_dump(by_alias=True) == {"axis": "kappa2", "from": 0.0, "to": 1.0, "steps": 11}


# ----- modes -----

def test_bound_sphere_and_plane_are_flat():
    for name in ("bound_sphere.json", "bound_plane.json"):
        report = execute(config(name))["report"]
        assert report.lower_bound == pytest.approx(FLAT, abs=1e-6)


def test_bound_cylinder_is_annulus():
    data = execute(config("bound_cylinder.json"))
    report = data["report"]
    assert report.lower_bound == pytest.approx(annulus_lowest_eigenvalue(AnnulusSpec(r_in=1.0, r_out=3.0)), abs=1e-6)
    assert data["summary"].k1_minus == pytest.approx(0.0, abs=1e-14)


def test_bound_from_sampled_chart_matches_catalog():
    catalog = execute(config("bound_torus.json"))["report"]
    chart = execute(config("bound_torus_chart.json", surface={"chart": str(DATA / "torus_chart.txt")}))["report"]
    assert chart.lower_bound == pytest.approx(catalog.lower_bound, rel=1e-2)
    assert any("sampled" in line for line in chart.hypothesis.assumptions)


def test_lambda1_degenerate_pair_is_raw():
    result = execute(config("lambda1_degenerate.json"))["result"]
    assert result["convergence"] == "raw-decreasing"
    assert result["extrapolated"] is False
    assert "eigenvector" not in result
    values = [value for _, value in result["raw_values"]]
    assert all(b < a for a, b in zip(values, values[1:]))


def test_sweep_table(tmp_path):
    csv_path = tmp_path / "sweep.csv"
    cfg = config("sweep_kappa2.json", out=str(tmp_path / "sweep.json"), csv=str(csv_path))
    assert run(cfg) == EXIT_OK

    rows = json.loads((tmp_path / "sweep.json").read_text())["rows"]
    values = [row["lambda1"] for row in rows]
    assert len(rows) == 11
    assert all(b <= a + 1e-9 for a, b in zip(values, values[1:]))
    assert values[0] == pytest.approx(FLAT, rel=1e-8)
    assert values[-1] == pytest.approx(1.4458, rel=1e-4)
    assert rows[-1]["flags"] == ["free-endpoint"]
    assert all(row["error_estimate"] is not None for row in rows)

    lines = csv_path.read_text().splitlines()
    assert lines[0] == "param,lambda1,error_estimate,flags"
    assert len(lines) == 12


def test_sweep_over_half_width():
    cfg = RunConfig.model_validate({
        "mode": "sweep", "a": 1.0, "pair": {"kappa1": 0.0, "kappa2": 0.0},
        "sweep": {"axis": "a", "from": 0.5, "to": 2.0, "steps": 4},
    })
    rows = execute(cfg)["rows"]
    for row in rows:
        assert row["lambda1"] == pytest.approx(np.pi ** 2 / (2 * row["param"]) ** 2, rel=1e-8)


def test_reports_are_byte_identical(tmp_path):
    outputs = []
    for i in range(2):
        path = tmp_path / f"report{i}.json"
        assert main(["--config", str(DATA / "bound_plane.json"), "--out", str(path)]) == EXIT_OK
        outputs.append(path.read_bytes())
    assert outputs[0] == outputs[1]


def test_command_line_overrides(tmp_path):
    path = tmp_path / "plane.json"
    assert main(["--config", str(DATA / "bound_plane.json"), "--out", str(path), "--resolution", "16"]) == EXIT_OK
    report = json.loads(path.read_text())
    assert report["summary"]["sample_resolution"] == [16, 16]


def test_report_on_stdout(capsys):
    assert run(config("lambda1_degenerate.json")) == EXIT_OK
    captured = capsys.readouterr()
    assert json.loads(captured.out)["mode"] == "lambda1"


# ----- exit codes -----

def test_hypothesis_failure_exit_code(capsys):
    cfg = RunConfig.model_validate({"mode": "bound", "surface": {"name": "sphere", "parameters": {"R": 1.0}}, "a": 1.5})
    assert run(cfg) == EXIT_HYPOTHESIS
    captured = capsys.readouterr()
    assert captured.out == ""
    assert "Hypothesis failure" in captured.err


def test_config_errors(tmp_path, capsys):
    assert main(["--config", str(tmp_path / "missing.json")]) == EXIT_CONFIG
    broken = tmp_path / "broken.json"
    broken.write_text("{ not json")
    assert main(["--config", str(broken)]) == EXIT_CONFIG
    incomplete = tmp_path / "incomplete.json"
    incomplete.write_text('{"mode": "bound", "a": 1.0}')
    assert main(["--config", str(incomplete)]) == EXIT_CONFIG
    assert "Config error" in capsys.readouterr().err


def test_inadmissible_pair_is_config_error():
    cfg = RunConfig.model_validate({"mode": "lambda1", "a": 1.0, "pair": {"kappa1": 2.0, "kappa2": 0.0}})
    assert run(cfg) == EXIT_CONFIG


def test_numerical_failure_exit_code(monkeypatch):
    def failing(*args, **kwargs):
        raise NumericalError("inverse iteration did not converge", diagnostics={"iterations": 10_000})

    monkeypatch.setattr(run_module, "lambda1", failing)
    assert run(config("lambda1_degenerate.json")) == EXIT_NUMERICAL


def test_failed_check_exit_code(monkeypatch, capsys):
    monkeypatch.setattr(run_module, "iter_checks", lambda cfg: iter([CheckResult(name="broken", passed=False)]))
    assert run(RunConfig(mode="verify", a=1.0)) == EXIT_NUMERICAL
    assert "broken" in capsys.readouterr().err


# ----- verify -----

def test_verify_suite_passes(tmp_path):
    cfg = RunConfig.model_validate({
        "mode": "verify", "a": 1.0, "pair": {"kappa1": 0.5, "kappa2": -0.5},
        "draws": 200, "hardy_samples": 6, "out": str(tmp_path / "verify.json"),
    })
    assert run(cfg) == EXIT_OK
    report = json.loads((tmp_path / "verify.json").read_text())
    names = [check["name"] for check in report["checks"]]
    assert report["passed"] is True
    assert {"flat-exactness", "disk-endpoint", "wronskian", "floor-reduction", "hardy-residuals",
            "potential-inequality", "pair-cross-check", "degenerate-pair-decreasing"} <= set(names)


def test_degenerate_check_runs_the_whole_ladder():
    checks = {check.name: check for check in iter_checks(RunConfig(mode="verify", a=1.0, draws=10, hardy_samples=1))}
    degenerate = checks["degenerate-pair-decreasing"]
    assert degenerate.passed
    assert "8000" in degenerate.detail


def test_verify_at_other_half_width():
    cfg = RunConfig(mode="verify", a=0.5, draws=100, hardy_samples=3)
    failed = [check.name for check in iter_checks(cfg) if not check.passed]
    assert failed == []


def test_verify_rejects_surface_failing_hypothesis():
    cfg = RunConfig.model_validate({
        "mode": "verify", "a": 1.0, "surface": {"name": "sphere", "parameters": {"R": 0.5}}, "draws": 10,
    })
    assert run(cfg) == EXIT_HYPOTHESIS
