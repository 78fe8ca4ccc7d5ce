import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from neutro.commands import norms_check
from neutro.main import EXIT_CHECK_FAILED, EXIT_CONFIG, EXIT_OK, EXIT_RUNTIME, cli

CONFIGS = Path(__file__).resolve().parent.parent / "configs"

LINE = {"backend": "euclidean", "dimension": 1, "lower": [-10.0], "upper": [10.0]}


@pytest.fixture
def runner():
    return CliRunner()


def invoke(runner, command, config, out_dir, *extra):
    return runner.invoke(cli, [command, "--config", str(config), "--output", str(out_dir), *extra])


def read_report(out_dir, command):
    return json.loads((Path(out_dir) / f"{command}.report.json").read_text(encoding="utf-8"))


def test_solve_half_map(runner, tmp_path):
    result = invoke(runner, "solve", CONFIGS / "solve_half.json", tmp_path)
    assert result.exit_code == EXIT_OK, result.output

    report = read_report(tmp_path, "solve")
    assert report["passed"] is True
    assert report["result"]["point"][0] == pytest.approx(2.0, abs=1e-8)
    assert report["uniqueness"]["status"] == "unique"
    assert report["certificate"]["ratio"] == pytest.approx(0.5, abs=0.02)
    assert report["config"]["seed"] == 7

    trace = (tmp_path / "solve.trace.csv").read_text().splitlines()
    assert trace[0] == "iter,h_residual,G,B,Y"
    assert len(trace) == report["result"]["iterations"] + 1


def test_solve_trace_as_json(runner, tmp_path):
    result = invoke(runner, "solve", CONFIGS / "solve_half.json", tmp_path, "--format", "json")
    assert result.exit_code == EXIT_OK, result.output
    rows = json.loads((tmp_path / "solve.trace.json").read_text())
    assert rows[0]["iter"] == 1
    assert read_report(tmp_path, "solve")["trace_file"] == "solve.trace.json"


def test_verify_axioms_on_sabotaged_table(runner, tmp_path):
    result = invoke(runner, "verify-axioms", CONFIGS / "sabotaged_viii.json", tmp_path)
    assert result.exit_code == EXIT_CHECK_FAILED, result.output

    outcomes = {o["axiom"]: o for o in read_report(tmp_path, "verify-axioms")["axioms"]["outcomes"]}
    assert [ax for ax, o in outcomes.items() if not o["passed"]] == ["viii"]
    assert outcomes["viii"]["witness"]["values"]["B"] == 0.0


def test_verify_axioms_induced_line(runner, tmp_path):
    result = invoke(runner, "verify-axioms", CONFIGS / "verify_axioms_line.json", tmp_path, "--samples", "200")
    assert result.exit_code == EXIT_OK, result.output
    report = read_report(tmp_path, "verify-axioms")
    assert report["crisp"]["passed"] is True
    assert report["config"]["sampling"]["samples"] == 200


def test_norms_check(runner, tmp_path):
    result = invoke(runner, "norms-check", CONFIGS / "norms_check.json", tmp_path, "--samples", "2000")
    assert result.exit_code == EXIT_OK, result.output
    report = read_report(tmp_path, "norms-check")
    assert len(report["operations"]) == 6
    assert report["pair"]["eps_star"]["0.5"] == pytest.approx(0.2928, abs=1e-4)


def test_reports_are_byte_identical(runner, tmp_path):
    config = CONFIGS / "sabotaged_viii.json"
    invoke(runner, "verify-axioms", config, tmp_path)
    first = (tmp_path / "verify-axioms.report.json").read_bytes()
    invoke(runner, "verify-axioms", config, tmp_path)
    assert (tmp_path / "verify-axioms.report.json").read_bytes() == first


def test_seed_override_is_echoed(runner, tmp_path):
    result = invoke(runner, "verify-axioms", CONFIGS / "sabotaged_viii.json", tmp_path, "--seed", "99")
    assert result.exit_code == EXIT_CHECK_FAILED
    assert read_report(tmp_path, "verify-axioms")["config"]["seed"] == 99


def test_unknown_norm_is_config_error(runner, tmp_path, write_config):
    config = write_config({"seed": 1, "space": LINE, "norms": {"tnorm": "prod"}})
    out = tmp_path / "reports"
    result = invoke(runner, "verify-axioms", config, out)
    assert result.exit_code == EXIT_CONFIG
    assert "línea" in result.output
    assert "tnorm" in result.output
    assert not out.exists() or not any(out.iterdir())


def test_malformed_json_reports_line(runner, tmp_path):
    config = tmp_path / "broken.json"
    config.write_text('{\n  "seed": 1,\n  "space": {,\n}\n')
    result = invoke(runner, "solve", config, tmp_path / "reports")
    assert result.exit_code == EXIT_CONFIG
    assert "línea 3" in result.output


def test_missing_seed_and_missing_csv(runner, tmp_path, write_config):
    result = invoke(runner, "verify-axioms", write_config({"space": LINE}), tmp_path)
    assert result.exit_code == EXIT_CONFIG

    config = write_config({
        "seed": 1,
        "space": {"backend": "finite_table", "csv": "nowhere.csv"},
    }, name="missing_csv.json")
    result = invoke(runner, "verify-axioms", config, tmp_path)
    assert result.exit_code == EXIT_CONFIG
    assert "nowhere.csv" in result.output


def test_contraction_requires_map(runner, tmp_path, write_config):
    result = invoke(runner, "check-contraction", write_config({"seed": 1, "space": LINE}), tmp_path / "reports")
    assert result.exit_code == EXIT_CONFIG
    assert not (tmp_path / "reports" / "check-contraction.report.json").exists()


def test_check_contraction_half_map(runner, tmp_path):
    result = invoke(runner, "check-contraction", CONFIGS / "contraction_half.json", tmp_path, "--samples", "200")
    # k_B y k_Y no bajan de 1 en modo completo
    assert result.exit_code == EXIT_CHECK_FAILED, result.output
    report = read_report(tmp_path, "check-contraction")
    assert report["contraction"]["k_G"] == pytest.approx(0.5, abs=1e-3)
    assert report["contraction"]["is_nc"] is False
    assert report["power"]["passed"] is True
    assert report["invariance"]["passed"] is True
    assert report["invariance"]["r0"] == pytest.approx(2.0, abs=1e-5)


def test_quasi_metric_small_run(runner, tmp_path, write_config):
    config = write_config({
        "seed": 3,
        "space": LINE,
        "quasi": {"pairs": 20, "triples": 40, "ball": {"center": [0.0], "eps": 0.5, "lam": 1.0, "probes": 20}},
    })
    result = invoke(runner, "quasi-metric", config, tmp_path)
    assert result.exit_code == EXIT_OK, result.output
    report = read_report(tmp_path, "quasi-metric")
    assert report["table"]["rows"] == 20 * 5
    assert report["table"]["max_induced_gap"] <= 1e-6
    lines = (tmp_path / "quasi-metric.table.csv").read_text().splitlines()
    assert lines[0].split(",")[:4] == ["a", "b", "epsilon", "h"]
    assert len(lines) == 101


def test_runtime_error_keeps_partial_report(runner, tmp_path, write_config):
    config = write_config({"seed": 3, "space": LINE, "quasi": {"lambda_max": 0.5, "pairs": 5, "triples": 5}})
    result = invoke(runner, "quasi-metric", config, tmp_path)
    assert result.exit_code == EXIT_RUNTIME
    report = read_report(tmp_path, "quasi-metric")
    assert report["error"].startswith("CeilingTooSmallError")
    assert report["table"]["rows"] < 5 * 5
    assert (tmp_path / "quasi-metric.table.csv").exists()


def test_solve_refuses_unacknowledged_non_nc_map(runner, tmp_path, write_config):
    config = write_config({
        "seed": 2,
        "space": LINE,
        "map": {"kind": "affine", "matrix": [[0.5]], "offset": [1.0]},
        "sampling": {"samples": 50},
        "solver": {"x0": [0.0]},
    })
    result = invoke(runner, "solve", config, tmp_path)
    assert result.exit_code == EXIT_RUNTIME
    report = read_report(tmp_path, "solve")
    assert report["contraction"]["is_nc"] is False
    assert "result" not in report
    assert report["error"].startswith("PreconditionError")


@pytest.mark.parametrize("command,config,extra", [
    ("solve", "solve_half.json", ()),
    ("quasi-metric", "quasi_metric_line.json", ("--samples", "10")),
    ("check-contraction", "contraction_half.json", ("--samples", "100")),
])
def test_reports_are_byte_identical_per_command(runner, tmp_path, command, config, extra):
    invoke(runner, command, CONFIGS / config, tmp_path, *extra)
    first = (tmp_path / f"{command}.report.json").read_bytes()
    invoke(runner, command, CONFIGS / config, tmp_path, *extra)
    assert (tmp_path / f"{command}.report.json").read_bytes() == first


def test_ragged_matrix_is_config_error(runner, tmp_path, write_config):
    config = write_config({"seed": 1, "space": {"backend": "finite_table", "matrix": [[0, 1], [1]]}})
    out = tmp_path / "reports"
    result = invoke(runner, "verify-axioms", config, out)
    assert result.exit_code == EXIT_CONFIG, result.output
    assert "space" in result.output
    assert not out.exists() or not any(out.iterdir())


def test_large_lambda_below_grid_is_config_error(runner, tmp_path, write_config):
    config = write_config({"seed": 1, "space": LINE, "sampling": {"large_lambda": 1.0}})
    result = invoke(runner, "verify-axioms", config, tmp_path / "reports")
    assert result.exit_code == EXIT_CONFIG
    assert "large_lambda" in result.output


def test_samples_override_reaches_quasi_metric(runner, tmp_path, write_config):
    config = write_config({"seed": 3, "space": LINE, "quasi": {"pairs": 50, "triples": 50}})
    result = invoke(runner, "quasi-metric", config, tmp_path, "--samples", "10")
    assert result.exit_code == EXIT_OK, result.output
    report = read_report(tmp_path, "quasi-metric")
    assert report["table"]["rows"] == 10 * 5
    assert report["config"]["quasi"]["pairs"] == 10
    assert report["family"]["triples"] == 10


def test_unexpected_exception_is_runtime_error(runner, tmp_path, monkeypatch):
    def explode(cfg, out_dir, report):
        report["started"] = True
        raise RuntimeError("fallo interno")

    monkeypatch.setattr(norms_check, "run", explode)
    result = invoke(runner, "norms-check", CONFIGS / "norms_check.json", tmp_path)
    assert result.exit_code == EXIT_RUNTIME
    report = read_report(tmp_path, "norms-check")
    assert report["error"] == "RuntimeError: fallo interno"
    assert report["started"] is True
