import json
import math

import pytest

from sinhgordon_tau import cli
from sinhgordon_tau.config import DEFAULT_TOL, ENV_TOL
from sinhgordon_tau.errors import SolverError


def _json(capsys):
    return json.loads(capsys.readouterr().out)


def test_connect_prints_constants(capsys):
    assert cli.main(["connect", "--nu", "0.5", "--sigma", "0.4"]) == 0
    rec = _json(capsys)
    assert rec["exponent_u"] == pytest.approx(0.4)
    assert rec["A"] > 0.0 and rec["B"] > 0.0


def test_connect_at_lambda_one_over_pi(capsys):
    assert cli.main(["connect", "--nu", "0", "--lambda", "0.31830988618"]) == 0
    assert abs(_json(capsys)["A"] - 0.5424) < 1e-3


def test_connect_excluded_point_exit_2(capsys):
    assert cli.main(["connect", "--nu", "-0.4", "--sigma", "0.5"]) == 2
    assert "sigma < 1 + 2 nu" in capsys.readouterr().err


def test_lambda_and_sigma_are_exclusive():
    with pytest.raises(SystemExit) as e:
        cli.main(["connect", "--nu", "0", "--lambda", "0.1", "--sigma", "0.2"])
    assert e.value.code == 2


def test_lambda_out_of_range_exit_2(capsys):
    assert cli.main(["connect", "--nu", "0", "--lambda", "0.5"]) == 2
    assert "lam outside allowed range" in capsys.readouterr().err


def test_tau_at_lambda_zero(monkeypatch, tmp_path):
    monkeypatch.delenv(ENV_TOL, raising=False)
    out = tmp_path / "tau.json"
    assert cli.main(["tau", "--nu", "0.3", "--lambda", "0", "--t", "0.1", "1.0", "--out", str(out)]) == 0
    payload = json.loads(out.read_text(encoding="utf-8"))
    assert [s["tau"] for s in payload["samples"]] == [1.0, 1.0]
    assert payload["run"]["command"] == "tau"
    assert payload["run"]["tol"] == DEFAULT_TOL


def test_f2_command(capsys):
    assert cli.main(["f2", "--t", "2.0", "--nu", "0"]) == 0
    rec = _json(capsys)
    assert rec["f2"] < 0.0 and math.isfinite(rec["error"])


def test_bad_env_tol_exit_2(monkeypatch, capsys):
    monkeypatch.setenv(ENV_TOL, "abc")
    assert cli.main(["connect", "--nu", "0", "--sigma", "0.3"]) == 2
    assert ENV_TOL in capsys.readouterr().err


def test_env_tol_reaches_run_config(monkeypatch, tmp_path):
    monkeypatch.setenv(ENV_TOL, "1e-10")
    out = tmp_path / "tau.json"
    assert cli.main(["tau", "--nu", "0", "--lambda", "0", "--t", "1.0", "--out", str(out)]) == 0
    assert json.loads(out.read_text(encoding="utf-8"))["run"]["tol"] == 1e-10


def test_solver_failure_exit_3(monkeypatch, capsys):
    def broken(*args, **kwargs):
        raise SolverError("integration failed: step size underflow", t=0.25)

    monkeypatch.setattr(cli, "solve_backward", broken)
    assert cli.main(["solve", "--nu", "0", "--sigma", "0.3"]) == 3
    assert "t=0.25" in capsys.readouterr().err


def test_verify_exit_codes(monkeypatch, capsys):
    assert cli.main(["verify", "--only", "tracy"]) == 0
    assert _json(capsys)["passed"] is True

    def failing(grid, settings):
        return [{"point": "p", "analytic": 0.0, "fitted": 1.0, "error": 1.0}]

    monkeypatch.setattr(cli, "run_verification", _with_criteria(
        [{"name": "bad", "group": "tracy", "tolerance": 0.1, "run": failing}]
    ))
    assert cli.main(["verify"]) == 1
    assert "FAIL bad" in capsys.readouterr().err


def _with_criteria(crit):
    from sinhgordon_tau.verify import run_verification

    def run(only=None, grid=None, settings=None):
        return run_verification(only=only, grid=grid, criteria=crit, settings=settings)

    return run


def test_verify_bad_grid_exit_2(tmp_path, capsys):
    g = tmp_path / "g.yaml"
    g.write_text("identity:\n  nu: -3\n", encoding="utf-8")
    assert cli.main(["verify", "--grid", str(g)]) == 2


def test_sweep_defaults_match_parser():
    args = cli.build_parser().parse_args(["sweep"])
    assert args.format == "csv" and args.out == "_out" and args.grid is None
    args = cli.build_parser().parse_args(["solve", "--nu", "0", "--sigma", "0.2"])
    assert args.tol is None and args.t0 is None and args.t_min is None


def _settings_yaml(tmp_path, text):
    p = tmp_path / "settings.yaml"
    p.write_text(text, encoding="utf-8")
    return str(p)


def test_tau_passes_settings_and_t_min(monkeypatch, tmp_path, capsys):
    seen = {}

    def record(ts, params, **kwargs):
        seen.update(kwargs)
        return []

    monkeypatch.delenv(ENV_TOL, raising=False)
    monkeypatch.setattr(cli, "tau_series", record)
    cfg = _settings_yaml(tmp_path, "tau:\n  n_nodes: 12\n  h_sigma: 2.0e-4\n  h_nu: 5.0e-5\n")
    argv = ["--config", cfg, "tau", "--nu", "0.5", "--sigma", "0.4", "--t", "0.1",
            "--t-min", "0.001", "--action", "lambda"]
    assert cli.main(argv) == 0
    assert seen["n_nodes"] == 12 and seen["h_sigma"] == 2e-4 and seen["h_nu"] == 5e-5
    assert seen["t_min"] == 0.001 and seen["action"] == "lambda" and seen["tol"] == DEFAULT_TOL


def test_verify_receives_config_settings(monkeypatch, tmp_path, capsys):
    seen = []

    def record(grid, settings):
        seen.append(settings)
        return [{"point": "p", "analytic": 0.0, "fitted": 0.0, "error": 0.0}]

    monkeypatch.delenv(ENV_TOL, raising=False)
    monkeypatch.setattr(cli, "run_verification", _with_criteria(
        [{"name": "r", "group": "tracy", "tolerance": 0.1, "run": record}]
    ))
    cfg = _settings_yaml(tmp_path, "solver:\n  tol: 1.0e-11\nfit:\n  fit_samples: 40\n")
    assert cli.main(["--config", cfg, "verify"]) == 0
    assert seen[0].tol == 1e-11 and seen[0].fit_samples == 40

    monkeypatch.setenv(ENV_TOL, "1e-9")
    assert cli.main(["verify"]) == 0
    assert seen[1].tol == 1e-9
