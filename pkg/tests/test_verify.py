import math

import pytest

from sinhgordon_tau import verify
from sinhgordon_tau.config import ENV_TOL, Settings
from sinhgordon_tau.sg_types import FitResult
from sinhgordon_tau.verify import CRITERIA, GROUPS, run_verification

SPEC_GROUPS = {
    "exponent", "prefactor", "amplitude", "tracy", "identities",
    "smallt", "largetime", "series", "wu", "painleve",
}


def test_every_group_has_a_criterion():
    assert set(GROUPS) == SPEC_GROUPS
    for c in CRITERIA:
        assert {"name", "group", "tolerance", "run"} <= set(c)
        assert callable(c["run"])


def test_tracy_group_passes():
    report = run_verification(only="tracy")
    assert report.passed
    assert set(report.frame["group"]) == {"tracy"}
    assert len(report.frame) == 3


def test_wu_constants_pass():
    crit = [c for c in CRITERIA if c["name"] == "wu_constants"]
    report = run_verification(criteria=crit)
    assert report.passed
    assert list(report.frame.columns) == [
        "name", "group", "point", "analytic", "fitted", "error", "tolerance", "passed",
    ]


def test_failing_criterion_does_not_abort():
    def boom(grid, settings):
        raise RuntimeError("kaput")

    def fine(grid, settings):
        return [{"point": "x", "analytic": 1.0, "fitted": 1.0, "error": 0.0}]

    crit = [
        {"name": "boom", "group": "g", "tolerance": 1.0, "run": boom},
        {"name": "fine", "group": "g", "tolerance": 1.0, "run": fine},
    ]
    with pytest.warns(UserWarning, match="boom"):
        report = run_verification(criteria=crit)
    assert not report.passed
    assert list(report.failures["name"]) == ["boom"]
    assert math.isnan(report.frame.loc[0, "error"])
    recs = report.to_records()
    assert recs[0]["error"] is None and recs[1]["passed"]


def test_tolerance_override_from_grid():
    def off_by(grid, settings):
        return [{"point": "x", "analytic": 1.0, "fitted": 1.01, "error": 0.01}]

    crit = [{"name": "loose", "group": "g", "tolerance": 1e-3, "run": off_by}]
    grid = verify.load_grid_file()
    assert not run_verification(criteria=crit, grid=grid).passed
    grid["tolerances"] = {"loose": 0.1}
    assert run_verification(criteria=crit, grid=grid).passed


def test_only_filters_by_group():
    crit = [
        {"name": "a", "group": "x", "tolerance": 1.0, "run": lambda g, s: [{"point": "", "analytic": 0.0, "fitted": 0.0, "error": 0.0}]},
        {"name": "b", "group": "y", "tolerance": 1.0, "run": lambda g, s: [{"point": "", "analytic": 0.0, "fitted": 0.0, "error": 0.0}]},
    ]
    report = run_verification(only=["y"], criteria=crit)
    assert list(report.frame["name"]) == ["b"]


def _recording_fit_point(calls):
    def fake(params, window, tau_window, samples, tau_samples, h_nu, tol):
        calls.append({"window": window, "tau_window": tau_window, "samples": samples,
                      "tau_samples": tau_samples, "h_nu": h_nu, "tol": tol})
        return FitResult(params.sigma, 1.0, 1.0, 0.0, 0.0, window)

    return fake


def test_fit_windows_and_tolerance_come_from_settings(monkeypatch):
    calls = []
    monkeypatch.setattr(verify, "_fit_point", _recording_fit_point(calls))
    settings = Settings(tol=1e-11, h_nu=2e-4, fit_window=(1e-6, 1e-3), tau_fit_window=(1e-5, 1e-3), fit_samples=20)
    crit = [c for c in CRITERIA if c["name"] == "exponent"]
    report = run_verification(criteria=crit, settings=settings)
    assert report.passed and len(calls) == len(report.frame) == 11
    assert calls[0] == {"window": (1e-6, 1e-3), "tau_window": (1e-5, 1e-3), "samples": 20,
                        "tau_samples": 20, "h_nu": 2e-4, "tol": 1e-11}


def test_grid_fit_section_overrides_settings(monkeypatch):
    calls = []
    monkeypatch.setattr(verify, "_fit_point", _recording_fit_point(calls))
    grid = verify.load_grid_file()
    grid["fit"] = {"window": [1e-4, 1e-2], "tau_samples": 9}
    crit = [c for c in CRITERIA if c["name"] == "exponent"]
    run_verification(criteria=crit, grid=grid, settings=Settings(fit_samples=25))
    assert calls[0]["window"] == (1e-4, 1e-2)
    assert calls[0]["tau_window"] == Settings().tau_fit_window
    assert (calls[0]["samples"], calls[0]["tau_samples"]) == (25, 9)


def test_default_settings_follow_env_tol(monkeypatch):
    seen = []

    def record(grid, settings):
        seen.append(settings.tol)
        return [{"point": "", "analytic": 0.0, "fitted": 0.0, "error": 0.0}]

    monkeypatch.setenv(ENV_TOL, "1e-10")
    run_verification(criteria=[{"name": "r", "group": "g", "tolerance": 1.0, "run": record}])
    assert seen == [1e-10]