import pytest

from sinhgordon_tau import config as cfg
from sinhgordon_tau.config import Settings, env_tol, load_settings, settings_from_mapping
from sinhgordon_tau.errors import ConfigError, DomainError


def test_defaults_without_file(monkeypatch):
    monkeypatch.delenv(cfg.ENV_TOL, raising=False)
    assert load_settings() == Settings()
    assert Settings().tol == cfg.DEFAULT_TOL == 1e-12
    assert Settings().t0 == 20.0


def test_env_tol_applies_when_not_set_explicitly(monkeypatch):
    monkeypatch.setenv(cfg.ENV_TOL, "1e-10")
    assert env_tol() == 1e-10
    assert load_settings().tol == 1e-10
    assert load_settings(overrides={"tol": 1e-11}).tol == 1e-11


@pytest.mark.parametrize("raw", ["abc", "-1", "0"])
def test_env_tol_rejects_garbage(monkeypatch, raw):
    monkeypatch.setenv(cfg.ENV_TOL, raw)
    with pytest.raises(ConfigError):
        env_tol()


def test_grouped_yaml_and_override_order(tmp_path, monkeypatch):
    monkeypatch.delenv(cfg.ENV_TOL, raising=False)
    base = tmp_path / "base.yaml"
    base.write_text(
        "solver:\n  tol: 1.0e-11\n  t_min: 0.02\nquad:\n  abs_tol: 1.0e-13\nfit:\n  fit_samples: 30\n",
        encoding="utf-8",
    )
    over = tmp_path / "over.yaml"
    over.write_text("solver:\n  tol: 1.0e-9\n", encoding="utf-8")
    s = load_settings(base, over)
    assert s.tol == 1e-9
    assert s.t_min == 0.02
    assert s.quad_abs_tol == 1e-13
    assert s.fit_samples == 30 and isinstance(s.fit_samples, int)


def test_unknown_keys_ignored():
    s = settings_from_mapping({"colour": "blue", "h_nu": 2e-4})
    assert s.h_nu == 2e-4


def test_out_of_range_setting_is_domain_error():
    with pytest.raises(DomainError, match="tol outside allowed range"):
        settings_from_mapping({"tol": 1e-2})
    with pytest.raises(DomainError):
        settings_from_mapping({"fit_window": [0.01, 0.5]})


def test_unusable_value_is_config_error():
    with pytest.raises(ConfigError):
        settings_from_mapping({"tol": "tiny"})


def test_missing_or_bad_yaml(tmp_path):
    with pytest.raises(ConfigError):
        load_settings(tmp_path / "nope.yaml")
    bad = tmp_path / "list.yaml"
    bad.write_text("- 1\n- 2\n", encoding="utf-8")
    with pytest.raises(ConfigError):
        load_settings(bad)
