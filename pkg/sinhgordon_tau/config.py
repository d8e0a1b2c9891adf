# sinhgordon_tau/config.py
"""
Numeric defaults and the settings loader.

Every default used by the library and the CLI is defined here once. Settings
files are plain YAML mappings, optionally grouped one level deep:

    solver:
      tol: 1.0e-12
      t_min: 0.01
    quad:
      f2_rel_tol: 1.0e-8
    fit:
      fit_window: [1.0e-8, 1.0e-4]

Environment:
    CONNECT_TOL   overrides the integrator tolerance when no explicit value
                  is passed.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Any, Dict, Final, Mapping, Optional, Tuple, Union

try:
    import yaml  # type: ignore
except Exception as e:  # pragma: no cover
    raise RuntimeError("PyYAML is required to load settings") from e

from .errors import ConfigError

# --- integrator ---
DEFAULT_T0: Final[float] = 20.0
DEFAULT_T_MIN: Final[float] = 1e-2
DEFAULT_TOL: Final[float] = 1e-12
T0_BOUNDARY_BOUND: Final[float] = 1e-14   # q0**2 must fall below this
BOUNDARY_WARN_BOUND: Final[float] = 1e-12

# --- quadrature ---
DEFAULT_QUAD_REL_TOL: Final[float] = 1e-12
DEFAULT_QUAD_ABS_TOL: Final[float] = 1e-14
DEFAULT_F2_REL_TOL: Final[float] = 1e-8
DEFAULT_MAX_SUBDIVISIONS: Final[int] = 200

# --- tau ingredients ---
DEFAULT_H_NU: Final[float] = 1e-4
DEFAULT_H_SIGMA: Final[float] = 1e-4
DEFAULT_N_NODES: Final[int] = 8

# --- fits ---
# four decades below t = 1e-4, where the small-t series needs only a few terms
DEFAULT_FIT_WINDOW: Final[Tuple[float, float]] = (1e-8, 1e-4)
DEFAULT_TAU_FIT_WINDOW: Final[Tuple[float, float]] = (1e-8, 1e-4)
DEFAULT_FIT_SAMPLES: Final[int] = 32

ENV_TOL: Final[str] = "CONNECT_TOL"


@dataclass(frozen=True)
class Settings:
    t0: float = DEFAULT_T0
    t_min: float = DEFAULT_T_MIN
    tol: float = DEFAULT_TOL
    quad_abs_tol: float = DEFAULT_QUAD_ABS_TOL
    f2_rel_tol: float = DEFAULT_F2_REL_TOL
    max_subdivisions: int = DEFAULT_MAX_SUBDIVISIONS
    h_nu: float = DEFAULT_H_NU
    h_sigma: float = DEFAULT_H_SIGMA
    n_nodes: int = DEFAULT_N_NODES
    fit_window: Tuple[float, float] = DEFAULT_FIT_WINDOW
    tau_fit_window: Tuple[float, float] = DEFAULT_TAU_FIT_WINDOW
    fit_samples: int = DEFAULT_FIT_SAMPLES


# group name -> prefix used for the flat Settings field
_GROUP_PREFIX: Dict[str, str] = {"solver": "", "quad": "quad_", "tau": "", "fit": ""}


def env_tol(default: float = DEFAULT_TOL) -> float:
    """Integrator tolerance from CONNECT_TOL, or ``default`` when unset."""
    raw = os.getenv(ENV_TOL)
    if raw is None or not raw.strip():
        return default
    try:
        val = float(raw)
    except ValueError as e:
        raise ConfigError(f"{ENV_TOL}={raw!r} is not a number") from e
    if not val > 0.0:
        raise ConfigError(f"{ENV_TOL} must be positive, got {val}")
    return val


def _load_yaml_file(p: Union[str, Path]) -> Dict[str, Any]:
    path = Path(p)
    if not path.exists():
        raise ConfigError(f"YAML not found: {path}")
    with path.open("r", encoding="utf-8") as fh:
        data = yaml.safe_load(fh) or {}
    if not isinstance(data, dict):
        raise ConfigError(f"Top-level YAML must be a mapping: {path}")
    return data


def _deep_merge(base: Dict[str, Any], override: Mapping[str, Any]) -> Dict[str, Any]:
    out: Dict[str, Any] = dict(base)
    for k, v in override.items():
        if isinstance(v, Mapping) and isinstance(out.get(k), Mapping):
            out[k] = _deep_merge(dict(out[k]), v)
        else:
            out[k] = v  # lists/scalars replace
    return out


def _flatten_grouped(cfg: Mapping[str, Any]) -> Dict[str, Any]:
    """
    Flatten {'solver': {...}, 'quad': {...}} into Settings field names.
    Top-level keys win on collision.
    """
    known = {f.name for f in fields(Settings)}
    flat: Dict[str, Any] = {k: v for k, v in cfg.items() if not isinstance(v, Mapping)}
    for group, sub in cfg.items():
        if not isinstance(sub, Mapping):
            continue
        prefix = _GROUP_PREFIX.get(group, "")
        for sk, sv in sub.items():
            key = f"{prefix}{sk}" if f"{prefix}{sk}" in known else sk
            flat.setdefault(key, sv)
    return flat


def _coerce(name: str, value: Any, template: Any) -> Any:
    try:
        if isinstance(template, tuple):
            lo, hi = value
            return (float(lo), float(hi))
        if isinstance(template, int):
            return int(value)
        return float(value)
    except (TypeError, ValueError) as e:
        raise ConfigError(f"setting {name!r} has unusable value {value!r}") from e


def settings_from_mapping(data: Mapping[str, Any], base: Optional[Settings] = None) -> Settings:
    """Build Settings from a (possibly grouped) mapping; unknown keys are ignored."""
    base = base or Settings()
    flat = _flatten_grouped(data)
    known = {f.name for f in fields(Settings)}
    changes: Dict[str, Any] = {
        k: _coerce(k, v, getattr(base, k))
        for k, v in flat.items()
        if k in known
    }
    out = replace(base, **changes)
    from .validate import validate_settings

    validate_settings(out, where="settings")
    return out


def load_settings(
    config: Optional[Union[str, Path]] = None,
    *override_paths: Union[str, Path],
    overrides: Optional[Mapping[str, Any]] = None,
) -> Settings:
    """
    Load settings YAML + optional override YAMLs (later wins) + in-memory overrides.

    With no file the defaults are used. CONNECT_TOL applies only when no file or
    override sets ``tol`` explicitly.
    """
    data: Dict[str, Any] = _load_yaml_file(config) if config is not None else {}
    for p in override_paths:
        data = _deep_merge(data, _load_yaml_file(p))
    if overrides:
        data = _deep_merge(data, overrides)

    if "tol" not in _flatten_grouped(data):
        data = _deep_merge(data, {"tol": env_tol()})
    return settings_from_mapping(data)
