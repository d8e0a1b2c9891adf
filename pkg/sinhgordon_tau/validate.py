# sinhgordon_tau/validate.py
from __future__ import annotations

import json
import math
from dataclasses import asdict
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Union

import yaml

from .config import Settings, _deep_merge
from .errors import ConfigError, DomainError
from .sg_types import ModelParams

# Scalar bounds checked before any compute. Open ends (nu > -1/2) are
# re-checked by ModelParams itself.
SCHEMA: Dict[str, Dict[str, float]] = {
    "nu": {"min": -0.5, "max": 50.0},
    "lam": {"min": 0.0, "max": 1.0 / math.pi},
    "sigma": {"min": 0.0, "max": 1.0},
    "t0": {"min": 1.0, "max": 200.0},
    "t_min": {"min": 1e-10, "max": 10.0},
    "tol": {"min": 1e-15, "max": 1e-4},
    "quad_abs_tol": {"min": 1e-300, "max": 1e-3},
    "f2_rel_tol": {"min": 1e-14, "max": 1e-3},
    "max_subdivisions": {"min": 1, "max": 100000},
    "n_nodes": {"min": 8, "max": 64},
    "h_nu": {"min": 1e-8, "max": 1e-2},
    "h_sigma": {"min": 1e-8, "max": 1e-2},
    "fit_samples": {"min": 6, "max": 10000},
}

# small-t fits only make sense below this
WINDOW_MAX: float = 0.2
# a fit window must span at least this many decades
WINDOW_MIN_DECADES: float = 0.5

_PACKAGE_GRID = Path(__file__).resolve().parent / "inputs" / "verify_grid.yaml"


def _check_window(win: Any, key: str, where: str, t_min: Optional[float] = None) -> None:
    try:
        lo, hi = (float(x) for x in win)
    except (TypeError, ValueError) as e:
        raise DomainError(f"{where}: {key} must be a pair (lo, hi), got {win!r}") from e
    if not (0.0 < lo < hi):
        raise DomainError(f"{where}: {key} needs 0 < lo < hi, got ({lo}, {hi})")
    if hi > WINDOW_MAX:
        raise DomainError(f"{where}: {key} upper bound {hi} exceeds {WINDOW_MAX} (small-t fits only)")
    if t_min is not None and lo < t_min:
        raise DomainError(f"{where}: {key} starts at {lo}, below trajectory range t_min={t_min}")


def validate_inputs(d: Mapping[str, Any], *, where: str = "<mem>") -> Dict[str, Any]:
    """Validate scalar bounds & simple composites; echo back validated keys."""
    validated: Dict[str, Any] = {}
    for k, bounds in (SCHEMA or {}).items():
        if k in d and d[k] is not None:
            try:
                v = float(d[k])
            except (TypeError, ValueError) as e:
                raise DomainError(f"{where}: {k} is not a number: {d[k]!r}") from e
            lo = float(bounds.get("min", float("-inf")))
            hi = float(bounds.get("max", float("inf")))
            if not (lo <= v <= hi) or math.isnan(v):
                raise DomainError(f"{where}: {k} outside allowed range [{lo}, {hi}]: {v}")
            validated[k] = d[k]

    # composites
    if d.get("lam") is not None and d.get("sigma") is not None:
        raise DomainError(f"{where}: give exactly one of lam/sigma, not both")
    if "nu" in validated and float(validated["nu"]) <= -0.5:
        raise DomainError(f"{where}: nu outside allowed range (-0.5, inf): {validated['nu']}")
    t0, t_min = d.get("t0"), d.get("t_min")
    if t0 is not None and t_min is not None and not float(t_min) < float(t0):
        raise DomainError(f"{where}: need t_min < t0, got t_min={t_min}, t0={t0}")
    for key in ("window", "tau_window", "fit_window", "tau_fit_window"):
        if d.get(key) is not None:
            _check_window(d[key], key, where, None if t_min is None else float(t_min))
            validated[key] = tuple(float(x) for x in d[key])
    return validated


def validate_settings(settings: Settings, *, where: str = "settings") -> Settings:
    data = asdict(settings)
    # fits solve down to their own window, so t_min does not bound the windows here
    windows = {k: data.pop(k) for k in ("fit_window", "tau_fit_window")}
    validate_inputs(data, where=where)
    validate_inputs(windows, where=where)
    return settings


def resolve_params(nu: float, lam: Optional[float] = None, sigma: Optional[float] = None) -> ModelParams:
    """ModelParams from nu and exactly one of lam/sigma."""
    if (lam is None) == (sigma is None):
        raise DomainError("give exactly one of lam/sigma")
    validate_inputs({"nu": nu, "lam": lam, "sigma": sigma}, where="params")
    if sigma is not None:
        return ModelParams.from_sigma(nu, sigma)
    return ModelParams.from_lambda(nu, float(lam))  # type: ignore[arg-type]


def require_connection_domain(params: ModelParams) -> ModelParams:
    """Connection constants need sigma < 1, sigma < 1 + 2 nu and s + nu > 0."""
    if params.excluded:
        raise DomainError(
            f"sigma={params.sigma:.6g} violates the restriction sigma < 1 + 2 nu = {1.0 + 2.0 * params.nu:.6g}"
        )
    if not params.s + params.nu > 0.0:
        raise DomainError(
            f"s + nu = {params.s + params.nu:.6g} violates the restriction s + nu > 0 (s = (1 - sigma)/2)"
        )
    if not params.sigma < 1.0:
        raise DomainError("sigma = 1 is the degenerate case; connection constants need sigma < 1")
    return params


def _load_mapping(path: Path) -> Dict[str, Any]:
    if not path.exists():
        raise ConfigError(f"grid file not found: {path}")
    if path.is_dir():
        raise ConfigError(f"{path} is a directory (expected a file)")
    text = path.read_text(encoding="utf-8")
    try:
        data = yaml.safe_load(text) if path.suffix.lower() in (".yaml", ".yml") else json.loads(text or "{}")
    except (yaml.YAMLError, json.JSONDecodeError) as e:
        raise ConfigError(f"{path}: cannot parse grid: {e}") from e
    if not isinstance(data, dict):
        raise ConfigError(f"Top-level grid must be a mapping: {path}")
    return data


def _walk_points(node: Any, where: str) -> None:
    if isinstance(node, Mapping):
        validate_inputs(node, where=where)
        for k, v in node.items():
            _walk_points(v, f"{where}.{k}")
    elif isinstance(node, list):
        for i, v in enumerate(node):
            _walk_points(v, f"{where}[{i}]")


def load_grid_file(path: Optional[Union[str, Path]] = None) -> Dict[str, Any]:
    """
    Verification grid (YAML or JSON) deep-merged over the packaged default.

    Every nested mapping is validated against SCHEMA, so a grid point such as
    ``{nu: 0.5, sigma: 0.4}`` is range-checked before anything is solved.
    """
    data = _load_mapping(_PACKAGE_GRID)
    if path is not None:
        p = Path(path)
        data = _deep_merge(data, _load_mapping(p))
        where = str(p)
    else:
        where = str(_PACKAGE_GRID.name)
    _walk_points(data, where)
    return data
