# sinhgordon_tau/sweep.py
from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

import numpy as np

from .connect import connection_constants, figure_curves
from .errors import DomainError
from .sg_types import ModelParams
from .validate import load_grid_file

_ROW_KEYS = ("nu", "lam", "sigma", "s", "B", "A", "exponent_u", "exponent_tau", "status")


@dataclass
class RunResult:
    summary: Dict[str, Any]
    summary_path: Path
    results_path: Optional[Path] = None
    curves_path: Optional[Path] = None


def _clean(v: Any) -> Any:
    return None if isinstance(v, float) and math.isnan(v) else v


def _write_jsonl(path: Path, rows: List[Dict[str, Any]]) -> None:
    with path.open("w", encoding="utf-8") as f:
        for row in rows:
            f.write(json.dumps({k: _clean(v) for k, v in row.items()}, sort_keys=True) + "\n")


def _write_csv(path: Path, rows: List[Dict[str, Any]]) -> None:
    if not rows:
        path.write_text("", encoding="utf-8")
        return
    hdr = sorted(rows[0].keys())
    # repr keeps full float precision; missing values stay empty
    cleaned = [
        {k: "" if _clean(v) is None else (repr(v) if isinstance(v, float) else v) for k, v in r.items()}
        for r in rows
    ]
    with path.open("w", newline="", encoding="utf-8") as f:
        w = csv.DictWriter(f, fieldnames=hdr)
        w.writeheader()
        w.writerows(cleaned)


def sweep_points(nus: Sequence[float], sigmas: Sequence[float]) -> List[ModelParams]:
    return [ModelParams.from_sigma(float(nu), float(sg)) for nu in nus for sg in sigmas]


def sweep_rows(points: Sequence[ModelParams]) -> List[Dict[str, Any]]:
    """Connection constants per point; points outside the connection domain are kept with status 'excluded'."""
    rows: List[Dict[str, Any]] = []
    for p in points:
        try:
            rec: Dict[str, Any] = dict(connection_constants(p).to_record())
            rec["status"] = "ok"
        except DomainError:
            rec = {k: None for k in _ROW_KEYS}
            rec.update(p.to_record())
            rec["status"] = "excluded"
        rows.append({k: rec.get(k) for k in _ROW_KEYS})
    return rows


def run_sweep(
    grid: Optional[Union[str, Path]],
    out_dir: Union[str, Path],
    *,
    fmt: str = "csv",
    curves: bool = True,
) -> RunResult:
    """
    Connection constants over grid['grid'] (nus x sigmas), plus B/A curve data
    over grid['curves'] when ``curves`` is set. Output names carry no
    timestamps, so repeated runs overwrite identical files.
    """
    if fmt not in ("csv", "jsonl"):
        raise DomainError(f"unknown fmt: {fmt}")
    cfg = load_grid_file(grid)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    g = cfg.get("grid", {})
    rows = sweep_rows(sweep_points(g.get("nus", []), g.get("sigmas", [])))
    results_path = out / f"connection_constants.{fmt}"
    if fmt == "jsonl":
        _write_jsonl(results_path, rows)
    else:
        _write_csv(results_path, rows)

    curves_path: Optional[Path] = None
    if curves:
        c = cfg.get("curves", {})
        sigmas = np.linspace(0.0, 1.0, int(c.get("sigma_points", 41)))
        frame = figure_curves(c.get("nus", []), sigmas)
        curves_path = out / "figure_curves.csv"
        frame.to_csv(curves_path, index=False, float_format="%.17g")

    summary: Dict[str, Any] = {
        "points": len(rows),
        "ok": sum(1 for r in rows if r["status"] == "ok"),
        "excluded": sum(1 for r in rows if r["status"] == "excluded"),
        "results": results_path.name,
        "curves": None if curves_path is None else curves_path.name,
    }
    summary_path = out / "summary.json"
    summary_path.write_text(json.dumps(summary, indent=2, sort_keys=True), encoding="utf-8")
    return RunResult(summary=summary, summary_path=summary_path, results_path=results_path, curves_path=curves_path)
