# sinhgordon_tau/cli.py
from __future__ import annotations

import argparse
import json
import math
import sys
import warnings
from dataclasses import asdict
from pathlib import Path
from typing import Any, Dict, List, Optional

from .config import Settings, load_settings
from .connect import connection_constants
from .errors import ConfigError, ConvergenceError, DomainError, SolverError
from .quad import f2_with_error
from .sg_types import ModelParams, QuadSettings, RunConfig
from .sinhg import solve_backward, write_trajectory
from .sweep import run_sweep
from .tau import tau_series
from .validate import resolve_params
from .verify import GROUPS, run_verification

EXIT_OK = 0
EXIT_CRITERIA = 1
EXIT_DOMAIN = 2
EXIT_SOLVER = 3


def _clean(v: Any) -> Any:
    if isinstance(v, float) and not math.isfinite(v):
        return None
    if isinstance(v, dict):
        return {k: _clean(x) for k, x in v.items()}
    if isinstance(v, list):
        return [_clean(x) for x in v]
    return v


def _dump(payload: Any) -> str:
    return json.dumps(_clean(payload), indent=2, sort_keys=True)


def _emit(payload: Any, out: Optional[Path]) -> None:
    text = _dump(payload)
    if out is None:
        print(text)
        return
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text + "\n", encoding="utf-8")
    print(str(out))


def _run_config(args: argparse.Namespace, settings: Settings) -> RunConfig:
    return RunConfig(
        command=args.command,
        nu=getattr(args, "nu", None),
        lam=getattr(args, "lam", None),
        sigma=getattr(args, "sigma", None),
        t0=getattr(args, "t0", None),
        t_min=settings.t_min,
        tol=settings.tol,
        output_path=None if getattr(args, "out", None) is None else Path(args.out),
        fmt=getattr(args, "format", "json"),
    )


def _params(rc: RunConfig) -> ModelParams:
    if rc.nu is None:
        raise DomainError("--nu is required")
    return resolve_params(rc.nu, lam=rc.lam, sigma=rc.sigma)


def _run_record(rc: RunConfig) -> Dict[str, Any]:
    rec = asdict(rc)
    rec["output_path"] = None if rc.output_path is None else str(rc.output_path)
    return rec


# ---------- commands ----------

def _cmd_solve(rc: RunConfig, settings: Settings) -> int:
    params = _params(rc)
    traj = solve_backward(params, t0=rc.t0, t_min=rc.t_min, tol=rc.tol)
    csv_path, header_path = write_trajectory(traj, rc.output_path or Path("trajectory.csv"))
    print(str(csv_path))
    print(str(header_path))
    return EXIT_OK


def _cmd_tau(rc: RunConfig, settings: Settings, ts: List[float], action: str) -> int:
    params = _params(rc)
    samples = tau_series(
        ts,
        params,
        h_nu=settings.h_nu,
        action=action,  # type: ignore[arg-type]
        n_nodes=settings.n_nodes,
        h_sigma=settings.h_sigma,
        t0=rc.t0,
        t_min=rc.t_min,
        tol=rc.tol,
    )
    _emit({"run": _run_record(rc), "samples": [s.to_record() for s in samples]}, rc.output_path)
    return EXIT_OK


def _cmd_connect(rc: RunConfig, settings: Settings) -> int:
    _emit(connection_constants(_params(rc)).to_record(), rc.output_path)
    return EXIT_OK


def _cmd_verify(rc: RunConfig, settings: Settings, only: Optional[List[str]], grid: Optional[str]) -> int:
    report = run_verification(only=only, grid=grid, settings=settings)
    if report.frame.empty:
        print("verify: no criteria ran", file=sys.stderr)
        return EXIT_SOLVER
    payload = {"passed": report.passed, "rows": report.to_records()}
    _emit(payload, rc.output_path)
    for row in report.failures.to_dict(orient="records"):
        print(
            f"FAIL {row['name']} [{row['point']}]: error={row['error']:.3g} tolerance={row['tolerance']:.3g}",
            file=sys.stderr,
        )
    # every row NaN means nothing could be evaluated at all
    if report.frame["error"].isna().all():
        return EXIT_SOLVER
    return EXIT_OK if report.passed else EXIT_CRITERIA


def _cmd_sweep(rc: RunConfig, grid: Optional[str]) -> int:
    res = run_sweep(grid, rc.output_path or Path("_out"), fmt=rc.fmt)
    print(_dump(res.summary))
    if res.results_path:
        print(str(res.results_path))
    return EXIT_OK


def _cmd_f2(t: float, nu: float, settings: Settings) -> int:
    cfg = QuadSettings(
        abs_tol=settings.quad_abs_tol,
        rel_tol=settings.f2_rel_tol,
        max_subdivisions=settings.max_subdivisions,
    )
    res = f2_with_error(t, nu, cfg)
    print(_dump({"t": t, "nu": nu, "f2": res.value, "error": res.error}))
    return EXIT_OK


# ---------- parser ----------

def _add_params(p: argparse.ArgumentParser) -> None:
    p.add_argument("--nu", type=float, required=True, help="nu > -1/2.")
    which = p.add_mutually_exclusive_group(required=True)
    which.add_argument("--lambda", dest="lam", type=float, help="lambda in [0, 1/pi].")
    which.add_argument("--sigma", type=float, help="sigma in [0, 1]; lambda = sin(pi sigma/2)/pi.")


def _add_solver(p: argparse.ArgumentParser) -> None:
    p.add_argument("--t0", type=float, default=None, help="Start point (default: boundary rule, at least 20).")
    p.add_argument("--t-min", dest="t_min", type=float, default=None, help="Lower end of the trajectory.")
    p.add_argument("--tol", type=float, default=None, help="Integrator tolerance (default: CONNECT_TOL or 1e-12).")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sinhgordon_tau",
        description=(
            "Connection constants of the nu-modified radial sinh-Gordon equation\n\n"
            "Typical usage:\n"
            "  python -m sinhgordon_tau connect --nu 0.5 --sigma 0.4\n"
            "  python -m sinhgordon_tau tau --nu 0 --lambda 0.2 --t 0.05 0.5 2\n"
            "  python -m sinhgordon_tau verify --only identities\n\n"
            "Exit codes:\n"
            "  0 success, 1 failed criteria, 2 domain/config error, 3 solver failure"
        ),
        formatter_class=argparse.RawTextHelpFormatter,
    )
    parser.add_argument("--config", default=None, help="Settings YAML (solver/quad/tau/fit groups).")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="Integrate q(t) backward and write t,q,p CSV plus JSON header.")
    _add_params(p)
    _add_solver(p)
    p.add_argument("--out", default=None, help="CSV path (default: trajectory.csv).")

    p = sub.add_parser("tau", help="tau(t) records as JSON.")
    _add_params(p)
    _add_solver(p)
    p.add_argument("--t", dest="ts", type=float, nargs="+", required=True, help="One or more t > 0.")
    p.add_argument("--action", choices=["direct", "lambda"], default="direct", help="Action source (default: direct).")
    p.add_argument("--out", default=None, help="JSON path (default: stdout).")

    p = sub.add_parser("connect", help="Connection constants B, A and the small-t exponents.")
    _add_params(p)
    p.add_argument("--out", default=None, help="JSON path (default: stdout).")

    p = sub.add_parser("verify", help="Run the acceptance checks.")
    p.add_argument("--only", action="append", choices=list(GROUPS), default=None, help="Restrict to a group (repeatable).")
    p.add_argument("--grid", default=None, help="Grid YAML merged over the packaged default.")
    p.add_argument("--out", default=None, help="Report JSON path (default: stdout).")

    p = sub.add_parser("sweep", help="Connection constants over a grid, plus curve data.")
    p.add_argument("--grid", default=None, help="Grid YAML merged over the packaged default.")
    p.add_argument("--format", choices=["csv", "jsonl"], default="csv", help="Results format (default: csv).")
    p.add_argument("--out", default="_out", help="Output directory (default: _out).")

    p = sub.add_parser("f2", help="First series coefficient f2(t; nu).")
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--nu", type=float, required=True)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        overrides = {k: getattr(args, k) for k in ("t_min", "tol") if getattr(args, k, None) is not None}
        settings = load_settings(args.config, overrides=overrides)
        rc = _run_config(args, settings)
        with warnings.catch_warnings():
            warnings.simplefilter("default")
            if args.command == "solve":
                return _cmd_solve(rc, settings)
            if args.command == "tau":
                return _cmd_tau(rc, settings, args.ts, args.action)
            if args.command == "connect":
                return _cmd_connect(rc, settings)
            if args.command == "verify":
                return _cmd_verify(rc, settings, args.only, args.grid)
            if args.command == "sweep":
                return _cmd_sweep(rc, args.grid)
            return _cmd_f2(args.t, args.nu, settings)
    except (DomainError, ConfigError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DOMAIN
    except (SolverError, ConvergenceError) as e:
        print(f"solver failure: {e}", file=sys.stderr)
        return EXIT_SOLVER
    except OSError as e:
        print(f"io failure: {e}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    raise SystemExit(main())
