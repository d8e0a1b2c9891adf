# sinhgordon_tau/sinhg.py
"""
Hamiltonian form of the nu-modified radial sinh-Gordon equation

    H(q, p, t, nu) = (t/2) sinh^2 q - p^2/(2t) + 4 nu sinh^2(q/2)
    dq/dt = dH/dp = -p/t,   dp/dt = -dH/dq = -(t/2) sinh 2q - 2 nu sinh q

Eliminating p = -t dq/dt gives q'' + q'/t = (1/2) sinh 2q + (2 nu / t) sinh q.

solve_backward integrates from large t0 (boundary data from the Watson
integral) down to t_min. Three running integrals ride along as extra state
components so the action and the tau-function never re-integrate a dense
output:

    I_H(t)  = int_t^t0 H ds
    I_pq(t) = int_t^t0 p dq/ds ds = -int_t^t0 p^2/s ds
    I_sh(t) = int_t^t0 sinh^2(q/2) ds

Below t = 1 the independent variable switches to x = ln t.
"""
from __future__ import annotations

import functools
import json
import math
import warnings
from pathlib import Path
from typing import Any, Callable, Dict, Final, Optional, Tuple, Union

import numpy as np
from scipy.integrate import quad, solve_ivp
from scipy.optimize import brentq

from .config import (
    BOUNDARY_WARN_BOUND,
    DEFAULT_T0,
    DEFAULT_T_MIN,
    DEFAULT_TOL,
    T0_BOUNDARY_BOUND,
)
from .errors import (
    BoundaryDataWarning,
    DomainError,
    ExcludedRegionWarning,
    SolverError,
)
from .quad import watson_integral, watson_integral_dt
from .sg_types import ModelParams, Trajectory, TrajectorySegment
from .specfun import ln_gamma

# solver switches to x = ln t below this
LOG_SWITCH_T: Final[float] = 1.0
# refuse t_min below this when sigma exceeds SIGMA_NEAR_ONE
T_MIN_FLOOR: Final[float] = 1e-3
SIGMA_NEAR_ONE: Final[float] = 0.9

_SCALE_FLOOR: Final[float] = 1e-300
_T0_SEARCH_HI: Final[float] = 200.0


# ---------- Hamiltonian ----------

def hamiltonian(t: Any, q: Any, p: Any, nu: float) -> Any:
    """(t/2) sinh^2 q - p^2/(2t) + 4 nu sinh^2(q/2)."""
    sh_half = np.sinh(0.5 * q)
    return 0.5 * t * np.sinh(q) ** 2 - p * p / (2.0 * t) + 4.0 * nu * sh_half * sh_half


def hamilton_rhs(t: Any, q: Any, p: Any, nu: float) -> Tuple[Any, Any]:
    """(dq/dt, dp/dt) = (-p/t, -(t/2) sinh 2q - 2 nu sinh q)."""
    return -p / t, -0.5 * t * np.sinh(2.0 * q) - 2.0 * nu * np.sinh(q)


def _rhs_t(nu: float) -> Callable[[float, np.ndarray], np.ndarray]:
    def f(t: float, y: np.ndarray) -> np.ndarray:
        q, p = y[0], y[1]
        dq, dp = hamilton_rhs(t, q, p, nu)
        sh_half = math.sinh(0.5 * q)
        # running integrals are int_t^t0, so d/dt is minus the integrand
        return np.array([
            dq,
            dp,
            -hamiltonian(t, q, p, nu),
            p * p / t,
            -sh_half * sh_half,
        ])

    return f


def _rhs_log(nu: float) -> Callable[[float, np.ndarray], np.ndarray]:
    f_t = _rhs_t(nu)

    def f(x: float, y: np.ndarray) -> np.ndarray:
        t = math.exp(x)
        return t * f_t(t, y)

    return f


# ---------- boundary data ----------

def boundary_asymptotic(t: Any, params: ModelParams) -> Tuple[Any, Any]:
    """
    Leading large-t behaviour q ~ 2 lam Gamma(nu + 1/2) e^{-t} / (2t)^(nu + 1/2)
    and the matching momentum p = -t dq/dt ~ q (t + nu + 1/2).
    """
    if params.lam == 0.0:
        return 0.0 * np.asarray(t, dtype=float), 0.0 * np.asarray(t, dtype=float)
    tt = np.asarray(t, dtype=float)
    a = params.nu + 0.5
    q = 2.0 * params.lam * np.exp(ln_gamma(a) - tt - a * np.log(2.0 * tt))
    return q, q * (tt + a)


def initial_conditions(t0: float, params: ModelParams) -> Tuple[float, float]:
    """(q0, p0) = (2 lam W(t0), -t0 * 2 lam W'(t0))."""
    if not (math.isfinite(t0) and t0 > 0.0):
        raise DomainError(f"t0 must be > 0, got {t0}")
    if params.lam == 0.0:
        return 0.0, 0.0
    q0 = 2.0 * params.lam * watson_integral(t0, params.nu)
    p0 = -t0 * 2.0 * params.lam * watson_integral_dt(t0, params.nu)
    if q0 * q0 > BOUNDARY_WARN_BOUND:
        warnings.warn(
            f"boundary data at t0={t0:g}: neglected corrections ~ q0^2 = {q0 * q0:.2e} exceed "
            f"{BOUNDARY_WARN_BOUND:g}; increase t0",
            BoundaryDataWarning,
            stacklevel=2,
        )
    return q0, p0


@functools.lru_cache(maxsize=256)
def _t0_rule(nu: float, lam: float) -> float:
    if lam == 0.0:
        return 0.0
    target = 0.5 * math.log(T0_BOUNDARY_BOUND)

    def g(t: float) -> float:
        return math.log(2.0 * lam * watson_integral(t, nu)) - target

    if g(1.0) <= 0.0:
        return 1.0
    if g(_T0_SEARCH_HI) > 0.0:  # pragma: no cover
        return _T0_SEARCH_HI
    return float(brentq(g, 1.0, _T0_SEARCH_HI, xtol=1e-3))


def choose_t0(params: ModelParams) -> float:
    """Smallest t0 with q0^2 < 1e-14, never below DEFAULT_T0."""
    return max(DEFAULT_T0, _t0_rule(params.nu, params.lam))


def tail_integrals(t0: float, params: ModelParams) -> Tuple[float, float, float]:
    """int_t0^inf of (H, p dq/ds, sinh^2(q/2)) along the boundary asymptotic."""
    if params.lam == 0.0:
        return 0.0, 0.0, 0.0
    nu = params.nu

    def qp(s: float) -> Tuple[float, float]:
        q, p = boundary_asymptotic(s, params)
        return float(q), float(p)

    def h(s: float) -> float:
        q, p = qp(s)
        return float(hamiltonian(s, q, p, nu))

    def pq(s: float) -> float:
        _, p = qp(s)
        return -p * p / s

    def sh(s: float) -> float:
        q, _ = qp(s)
        return math.sinh(0.5 * q) ** 2

    return tuple(  # type: ignore[return-value]
        float(quad(fn, t0, np.inf, epsabs=0.0, epsrel=1e-10, limit=200)[0])
        for fn in (h, pq, sh)
    )


# ---------- solver ----------

def _check_solve_args(params: ModelParams, t0: float, t_min: float, tol: float, allow_excluded: bool) -> None:
    if not (0.0 < t_min < t0):
        raise DomainError(f"need 0 < t_min < t0, got t_min={t_min}, t0={t0}")
    if not tol > 0.0:
        raise DomainError(f"tol must be > 0, got {tol}")
    if t_min < T_MIN_FLOOR and params.sigma > SIGMA_NEAR_ONE:
        raise DomainError(
            f"t_min={t_min:g} below {T_MIN_FLOOR:g} with sigma={params.sigma:.4f} near 1: "
            "small-t error terms degrade and cosh(q/2) overflows"
        )
    if params.excluded and params.lam > 0.0:
        msg = (
            f"sigma={params.sigma:.6g} >= 1 + 2 nu = {1.0 + 2.0 * params.nu:.6g}: "
            "outside the restriction sigma < 1 + 2 nu"
        )
        if not allow_excluded:
            raise DomainError(msg)
        warnings.warn(f"{msg}; integrating anyway", ExcludedRegionWarning, stacklevel=3)


def _run_segment(
    fun: Callable[[float, np.ndarray], np.ndarray],
    span: Tuple[float, float],
    y0: np.ndarray,
    tol: float,
    atol: np.ndarray,
    log_variable: bool,
) -> Any:
    sol = solve_ivp(fun, span, y0, method="DOP853", rtol=tol, atol=atol, dense_output=True)
    if sol.status != 0:
        reached = float(sol.t[-1])
        raise SolverError(
            f"integration failed: {sol.message}",
            t=math.exp(reached) if log_variable else reached,
        )
    return sol


@functools.lru_cache(maxsize=16)
def _solve(params: ModelParams, t0: float, t_min: float, tol: float) -> Trajectory:
    if params.lam == 0.0:
        ts = np.array([t0, t_min])
        zeros = np.zeros(2)
        return Trajectory(params, t0, t_min, tol, ts, zeros, zeros.copy())

    q0, p0 = initial_conditions(t0, params)
    s_int = max(q0 * q0 * t0, _SCALE_FLOOR)
    atol = tol * np.array([max(abs(q0), _SCALE_FLOOR), max(abs(p0), _SCALE_FLOOR), s_int, s_int, s_int])
    y = np.array([q0, p0, 0.0, 0.0, 0.0])

    segments: list[TrajectorySegment] = []
    t_parts: list[np.ndarray] = []
    y_parts: list[np.ndarray] = []

    if t0 > LOG_SWITCH_T:
        t_end = max(LOG_SWITCH_T, t_min)
        sol = _run_segment(_rhs_t(params.nu), (t0, t_end), y, tol, atol, log_variable=False)
        segments.append(TrajectorySegment(t_end, t0, False, sol.sol))
        t_parts.append(sol.t)
        y_parts.append(sol.y)
        y = sol.y[:, -1].copy()

    if t_min < LOG_SWITCH_T:
        t_start = min(t0, LOG_SWITCH_T)
        span = (math.log(t_start), math.log(t_min))
        sol = _run_segment(_rhs_log(params.nu), span, y, tol, atol, log_variable=True)
        segments.append(TrajectorySegment(t_min, t_start, True, sol.sol))
        skip = 1 if t_parts else 0
        t_parts.append(np.exp(sol.t[skip:]))
        y_parts.append(sol.y[:, skip:])

    ts = np.concatenate(t_parts)
    ys = np.concatenate(y_parts, axis=1)
    return Trajectory(
        params=params,
        t0=t0,
        t_min=t_min,
        tol=tol,
        t_nodes=ts,
        q_nodes=ys[0].copy(),
        p_nodes=ys[1].copy(),
        segments=tuple(segments),
        tails=tail_integrals(t0, params),
    )


def solve_backward(
    params: ModelParams,
    t0: Optional[float] = None,
    t_min: float = DEFAULT_T_MIN,
    tol: float = DEFAULT_TOL,
    *,
    allow_excluded: bool = False,
) -> Trajectory:
    """
    Integrate Hamilton's equations from t0 down to t_min (DOP853, dense output).

    t0 defaults to choose_t0(params). Trajectories are cached and immutable, so
    repeated calls with the same arguments share one solution.

    Raises:
        DomainError: bad range, sigma >= 1 + 2 nu (unless allow_excluded), or
                     t_min < 1e-3 with sigma near 1.
        SolverError: step-size underflow; carries the t where it happened.
    """
    t0_ = float(choose_t0(params) if t0 is None else t0)
    _check_solve_args(params, t0_, float(t_min), float(tol), allow_excluded)
    return _solve(params, t0_, float(t_min), float(tol))


def clear_cache() -> None:
    _solve.cache_clear()


# ---------- checks ----------

def _momentum_slope(traj: Trajectory, s: float) -> float:
    """dp/ds from the dense output (Richardson central difference)."""
    room = min(s - traj.t_min, traj.t0 - s)
    h = min(1e-2 * s, room / 2.5)
    if h < 1e-6 * s:
        q, p = traj.q(s), traj.p(s)
        return float(hamilton_rhs(s, q, p, traj.params.nu)[1])

    def d(step: float) -> float:
        return float((traj.p(s + step) - traj.p(s - step)) / (2.0 * step))

    return (4.0 * d(0.5 * h) - d(h)) / 3.0


def painleve3_residual(traj: Trajectory, t: float) -> float:
    """
    Residual of the Painleve-III form for u(t) = exp(-q(2t)):

        u'' - [(u')^2/u - u'/t + (2 nu/t)(u^2 - 1) + u^3 - 1/u]

    q' = -p/s comes from the state, p' from differencing the dense output.
    """
    s = 2.0 * float(t)
    if not traj.covers(s):
        raise DomainError(f"2t={s:g} outside trajectory range [{traj.t_min}, {traj.t0}]")
    nu = traj.params.nu
    q, p = (float(v) for v in traj.state(s)[:2])
    dq = -p / s
    d2q = -_momentum_slope(traj, s) / s + p / (s * s)
    u = math.exp(-q)
    du = -2.0 * dq * u
    d2u = 4.0 * (dq * dq - d2q) * u
    rhs = du * du / u - du / t + (2.0 * nu / t) * (u * u - 1.0) + u ** 3 - 1.0 / u
    return d2u - rhs


def painleve3_scale(traj: Trajectory, t: float) -> float:
    """max(1, |u''|) used to scale the residual."""
    s = 2.0 * float(t)
    q, p = (float(v) for v in traj.state(s)[:2])
    dq = -p / s
    d2q = -_momentum_slope(traj, s) / s + p / (s * s)
    return max(1.0, abs(4.0 * (dq * dq - d2q) * math.exp(-q)))


# ---------- output ----------

def trajectory_header(traj: Trajectory) -> Dict[str, Any]:
    return {
        "params": traj.params.to_record(),
        "t0": traj.t0,
        "t_min": traj.t_min,
        "tol": traj.tol,
        "n_nodes": int(traj.t_nodes.size),
    }


def write_trajectory(traj: Trajectory, path: Union[str, Path]) -> Tuple[Path, Path]:
    """Write ``t,q,p`` CSV plus a JSON header next to it (same stem, .json)."""
    csv_path = Path(path)
    csv_path.parent.mkdir(parents=True, exist_ok=True)
    traj.to_frame().to_csv(csv_path, index=False, float_format="%.17g")
    header_path = csv_path.with_suffix(".json")
    header_path.write_text(json.dumps(trajectory_header(traj), indent=2, sort_keys=True), encoding="utf-8")
    return csv_path, header_path
