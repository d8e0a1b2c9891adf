# sinhgordon_tau/tau/identity.py
"""
tau(t; nu, lambda) at finite t.

tau_exact uses the closed identity

    ln tau = -(t/2) H + S/2 - (nu/4)(p dq/dnu + dS/dnu) + ln cosh(q/2)

and tau_direct the definitional one

    ln tau = (1/2) int_t^inf H ds - nu int_t^inf sinh^2(q/2) ds + ln cosh(q/2).

Both are accumulated in log space.
"""
from __future__ import annotations

import math
from typing import Callable, Iterable, List, Literal, Optional

from scipy.integrate import quad

from ..config import DEFAULT_H_NU, DEFAULT_H_SIGMA, DEFAULT_N_NODES, DEFAULT_TOL
from ..errors import DomainError
from ..sg_types import ModelParams, TauSample, Trajectory
from ..sinhg import hamiltonian, solve_backward
from .action import (
    Estimate,
    action_S_direct,
    action_S_estimate,
    family_t_min,
    nu_derivative_estimate,
)

_LN2 = math.log(2.0)


def log_cosh(x: float) -> float:
    ax = abs(x)
    if ax < 1.0:
        return math.log1p(2.0 * math.sinh(0.5 * ax) ** 2)
    return ax - _LN2 + math.log1p(math.exp(-2.0 * ax))


def _unit_sample(t: float, params: ModelParams) -> TauSample:
    return TauSample(
        t=t, params=params, tau=1.0, log_tau=0.0, H_t=0.0, S_t=0.0, nu_term=0.0, q=0.0, p=0.0,
        diagnostics={"action_error": 0.0, "nu_term_error": 0.0},
    )


def _trajectory_for(
    t: float,
    params: ModelParams,
    traj: Optional[Trajectory],
    t0: Optional[float],
    t_min: Optional[float],
    tol: float,
    allow_excluded: bool,
) -> Trajectory:
    if traj is None:
        traj = solve_backward(params, t0=t0, t_min=family_t_min(t, t_min), tol=tol, allow_excluded=allow_excluded)
    elif traj.params != params:
        raise DomainError("trajectory parameters do not match the requested tau parameters")
    if not traj.covers(t):
        raise DomainError(f"t={t:g} outside trajectory range [{traj.t_min}, {traj.t0}]")
    return traj


def tau_exact(
    t: float,
    params: ModelParams,
    *,
    h_nu: float = DEFAULT_H_NU,
    action: Literal["direct", "lambda"] = "direct",
    n_nodes: int = DEFAULT_N_NODES,
    h_sigma: float = DEFAULT_H_SIGMA,
    traj: Optional[Trajectory] = None,
    t0: Optional[float] = None,
    t_min: Optional[float] = None,
    tol: float = DEFAULT_TOL,
    allow_excluded: bool = False,
) -> TauSample:
    """
    tau from -tH/2 + S/2 - (nu/4) * nu-term + ln cosh(q/2).

    ``action="lambda"`` takes S from the sigma'-integral instead of the
    running integrals. The nu-term is skipped entirely at nu = 0.
    """
    t = float(t)
    if not t > 0.0:
        raise DomainError(f"tau_exact: t must be > 0, got {t}")
    if action not in ("direct", "lambda"):
        raise DomainError(f"tau_exact: action must be 'direct' or 'lambda', got {action!r}")
    if params.lam == 0.0:
        return _unit_sample(t, params)

    tr = _trajectory_for(t, params, traj, t0, t_min, tol, allow_excluded)
    q, p = (float(x) for x in tr.state(t)[:2])
    h = float(hamiltonian(t, q, p, params.nu))

    if action == "direct":
        s_est = Estimate(action_S_direct(t, tr), 0.0)
    else:
        s_est = action_S_estimate(t, params, n_nodes, h_sigma=h_sigma, t0=tr.t0, t_min=tr.t_min, tol=tr.tol)

    if params.nu == 0.0:
        nu_est = Estimate(0.0, 0.0)
    else:
        nu_est = nu_derivative_estimate(t, params, h_nu, t0=tr.t0, t_min=tr.t_min, tol=tr.tol)

    log_tau = -0.5 * t * h + 0.5 * s_est.value - 0.25 * params.nu * nu_est.value + log_cosh(0.5 * q)
    return TauSample(
        t=t,
        params=params,
        tau=math.exp(log_tau),
        log_tau=log_tau,
        H_t=h,
        S_t=s_est.value,
        nu_term=nu_est.value,
        q=q,
        p=p,
        diagnostics={"action_error": s_est.error, "nu_term_error": nu_est.error},
    )


def log_tau_direct(
    t: float,
    traj: Trajectory,
    h_nu: float = DEFAULT_H_NU,
    sinh2_source: Literal["direct", "nu_derivative"] = "direct",
) -> float:
    t = float(t)
    params = traj.params
    if params.lam == 0.0:
        return 0.0
    if not traj.covers(t):
        raise DomainError(f"t={t:g} outside trajectory range [{traj.t_min}, {traj.t0}]")
    q = float(traj.q(t))
    i_h, _, i_sh = (float(x) for x in traj.integrals(t))
    if sinh2_source == "nu_derivative":
        i_sh = -0.25 * nu_derivative_estimate(t, params, h_nu, t0=traj.t0, t_min=traj.t_min, tol=traj.tol).value
    elif sinh2_source != "direct":
        raise DomainError(f"sinh2_source must be 'direct' or 'nu_derivative', got {sinh2_source!r}")
    return 0.5 * i_h - params.nu * i_sh + log_cosh(0.5 * q)


def tau_direct(
    t: float,
    traj: Trajectory,
    h_nu: float = DEFAULT_H_NU,
    sinh2_source: Literal["direct", "nu_derivative"] = "direct",
) -> float:
    """exp[(1/2) int H - nu int sinh^2(q/2)] cosh(q/2) along ``traj``."""
    return math.exp(log_tau_direct(t, traj, h_nu, sinh2_source))


def tau_series(
    ts: Iterable[float],
    params: ModelParams,
    *,
    h_nu: float = DEFAULT_H_NU,
    action: Literal["direct", "lambda"] = "direct",
    n_nodes: int = DEFAULT_N_NODES,
    h_sigma: float = DEFAULT_H_SIGMA,
    t0: Optional[float] = None,
    t_min: Optional[float] = None,
    tol: float = DEFAULT_TOL,
    allow_excluded: bool = False,
) -> List[TauSample]:
    """
    tau_exact at every t in ``ts`` on one shared trajectory family.

    The family runs down to ``t_min`` (or the default floor), lowered to the
    smallest requested t when needed.
    """
    points = [float(t) for t in ts]
    if not points:
        return []
    if params.lam == 0.0:
        return [_unit_sample(t, params) for t in points]
    floor = min(family_t_min(min(points), t_min), min(points))
    traj = solve_backward(params, t0=t0, t_min=floor, tol=tol, allow_excluded=allow_excluded)
    return [
        tau_exact(
            t, params, h_nu=h_nu, action=action, n_nodes=n_nodes, h_sigma=h_sigma,
            traj=traj, tol=tol, allow_excluded=allow_excluded,
        )
        for t in points
    ]


def _integrate_dense(f: Callable[[float], float], t: float, t0: float) -> float:
    """int_t^t0 f(s) ds, split at s = 1 and taken in ln s below it."""
    total = 0.0
    if t < 1.0:
        hi = min(1.0, t0)
        val, _ = quad(lambda x: f(math.exp(x)) * math.exp(x), math.log(t), math.log(hi),
                      epsabs=1e-14, epsrel=1e-12, limit=400)
        total += val
    if t0 > 1.0:
        lo = max(1.0, t)
        val, _ = quad(f, lo, t0, epsabs=1e-14, epsrel=1e-12, limit=400)
        total += val
    return float(total)


def hamiltonian_identity_residual(t: float, traj: Trajectory) -> float:
    """
    int_t^inf H ds - (-t H(t) + S(t) + 4 nu int_t^inf sinh^2(q/2) ds)

    with all three integrals re-done by adaptive quadrature over the dense
    output (the running integrals are not used).
    """
    t = float(t)
    params = traj.params
    if params.lam == 0.0:
        return 0.0
    if not traj.covers(t):
        raise DomainError(f"t={t:g} outside trajectory range [{traj.t_min}, {traj.t0}]")
    nu = params.nu
    tail_h, tail_pq, tail_sh = traj.tails

    def h_of(s: float) -> float:
        q, p = (float(x) for x in traj.state(s)[:2])
        return float(hamiltonian(s, q, p, nu))

    def pq_of(s: float) -> float:
        p = float(traj.p(s))
        return -p * p / s

    def sh_of(s: float) -> float:
        return math.sinh(0.5 * float(traj.q(s))) ** 2

    i_h = _integrate_dense(h_of, t, traj.t0) + tail_h
    i_pq = _integrate_dense(pq_of, t, traj.t0) + tail_pq
    i_sh = _integrate_dense(sh_of, t, traj.t0) + tail_sh
    q, p = (float(x) for x in traj.state(t)[:2])
    h_t = float(hamiltonian(t, q, p, nu))
    return i_h - (-t * h_t + (i_pq - i_h) + 4.0 * nu * i_sh)
