# sinhgordon_tau/tau/action.py
"""
The action integral S(t) = int_t^inf (p dq/ds - H) ds and its nu-derivative.

Two independent routes to S:
  * action_S_direct reads the running integrals carried by the trajectory;
  * action_S integrates -p dq/dsigma' over the family of solutions with
    sigma' in [0, sigma] (Gauss-Legendre), so it never touches H.

Small-t closed forms live here as well; they are composed from specfun only.
"""
from __future__ import annotations

import math
import warnings
from typing import Callable, Final, NamedTuple, Optional, Tuple

import numpy as np
from scipy.integrate import quad

from ..config import BOUNDARY_WARN_BOUND, DEFAULT_H_NU, DEFAULT_H_SIGMA, DEFAULT_N_NODES, DEFAULT_T_MIN, DEFAULT_TOL
from ..connect import coefficient_B
from ..errors import BoundaryDataWarning, DomainError, ExcludedRegionWarning
from ..sg_types import ModelParams, Trajectory
from ..sinhg import choose_t0, solve_backward
from ..specfun import CONSTANTS, barnes_g_log_derivative, digamma, ln_barnes_g, ln_gamma

_LN2: Final[float] = CONSTANTS.ln2


class Estimate(NamedTuple):
    value: float
    error: float


# ---------- trajectory families ----------

def family_t_min(t: float, t_min: Optional[float] = None) -> float:
    """Shared floor so every auxiliary solve at t >= 0.01 hits the same cache entry."""
    if t_min is not None:
        return float(t_min)
    return min(DEFAULT_T_MIN, float(t))


def family_member(params: ModelParams, t0: float, t_min: float, tol: float) -> Trajectory:
    """Auxiliary solve for differencing; shifted members may cross sigma = 1 + 2 nu."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ExcludedRegionWarning)
        return solve_backward(params, t0=t0, t_min=t_min, tol=tol, allow_excluded=True)


def _richardson(d: Callable[[float], float], h: float) -> Estimate:
    coarse, fine = d(h), d(0.5 * h)
    value = (4.0 * fine - coarse) / 3.0
    return Estimate(value, abs(value - fine))


# ---------- S from the trajectory ----------

def action_S_direct(t: float, traj: Trajectory) -> float:
    """int_t^inf (p dq/ds - H) ds from the running integrals plus the analytic tail."""
    if traj.params.lam == 0.0:
        return 0.0
    tail = max(abs(x) for x in traj.tails)
    if tail > BOUNDARY_WARN_BOUND:
        warnings.warn(
            f"tail beyond t0={traj.t0:g} is {tail:.2e} > {BOUNDARY_WARN_BOUND:g}; increase t0",
            BoundaryDataWarning,
            stacklevel=2,
        )
    i_h, i_pq, _ = (float(x) for x in traj.integrals(float(t)))
    return i_pq - i_h


# ---------- S as a sigma'-integral ----------

def _dq_dsigma(t: float, sigma: float, nu: float, h: float, t0: float, t_min: float, tol: float) -> Estimate:
    def d(step: float) -> float:
        up = family_member(ModelParams.from_sigma(nu, sigma + step), t0, t_min, tol)
        dn = family_member(ModelParams.from_sigma(nu, sigma - step), t0, t_min, tol)
        return float((up.q(t) - dn.q(t)) / (2.0 * step))

    return _richardson(d, h)


def _action_rule(
    t: float, params: ModelParams, n_nodes: int, h_sigma: float, t0: float, t_min: float, tol: float
) -> Estimate:
    x, w = np.polynomial.legendre.leggauss(n_nodes)
    half = 0.5 * params.sigma
    total, err = 0.0, 0.0
    for xi, wi in zip(x, w):
        sg = half * (xi + 1.0)
        h = min(h_sigma, 0.25 * sg, 0.25 * (1.0 - sg))
        p = float(family_member(ModelParams.from_sigma(params.nu, sg), t0, t_min, tol).p(t))
        dq = _dq_dsigma(t, sg, params.nu, h, t0, t_min, tol)
        total += wi * p * dq.value
        err += abs(wi * p) * dq.error
    return Estimate(-half * total, half * err)


def action_S_estimate(
    t: float,
    params: ModelParams,
    n_nodes: int = DEFAULT_N_NODES,
    *,
    h_sigma: float = DEFAULT_H_SIGMA,
    t0: Optional[float] = None,
    t_min: Optional[float] = None,
    tol: float = DEFAULT_TOL,
) -> Estimate:
    """
    S = -int_0^sigma p dq/dsigma' dsigma' with n_nodes Gauss-Legendre points.

    The error is |S_n - S_m| with m = ceil(n/2), plus the differencing error.
    """
    if n_nodes < 2:
        raise DomainError(f"action_S: n_nodes must be >= 2, got {n_nodes}")
    if params.lam == 0.0:
        return Estimate(0.0, 0.0)
    t0_ = float(choose_t0(params) if t0 is None else t0)
    tm = family_t_min(t, t_min)
    full = _action_rule(t, params, n_nodes, h_sigma, t0_, tm, tol)
    half = _action_rule(t, params, (n_nodes + 1) // 2, h_sigma, t0_, tm, tol)
    return Estimate(full.value, abs(full.value - half.value) + full.error)


def action_S(t: float, params: ModelParams, n_nodes: int = DEFAULT_N_NODES, **kw: float) -> float:
    return action_S_estimate(t, params, n_nodes, **kw).value  # type: ignore[arg-type]


# ---------- nu-term ----------

def nu_derivative_estimate(
    t: float,
    params: ModelParams,
    h_nu: float = DEFAULT_H_NU,
    *,
    t0: Optional[float] = None,
    t_min: Optional[float] = None,
    tol: float = DEFAULT_TOL,
) -> Estimate:
    """
    p dq/dnu + dS/dnu at fixed (t, lambda) by Richardson central differences.

    At nu = 0 nothing is differenced: the value comes from the companion
    identity -4 int_t^inf sinh^2(q/2) ds on the base trajectory.
    """
    if not h_nu > 0.0:
        raise DomainError(f"h_nu must be > 0, got {h_nu}")
    if params.nu - h_nu <= -0.5:
        raise DomainError(f"nu - h_nu = {params.nu - h_nu:g} <= -1/2: nu-differencing leaves the domain")
    if params.lam == 0.0:
        return Estimate(0.0, 0.0)
    t0_ = float(choose_t0(params) if t0 is None else t0)
    tm = family_t_min(t, t_min)
    base = family_member(params, t0_, tm, tol)
    if params.nu == 0.0:
        return Estimate(-4.0 * float(base.integrals(t)[2]), 0.0)
    p = float(base.p(t))

    def d(step: float) -> float:
        up = family_member(params.with_nu(params.nu + step), t0_, tm, tol)
        dn = family_member(params.with_nu(params.nu - step), t0_, tm, tol)
        dq = float(up.q(t) - dn.q(t))
        ds = action_S_direct(t, up) - action_S_direct(t, dn)
        return (p * dq + ds) / (2.0 * step)

    return _richardson(d, h_nu)


def nu_derivative_term(t: float, params: ModelParams, h_nu: float = DEFAULT_H_NU, **kw: float) -> float:
    return nu_derivative_estimate(t, params, h_nu, **kw).value  # type: ignore[arg-type]


# ---------- small-t closed forms ----------

def _check_smallt(params: ModelParams, where: str) -> Tuple[float, float, float]:
    nu, sg, s = params.nu, params.sigma, params.s
    if not (0.0 < sg < 1.0):
        raise DomainError(f"{where}: sigma must lie in (0, 1), got {sg}")
    if not s + nu > 0.0:
        raise DomainError(f"{where}: s + nu = {s + nu:.6g} <= 0; small-t constants need s + nu > 0")
    return nu, sg, s


def _gamma_ratio(nu: float, s: float) -> float:
    """ln[Gamma(1-s+nu) Gamma(1+s+nu) / Gamma^2(1/2+nu)]."""
    return float(ln_gamma(1.0 - s + nu) + ln_gamma(1.0 + s + nu) - 2.0 * ln_gamma(0.5 + nu))


def j_difference_closed(nu: float, sigma: float) -> float:
    """
    Integrated-by-parts sigma'-integral, closed form:

        sigma^2/2 + 2 ln[G(1-s+nu) G(1+s+nu) / G^2(1/2+nu)]
        + (1 - 2nu) ln[Gamma(1-s+nu) Gamma(1+s+nu) / Gamma^2(1/2+nu)]
        - 2 ln Gamma(1+s+nu) + (1 + 2nu) ln(s + nu)
    """
    s = 0.5 * (1.0 - float(sigma))
    if not s + nu > 0.0:
        raise DomainError(f"j_difference: s + nu = {s + nu:.6g} <= 0")
    lg = ln_barnes_g
    return float(
        0.5 * sigma * sigma
        + 2.0 * (lg(1.0 - s + nu) + lg(1.0 + s + nu) - 2.0 * lg(0.5 + nu))
        + (1.0 - 2.0 * nu) * _gamma_ratio(nu, s)
        - 2.0 * ln_gamma(1.0 + s + nu)
        + (1.0 + 2.0 * nu) * math.log(s + nu)
    )


def j_difference_quadrature(nu: float, sigma: float) -> float:
    """Same quantity by direct quadrature of (x/2)[psi(nu + (1+x)/2) + psi(nu + (1-x)/2)] over [0, sigma]."""
    s = 0.5 * (1.0 - float(sigma))
    if not s + nu > 0.0:
        raise DomainError(f"j_difference: s + nu = {s + nu:.6g} <= 0")

    def f(x: float) -> float:
        return 0.5 * x * float(digamma(nu + 0.5 * (1.0 + x)) + digamma(nu + 0.5 * (1.0 - x)))

    value, _ = quad(f, 0.0, float(sigma), epsabs=1e-14, epsrel=1e-13, limit=200)
    return float(value)


def action_smallt_analytic(params: ModelParams) -> float:
    """Constant part of S(t) - (sigma^2/2) ln t as t -> 0."""
    nu, sg, s = _check_smallt(params, "action_smallt_analytic")
    lg = ln_barnes_g
    zp = CONSTANTS.zeta_prime_m1
    return float(
        -1.5 * sg * sg * _LN2
        - 0.5 * sg * sg
        + 6.0 * zp
        + _LN2 / 6.0
        + 2.0 * (lg(1.0 - s + nu) + lg(1.0 + s + nu) - 2.0 * lg(1.0 - s) - 2.0 * lg(1.0 + s))
        + 2.0 * (2.0 * lg(0.5) + ln_gamma(0.5) - 2.0 * lg(0.5 + nu) - ln_gamma(0.5 + nu))
        + 2.0 * ln_gamma(s) - 2.0 * ln_gamma(1.0 - s) + ln_gamma(1.0 - s + nu) - ln_gamma(1.0 + s + nu)
        - 2.0 * nu * _gamma_ratio(nu, s)
        + (1.0 + 2.0 * nu) * math.log(s + nu)
    )


def nu_term_smallt_analytic(params: ModelParams) -> float:
    """t -> 0 limit of p dq/dnu + dS/dnu."""
    nu, _, s = _check_smallt(params, "nu_term_smallt_analytic")
    return -2.0 * _gamma_ratio(nu, s) + 2.0 * math.log(s + nu)


def action_nu_derivative_smallt(params: ModelParams) -> float:
    """d/dnu of action_smallt_analytic, differentiated term by term (G'/G, psi_0)."""
    nu, _, s = _check_smallt(params, "action_nu_derivative_smallt")
    dg = barnes_g_log_derivative
    psi = digamma
    a, b, c = 1.0 - s + nu, 1.0 + s + nu, 0.5 + nu
    return float(
        2.0 * (dg(a) + dg(b))
        - 4.0 * dg(c)
        - 2.0 * psi(c)
        + psi(a)
        - psi(b)
        - 2.0 * _gamma_ratio(nu, s)
        - 2.0 * nu * (psi(a) + psi(b) - 2.0 * psi(c))
        + 2.0 * math.log(s + nu)
        + (1.0 + 2.0 * nu) / (s + nu)
    )


def amplitude_from_smallt_limits(params: ModelParams) -> float:
    """
    A assembled from the t -> 0 limits of each ingredient of the tau identity:
    -tH/2 -> sigma^2/4, S/2, the nu-term, and cosh(q/2) ~ (B t^sigma)^(-1/2)/2.
    """
    nu, sg, _ = _check_smallt(params, "amplitude_from_smallt_limits")
    b = coefficient_B(nu, sg)
    log_a = (
        0.25 * sg * sg
        + 0.5 * action_smallt_analytic(params)
        - 0.25 * nu * nu_term_smallt_analytic(params)
        - _LN2
        - 0.5 * math.log(b)
    )
    return math.exp(log_a)
