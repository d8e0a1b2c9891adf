# sinhgordon_tau/connect.py
"""
Closed-form connection data between the t -> inf boundary condition and the
t -> 0 behaviour:

    sigma = (2/pi) arcsin(pi lambda),  s = (1 - sigma)/2
    u(t/2) ~ B t^sigma (1 - (nu/B)(1-sigma)^-2 t^(1-sigma) + B nu (1+sigma)^-2 t^(1+sigma))
    tau(t) ~ A t^(sigma(sigma-2)/4)

Everything is summed in log space and exponentiated once.
"""
from __future__ import annotations

import math
import warnings
from typing import Any, Final, Iterable, Literal, Tuple

import numpy as np
import pandas as pd
from scipy.special import gammaln, gammasgn

from .errors import DomainError, ExcludedRegionWarning, PrecisionWarning
from .sg_types import ConnectionConstants, ModelParams
from .sinhg import boundary_asymptotic, solve_backward
from .specfun import CONSTANTS, digamma, ln_barnes_g, ln_gamma
from .validate import require_connection_domain

_LN2: Final[float] = CONSTANTS.ln2
_ZP: Final[float] = CONSTANTS.zeta_prime_m1

# scaling functions lose digits below this t (sigma = 1 edge)
SCALING_PRECISION_T: Final[float] = 0.01


def sigma_of_lambda(value: float, direction: Literal["forward", "inverse"] = "forward") -> float:
    """forward: lambda -> sigma = (2/pi) arcsin(pi lambda); inverse: sigma -> sin(pi sigma/2)/pi."""
    x = float(value)
    if direction == "forward":
        if not (0.0 <= math.pi * x <= 1.0 + 1e-12):
            raise DomainError(f"sigma_of_lambda: lambda outside allowed range [0, 1/pi]: {x}")
        return 2.0 / math.pi * math.asin(min(math.pi * x, 1.0))
    if direction == "inverse":
        if not (0.0 <= x <= 1.0):
            raise DomainError(f"sigma_of_lambda: sigma outside allowed range [0, 1]: {x}")
        return math.sin(0.5 * math.pi * x) / math.pi
    raise DomainError(f"sigma_of_lambda: direction must be 'forward' or 'inverse', got {direction!r}")


def _check_nu(nu: float, where: str) -> float:
    nu = float(nu)
    if not (math.isfinite(nu) and nu > -0.5):
        raise DomainError(f"{where}: nu outside allowed range (-0.5, inf): {nu}")
    return nu


def coefficient_B(nu: float, sigma: float) -> float:
    """
    B(nu, sigma) = 2^(-3 sigma) Gamma^2(s)/Gamma^2(1-s) * Gamma(nu + 1 - s)/Gamma(nu + s).

    Gamma(nu + s) is negative for nu + s in (-1/2, 0), which is exactly
    sigma > 1 + 2 nu; its pole (sigma = 1 + 2 nu) is refused.
    """
    nu = _check_nu(nu, "coefficient_B")
    sigma = float(sigma)
    if not (0.0 <= sigma < 1.0):
        raise DomainError(f"coefficient_B: sigma outside allowed range [0, 1): {sigma}")
    s = 0.5 * (1.0 - sigma)
    a = nu + s
    if abs(a) < 1e-14:
        raise DomainError(
            f"coefficient_B: pole of Gamma(nu + s) at sigma = 1 + 2 nu (nu={nu}, sigma={sigma})"
        )
    ln_abs = (
        -3.0 * sigma * _LN2
        + 2.0 * (gammaln(s) - gammaln(1.0 - s))
        + gammaln(nu + 1.0 - s)
        - gammaln(a)
    )
    return float(gammasgn(a) * math.exp(ln_abs))


def u_smallt(t: Any, nu: float, lam: float) -> Any:
    """
    Three-term small-t expansion of u at argument t/2 (given t, not t/2).

    Exact at lambda = 0 (u = 1) and at nu = 0 (u = B t^sigma).
    """
    p = ModelParams(nu, lam)
    if p.sigma >= 1.0:
        raise DomainError("u_smallt: sigma = 1 is the degenerate case, use u_degenerate")
    b = coefficient_B(p.nu, p.sigma)
    if b == 0.0:  # pragma: no cover
        raise DomainError("u_smallt: B = 0")
    tt = np.asarray(t, dtype=float)
    sg, nu_ = p.sigma, p.nu
    out = b * tt**sg * (
        1.0
        - (nu_ / b) * (1.0 - sg) ** -2 * tt ** (1.0 - sg)
        + b * nu_ * (1.0 + sg) ** -2 * tt ** (1.0 + sg)
    )
    return float(out) if np.ndim(t) == 0 else out


def q_smallt(t: Any, nu: float, lam: float) -> Any:
    """-ln u_smallt, the small-t approximation of q(t)."""
    return -np.log(u_smallt(t, nu, lam))


def _k_of_nu(nu: float) -> float:
    return 3.0 * _LN2 - 2.0 * CONSTANTS.euler_gamma - float(digamma(1.0 + nu))


def c_of_nu(nu: float) -> float:
    """c(nu) = 1 + 2 nu (3 ln 2 - 2 gamma_E - psi_0(1 + nu))."""
    nu = _check_nu(nu, "c_of_nu")
    return 1.0 + 2.0 * nu * _k_of_nu(nu)


def u_degenerate(t: Any, nu: float) -> Any:
    """
    Small-t u(t/2) at lambda = 1/pi:

        (t/2) (nu ln^2 t - c ln t + (c^2 - 1)/(4 nu))

    with (c^2 - 1)/(4 nu) = k + nu k^2, finite at nu = 0.
    """
    nu = _check_nu(nu, "u_degenerate")
    k = _k_of_nu(nu)
    c = 1.0 + 2.0 * nu * k
    tt = np.asarray(t, dtype=float)
    lt = np.log(tt)
    out = 0.5 * tt * (nu * lt * lt - c * lt + k + nu * k * k)
    return float(out) if np.ndim(t) == 0 else out


def _s_of_lambda(lam: float) -> float:
    sigma = sigma_of_lambda(lam, "forward")
    return 0.5 * (1.0 - sigma)


def log_coefficient_A(nu: float, lam: float) -> float:
    nu = _check_nu(nu, "coefficient_A")
    s = _s_of_lambda(lam)
    if not s + nu > 0.0:
        raise DomainError(
            f"coefficient_A: s + nu = {s + nu:.6g} <= 0; the amplitude formula needs s + nu > 0"
        )
    lg = ln_barnes_g
    g_part = (
        -2.0 * lg(1.0 + s) - 2.0 * lg(1.0 - s)
        + lg(1.0 + s + nu) + lg(1.0 - s + nu)
        + 2.0 * lg(0.5) + ln_gamma(0.5)
        - 2.0 * lg(nu + 0.5) - ln_gamma(nu + 0.5)
    )
    gamma_ratio = ln_gamma(1.0 - s + nu) + ln_gamma(1.0 + s + nu) - 2.0 * ln_gamma(nu + 0.5)
    power = 0.5 * nu * math.log(s + nu) if nu != 0.0 else 0.0
    return float(
        3.0 * _ZP - (3.0 * s * s + 1.0 / 6.0) * _LN2 + g_part - 0.5 * nu * gamma_ratio + power
    )


def coefficient_A(nu: float, lam: float) -> float:
    """Small-t amplitude A(nu, lambda) of tau; requires s + nu > 0."""
    return math.exp(log_coefficient_A(nu, lam))


def coefficient_A_tracy(lam: float) -> float:
    """nu = 0 amplitude exp(3 zeta'(-1) - (3 s^2 + 1/6) ln 2) / (G(1+s) G(1-s))."""
    s = _s_of_lambda(lam)
    return math.exp(
        3.0 * _ZP - (3.0 * s * s + 1.0 / 6.0) * _LN2 - ln_barnes_g(1.0 + s) - ln_barnes_g(1.0 - s)
    )


def connection_constants(params: ModelParams) -> ConnectionConstants:
    require_connection_domain(params)
    sg = params.sigma
    return ConnectionConstants(
        params=params,
        B=coefficient_B(params.nu, sg),
        A=coefficient_A(params.nu, params.lam),
        exponent_u=sg,
        exponent_tau=sg * (sg - 2.0) / 4.0,
    )


# ---------- large t ----------

def tau_largetime_correction(t: Any, nu: float, lam: float) -> Any:
    """
    tau - 1 from the two-term large-t expansion

        -(lam^2/2) Gamma^2(nu+1/2) (2t)^(-2nu-1) e^{-2t} (nu - (nu+1/2)(nu^2 + 3nu/2 + 1)/t)
    """
    p = ModelParams(nu, lam)
    tt = np.asarray(t, dtype=float)
    if np.any(tt <= 0.0):
        raise DomainError("tau_largetime: t must be > 0")
    nu_ = p.nu
    amp = np.exp(2.0 * ln_gamma(nu_ + 0.5) - (2.0 * nu_ + 1.0) * np.log(2.0 * tt) - 2.0 * tt)
    brace = nu_ - (nu_ + 0.5) * (nu_ * nu_ + 1.5 * nu_ + 1.0) / tt
    out = -0.5 * p.lam * p.lam * amp * brace
    return float(out) if np.ndim(t) == 0 else out


def tau_largetime(t: Any, nu: float, lam: float) -> Any:
    return 1.0 + tau_largetime_correction(t, nu, lam)


def q_largetime(t: Any, nu: float, lam: float) -> Any:
    """2 lam Gamma(nu + 1/2) e^{-t} / (2t)^(nu + 1/2)."""
    q, _ = boundary_asymptotic(t, ModelParams(nu, lam))
    return float(q) if np.ndim(t) == 0 else q


# ---------- Ising point (nu = 0, lambda = 1/pi) ----------

def critical_amplitude() -> float:
    """exp(3 zeta'(-1) + ln 2 / 12) = G(1/2) G(3/2)."""
    return math.exp(3.0 * _ZP + _LN2 / 12.0)


def scaling_functions(t: float) -> Tuple[float, float]:
    """
    (F_minus, F_plus) with F_minus = 2^(3/8) t^(1/4) tau(t; 0, 1/pi) and
    F_plus = F_minus tanh(q/2).
    """
    from .tau import tau_exact

    t = float(t)
    if not t > 0.0:
        raise DomainError(f"scaling_functions: t must be > 0, got {t}")
    if t <= SCALING_PRECISION_T:
        warnings.warn(
            f"scaling functions at t={t:g} <= {SCALING_PRECISION_T}: sigma = 1 edge, expect lost digits",
            PrecisionWarning,
            stacklevel=2,
        )
    params = ModelParams(0.0, 1.0 / math.pi)
    with warnings.catch_warnings():
        # the Ising point sits on sigma = 1 + 2 nu by construction
        warnings.simplefilter("ignore", ExcludedRegionWarning)
        traj = solve_backward(params, t_min=min(t, 0.5), allow_excluded=True)
        sample = tau_exact(t, params, traj=traj, allow_excluded=True)
    f_minus = 2.0 ** 0.375 * t ** 0.25 * sample.tau
    return f_minus, f_minus * math.tanh(0.5 * sample.q)


def figure_curves(nus: Iterable[float], sigmas: Iterable[float]) -> pd.DataFrame:
    """B(nu, sigma) and A(nu, sigma) on a grid; NaN where a formula does not apply."""
    rows = []
    for nu in nus:
        for sg in sigmas:
            nu_f, sg_f = float(nu), float(sg)
            try:
                b = coefficient_B(nu_f, sg_f)
            except DomainError:
                b = float("nan")
            s = 0.5 * (1.0 - sg_f)
            a = (
                coefficient_A(nu_f, sigma_of_lambda(sg_f, "inverse"))
                if s + nu_f > 0.0 and 0.0 <= sg_f <= 1.0
                else float("nan")
            )
            rows.append({"nu": nu_f, "sigma": sg_f, "B": b, "A": a})
    return pd.DataFrame(rows, columns=["nu", "sigma", "B", "A"])
