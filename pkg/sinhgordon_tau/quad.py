# sinhgordon_tau/quad.py
"""
Semi-infinite integrals with a (y - 1)^(-1/2) endpoint singularity.

The boundary integral

    W(t; nu) = int_1^inf e^{-t y} (y^2 - 1)^(-1/2) ((y - 1)/(y + 1))^nu dy

is evaluated after y = 1 + u^2. With e^{-t} factored out the integrand on
u in [0, U] is

    2 e^{-t u^2} (u^2 + 2)^(-nu - 1/2) * u^(2 nu)

and the algebraic factor u^(2 nu) is handed to QUADPACK as an endpoint weight.
Past U the Gaussian factor is below abs_tol * 1e-3; that remainder is bounded
with erfc and added to both the value and its error.
"""
from __future__ import annotations

import math
import warnings
from typing import Callable, Final, NamedTuple, Optional

import numpy as np
from scipy.integrate import quad
from scipy.special import erfc

from .config import (
    DEFAULT_F2_REL_TOL,
    DEFAULT_MAX_SUBDIVISIONS,
    DEFAULT_QUAD_ABS_TOL,
    DEFAULT_QUAD_REL_TOL,
)
from .errors import ConvergenceError, DomainError, PrecisionWarning, QuadratureWarning
from .sg_types import QuadSettings
from .specfun import ln_gamma

# f2 below this t loses digits in exp(-lambda^2 f2) comparisons
F2_PRECISION_T: Final[float] = 0.05


class QuadratureResult(NamedTuple):
    value: float
    error: float


def default_settings() -> QuadSettings:
    return QuadSettings(
        abs_tol=DEFAULT_QUAD_ABS_TOL,
        rel_tol=DEFAULT_QUAD_REL_TOL,
        max_subdivisions=DEFAULT_MAX_SUBDIVISIONS,
    )


def f2_settings() -> QuadSettings:
    return QuadSettings(
        abs_tol=DEFAULT_QUAD_ABS_TOL,
        rel_tol=DEFAULT_F2_REL_TOL,
        max_subdivisions=DEFAULT_MAX_SUBDIVISIONS,
    )


def _check_args(t: float, nu: float, where: str) -> None:
    if not (math.isfinite(t) and t > 0.0):
        raise DomainError(f"{where}: t must be > 0, got {t}")
    if not (math.isfinite(nu) and nu > -0.5):
        raise DomainError(f"{where}: nu must be > -1/2, got {nu}")


def _cutoff(t: float, abs_tol: float) -> float:
    """U with exp(-t U^2) = abs_tol * 1e-3."""
    return math.sqrt(math.log(1e3 / abs_tol) / t)


def _weighted_quad(
    f: Callable[[float], float],
    upper: float,
    alpha: float,
    settings: QuadSettings,
    where: str,
    warn: bool = True,
) -> QuadratureResult:
    """
    int_0^upper f(u) u^alpha du with QUADPACK's algebraic-weight rule.

    Raises ConvergenceError when the error estimate exceeds
    max(abs_tol, rel_tol |value|); a QUADPACK message within tolerance only warns.
    """
    out = quad(
        f,
        0.0,
        upper,
        weight="alg",
        wvar=(alpha, 0.0),
        epsabs=settings.abs_tol,
        epsrel=settings.rel_tol,
        limit=int(settings.max_subdivisions),
        full_output=1,
    )
    value, err = float(out[0]), float(out[1])
    target = max(settings.abs_tol, settings.rel_tol * abs(value))
    msg = str(out[3]).strip().splitlines()[0] if len(out) > 3 and str(out[3]).strip() else ""
    if not (err <= target):
        raise ConvergenceError(
            f"{where}: {msg or 'tolerance not met'} (error estimate {err:.3g} > {target:.3g})"
        )
    if msg and warn:
        warnings.warn(f"{where}: {msg}", QuadratureWarning, stacklevel=3)
    return QuadratureResult(value, err)


def _tail_bound(t: float, nu: float, upper: float, extra_power: float = 0.0) -> float:
    """Estimate of int_U^inf 2 e^{-t u^2} u^(2 nu) (u^2 + 2)^(-nu - 1/2) (1 + u^2)^extra_power du."""
    amp = upper ** (2.0 * nu) * (upper * upper + 2.0) ** (-nu - 0.5)
    amp *= (1.0 + upper * upper) ** extra_power
    return float(amp * math.sqrt(math.pi / t) * erfc(math.sqrt(t) * upper))


def watson_integral_with_error(
    t: float, nu: float, settings: Optional[QuadSettings] = None
) -> QuadratureResult:
    _check_args(t, nu, "watson_integral")
    cfg = settings or default_settings()
    upper = _cutoff(t, cfg.abs_tol)
    a = -nu - 0.5

    def f(u: float) -> float:
        return 2.0 * math.exp(-t * u * u) * (u * u + 2.0) ** a

    res = _weighted_quad(f, upper, 2.0 * nu, cfg, "watson_integral")
    tail = _tail_bound(t, nu, upper)
    scale = math.exp(-t)
    return QuadratureResult(scale * (res.value + tail), scale * (res.error + tail))


def watson_integral(t: float, nu: float, settings: Optional[QuadSettings] = None) -> float:
    """W(t; nu); reduces to K_0(t) at nu = 0 and to e^t E_1(2t) at nu = 1/2."""
    return watson_integral_with_error(t, nu, settings).value


def watson_integral_dt(t: float, nu: float, settings: Optional[QuadSettings] = None) -> float:
    """dW/dt = -int_1^inf y e^{-t y} (...) dy."""
    _check_args(t, nu, "watson_integral_dt")
    cfg = settings or default_settings()
    upper = _cutoff(t, cfg.abs_tol)
    a = -nu - 0.5

    def f(u: float) -> float:
        return 2.0 * (1.0 + u * u) * math.exp(-t * u * u) * (u * u + 2.0) ** a

    res = _weighted_quad(f, upper, 2.0 * nu, cfg, "watson_integral_dt")
    tail = _tail_bound(t, nu, upper, extra_power=1.0)
    return -math.exp(-t) * (res.value + tail)


def f2_with_error(
    t: float,
    nu: float,
    settings: Optional[QuadSettings] = None,
    *,
    inner: str = "y1",
) -> QuadratureResult:
    """
    First series coefficient

        f2 = - int int e^{-t(y1 + y2)} w(y1) w(y2) sqrt((y2^2 - 1)/(y1^2 - 1)) (y1 + y2)^-2

    with w(y) = ((y - 1)/(y + 1))^nu, as an iterated integral. ``inner`` picks
    which variable is integrated first; both orders give the same number.
    """
    _check_args(t, nu, "f2")
    if inner not in ("y1", "y2"):
        raise DomainError(f"f2: inner must be 'y1' or 'y2', got {inner!r}")
    if t < F2_PRECISION_T:
        warnings.warn(
            f"f2 at t={t:g} < {F2_PRECISION_T}: integral grows and downstream cancellation worsens",
            PrecisionWarning,
            stacklevel=2,
        )
    cfg = settings or f2_settings()
    inner_cfg = QuadSettings(
        abs_tol=cfg.abs_tol,
        rel_tol=min(cfg.rel_tol * 1e-2, 1e-10),
        max_subdivisions=cfg.max_subdivisions,
    )
    upper = _cutoff(t, cfg.abs_tol)

    # after y = 1 + u^2 and with e^{-2t} factored out:
    #   y1 carries 2 e^{-t u^2} u^(2nu)   (u^2 + 2)^(-nu - 1/2)
    #   y2 carries 2 e^{-t u^2} u^(2nu+2) (u^2 + 2)^(1/2 - nu)
    def g1(u: float) -> float:
        return 2.0 * math.exp(-t * u * u) * (u * u + 2.0) ** (-nu - 0.5)

    def g2(u: float) -> float:
        return 2.0 * math.exp(-t * u * u) * (u * u + 2.0) ** (0.5 - nu)

    a1, a2 = 2.0 * nu, 2.0 * nu + 2.0
    if inner == "y1":
        g_in, a_in, g_out, a_out = g1, a1, g2, a2
    else:
        g_in, a_in, g_out, a_out = g2, a2, g1, a1

    def outer(v: float) -> float:
        vv = v * v

        def kernel(u: float) -> float:
            return g_in(u) / (2.0 + u * u + vv) ** 2

        return g_out(v) * _weighted_quad(kernel, upper, a_in, inner_cfg, "f2 inner", warn=False).value

    res = _weighted_quad(outer, upper, a_out, cfg, "f2")
    scale = math.exp(-2.0 * t)
    return QuadratureResult(-scale * res.value, scale * res.error)


def f2(t: float, nu: float, settings: Optional[QuadSettings] = None, *, inner: str = "y1") -> float:
    return f2_with_error(t, nu, settings, inner=inner).value


def watson_large_t(t: float, nu: float) -> float:
    """Leading large-t law Gamma(nu + 1/2) e^{-t} / (2t)^(nu + 1/2)."""
    _check_args(t, nu, "watson_large_t")
    return float(np.exp(ln_gamma(nu + 0.5) - t - (nu + 0.5) * math.log(2.0 * t)))
