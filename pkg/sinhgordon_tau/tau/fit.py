# sinhgordon_tau/tau/fit.py
"""
Least-squares extraction of the small-t constants.

Below the window both ln u(t/2) = -q(t) and ln tau expand in powers

    t^(k(1-sigma) + m(1+sigma)),  k, m >= 0

(only even k and m at nu = 0), plus one power from the constant part of H:
t at nu != 0, t^2 at nu = 0. Every term whose estimated size at the top of
the window exceeds _SIZE_FLOOR enters the fit as a nuisance column.

u-fit:   -q(t) - ln(1 - (nu/B)(1-sigma)^-2 t^(1-sigma) + B nu (1+sigma)^-2 t^(1+sigma))
         = ln B + sigma ln t + nuisance
         The known correction depends on (sigma, B), so the fit is iterated
         to a fixed point.
tau-fit: ln tau - log1p(e^-q) - kappa ln t = ln A + nuisance, kappa = sigma(sigma-2)/4
         with the fitted sigma (log1p(e^-q) is the exact subleading part of
         ln cosh(q/2)). A second fit with a free slope reports kappa.
"""
from __future__ import annotations

import math
from typing import Final, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from ..config import DEFAULT_FIT_SAMPLES, DEFAULT_FIT_WINDOW
from ..errors import DomainError, FitError
from ..sg_types import FitResult, TauSample, Trajectory
from ..validate import WINDOW_MAX, WINDOW_MIN_DECADES

_MAX_ITER: Final[int] = 60
_FIXED_POINT_TOL: Final[float] = 1e-12

# expansion terms below this size at the window top are left out
_SIZE_FLOOR: Final[float] = 1e-10
# headroom on the per-order size estimate
_SIZE_SAFETY: Final[float] = 2.0
_MAX_ORDER: Final[int] = 12
_MAX_NUISANCE: Final[int] = 12
# exponents closer than this are one column
_EXPONENT_MERGE: Final[float] = 1e-6

_FIRST_ORDER: Final[Tuple[Tuple[int, int], ...]] = ((1, 0), (0, 1))


class PowerLawFit(NamedTuple):
    intercept: float
    slope: float
    nuisance: Tuple[float, ...]
    residual: float


class ScalingFit(NamedTuple):
    limit: float
    a: float
    b: float
    residual: float


def _check_span(t: np.ndarray, where: str) -> None:
    if t.size < 3:
        raise FitError(f"{where}: need at least 3 samples, got {t.size}")
    if np.any(t <= 0.0):
        raise FitError(f"{where}: sample t must be positive")
    if math.log10(float(t.max()) / float(t.min())) < WINDOW_MIN_DECADES:
        raise FitError(
            f"{where}: window [{t.min():g}, {t.max():g}] spans less than {WINDOW_MIN_DECADES} decade"
        )


def _dedupe(exponents: Sequence[float]) -> Tuple[float, ...]:
    out: list[float] = []
    for e in exponents:
        if e > 0.0 and all(abs(e - k) > _EXPONENT_MERGE for k in out):
            out.append(float(e))
    return tuple(out)


def fit_power_law(
    t: Sequence[float] | np.ndarray,
    log_values: Sequence[float] | np.ndarray,
    nuisance_exponents: Sequence[float] = (),
    *,
    slope: Optional[float] = None,
) -> PowerLawFit:
    """
    log_values ~ intercept + slope ln t + sum_k c_k t^e_k.

    With ``slope`` given, slope * ln t is taken off first and only the
    intercept and nuisance coefficients are fitted. Columns are scaled to unit
    maximum before the solve. residual is the max relative deviation
    exp(|model - data|) - 1.
    """
    tt = np.asarray(t, dtype=float)
    yy = np.asarray(log_values, dtype=float)
    if tt.shape != yy.shape:
        raise FitError(f"fit_power_law: shape mismatch {tt.shape} vs {yy.shape}")
    _check_span(tt, "fit_power_law")
    exps = _dedupe(nuisance_exponents)
    lt = np.log(tt)
    if slope is None:
        cols = [np.ones_like(tt), lt]
        target = yy
    else:
        cols = [np.ones_like(tt)]
        target = yy - float(slope) * lt
    cols += [tt**e for e in exps]
    design = np.column_stack(cols)
    if design.shape[1] >= tt.size:
        raise FitError(f"fit_power_law: {design.shape[1]} unknowns from {tt.size} samples")
    scale = np.max(np.abs(design), axis=0)
    coef, _, rank, _ = np.linalg.lstsq(design / scale, target, rcond=None)
    if rank < design.shape[1]:
        raise FitError("fit_power_law: design matrix is rank deficient")
    coef = coef / scale
    dev = float(np.max(np.abs(design @ coef - target)))
    if slope is None:
        head, fitted_slope, rest = coef[0], float(coef[1]), coef[2:]
    else:
        head, fitted_slope, rest = coef[0], float(slope), coef[1:]
    return PowerLawFit(float(head), fitted_slope, tuple(float(c) for c in rest), math.expm1(dev))


# ---------- small-t expansion terms ----------

def _order_scales(nu: float, sigma: float, b: float) -> Tuple[float, float]:
    """Size per unit of k and of m: first-order coefficients, or the square roots of the second-order ones."""
    a1 = abs(nu) / (b * (1.0 - sigma) ** 2)
    a2 = 1.0 / (4.0 * b * (1.0 - sigma))
    b1 = abs(nu) * b / (1.0 + sigma) ** 2
    b2 = b / (4.0 * (1.0 + sigma))
    return _SIZE_SAFETY * max(a1, a2), _SIZE_SAFETY * max(b1, b2)


def expansion_orders(
    nu: float, sigma: float, b: float, t_hi: float, max_terms: int = _MAX_NUISANCE
) -> Tuple[Tuple[int, int], ...]:
    """
    (k, m) of the terms t^(k(1-sigma) + m(1+sigma)) that matter below t_hi,
    largest first, at most ``max_terms`` of them.
    """
    if not (0.0 < sigma < 1.0 and b > 0.0 and t_hi > 0.0):
        raise FitError(f"expansion_orders: need 0 < sigma < 1, B > 0, t_hi > 0 (sigma={sigma:g}, B={b:g})")
    ca, cb = _order_scales(nu, sigma, b)
    xa = ca * t_hi ** (1.0 - sigma)
    xb = cb * t_hi ** (1.0 + sigma)
    step = 1 if nu != 0.0 else 2
    sized = []
    for k in range(0, _MAX_ORDER + 1, step):
        for m in range(0, _MAX_ORDER + 1 - k, step):
            if k + m == 0:
                continue
            size = xa**k * xb**m
            if size >= _SIZE_FLOOR:
                sized.append((size, k, m))
    sized.sort(key=lambda x: (-x[0], x[1], x[2]))
    return tuple((k, m) for _, k, m in sized[: max(0, int(max_terms))])


def expansion_exponents(orders: Sequence[Tuple[int, int]], sigma: float) -> Tuple[float, ...]:
    return tuple(k * (1.0 - sigma) + m * (1.0 + sigma) for k, m in orders)


def _constant_part_exponent(nu: float) -> float:
    # the constant in 4 nu sinh^2(q/2) (nu != 0) or in sinh^2 q (nu = 0)
    return 1.0 if nu != 0.0 else 2.0


def _correction_log(t: np.ndarray, nu: float, sigma: float, b: float) -> np.ndarray:
    if nu == 0.0:
        return np.zeros_like(t)
    inner = 1.0 - (nu / b) * (1.0 - sigma) ** -2 * t ** (1.0 - sigma) + b * nu * (1.0 + sigma) ** -2 * t ** (1.0 + sigma)
    if np.any(inner <= 0.0):
        raise FitError("known correction factor is not positive over the window; shrink the window")
    return np.log(inner)


def _room(n_samples: int, fixed_columns: int) -> int:
    return min(_MAX_NUISANCE, n_samples - fixed_columns - 2)


def _u_fit(t: np.ndarray, minus_q: np.ndarray, nu: float) -> Tuple[PowerLawFit, float]:
    first = fit_power_law(t, minus_q)
    sigma, b = first.slope, math.exp(first.intercept)
    if not (0.0 < sigma < 1.0):
        raise FitError(f"u-fit left the range 0 < sigma < 1 (sigma={sigma:g})")
    orders = [
        km for km in expansion_orders(nu, sigma, b, float(t.max()), _room(t.size, 2) + 2)
        if km not in _FIRST_ORDER
    ]
    for _ in range(_MAX_ITER):
        if not (0.0 < sigma < 1.0):
            raise FitError(f"u-fit left the range 0 < sigma < 1 (sigma={sigma:g})")
        y = minus_q - _correction_log(t, nu, sigma, b)
        fit = fit_power_law(t, y, expansion_exponents(orders, sigma))
        done = abs(fit.slope - sigma) < _FIXED_POINT_TOL and abs(fit.intercept - math.log(b)) < _FIXED_POINT_TOL
        sigma, b = fit.slope, math.exp(fit.intercept)
        if done:
            return fit, sigma
    raise FitError(f"u-fit did not reach a fixed point in {_MAX_ITER} iterations")


def _tau_exponents(t_tau: np.ndarray, nu: float, sigma: float, b: float) -> Tuple[float, ...]:
    t_hi = float(t_tau.max())
    room = _room(t_tau.size, 2)
    exps = list(expansion_exponents(expansion_orders(nu, sigma, b, t_hi, max(0, room - 1)), sigma))
    extra = _constant_part_exponent(nu)
    if t_hi**extra >= _SIZE_FLOOR:
        exps.append(extra)
    return tuple(sorted(exps))


def fit_connection(
    traj: Trajectory,
    tau_series: Sequence[TauSample],
    window: Tuple[float, float] = DEFAULT_FIT_WINDOW,
    *,
    n_samples: int = DEFAULT_FIT_SAMPLES,
) -> FitResult:
    """
    Fit (sigma, B) from u(t/2) = e^{-q(t)} on ``n_samples`` log-spaced points
    in ``window``, then A (slope fixed by sigma) and kappa (free slope) from
    the tau samples.
    """
    lo, hi = (float(x) for x in window)
    if hi > WINDOW_MAX:
        raise DomainError(f"fit window upper bound {hi} exceeds {WINDOW_MAX} (small-t fits only)")
    if not 0.0 < lo < hi:
        raise DomainError(f"fit window needs 0 < lo < hi, got ({lo}, {hi})")
    if math.log10(hi / lo) < WINDOW_MIN_DECADES:
        raise FitError(f"fit window [{lo:g}, {hi:g}] spans less than {WINDOW_MIN_DECADES} decade")
    if not (traj.covers(lo) and traj.covers(hi)):
        raise DomainError(f"fit window [{lo:g}, {hi:g}] outside trajectory range [{traj.t_min}, {traj.t0}]")
    if traj.params.lam == 0.0:
        raise FitError("lambda = 0: nothing to fit (u = 1)")

    nu = traj.params.nu
    ts = np.geomspace(lo, hi, int(n_samples))
    minus_q = -np.asarray(traj.q(ts), dtype=float)
    u_fit, sigma_fit = _u_fit(ts, minus_q, nu)
    b_fit = math.exp(u_fit.intercept)

    samples = [smp for smp in tau_series if smp.params == traj.params]
    if len(samples) != len(tau_series):
        raise DomainError("tau samples do not belong to the fitted trajectory")
    t_tau = np.array([smp.t for smp in samples], dtype=float)
    if t_tau.size and float(t_tau.max()) > WINDOW_MAX:
        raise DomainError(f"tau samples reach t={t_tau.max():g} > {WINDOW_MAX}")
    y_tau = np.array([smp.log_tau - math.log1p(math.exp(-smp.q)) for smp in samples], dtype=float)
    if t_tau.size < 3:
        raise FitError(f"tau fit: need at least 3 samples, got {t_tau.size}")
    exps = _tau_exponents(t_tau, nu, sigma_fit, b_fit)
    kappa = sigma_fit * (sigma_fit - 2.0) / 4.0
    amp_fit = fit_power_law(t_tau, y_tau, exps, slope=kappa)
    slope_fit = fit_power_law(t_tau, y_tau, exps)

    return FitResult(
        sigma_fit=sigma_fit,
        B_fit=b_fit,
        A_fit=math.exp(amp_fit.intercept),
        exponent_tau_fit=slope_fit.slope,
        residual=max(u_fit.residual, amp_fit.residual),
        t_window=(lo, hi),
    )


def fit_scaling_limit(
    ts: Sequence[float] | np.ndarray,
    values: Sequence[float] | np.ndarray,
    weights: Optional[Sequence[float]] = None,
) -> ScalingFit:
    """values ~ C (1 + a t ln t + b t); returns the t -> 0 limit C."""
    tt = np.asarray(ts, dtype=float)
    vv = np.asarray(values, dtype=float)
    if tt.shape != vv.shape:
        raise FitError(f"fit_scaling_limit: shape mismatch {tt.shape} vs {vv.shape}")
    if tt.size < 4:
        raise FitError(f"fit_scaling_limit: need at least 4 samples, got {tt.size}")
    _check_span(tt, "fit_scaling_limit")
    design = np.column_stack([np.ones_like(tt), tt * np.log(tt), tt])
    w = np.ones_like(tt) if weights is None else np.asarray(weights, dtype=float)
    coef, *_ = np.linalg.lstsq(design * w[:, None], vv * w, rcond=None)
    c0 = float(coef[0])
    if c0 == 0.0:
        raise FitError("fit_scaling_limit: zero limit")
    dev = float(np.max(np.abs(design @ coef - vv) / np.abs(vv)))
    return ScalingFit(c0, float(coef[1]) / c0, float(coef[2]) / c0, dev)
