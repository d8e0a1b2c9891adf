import math

import numpy as np
import pytest

from sinhgordon_tau.connect import coefficient_A, coefficient_B
from sinhgordon_tau.errors import DomainError, FitError
from sinhgordon_tau.sg_types import ModelParams, TauSample, Trajectory, TrajectorySegment
from sinhgordon_tau.tau import fit_connection, fit_power_law, fit_scaling_limit
from sinhgordon_tau.tau.fit import expansion_exponents, expansion_orders

WINDOW = (1e-8, 1e-4)


def _synthetic_trajectory(params, b, terms=(), t_lo=1e-9):
    """u(t/2) = B t^sigma (1 - first-order pair) exp(sum c t^e)."""
    nu, sg = params.nu, params.sigma

    def minus_q(t):
        out = math.log(b) + sg * np.log(t)
        if nu != 0.0:
            first = (nu / b) * (1.0 - sg) ** -2 * t ** (1.0 - sg)
            second = b * nu * (1.0 + sg) ** -2 * t ** (1.0 + sg)
            out = out + np.log(1.0 - first + second)
        for c, e in terms:
            out = out + c * t**e
        return out

    def sol(t):
        t = np.asarray(t, dtype=float)
        return np.vstack([-minus_q(t), np.full_like(t, sg), np.zeros((3, t.size))])

    ts = np.geomspace(1.0, t_lo, 80)
    seg = TrajectorySegment(t_lo=t_lo, t_hi=1.0, log_variable=False, sol=sol)
    st = sol(ts)
    return Trajectory(params, 1.0, t_lo, 1e-12, ts, st[0], st[1], segments=(seg,))


def _synthetic_tau(params, ts, a, kappa, traj, terms=()):
    out = []
    for t in ts:
        q = float(traj.q(t))
        log_tau = math.log(a) + kappa * math.log(t) + math.log1p(math.exp(-q))
        log_tau += sum(c * t**e for c, e in terms)
        out.append(TauSample(t, params, math.exp(log_tau), log_tau, 0.0, 0.0, 0.0, q, 0.0))
    return out


def test_power_law_recovers_exact_data():
    t = np.geomspace(0.01, 0.1, 20)
    y = 0.3 + 0.4 * np.log(t) + 2.0 * t**0.6
    fit = fit_power_law(t, y, (0.6,))
    assert abs(fit.intercept - 0.3) < 1e-10
    assert abs(fit.slope - 0.4) < 1e-10
    assert abs(fit.nuisance[0] - 2.0) < 1e-8
    assert fit.residual < 1e-12


def test_power_law_with_fixed_slope():
    t = np.geomspace(1e-6, 1e-2, 16)
    y = 0.3 - 0.24 * np.log(t) + 2.0 * t**0.6 - 5.0 * t
    fit = fit_power_law(t, y, (0.6, 1.0), slope=-0.24)
    assert fit.slope == -0.24
    assert abs(fit.intercept - 0.3) < 1e-11
    assert fit.nuisance == pytest.approx((2.0, -5.0), rel=1e-7)


def test_power_law_dedupes_close_exponents():
    t = np.geomspace(0.01, 0.1, 20)
    fit = fit_power_law(t, np.log(t), (0.6, 0.6 + 1e-9, 0.0))
    assert len(fit.nuisance) == 1


def test_power_law_rejects_narrow_or_short_data():
    with pytest.raises(FitError, match="decade"):
        fit_power_law(np.geomspace(0.05, 0.1, 10), np.zeros(10))
    with pytest.raises(FitError):
        fit_power_law([0.01, 0.03, 0.1], [0.0, 0.0, 0.0], (0.5,))
    with pytest.raises(FitError):
        fit_power_law([0.01, 0.1, 1.0], [0.0, 0.0])


def test_expansion_orders_even_at_nu_zero():
    orders = expansion_orders(0.0, 0.4, 1.0, 1e-2)
    assert orders[0] == (2, 0)
    assert all(k % 2 == 0 and m % 2 == 0 for k, m in orders)


def test_expansion_orders_with_nu():
    b = coefficient_B(0.5, 0.4)
    orders = expansion_orders(0.5, 0.4, b, 1e-4)
    assert orders[:3] == ((1, 0), (2, 0), (0, 1))
    assert (1, 1) in orders
    assert len(expansion_orders(0.5, 0.4, b, 1e-2, max_terms=3)) == 3
    # fewer terms matter further down
    assert len(expansion_orders(0.5, 0.4, b, 1e-8)) < len(orders)
    assert expansion_exponents(((2, 0), (1, 1)), 0.4) == pytest.approx((1.2, 2.0))


def test_expansion_orders_reject_bad_input():
    with pytest.raises(FitError):
        expansion_orders(0.0, 1.0, 1.0, 1e-2)
    with pytest.raises(FitError):
        expansion_orders(0.0, 0.4, 0.0, 1e-2)


def test_scaling_limit_exact():
    ts = np.geomspace(0.01, 0.1, 12)
    vals = 2.0 * (1.0 + 0.5 * ts * np.log(ts) - 0.3 * ts)
    fit = fit_scaling_limit(ts, vals)
    assert abs(fit.limit - 2.0) < 1e-12
    assert abs(fit.a - 0.5) < 1e-9
    assert abs(fit.b + 0.3) < 1e-9
    assert fit.residual < 1e-13


def test_fit_connection_recovers_synthetic_constants():
    params = ModelParams.from_sigma(0.0, 0.4)
    b = coefficient_B(0.0, 0.4)
    a = coefficient_A(0.0, params.lam)
    kappa = 0.4 * (0.4 - 2.0) / 4.0
    traj = _synthetic_trajectory(params, b)
    samples = _synthetic_tau(params, np.geomspace(*WINDOW, 24), a, kappa, traj)
    res = fit_connection(traj, samples, WINDOW, n_samples=32)
    assert abs(res.sigma_fit - 0.4) < 1e-9
    assert abs(res.B_fit / b - 1.0) < 1e-8
    assert abs(res.A_fit / a - 1.0) < 1e-8
    assert abs(res.exponent_tau_fit - kappa) < 1e-9
    assert res.t_window == WINDOW
    assert res.to_record()["b_fit"] == res.B_fit


def test_fit_connection_removes_expansion_terms():
    # nu != 0: u carries t^(2(1-sigma)) and t^2 beyond the first-order pair,
    # tau carries t^(1-sigma), t, t^(1+sigma) and t^(2(1-sigma))
    nu, sg = 0.5, 0.4
    params = ModelParams.from_sigma(nu, sg)
    b = coefficient_B(nu, sg)
    a = coefficient_A(nu, params.lam)
    kappa = sg * (sg - 2.0) / 4.0
    traj = _synthetic_trajectory(params, b, terms=((0.35, 2.0 * (1.0 - sg)), (-0.8, 2.0)))
    tau_terms = ((0.9, 1.0 - sg), (-1.3, 1.0), (0.4, 1.0 + sg), (0.25, 2.0 * (1.0 - sg)))
    samples = _synthetic_tau(params, np.geomspace(*WINDOW, 32), a, kappa, traj, tau_terms)
    res = fit_connection(traj, samples, WINDOW, n_samples=32)
    assert abs(res.sigma_fit - sg) < 1e-10
    assert abs(res.B_fit / b - 1.0) < 1e-9
    assert abs(res.A_fit / a - 1.0) < 1e-9
    assert abs(res.exponent_tau_fit - kappa) < 1e-6
    assert res.residual < 1e-10


def test_fit_connection_window_checks():
    params = ModelParams.from_sigma(0.0, 0.4)
    traj = _synthetic_trajectory(params, 1.0)
    with pytest.raises(DomainError, match="0.2"):
        fit_connection(traj, [], (0.01, 0.3))
    with pytest.raises(FitError, match="decade"):
        fit_connection(traj, [], (0.05, 0.1))
    with pytest.raises(DomainError, match="outside trajectory"):
        fit_connection(traj, [], (1e-11, 1e-8))


def test_fit_connection_needs_tau_samples():
    params = ModelParams.from_sigma(0.0, 0.4)
    traj = _synthetic_trajectory(params, coefficient_B(0.0, 0.4))
    with pytest.raises(FitError, match="at least 3"):
        fit_connection(traj, [], WINDOW)


def test_fit_connection_rejects_foreign_samples():
    params = ModelParams.from_sigma(0.0, 0.4)
    traj = _synthetic_trajectory(params, coefficient_B(0.0, 0.4))
    other = ModelParams.from_sigma(0.0, 0.3)
    samples = [TauSample(1e-6, other, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0)]
    with pytest.raises(DomainError):
        fit_connection(traj, samples)


def test_nothing_to_fit_at_lambda_zero():
    params = ModelParams(0.0, 0.0)
    traj = _synthetic_trajectory(params, 1.0)
    with pytest.raises(FitError):
        fit_connection(traj, [])
