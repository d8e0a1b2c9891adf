import math

import numpy as np
import pytest

from sinhgordon_tau.connect import (
    c_of_nu,
    coefficient_A,
    coefficient_A_tracy,
    coefficient_B,
    connection_constants,
    critical_amplitude,
    figure_curves,
    log_coefficient_A,
    q_largetime,
    q_smallt,
    sigma_of_lambda,
    tau_largetime,
    tau_largetime_correction,
    u_degenerate,
    u_smallt,
)
from sinhgordon_tau.errors import DomainError
from sinhgordon_tau.quad import watson_large_t
from sinhgordon_tau.sg_types import ModelParams
from sinhgordon_tau.specfun import CONSTANTS, ln_barnes_g


def test_sigma_lambda_inverse_consistency():
    for lam in np.linspace(0.0, 1.0 / math.pi, 23):
        sg = sigma_of_lambda(lam)
        assert abs(sigma_of_lambda(sg, "inverse") - lam) < 1e-14
    assert sigma_of_lambda(1.0 / math.pi) == pytest.approx(1.0, abs=1e-14)


def test_sigma_of_lambda_rejects_bad_input():
    with pytest.raises(DomainError):
        sigma_of_lambda(0.5)
    with pytest.raises(DomainError):
        sigma_of_lambda(1.2, "inverse")
    with pytest.raises(DomainError):
        sigma_of_lambda(0.1, "sideways")  # type: ignore[arg-type]


def test_B_is_one_at_sigma_zero():
    for nu in (-0.3, 0.0, 0.5, 3.0):
        assert abs(coefficient_B(nu, 0.0) - 1.0) < 1e-14


def test_B_at_nu_zero():
    sg = 0.4
    s = 0.5 * (1.0 - sg)
    want = 2.0 ** (-3.0 * sg) * math.gamma(s) / math.gamma(1.0 - s)
    assert abs(coefficient_B(0.0, sg) / want - 1.0) < 1e-13


def test_B_sign_flips_past_restriction():
    assert coefficient_B(-0.1, 0.5) > 0.0      # 1 + 2 nu = 0.8 > sigma
    assert coefficient_B(-0.4, 0.5) < 0.0      # 1 + 2 nu = 0.2 < sigma


def test_B_pole_refused():
    with pytest.raises(DomainError):
        coefficient_B(-0.25, 0.5)
    with pytest.raises(DomainError):
        coefficient_B(0.0, 1.0)


def test_u_smallt_exact_cases():
    t = np.array([0.01, 0.05, 0.1])
    lam = sigma_of_lambda(0.3, "inverse")
    assert np.allclose(u_smallt(t, 0.0, lam), coefficient_B(0.0, 0.3) * t**0.3, rtol=1e-13)
    assert np.allclose(u_smallt(t, 0.7, 0.0), 1.0, rtol=1e-14)
    assert q_smallt(0.05, 0.0, lam) == pytest.approx(-math.log(u_smallt(0.05, 0.0, lam)))


def test_u_smallt_refuses_sigma_one():
    with pytest.raises(DomainError):
        u_smallt(0.1, 0.0, 1.0 / math.pi)


def test_c_of_nu_values():
    assert c_of_nu(0.0) == 1.0
    assert abs(c_of_nu(1.0) - 2.0044518) < 1e-6


def test_u_degenerate_removable_point():
    k = 3.0 * CONSTANTS.ln2 - CONSTANTS.euler_gamma
    t = 0.02
    assert abs(u_degenerate(t, 0.0) - 0.5 * t * (-math.log(t) + k)) < 1e-15
    # continuous through nu = 0
    assert abs(u_degenerate(t, 1e-9) - u_degenerate(t, 0.0)) < 1e-8


@pytest.mark.parametrize("s", [0.05, 0.25, 0.45])
def test_A_reduces_to_tracy_at_nu_zero(s):
    lam = sigma_of_lambda(1.0 - 2.0 * s, "inverse")
    assert abs(coefficient_A(0.0, lam) / coefficient_A_tracy(lam) - 1.0) < 1e-13


def test_tracy_degeneration_is_linear_in_nu():
    lam = sigma_of_lambda(0.5, "inverse")
    a0 = coefficient_A_tracy(lam)
    slopes = [abs(coefficient_A(nu, lam) / a0 - 1.0) / nu for nu in (1e-6, 1e-5, 1e-4)]
    assert slopes[0] > 0.0
    assert abs(slopes[1] / slopes[0] - 1.0) < 1e-2
    assert abs(slopes[2] / slopes[0] - 1.0) < 1e-2


def test_tracy_at_s_zero():
    want = math.exp(3.0 * CONSTANTS.zeta_prime_m1 - CONSTANTS.ln2 / 6.0)
    assert abs(coefficient_A_tracy(1.0 / math.pi) / want - 1.0) < 1e-13
    assert abs(want - 0.5424) < 1e-4


def test_A_requires_s_plus_nu_positive():
    with pytest.raises(DomainError):
        coefficient_A(-0.3, 1.0 / math.pi)
    with pytest.raises(DomainError):
        log_coefficient_A(-0.45, sigma_of_lambda(0.2, "inverse"))


def test_connection_constants_record():
    p = ModelParams.from_sigma(0.5, 0.4)
    cc = connection_constants(p)
    assert cc.exponent_u == pytest.approx(0.4)
    assert cc.exponent_tau == pytest.approx(0.4 * (0.4 - 2.0) / 4.0)
    rec = cc.to_record()
    assert set(rec) >= {"nu", "lam", "sigma", "s", "B", "A", "exponent_u", "exponent_tau"}
    assert rec["A"] > 0.0 and rec["B"] > 0.0


def test_connection_constants_outside_domain():
    with pytest.raises(DomainError, match="1 \\+ 2 nu"):
        connection_constants(ModelParams.from_sigma(-0.4, 0.5))


def test_large_t_forms():
    nu, lam = 0.3, 0.2
    t = np.array([8.0, 12.0])
    corr = tau_largetime_correction(t, nu, lam)
    assert np.allclose(tau_largetime(t, nu, lam), 1.0 + corr)
    assert abs(corr[1]) < abs(corr[0])
    assert q_largetime(10.0, nu, lam) == pytest.approx(2.0 * lam * watson_large_t(10.0, nu), rel=1e-13)
    with pytest.raises(DomainError):
        tau_largetime_correction(0.0, nu, lam)


def test_critical_amplitude_is_barnes_product():
    got = math.exp(float(ln_barnes_g(0.5)) + float(ln_barnes_g(1.5)))
    assert abs(critical_amplitude() - got) < 1e-11
    want = 3.0 * CONSTANTS.zeta_prime_m1 + CONSTANTS.ln2 / 12.0
    assert abs(2.0 * ln_barnes_g(0.5) + 0.5 * CONSTANTS.ln_pi - want) < 1e-12


def test_figure_curves_frame():
    frame = figure_curves([-0.4, 0.0, 0.5], np.linspace(0.0, 1.0, 11))
    assert list(frame.columns) == ["nu", "sigma", "B", "A"]
    assert len(frame) == 33
    # B has a pole-free NaN at sigma = 1 and A is undefined where s + nu <= 0
    assert frame[(frame.sigma == 1.0)]["B"].isna().all()
    bad = frame[(frame.nu == -0.4) & (frame.sigma >= 0.3)]
    assert bad["A"].isna().all()
    good = frame[frame.nu == 0.5]["A"].to_numpy()
    assert np.all(good > 0.0)
    assert np.max(np.abs(np.diff(good))) < 0.5


def test_A_positive_and_finite_on_dense_grid():
    checked = 0
    for nu in np.linspace(-0.45, 3.0, 40):
        for sg in np.linspace(0.0, 1.0, 41):
            if 0.5 * (1.0 - sg) + nu <= 1e-9:
                continue
            a = coefficient_A(float(nu), sigma_of_lambda(float(sg), "inverse"))
            assert math.isfinite(a) and a > 0.0
            checked += 1
    assert checked > 1200
