import math

import pytest

from sinhgordon_tau.errors import DomainError
from sinhgordon_tau.sg_types import ModelParams, QuadSettings


def test_sigma_lambda_round_trip_at_edges():
    assert ModelParams.from_sigma(0.0, 0.0).lam == 0.0
    top = ModelParams.from_sigma(0.0, 1.0)
    assert top.lam == pytest.approx(1.0 / math.pi)
    assert top.sigma == pytest.approx(1.0) and top.s == pytest.approx(0.0, abs=1e-12)


def test_derived_fields():
    p = ModelParams.from_sigma(0.25, 0.5)
    assert p.sigma == pytest.approx(0.5)
    assert p.s == pytest.approx(0.25)
    assert p.to_record() == {"nu": 0.25, "lam": p.lam, "sigma": p.sigma, "s": p.s}
    assert p.with_nu(1.0).lam == p.lam


def test_region_flags():
    assert ModelParams.from_sigma(-0.4, 0.5).excluded
    assert not ModelParams.from_sigma(-0.4, 0.5).connection_ok
    assert ModelParams.from_sigma(0.5, 0.4).connection_ok
    assert not ModelParams.from_sigma(0.5, 1.0).connection_ok


@pytest.mark.parametrize("nu,lam", [(-0.5, 0.1), (float("nan"), 0.1), (0.0, -0.01), (0.0, 0.33)])
def test_params_refused(nu, lam):
    with pytest.raises(DomainError):
        ModelParams(nu, lam)


def test_quad_settings_checked():
    with pytest.raises(DomainError):
        QuadSettings(abs_tol=0.0, rel_tol=1e-10, max_subdivisions=10)
    with pytest.raises(DomainError):
        QuadSettings(abs_tol=1e-14, rel_tol=1e-10, max_subdivisions=0)
