import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from vicmor.errors import NumericalError, ParameterError
from vicmor.observables import (
    MediumParams,
    mor_angle,
    rotation_slope,
    sensitivity,
    shot_noise_limit,
    susceptibility,
    wrap_angle,
)
from vicmor.params import SystemParams
from vicmor.perturbative import CoherencePair, total_coherence


@given(st.floats(-100, 100))
def test_wrap_angle_range(x):
    w = wrap_angle(x)
    assert 0.0 <= w < math.pi
    assert math.isclose(math.cos(2 * w), math.cos(2 * x), abs_tol=1e-9)


def test_wrap_angle_tiny_negative():
    assert wrap_angle(-1e-18) == 0.0
    assert wrap_angle(-0.5) == pytest.approx(math.pi - 0.5)


def test_mor_angle_components():
    pair = CoherencePair(rho_plus=0.1 + 0.2j, rho_minus=0.4 - 0.1j)
    r = mor_angle(pair, MediumParams(C=2.0))
    assert r.birefringence == pytest.approx(0.3)
    assert r.dichroism == pytest.approx(-0.3)
    assert r.theta_raw == pytest.approx(0.6)
    assert r.theta_deg == pytest.approx(math.degrees(0.6))


def test_mor_angle_headline_parallel():
    p = SystemParams(G=0.35, B=0.35, theta=0.0)
    assert mor_angle(total_coherence(p), MediumParams(C=3.5)).theta_deg == pytest.approx(111.95244667561974, rel=1e-10)


def test_mor_angle_headline_perpendicular_geometry():
    p = SystemParams(G=0.35, B=0.35, theta=math.pi / 2, alpha=math.pi / 4)
    assert mor_angle(total_coherence(p)).theta_deg == pytest.approx(28.752331893793496, rel=1e-10)


def test_susceptibility_scale():
    assert susceptibility(0.5 + 1j, MediumParams(kappa=2.0)) == 1 + 2j


def test_medium_validation():
    with pytest.raises(ParameterError):
        MediumParams(C=-1)
    with pytest.raises(ParameterError, match="unknown medium parameter"):
        MediumParams.from_dict({"density": 1})


@pytest.mark.parametrize("s", [0.1, 1.0, 10.0])
@pytest.mark.parametrize("n", [1e2, 1e4, 1e6])
def test_shot_noise_limit_linear_angle(s, n):
    res = sensitivity(SystemParams(B=0.3), n_ph=n, angle_of_B=lambda B: s * B)
    assert res.delta_B == pytest.approx(1 / (s * math.sqrt(n)), rel=1e-10)


def test_shot_noise_errors():
    with pytest.raises(ParameterError):
        shot_noise_limit(1.0, 0)
    with pytest.raises(NumericalError):
        shot_noise_limit(0.0, 1e6)
    with pytest.raises(ParameterError):
        rotation_slope(lambda B: B, 0.0, 0.0)


def test_sensitivity_slope_is_step_independent():
    res = sensitivity(SystemParams(G=0.35, B=0.35), MediumParams(C=3.5), n_ph=1e6)
    assert res.slope == pytest.approx(-2.100448747, rel=1e-8)
    assert res.slope_rel_change < 1e-5
