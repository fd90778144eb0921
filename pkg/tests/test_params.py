import json
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from vicmor.errors import ParameterError
from vicmor.params import (
    Manifold,
    SystemParams,
    complex_detuning,
    dephasing_rate,
    derived_rates,
    load_params,
    nonparallel_rabi,
    probe_couplings,
    validate_params,
    vic_rate,
)

rates = st.floats(0, 10, allow_nan=False)
angles = st.floats(0, math.pi)


def test_vic_rate_values():
    assert vic_rate(1, 1, 0) == 1.0
    assert abs(vic_rate(1, 1, math.pi / 2)) < 1e-16
    assert vic_rate(1, 4, math.pi / 3) == pytest.approx(1.0)


def test_vic_rate_rejects_negative():
    with pytest.raises(ParameterError, match="negative decay rate"):
        vic_rate(-1, 1, 0)


@given(rates, rates, angles)
def test_vic_rate_bounded_by_geometric_mean(a, b, th):
    assert abs(vic_rate(a, b, th)) <= math.sqrt(a * b) + 1e-12


def test_dephasing_defaults():
    p = SystemParams()
    assert dephasing_rate(1, 0, p) == 0.5
    assert dephasing_rate(3, 0, p) == pytest.approx(0.05)
    assert dephasing_rate(3, 1, p) == pytest.approx(0.55)
    assert dephasing_rate(2, 1, p) == 1.0


def test_dephasing_includes_branching_and_collisions():
    p = SystemParams(gamma13=0.2, gamma23=0.4, gamma_coll=0.01)
    assert dephasing_rate(1, 0, p) == pytest.approx(0.6 + 0.01)
    assert dephasing_rate(2, 1, p) == pytest.approx(0.5 * (1.2 + 1.4) + 0.01)


@given(st.sampled_from([(0, 1), (1, 2), (0, 3), (1, 3), (2, 3), (0, 2)]))
def test_dephasing_symmetric(pair):
    p = SystemParams(gamma13=0.3, gamma_coll=0.2)
    i, j = pair
    assert dephasing_rate(i, j, p) == dephasing_rate(j, i, p)


@pytest.mark.parametrize("i,j", [(1, 1), (0, 4), (-1, 2)])
def test_dephasing_bad_levels(i, j):
    with pytest.raises(ParameterError):
        dephasing_rate(i, j, SystemParams())


def test_complex_detuning_zeeman_split():
    p = SystemParams(delta=0.3, B=0.5, Delta=0.2)
    assert complex_detuning(1, Manifold.PLUS, p) == pytest.approx(0.8 + 0.5j)
    assert complex_detuning(2, Manifold.MINUS, p) == pytest.approx(-0.2 + 0.5j)
    assert complex_detuning(3, "+", p) == pytest.approx(0.2 + 0.05j)


def test_derived_rates_bundle():
    d = derived_rates(SystemParams(theta=0.0), Manifold.PLUS)
    assert d.gamma12 == 1.0
    assert d.Gamma[1, 0] == d.Gamma[0, 1] == 0.5
    assert d.Gamma[0, 0] == 0.0


def test_manifold_parse_aliases():
    assert Manifold.parse("sigma-") is Manifold.MINUS
    assert Manifold.parse("+") is Manifold.PLUS
    assert Manifold.PLUS.sign == 1 and Manifold.MINUS.sign == -1
    with pytest.raises(ParameterError):
        Manifold.parse("up")


def test_validate_collects_every_violation():
    p = SystemParams(gamma10=-1, pop0=0.5, theta=4.0)
    with pytest.raises(ParameterError) as exc:
        validate_params(p)
    msgs = " | ".join(m for _, _, m in exc.value.violations)
    assert "negative decay rate" in msgs
    assert "populations sum to 0.5" in msgs
    assert "theta" in msgs
    assert len(exc.value.violations) == 3


def test_validate_rejects_bad_switch():
    with pytest.raises(ParameterError, match="rho21_zeeman"):
        validate_params(SystemParams(rho21_zeeman="maybe"))


def test_validate_accepts_defaults():
    p = SystemParams()
    assert validate_params(p) is p


def test_dict_round_trip_with_complex_control():
    p = SystemParams(G=0.5 + 0.25j, theta=0.3, alpha=0.1)
    doc = json.loads(json.dumps(p.to_dict()))
    assert doc["G"] == [0.5, 0.25]
    assert SystemParams.from_dict(doc) == p


def test_from_dict_unknown_key():
    with pytest.raises(ParameterError, match="unknown parameter 'gamma'"):
        SystemParams.from_dict({"gamma": 1})


def test_load_params(tmp_path):
    path = tmp_path / "p.json"
    path.write_text(json.dumps({"G": 1.5, "B": 0.2}))
    p = load_params(path)
    assert p.G == 1.5 and p.B == 0.2 and p.gamma30 == 0.1


def test_nonparallel_rabi_limits():
    g = 0.1
    assert nonparallel_rabi(math.pi / 4, 0.0, g, g) == pytest.approx((g, g))
    plus, minus = nonparallel_rabi(math.pi / 4, math.pi / 2, g, g)
    assert plus == pytest.approx(g)
    assert minus == pytest.approx(0.0, abs=1e-17)


def test_probe_couplings_follow_alpha():
    p = SystemParams(theta=math.pi / 2, alpha=math.pi / 4)
    g1, g2 = probe_couplings(p, Manifold.PLUS)
    assert g1 == pytest.approx(0.1) and g2 == pytest.approx(0.0, abs=1e-17)
    assert probe_couplings(SystemParams(g1p=0.3, g2p=0.4), "-") == (0.3, 0.4)
