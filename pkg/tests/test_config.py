import math

import pytest
from hypothesis import given, strategies as st

from posrate.config import (DEFAULT_ENGINEERING, ENGINEERING_KEYS, NetworkModel, Objective,
                            ServiceRequirement, default_model, from_engineering_units,
                            parse_key_values, power_split, rate_to_snr,
                            requirement_from_mapping, to_engineering_units)
from posrate.errors import ConfigError, MissingField, UnitOutOfRange


def test_power_split_example():
    m = default_model(p_dbm=20.0, beta=0.15)
    p_loc, p_data = power_split(m)
    assert m.power_total == pytest.approx(0.1, rel=1e-15)
    assert p_loc == pytest.approx(0.085, rel=1e-14)
    assert p_data == pytest.approx(0.015, rel=1e-14)


@pytest.mark.parametrize("beta, expected", [(0.0, (1.0, 0.0)), (1.0, (0.0, 1.0))])
def test_power_split_boundaries(beta, expected):
    m = default_model(beta=beta)
    p_loc, p_data = power_split(m)
    assert (p_loc, p_data) == (expected[0] * m.power_total, expected[1] * m.power_total)


@given(st.floats(0.0, 1.0), st.floats(1e-6, 1e3))
def test_power_split_sums_to_total(beta, power):
    m = default_model().replace(beta=beta, power_total=power)
    p_loc, p_data = power_split(m)
    assert abs((p_loc + p_data) - power) <= math.ulp(power)
    assert p_loc >= 0 and p_data >= 0


def test_engineering_examples():
    assert from_engineering_units({"p_dbm": 20.0}, DEFAULT_ENGINEERING).power_total == pytest.approx(0.1)
    assert from_engineering_units({"g0_db": 10.0}, DEFAULT_ENGINEERING).g0 == pytest.approx(10.0)
    assert from_engineering_units({"lambda_km": 2.0}, DEFAULT_ENGINEERING).lambda_bs == pytest.approx(0.002)
    assert from_engineering_units({"theta_deg": 90.0}, DEFAULT_ENGINEERING).theta == pytest.approx(math.pi / 2)


def test_defaults_are_documented_values(model):
    assert model.alpha == 2.0
    assert model.h_bs == 10.0
    assert model.bandwidth == 1e9
    assert 10 * math.log10(model.noise_psd) + 30 == pytest.approx(-164.0)
    assert 10 * math.log10(model.k_pl) == pytest.approx(-61.39, abs=0.01)
    assert model.n_nakagami == 3
    assert model.noise_power == pytest.approx(model.noise_psd * 1e9)


def test_missing_field_without_defaults():
    with pytest.raises(MissingField):
        from_engineering_units({"p_dbm": 20.0})


def test_unknown_key_rejected():
    with pytest.raises(ConfigError):
        from_engineering_units({"p_dbn": 20.0}, DEFAULT_ENGINEERING)


@given(st.tuples(
    st.floats(0.01, 100.0), st.floats(-10.0, 50.0), st.floats(0.0, 1.0), st.floats(0.1, 179.0),
    st.floats(1.0, 100.0), st.floats(2.0, 6.0), st.floats(-120.0, -20.0), st.floats(-10.0, 40.0),
    st.integers(1, 10), st.floats(1.0, 1e4), st.floats(-200.0, -100.0),
))
def test_engineering_round_trip(vals):
    spec = dict(zip(ENGINEERING_KEYS, vals))
    back = to_engineering_units(from_engineering_units(spec))
    for k in ENGINEERING_KEYS:
        assert back[k] == pytest.approx(spec[k], rel=1e-12, abs=1e-12)


FIELD_BAD_VALUES = {
    "lambda_bs": [0.0, -1.0],
    "power_total": [0.0, -1.0],
    "beta": [-0.1, 1.1],
    "theta": [0.0, -0.1, math.pi],
    "h_bs": [0.0, -5.0],
    "alpha": [1.9, 0.0, -2.0],
    "k_pl": [0.0, -1.0],
    "g0": [0.0, -1.0],
    "bandwidth": [0.0, -1.0],
    "noise_psd": [0.0, -1.0],
}


@pytest.mark.parametrize("name", sorted(FIELD_BAD_VALUES))
@pytest.mark.parametrize("special", [math.nan, math.inf, -math.inf])
def test_non_finite_fields_rejected(model, name, special):
    with pytest.raises(UnitOutOfRange):
        model.replace(**{name: special})


@pytest.mark.parametrize("name, value", [(k, v) for k, vs in FIELD_BAD_VALUES.items() for v in vs])
def test_out_of_range_fields_rejected(model, name, value):
    with pytest.raises(UnitOutOfRange):
        model.replace(**{name: value})


@pytest.mark.parametrize("n0", [0, -1, 2.5, True])
def test_nakagami_must_be_positive_int(model, n0):
    with pytest.raises(UnitOutOfRange):
        model.replace(n_nakagami=n0)


@pytest.mark.parametrize("key, value", [("n0", 2.5), ("p_dbm", "abc"), ("beta", "nan")])
def test_engineering_bad_values(key, value):
    with pytest.raises(UnitOutOfRange):
        from_engineering_units({key: value}, DEFAULT_ENGINEERING)


def test_model_is_immutable(model):
    with pytest.raises(Exception):
        model.beta = 0.3


def test_parse_key_values():
    text = "# comment\nlambda_km = 2  # trailing\n\np_dbm=25\n"
    assert parse_key_values(text) == {"lambda_km": "2", "p_dbm": "25"}
    with pytest.raises(ConfigError):
        parse_key_values("lambda_km 2")
    with pytest.raises(ConfigError):
        parse_key_values("a = 1\na = 2")


def test_requirement_from_mapping():
    req = requirement_from_mapping({"outage_max": "0.1", "gamma_db": "-10", "objective": "rate",
                                    "pos_error_m": "5e-4"})
    assert req.snr_threshold == pytest.approx(0.1)
    assert req.objective is Objective.MAXIMIZE_RATE
    assert req.pos_error_max == 5e-4
    with pytest.raises(MissingField):
        requirement_from_mapping({"gamma_db": "-10"})
    with pytest.raises(UnitOutOfRange):
        requirement_from_mapping({"outage_max": "0.1", "gamma_db": "-10", "objective": "speed"})


def test_requirement_needs_threshold():
    with pytest.raises(MissingField):
        ServiceRequirement(outage_max=0.1)
    with pytest.raises(UnitOutOfRange):
        ServiceRequirement(outage_max=1.5, snr_threshold=0.1)
    with pytest.raises(UnitOutOfRange):
        ServiceRequirement(outage_max=0.1, snr_threshold=-1.0)


def test_rate_threshold_conversion():
    assert rate_to_snr(1e9, 1e9) == pytest.approx(1.0)
    assert rate_to_snr(0.0, 1e9) == 0.0
    req = ServiceRequirement(outage_max=0.1, snr_threshold=0.1, rate_threshold=1e9)
    assert req.snr_gamma(1e9) == pytest.approx(1.0)  # stricter of the two


def test_network_model_positional_fields():
    m = NetworkModel(0.002, 0.1, 0.5, 0.2, 10.0, 2.0, 1e-6, 10.0, 3, 1e9, 4e-20)
    assert m.p_loc + m.p_data == pytest.approx(0.1)
