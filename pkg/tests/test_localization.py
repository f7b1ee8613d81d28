import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from posrate.config import default_model
from posrate.errors import AlphaMismatch, DomainError, EmptySpectrum, NonPositiveInformation
from posrate.localization import (BandwidthMode, EffectiveBandwidth, LowerLimit, assemble_bounds,
                                  bounds, effective_bandwidth, fisher_conditional,
                                  fisher_expected, fisher_expected_closed_alpha2,
                                  paper_flat_bandwidth, prior_information, sampled_bandwidth)
from posrate.oracle import SimConfig, mc_fisher_expected

# discrete (2 pi f)^2 moment of a 200001-point flat grid over [-B/2, B/2], B = 1 GHz
FLAT_GRID_F2 = 3.2899010323777905e+18
JP_0002 = -6.521460917862246

F2 = paper_flat_bandwidth(1e9)


def test_paper_flat_value():
    assert F2.f2bar == 1.25 * math.pi**2 * 1e18
    assert effective_bandwidth(BandwidthMode.PAPER_FLAT, 1e9) == F2


def test_sampled_flat_spectrum():
    f = np.linspace(-0.5e9, 0.5e9, 200_001)
    spec = list(zip(f, np.ones_like(f)))
    got = effective_bandwidth(BandwidthMode.SAMPLED_SPECTRUM, spectrum=spec).f2bar
    assert got == pytest.approx(FLAT_GRID_F2, rel=1e-12)
    assert got == pytest.approx(math.pi**2 * 1e18 / 3, rel=1e-4)


def test_single_line():
    assert sampled_bandwidth([(3e8, 2.0)]).f2bar == pytest.approx((2 * math.pi * 3e8) ** 2)
    # zero-magnitude lines are ignored
    assert sampled_bandwidth([(3e8, 2.0), (5e8, 0.0)]).f2bar == pytest.approx((2 * math.pi * 3e8) ** 2)


@pytest.mark.parametrize("spec", [[], [(1e8, 0.0), (2e8, 0.0)]])
def test_empty_spectrum(spec):
    with pytest.raises(EmptySpectrum):
        sampled_bandwidth(spec)
    with pytest.raises(EmptySpectrum):
        effective_bandwidth(BandwidthMode.SAMPLED_SPECTRUM)


def test_negative_magnitude_rejected():
    with pytest.raises(DomainError):
        sampled_bandwidth([(1e8, -1.0)])
    with pytest.raises(DomainError):
        EffectiveBandwidth(0.0)


def test_conditional_examples(model):
    assert fisher_conditional(model.replace(beta=1.0), 10.0, F2) == 0.0
    j0 = fisher_conditional(model, 0.0, F2)
    expected = model.k_pl * model.g0 * model.p_loc * F2.f2bar / (model.h_bs**2 * model.noise_power)
    assert j0 == pytest.approx(expected, rel=1e-14)
    assert fisher_conditional(model, model.h_bs, F2) == pytest.approx(j0 / 2, rel=1e-14)
    with pytest.raises(DomainError):
        fisher_conditional(model, -1.0, F2)


def test_expected_zero_power(model):
    m = model.replace(beta=1.0)
    assert fisher_expected(m, F2) == 0.0
    assert fisher_expected_closed_alpha2(m, F2) == 0.0


def test_expected_linear_in_p_loc(model):
    m1 = model.replace(beta=0.5)
    m2 = m1.replace(power_total=2 * m1.power_total)
    assert fisher_expected(m2, F2) == pytest.approx(2 * fisher_expected(m1, F2), rel=1e-12)


@pytest.mark.parametrize("lam", np.geomspace(1e-4, 1e-2, 5))
@pytest.mark.parametrize("h", np.linspace(5.0, 30.0, 4))
def test_closed_form_vs_quadrature(model, lam, h):
    m = model.replace(lambda_bs=float(lam), h_bs=float(h))
    assert fisher_expected_closed_alpha2(m, F2) == pytest.approx(fisher_expected(m, F2), rel=1e-8)


def test_closed_form_decreasing_in_height(model):
    hs = np.linspace(5.0, 30.0, 11)
    closed = [fisher_expected_closed_alpha2(model.replace(h_bs=float(h)), F2) for h in hs]
    quad = [fisher_expected(model.replace(h_bs=float(h)), F2) for h in hs]
    assert np.all(np.diff(closed) < 0)
    np.testing.assert_allclose(closed, quad, rtol=1e-8)


def test_closed_form_alpha_mismatch(model):
    with pytest.raises(AlphaMismatch):
        fisher_expected_closed_alpha2(model.replace(alpha=3.0), F2)


def test_general_alpha_quadrature_vs_bruteforce(model):
    from oracles import simpson
    m = model.replace(alpha=3.5)
    rate = 2 * m.lambda_bs
    brute = simpson(lambda x: rate * np.exp(-rate * x) * (m.h_bs**2 + x * x) ** -1.75, 0.0, 40 / rate)
    pre = fisher_conditional(m, 0.0, F2) * m.h_bs**3.5
    assert fisher_expected(m, F2) == pytest.approx(pre * brute, rel=1e-9)


def test_lower_limit_one_is_smaller(model):
    zero = fisher_expected(model, F2, LowerLimit.ZERO)
    one = fisher_expected(model, F2, LowerLimit.ONE)
    assert 0 < one < zero
    # the missing piece is roughly the [0, 1] m slab of the integrand
    slab = 2 * model.lambda_bs * fisher_conditional(model, 0.5, F2)
    assert zero - one == pytest.approx(slab, rel=1e-2)


def test_prior_information():
    assert prior_information(math.e / 2) == pytest.approx(0.0, abs=1e-15)
    assert prior_information(0.002) == pytest.approx(JP_0002, rel=1e-15)
    assert prior_information(0.002) == pytest.approx(-6.5214, abs=1e-4)
    with pytest.raises(DomainError):
        prior_information(0.0)


@given(st.floats(1e-6, 10.0), st.floats(1.0001, 10.0))
def test_prior_increasing(lam, factor):
    assert prior_information(lam * factor) > prior_information(lam)


def test_assemble_constructed():
    jp = -3.0
    b = assemble_bounds(4.0 - jp, jp)
    assert b.jeffrey == pytest.approx(2.0, rel=1e-15)
    assert b.bcrlb == pytest.approx(0.25, rel=1e-15)
    assert b.rmse == pytest.approx(0.5, rel=1e-15)


def test_no_information(model):
    with pytest.raises(NonPositiveInformation):
        bounds(model.replace(beta=1.0, lambda_bs=0.002))
    b = bounds(model.replace(beta=1.0, lambda_bs=0.002), strict=False)
    assert not b.defined
    assert b.j_bayes == pytest.approx(JP_0002)
    assert b.rmse is None and b.jeffrey is None


def test_additivity_and_reciprocity(model):
    b = bounds(model)
    assert b.j_bayes == b.j_expected + b.j_prior
    assert b.j_expected == fisher_expected(model, F2)
    assert b.jeffrey**2 * b.bcrlb == pytest.approx(1.0, rel=1e-15)
    assert b.j_cond == fisher_conditional(model, 250.0, F2)


def test_rmse_decreases_as_beta_decreases(model):
    betas = np.linspace(0.0, 0.99, 34)
    rmse = [bounds(model.replace(beta=float(b))).rmse for b in betas]
    assert np.all(np.diff(rmse) > 0)


@given(st.floats(0.0, 0.98), st.floats(0.001, 0.02))
@settings(max_examples=30, deadline=None)
def test_rmse_monotone_property(beta, step):
    m = default_model(lambda_km=2.0)
    small = EffectiveBandwidth(1e4)  # keeps J_B away from the J_p offset-dominated regime
    r1 = bounds(m.replace(beta=beta), small).rmse
    r2 = bounds(m.replace(beta=beta + step), small).rmse
    assert r2 >= r1


@pytest.mark.slow
def test_expected_matches_monte_carlo(model):
    est = mc_fisher_expected(model, F2, SimConfig(trials=10_000_000, seed=3))
    assert abs(est.estimate - fisher_expected(model, F2)) <= 3 * est.std_error
