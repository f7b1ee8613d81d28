"""Oracle-equivalence gates: every analytic route checked against its oracle."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .config import NetworkModel, db_to_linear, dbm_to_watt
from .coverage import snr_coverage, snr_coverage_closed_alpha2
from .geometry import footprint_length, horizon_distance
from .localization import (LowerLimit, fisher_conditional, fisher_expected,
                           fisher_expected_closed_alpha2, paper_flat_bandwidth, sampled_bandwidth)
from .misalignment import BoundVariant, misalignment_bound_at
from .oracle import (SimConfig, flat_spectrum_waveform, mc_misalignment, mc_snr_coverage,
                     ray_footprint, waveform_fisher)


@dataclass(frozen=True)
class GateResult:
    name: str
    passed: bool
    achieved: float
    tolerance: float
    detail: str = ""

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return (f"{verdict} {self.name}: achieved {self.achieved:.3e}, "
                f"tolerance {self.tolerance:.3e}{' (' + self.detail + ')' if self.detail else ''}")


def _rel(a: float, b: float) -> float:
    return abs(a - b) / abs(b) if b != 0 else abs(a - b)


def coverage_grid(model: NetworkModel):
    """5 x 5 x 5 (lambda, P, gamma) grid for n0 in {1, 3}."""
    lambdas_km = (0.5, 1.0, 2.0, 5.0, 10.0)
    powers_dbm = (10.0, 15.0, 20.0, 25.0, 30.0)
    gammas_db = (-15.0, -10.0, -5.0, 0.0, 5.0)
    for n0, lk, p, g in itertools.product((1, 3), lambdas_km, powers_dbm, gammas_db):
        yield model.replace(lambda_bs=lk * 1e-3, power_total=dbm_to_watt(p), n_nakagami=n0,
                            alpha=2.0), db_to_linear(g)


def gate_coverage_closed_form(model: NetworkModel, tol: float = 1e-8) -> GateResult:
    worst = 0.0
    n = 0
    for m, g in coverage_grid(model):
        worst = max(worst, _rel(snr_coverage_closed_alpha2(m, g), snr_coverage(m, g)))
        n += 1
    return GateResult("coverage closed form vs quadrature", worst <= tol, worst, tol, f"{n} points")


def localization_grid(model: NetworkModel):
    for lam, h in itertools.product(np.geomspace(1e-4, 1e-2, 5), np.linspace(5.0, 30.0, 5)):
        yield model.replace(lambda_bs=float(lam), h_bs=float(h), alpha=2.0)


def gate_fisher_closed_form(model: NetworkModel, tol: float = 1e-8) -> GateResult:
    f2 = paper_flat_bandwidth(model.bandwidth)
    worst = max(_rel(fisher_expected_closed_alpha2(m, f2), fisher_expected(m, f2, LowerLimit.ZERO))
                for m in localization_grid(model))
    return GateResult("expected Fisher closed form vs quadrature", worst <= tol, worst, tol, "25 points")


def mc_coverage_grid(model: NetworkModel):
    """27 points: lambda x P x gamma, three values each."""
    for lk, p, g in itertools.product((1.0, 2.0, 5.0), (15.0, 20.0, 25.0), (-10.0, -5.0, 0.0)):
        yield model.replace(lambda_bs=lk * 1e-3, power_total=dbm_to_watt(p)), db_to_linear(g)


def gate_mc_coverage(model: NetworkModel, seed: int = 42, trials: int = 1_000_000,
                     n_se: float = 3.0, min_fraction: float = 0.95) -> GateResult:
    inside = []
    for i, (m, g) in enumerate(mc_coverage_grid(model)):
        est = mc_snr_coverage(m, g, SimConfig(trials=trials, seed=seed + i))
        exact = snr_coverage(m, g)
        inside.append(abs(est.estimate - exact) <= n_se * est.std_error)
    frac = float(np.mean(inside))
    return GateResult("Monte Carlo coverage within 3 SE", frac >= min_fraction, frac, min_fraction,
                      f"{sum(inside)}/{len(inside)} points, {trials} trials")


def random_footprint_triples(n: int, seed: int):
    rng = np.random.default_rng(seed)
    h = rng.uniform(1.0, 50.0, n)
    theta = rng.uniform(1e-3, math.pi - 1e-3, n)
    d = rng.uniform(0.0, 1.0, n) * h / np.tan(0.5 * theta)
    return d, theta, h


def gate_footprint(seed: int = 42, n: int = 10_000, tol: float = 1e-12) -> GateResult:
    d, theta, h = random_footprint_triples(n, seed)
    worst = 0.0
    for di, ti, hi in zip(d, theta, h):
        worst = max(worst, _rel(footprint_length(di, ti, hi), ray_footprint(di, ti, hi)))
    return GateResult("footprint formula vs ray intersection", worst <= tol, worst, tol, f"{n} triples")


def gate_waveform_fisher(model: NetworkModel, tol: float = 5e-3) -> GateResult:
    w = flat_spectrum_waveform(model.bandwidth, math.sqrt(model.noise_power))
    f2 = sampled_bandwidth(w.spectrum)
    worst = 0.0
    for d in np.geomspace(1.0, 1000.0, 10):
        wf = waveform_fisher(w, model, float(d))
        worst = max(worst, _rel(wf.delay_info, fisher_conditional(model, float(d), f2)))
    return GateResult("waveform Fisher vs closed-form J_d", worst <= tol, worst, tol, "10 distances")


def misalignment_points(n: int, seed: int, h_bs: float = 10.0):
    """Random (d, BCRLB, theta): theta in [2, 60] deg, d up to 95% of the
    horizon, BCRLB log-uniform on [0.25, 400] m^2."""
    rng = np.random.default_rng(seed)
    theta = np.radians(rng.uniform(2.0, 60.0, n))
    d = rng.uniform(0.0, 0.95, n) * np.array([horizon_distance(t, h_bs) for t in theta])
    bcrlb = np.exp(rng.uniform(math.log(0.25), math.log(400.0), n))
    return list(zip(d.tolist(), bcrlb.tolist(), theta.tolist()))


def gate_misalignment(model: NetworkModel, seed: int = 42, n: int = 50,
                      trials: int = 100_000) -> GateResult:
    """Empirical misalignment never exceeds either bound."""
    worst_margin = math.inf
    for i, (d, bcrlb, theta) in enumerate(misalignment_points(n, seed, model.h_bs)):
        est = mc_misalignment(model, bcrlb, SimConfig(trials=trials, seed=seed + i),
                              d_fixed=d, theta=theta)
        for v in BoundVariant:
            b = misalignment_bound_at(d, bcrlb, theta, model.h_bs, v)
            worst_margin = min(worst_margin, b - est.estimate)
    return GateResult("misalignment bounds dominate Monte Carlo", worst_margin >= 0.0,
                      worst_margin, 0.0, f"{n} points, min(bound - estimate)")


def run_all(model: NetworkModel, seed: int = 42) -> list[GateResult]:
    return [
        gate_coverage_closed_form(model),
        gate_fisher_closed_form(model),
        gate_mc_coverage(model, seed=seed),
        gate_footprint(seed=seed),
        gate_waveform_fisher(model),
        gate_misalignment(model, seed=seed),
    ]
