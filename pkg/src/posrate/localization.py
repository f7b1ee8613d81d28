"""Ranging Fisher information, its PPP average, and Bayesian bounds."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .config import NetworkModel, power_split
from .errors import AlphaMismatch, DomainError, EmptySpectrum, NonPositiveInformation
from .numerics import DEFAULT_QUAD, QuadratureSpec, integrate_semi_infinite, laplace_lorentzian


@dataclass(frozen=True)
class EffectiveBandwidth:
    """Mean-square angular frequency of the ranging waveform [(rad/s)^2]."""

    f2bar: float

    def __post_init__(self):
        if not (self.f2bar > 0 and math.isfinite(self.f2bar)):
            raise DomainError(f"f2bar must be positive, got {self.f2bar!r}")


def paper_flat_bandwidth(bandwidth: float) -> EffectiveBandwidth:
    """The fixed constant 1.25 pi^2 B^2."""
    if not bandwidth > 0:
        raise DomainError("bandwidth must be positive")
    return EffectiveBandwidth(1.25 * math.pi**2 * bandwidth**2)


def sampled_bandwidth(spectrum: Sequence[tuple[float, float]]) -> EffectiveBandwidth:
    """Discrete ratio sum (2 pi f)^2 |X|^2 / sum |X|^2 on a uniform frequency grid.

    The grid spacing cancels, so it is not needed.
    """
    arr = np.asarray(spectrum, dtype=float)
    if arr.size == 0:
        raise EmptySpectrum("spectrum has no samples")
    arr = arr.reshape(-1, 2)
    freq, mag = arr[:, 0], arr[:, 1]
    if np.any(mag < 0) or not np.all(np.isfinite(arr)):
        raise DomainError("spectrum magnitudes must be finite and non-negative")
    power = mag**2
    total = power.sum()
    if total == 0:
        raise EmptySpectrum("spectrum is identically zero")
    return EffectiveBandwidth(float(((2 * np.pi * freq) ** 2 * power).sum() / total))


class BandwidthMode(enum.Enum):
    PAPER_FLAT = "paper-flat"
    SAMPLED_SPECTRUM = "sampled"


def effective_bandwidth(mode: BandwidthMode, bandwidth: float | None = None,
                        spectrum: Sequence[tuple[float, float]] | None = None) -> EffectiveBandwidth:
    if mode is BandwidthMode.PAPER_FLAT:
        return paper_flat_bandwidth(bandwidth)
    if spectrum is None:
        raise EmptySpectrum("SAMPLED_SPECTRUM mode needs a spectrum")
    return sampled_bandwidth(spectrum)


def _prefactor(model: NetworkModel, f2bar: EffectiveBandwidth) -> float:
    p_loc, _ = power_split(model)
    return model.k_pl * model.g0 * p_loc * f2bar.f2bar / model.noise_power


def fisher_conditional(model: NetworkModel, d, f2bar: EffectiveBandwidth):
    """J_d = K G0 P_L f2bar / ((h^2 + d^2)^(alpha/2) sigma_N^2) [1/m^2]."""
    d = np.asarray(d, dtype=float)
    if np.any(d < 0):
        raise DomainError("distance must be non-negative")
    out = _prefactor(model, f2bar) * (model.h_bs**2 + d**2) ** (-0.5 * model.alpha)
    return float(out) if out.ndim == 0 else out


class LowerLimit(enum.Enum):
    ZERO = 0.0
    ONE = 1.0


def fisher_expected(model: NetworkModel, f2bar: EffectiveBandwidth,
                    lower_limit: LowerLimit = LowerLimit.ZERO,
                    quad: QuadratureSpec = DEFAULT_QUAD) -> float:
    """E_d[J_d] by quadrature over the serving-distance law.

    ``LowerLimit.ONE`` starts the distance integral at 1 m instead of 0.
    """
    pre = _prefactor(model, f2bar)
    if pre == 0.0:
        return 0.0
    rate = 2.0 * model.lambda_bs
    h2 = model.h_bs**2
    half_alpha = 0.5 * model.alpha

    def integrand(x):
        return np.exp(-rate * x) * (h2 + x * x) ** (-half_alpha)

    scale = min(model.h_bs, 1.0 / rate)
    integral = integrate_semi_infinite(integrand, lower_limit.value, quad, scale=scale)
    return pre * rate * integral


def fisher_expected_closed_alpha2(model: NetworkModel, f2bar: EffectiveBandwidth) -> float:
    """Closed form of E_d[J_d] over [0, inf) for alpha = 2 via Ci/Si."""
    if model.alpha != 2.0:
        raise AlphaMismatch(f"closed form needs alpha = 2, model has {model.alpha}")
    pre = _prefactor(model, f2bar)
    if pre == 0.0:
        return 0.0
    rate = 2.0 * model.lambda_bs
    return pre * rate * laplace_lorentzian(rate, model.h_bs)


def prior_information(lambda_bs: float) -> float:
    """ln(2 lambda) - 1, with lambda in 1/m (natural log)."""
    if not lambda_bs > 0:
        raise DomainError("lambda_bs must be positive")
    return math.log(2.0 * lambda_bs) - 1.0


@dataclass(frozen=True)
class LocalizationBounds:
    """Information terms and the derived bounds.

    ``bcrlb``, ``jeffrey`` and ``rmse`` are None when ``j_bayes <= 0``.
    """

    j_cond: float
    j_expected: float
    j_prior: float
    j_bayes: float
    bcrlb: float | None
    jeffrey: float | None
    rmse: float | None

    @property
    def defined(self) -> bool:
        return self.bcrlb is not None


def assemble_bounds(j_expected: float, j_prior: float, j_cond: float = math.nan,
                    strict: bool = True) -> LocalizationBounds:
    j_bayes = j_expected + j_prior
    if j_bayes > 0:
        bcrlb = 1.0 / j_bayes
        return LocalizationBounds(j_cond, j_expected, j_prior, j_bayes,
                                  bcrlb=bcrlb, jeffrey=math.sqrt(j_bayes), rmse=math.sqrt(bcrlb))
    if strict:
        raise NonPositiveInformation(
            f"J_B = {j_bayes:.6g} <= 0 (J_D = {j_expected:.6g}, J_p = {j_prior:.6g}); "
            "localization power too low for this density")
    return LocalizationBounds(j_cond, j_expected, j_prior, j_bayes, None, None, None)


def bounds(model: NetworkModel, f2bar: EffectiveBandwidth | None = None,
           quad: QuadratureSpec = DEFAULT_QUAD, d: float | None = None,
           lower_limit: LowerLimit = LowerLimit.ZERO, strict: bool = True) -> LocalizationBounds:
    """J_D, J_p, J_B = J_D + J_p and BCRLB / Jeffrey's prior / RMSE.

    ``f2bar`` defaults to the flat 1.25 pi^2 B^2 constant; ``j_cond`` is
    evaluated at ``d`` (default: mean serving distance). With ``strict``
    a non-positive J_B raises :class:`NonPositiveInformation`; otherwise
    the bound fields are returned as None.
    """
    if f2bar is None:
        f2bar = paper_flat_bandwidth(model.bandwidth)
    if d is None:
        d = 0.5 / model.lambda_bs
    j_expected = fisher_expected(model, f2bar, lower_limit, quad)
    return assemble_bounds(j_expected, prior_information(model.lambda_bs),
                           fisher_conditional(model, d, f2bar), strict=strict)
