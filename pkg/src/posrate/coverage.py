"""SNR and rate coverage of the typical user under Nakagami fading.

The fading tail is expanded as P(g >= t) = sum_n (-1)^(n+1) C(n0, n) e^(-n t),
which turns coverage into an alternating sum of Laplace-type integrals over
the serving-distance law.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .config import NetworkModel, power_split, rate_to_snr
from .errors import AlphaMismatch, DomainError, NumericalInconsistency
from .numerics import DEFAULT_QUAD, QuadratureSpec, erfcx, integrate_semi_infinite


@dataclass(frozen=True)
class CoverageQuery:
    model: NetworkModel
    threshold: float

    def __post_init__(self):
        if not (self.threshold >= 0 and math.isfinite(self.threshold)):
            raise DomainError(f"threshold must be finite and >= 0, got {self.threshold!r}")


def _exponent_scale(model: NetworkModel, gamma: float) -> float | None:
    """a_1 = gamma sigma_N^2 / (P_D K G0); None encodes P_D = 0."""
    _, p_data = power_split(model)
    if p_data == 0.0:
        return None
    return gamma / (p_data * model.link_gain)


def _trivial(model: NetworkModel, gamma: float) -> float | None:
    if not (gamma >= 0 and math.isfinite(gamma)):
        raise DomainError(f"threshold must be finite and >= 0, got {gamma!r}")
    if gamma == 0.0:
        return 1.0
    if power_split(model)[1] == 0.0:
        return 0.0
    return None


def _terms_quadrature(model: NetworkModel, gamma: float, quad: QuadratureSpec) -> list[float]:
    """E_d[exp(-n a (d^2 + h^2)^(alpha/2))] for n = 1..n0, by quadrature."""
    a1 = _exponent_scale(model, gamma)
    rate = 2.0 * model.lambda_bs
    h = model.h_bs
    half_alpha = 0.5 * model.alpha
    h_alpha = h**model.alpha
    out = []
    for n in range(1, model.n_nakagami + 1):
        a = n * a1
        curvature = a * model.alpha * h ** (model.alpha - 2.0)

        # exp(-a h^alpha) is factored out so the integral stays O(1)
        def integrand(x, a=a):
            excess = h_alpha * np.expm1(half_alpha * np.log1p((x / h) ** 2))
            return np.exp(-a * excess - rate * x)

        scale = 1.0 / (rate + math.sqrt(curvature))
        integral = integrate_semi_infinite(integrand, 0.0, quad, scale=scale)
        out.append(rate * math.exp(-a * h_alpha) * integral)
    return out


def _terms_closed_alpha2(model: NetworkModel, gamma: float) -> list[float]:
    """Same terms for alpha = 2 through the Gaussian integral.

    2 lambda int_0^inf exp(-a(x^2 + h^2) - 2 lambda x) dx
        = 2 lambda exp(-a h^2) (1/2) sqrt(pi/a) erfcx(lambda / sqrt(a)).
    erfcx keeps exp(lambda^2/a) erfc(lambda/sqrt(a)) finite for large arguments.
    """
    a1 = _exponent_scale(model, gamma)
    lam = model.lambda_bs
    h2 = model.h_bs**2
    out = []
    for n in range(1, model.n_nakagami + 1):
        a = n * a1
        out.append(2.0 * lam * math.exp(-a * h2) * 0.5 * math.sqrt(math.pi / a)
                   * float(erfcx(lam / math.sqrt(a))))
    return out


def _combine(n0: int, terms: Sequence[float]) -> float:
    return math.fsum((-1) ** (n + 1) * math.comb(n0, n) * t for n, t in enumerate(terms, start=1))


def partial_sums(model: NetworkModel, gamma: float, quad: QuadratureSpec = DEFAULT_QUAD) -> list[float]:
    """Running sums of the alternating series; they bracket the coverage."""
    triv = _trivial(model, gamma)
    if triv is not None:
        return [triv] * model.n_nakagami
    terms = _terms_quadrature(model, gamma, quad)
    n0 = model.n_nakagami
    return [_combine(n0, terms[:m]) for m in range(1, n0 + 1)]


def _checked(p: float, tol: float) -> float:
    if p < -tol or p > 1.0 + tol:
        raise NumericalInconsistency(f"coverage {p!r} outside [0, 1] beyond tolerance {tol:g}")
    return min(max(p, 0.0), 1.0)


def snr_coverage(model: NetworkModel, gamma: float, quad: QuadratureSpec = DEFAULT_QUAD) -> float:
    """P(SNR >= gamma) for any alpha >= 2, by quadrature of each series term."""
    triv = _trivial(model, gamma)
    if triv is not None:
        return triv
    p = _combine(model.n_nakagami, _terms_quadrature(model, gamma, quad))
    # each term carries relative error rel_tol; the alternating sum scales it by 2^n0
    tol = max(quad.rel_tol, quad.abs_tol) * 2.0**model.n_nakagami
    return _checked(p, tol)


def snr_coverage_closed_alpha2(model: NetworkModel, gamma: float) -> float:
    """Closed-form P(SNR >= gamma) for alpha = 2."""
    if model.alpha != 2.0:
        raise AlphaMismatch(f"closed form needs alpha = 2, model has {model.alpha}")
    triv = _trivial(model, gamma)
    if triv is not None:
        return triv
    p = _combine(model.n_nakagami, _terms_closed_alpha2(model, gamma))
    return _checked(p, 1e-12 * 2.0**model.n_nakagami)


def rate_coverage(model: NetworkModel, rate_threshold: float,
                  quad: QuadratureSpec = DEFAULT_QUAD) -> float:
    """P(B log2(1 + SNR) >= r0) = snr_coverage at gamma = 2^(r0/B) - 1."""
    if not rate_threshold >= 0:
        raise DomainError("rate threshold must be non-negative")
    return snr_coverage(model, rate_to_snr(rate_threshold, model.bandwidth), quad)


@dataclass(frozen=True)
class CoverageCurve:
    thresholds: np.ndarray
    probabilities: np.ndarray
    std_errors: np.ndarray | None = None

    @property
    def empirical(self) -> bool:
        return self.std_errors is not None


def coverage_curve(model: NetworkModel, thresholds: Sequence[float],
                   quad: QuadratureSpec = DEFAULT_QUAD) -> CoverageCurve:
    ts = np.asarray(thresholds, dtype=float)
    return CoverageCurve(ts, np.array([snr_coverage(model, g, quad) for g in ts]))
