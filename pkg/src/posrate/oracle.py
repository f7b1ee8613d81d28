"""Brute-force validators for the analytic chain.

Nothing here is used by the analytic modules; they are checked against it.
Monte Carlo work is split into fixed-size chunks, chunk ``i`` seeded with
``seed ^ i``, so counts do not depend on how many workers run the chunks.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .config import SPEED_OF_LIGHT, NetworkModel, power_split
from .errors import BeamHorizonError, DomainError, StepTooLarge
from .geometry import ServingDistanceDist, _footprint_unchecked, footprint_length, horizon_distance
from .localization import EffectiveBandwidth, fisher_conditional
from .misalignment import BoundVariant, HorizonPolicy, _raw_bound
from .numerics import DistributionSampler, worker_seed

CHUNK = 1 << 17


class Fading(enum.Enum):
    BINOMIAL_MIXTURE = "binomial-mixture"
    EXACT_GAMMA = "exact-gamma"


@dataclass(frozen=True)
class SimConfig:
    trials: int = 1_000_000
    seed: int = 42
    fading: Fading = Fading.BINOMIAL_MIXTURE
    workers: int = 1

    def __post_init__(self):
        if self.trials < 1:
            raise DomainError("trials must be >= 1")
        if self.workers < 1:
            raise DomainError("workers must be >= 1")


@dataclass(frozen=True)
class Estimate:
    estimate: float
    std_error: float

    def __iter__(self):
        return iter((self.estimate, self.std_error))


def _run_chunks(cfg: SimConfig, job: Callable[[DistributionSampler, int], tuple[float, float]]):
    """Run ``job(sampler, n)`` per chunk and sum the (sum, sum_sq) pairs."""
    sizes = [CHUNK] * (cfg.trials // CHUNK)
    if cfg.trials % CHUNK:
        sizes.append(cfg.trials % CHUNK)

    def run(i):
        return job(DistributionSampler(worker_seed(cfg.seed, i)), sizes[i])

    if cfg.workers == 1:
        parts = [run(i) for i in range(len(sizes))]
    else:
        with ThreadPoolExecutor(cfg.workers) as pool:
            parts = list(pool.map(run, range(len(sizes))))
    return math.fsum(p[0] for p in parts), math.fsum(p[1] for p in parts)


def _proportion(cfg: SimConfig, job) -> Estimate:
    hits, _ = _run_chunks(cfg, job)
    p = hits / cfg.trials
    return Estimate(p, math.sqrt(p * (1.0 - p) / cfg.trials))


def _mean(cfg: SimConfig, job) -> Estimate:
    s, s2 = _run_chunks(cfg, job)
    n = cfg.trials
    mean = s / n
    var = max(s2 / n - mean * mean, 0.0) * n / max(n - 1, 1)
    return Estimate(mean, math.sqrt(var / n))


def draw_fading(rng: DistributionSampler, n0: int, fading: Fading, size: int) -> np.ndarray:
    """Power gain samples.

    BINOMIAL_MIXTURE has CCDF 1 - (1 - e^-t)^n0, i.e. the law of the largest
    of n0 unit exponentials, sampled by the exact inverse CDF
    -log(1 - U^(1/n0)). EXACT_GAMMA is Nakagami power, gamma(n0, 1/n0).
    """
    if fading is Fading.EXACT_GAMMA:
        return rng.draw_gamma(float(n0), 1.0 / n0, size)
    u = rng.uniform(size)
    return -np.log1p(-(u ** (1.0 / n0)))


def mc_snr_coverage(model: NetworkModel, gamma: float, cfg: SimConfig = SimConfig()) -> Estimate:
    """Empirical P(SNR >= gamma) with the serving distance drawn per trial."""
    dist = ServingDistanceDist(model.lambda_bs)
    _, p_data = power_split(model)
    gain = p_data * model.link_gain

    def job(rng, n):
        d = dist.sample(rng, n)
        g = draw_fading(rng, model.n_nakagami, cfg.fading, n)
        snr = gain * g * (d * d + model.h_bs**2) ** (-0.5 * model.alpha)
        hits = float(np.count_nonzero(snr >= gamma))
        return hits, hits

    return _proportion(cfg, job)


def mc_misalignment(model: NetworkModel, bcrlb: float, cfg: SimConfig = SimConfig(),
                    d_fixed: float | None = None, theta: float | None = None,
                    horizon: HorizonPolicy = HorizonPolicy.UNBOUNDED) -> Estimate:
    """Empirical P(|e| >= D0(d)/2) with e ~ N(0, bcrlb).

    With ``d_fixed`` the user sits at that distance; otherwise d is drawn per
    trial and users beyond the horizon are never (UNBOUNDED) or always
    (MISALIGNED) counted as misaligned.
    """
    if not bcrlb >= 0:
        raise DomainError("bcrlb must be non-negative")
    theta = model.theta if theta is None else theta
    h = model.h_bs
    sigma = math.sqrt(bcrlb)
    if d_fixed is not None:
        half = 0.5 * footprint_length(d_fixed, theta, h)
    dist = ServingDistanceDist(model.lambda_bs)
    d_max = horizon_distance(theta, h)

    def job(rng, n):
        e = rng.draw_gaussian(0.0, sigma, n) if sigma > 0 else np.zeros(n)
        if d_fixed is not None:
            hits = np.count_nonzero(np.abs(e) >= half)
        else:
            d = dist.sample(rng, n)
            inside = d < d_max
            d0 = _footprint_unchecked(np.where(inside, d, 0.0), theta, h)
            hit = inside & (np.abs(e) >= 0.5 * d0)
            if horizon is HorizonPolicy.MISALIGNED:
                hit |= ~inside
            hits = np.count_nonzero(hit)
        return float(hits), float(hits)

    return _proportion(cfg, job)


def mc_mean_bound(model: NetworkModel, bcrlb: float, cfg: SimConfig = SimConfig(),
                  variant: BoundVariant = BoundVariant.PAPER_MARKOV,
                  horizon: HorizonPolicy = HorizonPolicy.UNBOUNDED,
                  theta: float | None = None) -> Estimate:
    """Sample mean of the clamped per-distance bound over drawn distances."""
    theta = model.theta if theta is None else theta
    dist = ServingDistanceDist(model.lambda_bs)
    d_max = horizon_distance(theta, model.h_bs)
    beyond = 1.0 if horizon is HorizonPolicy.MISALIGNED else 0.0

    def job(rng, n):
        d = dist.sample(rng, n)
        inside = d < d_max
        d0 = _footprint_unchecked(np.where(inside, d, 0.0), theta, model.h_bs)
        b = np.where(inside, np.minimum(1.0, _raw_bound(bcrlb, d0, variant)), beyond)
        return float(b.sum()), float((b * b).sum())

    return _mean(cfg, job)


def mc_fisher_expected(model: NetworkModel, f2bar: EffectiveBandwidth,
                       cfg: SimConfig = SimConfig()) -> Estimate:
    """Sample mean of J_d over drawn serving distances."""
    dist = ServingDistanceDist(model.lambda_bs)

    def job(rng, n):
        j = fisher_conditional(model, dist.sample(rng, n), f2bar)
        return float(j.sum()), float((j * j).sum())

    return _mean(cfg, job)


# ------------------------------------------------------------------ waveform


@dataclass(frozen=True)
class SampledWaveform:
    """Uniformly sampled, periodic ranging pulse with per-sample noise std."""

    times: np.ndarray
    amplitudes: np.ndarray
    noise_std: float
    spectrum: list = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        x = np.asarray(self.amplitudes, dtype=float)
        if t.shape != x.shape or t.ndim != 1:
            raise DomainError("times and amplitudes must be 1D and equally long")
        if t.size < 64:
            raise DomainError("need at least 64 samples")
        dt = np.diff(t)
        if not np.allclose(dt, dt[0], rtol=1e-9, atol=0.0) or dt[0] <= 0:
            raise DomainError("time grid must be uniform and increasing")
        if not self.noise_std > 0:
            raise DomainError("noise_std must be positive")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "amplitudes", x)
        freqs = np.fft.fftfreq(t.size, dt[0])
        mags = np.abs(np.fft.fft(x))
        object.__setattr__(self, "spectrum", list(zip(freqs.tolist(), mags.tolist())))

    @property
    def dt(self) -> float:
        return float(self.times[1] - self.times[0])

    def delayed(self, tau: float) -> np.ndarray:
        """The band-limited periodic interpolant shifted by ``tau`` seconds."""
        n = self.amplitudes.size
        spec = np.fft.rfft(self.amplitudes)
        f = np.fft.rfftfreq(n, self.dt)
        shifted = spec * np.exp(-2j * np.pi * f * tau)
        if n % 2 == 0:
            shifted[-1] = 0.0
        return np.fft.irfft(shifted, n)


def flat_spectrum_waveform(bandwidth: float, noise_std: float, n_samples: int = 1024,
                           oversampling: int = 8) -> SampledWaveform:
    """Periodic sinc: equal-amplitude tones over [-B/2, B/2], unit total energy."""
    dt = 1.0 / (oversampling * bandwidth)
    t = (np.arange(n_samples) - n_samples // 2) * dt
    period = n_samples * dt
    k_max = int(math.floor(0.5 * bandwidth * period))
    k = np.arange(1, k_max + 1)
    x = 1.0 + 2.0 * np.cos(2 * np.pi * np.outer(t, k) / period).sum(axis=1)
    x /= math.sqrt(float((x * x).sum()))
    return SampledWaveform(t, x, noise_std)


@dataclass(frozen=True)
class WaveformFisher:
    """Fisher information on the distance from a sampled waveform [1/m^2].

    ``delay`` holds the sensitivity through the propagation delay d/speed,
    ``amplitude`` the sensitivity through the path-loss envelope, ``total``
    the full mean-signal derivative (including the cross term).
    ``delay_info`` = delay * speed^2 is the information on the delay itself,
    which is the quantity the closed-form J_d expresses.
    """

    delay: float
    amplitude: float
    total: float
    speed: float

    @property
    def delay_info(self) -> float:
        return self.delay * self.speed**2


def waveform_fisher(w: SampledWaveform, model: NetworkModel, d: float,
                    speed: float = SPEED_OF_LIGHT) -> WaveformFisher:
    """Sum_t (d mu_t / d d)^2 / sigma^2 for mu_t = A(d) x(t - d/speed).

    Central differences with step cbrt(eps) * d (floor: the distance one
    sample period travels); a Richardson comparison against half the step
    raises :class:`StepTooLarge` above 1e-3 relative truncation error.
    """
    if not d >= 0:
        raise DomainError("distance must be non-negative")
    p_loc, _ = power_split(model)
    h2 = model.h_bs**2
    q = model.alpha / 4.0

    def amp(r):
        return math.sqrt(model.k_pl * model.g0 * p_loc) * (h2 + r * r) ** (-q)

    if p_loc == 0.0:
        return WaveformFisher(0.0, 0.0, 0.0, speed)
    step = np.cbrt(np.finfo(float).eps) * max(d, speed * w.dt)
    var = w.noise_std**2

    def delay_deriv(hd):
        return amp(d) * (w.delayed((d + hd) / speed) - w.delayed((d - hd) / speed)) / (2 * hd)

    def total_deriv(hd):
        plus = amp(d + hd) * w.delayed((d + hd) / speed)
        minus = amp(d - hd) * w.delayed((d - hd) / speed)
        return (plus - minus) / (2 * hd)

    coarse, fine = delay_deriv(step), delay_deriv(0.5 * step)
    j_coarse = float((coarse**2).sum()) / var
    j_delay = float((fine**2).sum()) / var
    if abs(j_coarse - j_delay) / 3.0 > 1e-3 * j_delay:
        raise StepTooLarge(f"finite-difference step {step:.3g} m too coarse at d = {d:g} m")
    damp = (amp(d + step) - amp(d - step)) / (2 * step)
    j_amp = float(((damp * w.delayed(d / speed)) ** 2).sum()) / var
    j_total = float((total_deriv(0.5 * step) ** 2).sum()) / var
    return WaveformFisher(j_delay, j_amp, j_total, speed)


def ray_footprint(d, theta: float, h_bs: float):
    """h [tan(phi + theta/2) - tan(phi - theta/2)] with phi = atan(d / h).

    Evaluated in long double: tan of the far edge angle is ill-conditioned
    as it approaches pi/2.
    """
    if not 0.0 < theta < math.pi or not h_bs > 0:
        raise DomainError("need 0 < theta < pi and h_bs > 0")
    h = np.longdouble(h_bs)
    half = np.longdouble(theta) / 2
    phi = np.arctan(np.asarray(d, dtype=np.longdouble) / h)
    far = phi + half
    if np.any(far >= np.pi / np.longdouble(2)):
        raise BeamHorizonError("far beam edge at or above the horizon")
    out = (h * (np.tan(far) - np.tan(phi - half))).astype(float)
    return float(out) if out.ndim == 0 else out
