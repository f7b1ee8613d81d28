"""Brute-force references, deliberately independent of posrate's numerics."""

import math

import numpy as np


def simpson(f, a, b, n=1_000_000):
    """Composite Simpson rule on n (even) panels."""
    if n % 2:
        n += 1
    x = np.linspace(a, b, n + 1)
    y = f(x)
    h = (b - a) / n
    return h / 3.0 * (y[0] + y[-1] + 4.0 * y[1:-1:2].sum() + 2.0 * y[2:-1:2].sum())


def si_bruteforce(z):
    return simpson(lambda t: np.sinc(t / np.pi), 0.0, z)


def ci_bruteforce(z):
    """Ci(z) = Euler gamma + ln z + integral_0^z (cos t - 1)/t dt."""
    def g(t):
        with np.errstate(invalid="ignore", divide="ignore"):
            out = np.where(t == 0, 0.0, (np.cos(t) - 1.0) / t)
        return out
    return np.euler_gamma + math.log(z) + simpson(g, 0.0, z)


def erfc_bruteforce(x):
    return 2.0 / math.sqrt(math.pi) * simpson(lambda t: np.exp(-t * t), x, x + 12.0)


def exp_lorentz_bruteforce():
    """integral_0^inf e^-x / (1 + x^2) dx; the tail past 60 is below e^-60."""
    return simpson(lambda x: np.exp(-x) / (1.0 + x * x), 0.0, 60.0)


def flat_band_f2(bandwidth, n=200_001):
    """Discrete (2 pi f)^2 moment of a flat spectrum on [-B/2, B/2]."""
    f = np.linspace(-bandwidth / 2, bandwidth / 2, n)
    return float(((2 * np.pi * f) ** 2).sum() / n)


def ray_footprint_mp(d, theta, h, dps=40):
    import mpmath as mp
    mp.mp.dps = dps
    d, theta, h = mp.mpf(d), mp.mpf(theta), mp.mpf(h)
    phi = mp.atan(d / h)
    return float(h * (mp.tan(phi + theta / 2) - mp.tan(phi - theta / 2)))


def coverage_bruteforce(lam, p_data, link_gain, h, alpha, n0, gamma, n=2_000_000):
    """Alternating binomial series with every term by Simpson on [0, 60/(2 lam)]."""
    rate = 2.0 * lam
    total = 0.0
    for k in range(1, n0 + 1):
        a = k * gamma / (p_data * link_gain)
        term = simpson(lambda x: rate * np.exp(-a * (x * x + h * h) ** (alpha / 2) - rate * x),
                       0.0, 60.0 / rate, n)
        total += (-1) ** (k + 1) * math.comb(n0, k) * term
    return total


def mean_bound_bruteforce(lam, h, theta, bcrlb, markov=True, n=2_000_000):
    """Simpson over [0, d_max) of the clamped per-distance bound times the pdf,
    with D0 from the ray intersection."""
    d_max = h / math.tan(theta / 2)
    rate = 2.0 * lam

    def f(x):
        phi = np.arctan(x / h)
        with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
            d0 = h * (np.tan(phi + theta / 2) - np.tan(phi - theta / 2))
            raw = 2 * bcrlb / d0 if markov else 4 * bcrlb / d0**2
        raw = np.where(np.isfinite(d0) & (d0 > 0), raw, 0.0)
        return np.minimum(raw, 1.0) * rate * np.exp(-rate * x)

    return simpson(f, 0.0, d_max * (1 - 1e-12), n)
