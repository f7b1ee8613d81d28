"""Serving-distance law of the 1D Poisson deployment and beam footprints."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BeamHorizonError, DomainError
from .numerics import DistributionSampler


@dataclass(frozen=True)
class ServingDistanceDist:
    """Distance to the nearest BS of a 1D PPP of density ``lambda_bs``.

    The nearest of the points on both sides of the user is exponential with
    rate 2 * lambda.
    """

    lambda_bs: float

    def __post_init__(self):
        if not (self.lambda_bs > 0 and math.isfinite(self.lambda_bs)):
            raise DomainError(f"lambda_bs must be positive, got {self.lambda_bs!r}")

    @property
    def rate(self) -> float:
        return 2.0 * self.lambda_bs

    @property
    def mean(self) -> float:
        return 1.0 / self.rate

    def pdf(self, x):
        return distance_pdf(self, x)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        out = -np.expm1(-self.rate * np.maximum(x, 0.0))
        return float(out) if out.ndim == 0 else out

    def sf(self, x):
        """Survival function P(d > x)."""
        x = np.asarray(x, dtype=float)
        out = np.exp(-self.rate * np.maximum(x, 0.0))
        return float(out) if out.ndim == 0 else out

    def sample(self, rng: DistributionSampler, size=None):
        return sample_distance(self, rng, size)


def distance_pdf(dist: ServingDistanceDist, x):
    """2 lambda exp(-2 lambda x) for x >= 0, zero for x < 0."""
    x = np.asarray(x, dtype=float)
    out = np.where(x >= 0, dist.rate * np.exp(-dist.rate * np.maximum(x, 0.0)), 0.0)
    return float(out) if out.ndim == 0 else out


def sample_distance(dist: ServingDistanceDist, rng: DistributionSampler, size=None):
    return rng.draw_exponential(dist.rate, size)


@dataclass(frozen=True)
class BeamFootprint:
    length: float
    center: float

    def __post_init__(self):
        if not self.length > 0:
            raise DomainError("footprint length must be positive")

    @property
    def half_length(self) -> float:
        return 0.5 * self.length


def horizon_distance(theta: float, h_bs: float) -> float:
    """Largest ground distance at which the whole beam still hits the ground."""
    return h_bs / math.tan(0.5 * theta)


def _check_angles(theta, h_bs):
    if not 0.0 < theta < math.pi:
        raise DomainError(f"theta must lie in (0, pi), got {theta!r}")
    if not h_bs > 0:
        raise DomainError(f"h_bs must be positive, got {h_bs!r}")


def _horizon_ratio(d, theta: float, h_bs: float):
    """(d / h) tan(theta / 2) in long double; the footprint denominator
    1 - ratio^2 cancels badly as the ratio approaches 1."""
    t = np.tan(np.longdouble(theta) / 2)
    return np.asarray(d, dtype=np.longdouble) / np.longdouble(h_bs) * t, t


def _footprint_from_ratio(s, t, h_bs: float):
    r = s / t
    return (2 * np.longdouble(h_bs) * t * (1 + r * r) / ((1 - s) * (1 + s))).astype(float)


def _footprint_unchecked(d, theta: float, h_bs: float):
    s, t = _horizon_ratio(d, theta, h_bs)
    return _footprint_from_ratio(s, t, h_bs)


def footprint_length(d, theta: float, h_bs: float):
    """Ground length covered by a beam of width ``theta`` aimed at a user at ``d``.

    D0 = 2 h tan(theta/2) (1 + d^2/h^2) / (1 - (d^2/h^2) tan^2(theta/2)).
    Accepts scalar or array ``d``. Raises :class:`BeamHorizonError` once
    (d / h) tan(theta/2) >= 1, where the far cone edge no longer meets the
    ground.
    """
    _check_angles(theta, h_bs)
    d_arr = np.asarray(d, dtype=float)
    if np.any(d_arr < 0) or not np.all(np.isfinite(d_arr)):
        raise DomainError("distances must be finite and non-negative")
    s, t = _horizon_ratio(d_arr, theta, h_bs)
    if np.any(s >= 1):
        raise BeamHorizonError(
            f"beam of {math.degrees(theta):.4g} deg from {h_bs:g} m does not close "
            f"on the ground beyond d = {horizon_distance(theta, h_bs):.6g} m")
    out = _footprint_from_ratio(s, t, h_bs)
    return float(out) if out.ndim == 0 else out


def beam_footprint(d: float, theta: float, h_bs: float) -> BeamFootprint:
    """Footprint centred on the user's ground position."""
    return BeamFootprint(length=footprint_length(d, theta, h_bs), center=float(d))


def distance_for_footprint(length: float, theta: float, h_bs: float) -> float:
    """Inverse of :func:`footprint_length` in ``d``: the distance where D0 = ``length``.

    Returns 0 when the nadir footprint is already at least ``length``.
    """
    _check_angles(theta, h_bs)
    t = math.tan(0.5 * theta)
    nadir = 2.0 * h_bs * t
    if length <= nadir:
        return 0.0
    u = (length - nadir) / (nadir + length * t * t)
    return h_bs * math.sqrt(u)
