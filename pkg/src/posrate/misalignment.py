"""Beam-misalignment probability bounds and minimum-beamwidth selection."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .config import NetworkModel
from .errors import DomainError, Infeasible
from .geometry import (ServingDistanceDist, _footprint_unchecked, distance_for_footprint,
                       footprint_length, horizon_distance)
from .numerics import DEFAULT_QUAD, QuadratureSpec, integrate


class BoundVariant(enum.Enum):
    PAPER_MARKOV = "paper"
    CHEBYSHEV = "chebyshev"


class HorizonPolicy(enum.Enum):
    """How users beyond the horizon distance enter the mean bound.

    UNBOUNDED: the far beam edge never meets the ground, D0 is infinite and
    the per-distance bound is its limit, 0. Keeps the mean bound monotone in
    theta.
    MISALIGNED: count those users as misaligned with probability 1.
    """

    UNBOUNDED = "unbounded"
    MISALIGNED = "misaligned"


def _raw_bound(bcrlb: float, d0, variant: BoundVariant):
    if variant is BoundVariant.PAPER_MARKOV:
        return 2.0 * bcrlb / d0
    return 4.0 * bcrlb / d0**2


def _critical_length(bcrlb: float, variant: BoundVariant) -> float:
    """Footprint length at which the unclamped bound equals 1."""
    if variant is BoundVariant.PAPER_MARKOV:
        return 2.0 * bcrlb
    return 2.0 * math.sqrt(bcrlb)


def misalignment_bound_at(d, bcrlb: float, theta: float, h_bs: float,
                          variant: BoundVariant = BoundVariant.PAPER_MARKOV):
    """Bound on P(|d - d_hat| >= D0/2), clamped to [0, 1].

    PAPER_MARKOV: 2 BCRLB / D0. CHEBYSHEV: 4 BCRLB / D0^2.
    """
    if not bcrlb >= 0:
        raise DomainError(f"bcrlb must be non-negative, got {bcrlb!r}")
    d0 = footprint_length(d, theta, h_bs)
    out = np.minimum(1.0, _raw_bound(bcrlb, np.asarray(d0), variant))
    return float(out) if np.ndim(out) == 0 else out


def mean_misalignment_bound(model: NetworkModel, bcrlb: float,
                            quad: QuadratureSpec = DEFAULT_QUAD,
                            variant: BoundVariant = BoundVariant.PAPER_MARKOV,
                            horizon: HorizonPolicy = HorizonPolicy.UNBOUNDED,
                            theta: float | None = None) -> float:
    """E_d of the per-distance bound over the serving-distance law.

    ``theta`` overrides ``model.theta``. Integration stops at the horizon
    distance h / tan(theta/2); the mass beyond is handled per ``horizon``.
    """
    if not bcrlb >= 0:
        raise DomainError(f"bcrlb must be non-negative, got {bcrlb!r}")
    theta = model.theta if theta is None else theta
    h = model.h_bs
    dist = ServingDistanceDist(model.lambda_bs)
    d_max = horizon_distance(theta, h)
    tail = dist.sf(d_max) if horizon is HorizonPolicy.MISALIGNED else 0.0
    if bcrlb == 0.0:
        return tail
    # below d_c the bound is clamped at 1; above it decays smoothly to 0 at d_max
    d_c = min(distance_for_footprint(_critical_length(bcrlb, variant), theta, h), d_max)
    clamped = dist.cdf(d_c)

    def integrand(x):
        d0 = _footprint_unchecked(x, theta, h)
        with np.errstate(divide="ignore", over="ignore"):
            b = np.where(d0 > 0, _raw_bound(bcrlb, d0, variant), 0.0)
        return np.minimum(b, 1.0) * dist.pdf(x)

    rest = integrate(integrand, d_c, d_max, quad) if d_c < d_max else 0.0
    return min(1.0, clamped + rest + tail)


@dataclass(frozen=True)
class MisalignmentBound:
    per_distance: Callable[[float], float]
    mean: float
    variant: BoundVariant


def misalignment_bound(model: NetworkModel, bcrlb: float,
                       variant: BoundVariant = BoundVariant.PAPER_MARKOV,
                       quad: QuadratureSpec = DEFAULT_QUAD,
                       horizon: HorizonPolicy = HorizonPolicy.UNBOUNDED) -> MisalignmentBound:
    def per_distance(d):
        return misalignment_bound_at(d, bcrlb, model.theta, model.h_bs, variant)

    return MisalignmentBound(per_distance,
                             mean_misalignment_bound(model, bcrlb, quad, variant, horizon),
                             variant)


def theta_grid(step_deg: float = 0.5, max_deg: float = 90.0) -> np.ndarray:
    """Beamwidths step, 2 step, ..., max_deg in radians."""
    n = int(round(max_deg / step_deg))
    return np.radians(step_deg * np.arange(1, n + 1))


def min_beamwidth(model: NetworkModel, bcrlb: float, misalign_max: float,
                  variant: BoundVariant = BoundVariant.PAPER_MARKOV,
                  grid: Sequence[float] | None = None,
                  quad: QuadratureSpec = DEFAULT_QUAD,
                  horizon: HorizonPolicy = HorizonPolicy.UNBOUNDED) -> float:
    """Smallest grid beamwidth whose mean bound is at most ``misalign_max``.

    Bisects over the sorted grid, relying on the mean bound being
    non-increasing in theta (true under ``HorizonPolicy.UNBOUNDED``).
    """
    if not 0.0 < misalign_max <= 1.0:
        raise DomainError(f"misalign_max must lie in (0, 1], got {misalign_max!r}")
    thetas = np.sort(np.asarray(theta_grid() if grid is None else grid, dtype=float))
    if thetas.size == 0:
        raise DomainError("empty beamwidth grid")

    def ok(i):
        return mean_misalignment_bound(model, bcrlb, quad, variant, horizon, theta=thetas[i]) <= misalign_max

    if not ok(thetas.size - 1):
        raise Infeasible(
            f"no beamwidth up to {math.degrees(thetas[-1]):.4g} deg keeps the mean "
            f"misalignment bound below {misalign_max:g}")
    if ok(0):
        return float(thetas[0])
    lo, hi = 0, thetas.size - 1  # lo fails, hi passes
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return float(thetas[hi])
