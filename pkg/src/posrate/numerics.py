"""Quadrature, special functions and seeded samplers shared by the analytic code."""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import special

from .errors import DomainError, NoConvergence

# Gauss-Kronrod 7/15 abscissae and weights (QUADPACK qk15).
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])
_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_KRONROD_W = np.concatenate([_WGK[:-1], _WGK[::-1]])
_GAUSS_W = np.zeros(15)
# Gauss points are the odd-indexed Kronrod points (1, 3, 5) and the centre.
_GAUSS_W[[1, 3, 5]] = _WG[:3]
_GAUSS_W[[13, 11, 9]] = _WG[:3]
_GAUSS_W[7] = _WG[3]


@dataclass(frozen=True)
class QuadratureSpec:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-14
    max_subdivisions: int = 2000

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise DomainError("quadrature tolerances must be positive")
        if self.max_subdivisions < 1:
            raise DomainError("max_subdivisions must be >= 1")


DEFAULT_QUAD = QuadratureSpec()


def _vectorized(f: Callable) -> Callable[[np.ndarray], np.ndarray]:
    probe = np.array([0.25, 0.5])
    try:
        out = np.asarray(f(probe), dtype=float)
        if out.shape == probe.shape:
            return f
    except Exception:
        pass
    return np.vectorize(f, otypes=[float])


def _gk15(f, a: float, b: float) -> tuple[float, float]:
    c = 0.5 * (a + b)
    h = 0.5 * (b - a)
    y = np.asarray(f(c + h * _NODES), dtype=float)
    y = np.where(np.isfinite(y), y, 0.0)
    k = h * float(_KRONROD_W @ y)
    g = h * float(_GAUSS_W @ y)
    return k, abs(k - g)


def integrate(f: Callable, a: float, b: float, spec: QuadratureSpec = DEFAULT_QUAD,
              initial_pieces: int = 8) -> float:
    """Adaptive G7-K15 quadrature of ``f`` over the finite interval [a, b].

    The interval with the largest error estimate is bisected until the summed
    estimate drops below max(rel_tol * |I|, abs_tol). ``f`` should accept numpy
    arrays; scalar-only callables are wrapped with ``np.vectorize``.
    """
    if not (math.isfinite(a) and math.isfinite(b)):
        raise DomainError("integrate() needs finite limits; use integrate_semi_infinite")
    if a == b:
        return 0.0
    sign = 1.0
    if b < a:
        a, b, sign = b, a, -1.0
    f = _vectorized(f)
    edges = np.linspace(a, b, initial_pieces + 1)
    heap = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        val, err = _gk15(f, lo, hi)
        heap.append((-err, lo, hi, val))
    heapq.heapify(heap)
    while True:
        total = math.fsum(item[3] for item in heap)
        err_total = math.fsum(-item[0] for item in heap)
        if err_total <= max(spec.rel_tol * abs(total), spec.abs_tol):
            return sign * total
        if len(heap) >= spec.max_subdivisions:
            raise NoConvergence(
                f"{len(heap)} subintervals, error estimate {err_total:.3e} "
                f"vs target {max(spec.rel_tol * abs(total), spec.abs_tol):.3e}")
        _, lo, hi, _ = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            raise NoConvergence("interval collapsed below floating-point resolution")
        for l, r in ((lo, mid), (mid, hi)):
            val, err = _gk15(f, l, r)
            heapq.heappush(heap, (-err, l, r, val))


def integrate_semi_infinite(f: Callable, a: float, spec: QuadratureSpec = DEFAULT_QUAD,
                            scale: float = 1.0) -> float:
    """Integrate ``f`` over [a, inf) through x = a + scale * t / (1 - t), t in [0, 1).

    ``scale`` should be the length over which ``f`` varies; it only affects
    how fast the subdivision converges, not the result.
    """
    if not math.isfinite(a):
        raise DomainError("lower limit must be finite")
    if not scale > 0:
        raise DomainError("scale must be positive")
    f = _vectorized(f)

    def g(t):
        one_minus = 1.0 - t
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            return f(a + scale * t / one_minus) * (scale / one_minus**2)

    return integrate(g, 0.0, 1.0, spec)


def expint_ci_si(z: float) -> tuple[float, float]:
    """Cosine and sine integrals (Ci(z), Si(z)) for z > 0."""
    z = float(z)
    if not z > 0 or math.isinf(z):
        raise DomainError(f"Ci/Si need a finite z > 0, got {z!r}")
    si, ci = special.sici(z)
    return float(ci), float(si)


def laplace_lorentzian(p: float, a: float) -> float:
    """Closed form of the integral of exp(-p x) / (x^2 + a^2) over [0, inf).

    Equals (1/a) [Ci(ap) sin(ap) + (pi/2 - Si(ap)) cos(ap)], the real form of
    the i(e^{-iz}Ei(iz) - e^{iz}Ei(-iz))/(2a) combination with z = ap.
    """
    if not (p > 0 and a > 0):
        raise DomainError("p and a must be positive")
    z = a * p
    ci, si = expint_ci_si(z)
    return (ci * math.sin(z) + (0.5 * math.pi - si) * math.cos(z)) / a


def erfc(x):
    """Complementary error function (scalar or array)."""
    return special.erfc(x)


def erfcx(x):
    """Scaled complementary error function exp(x^2) erfc(x)."""
    return special.erfcx(x)


class DistributionSampler:
    """Seeded sampler built on uniform draws from a PCG64 stream.

    * exponential: inverse CDF, -log(U) / rate.
    * Gaussian: Box-Muller, both branches used.
    * gamma: Marsaglia-Tsang squeeze/rejection for shape >= 1; for shape < 1
      a gamma(shape + 1) draw is multiplied by U^(1/shape).

    Not thread-safe; give each worker its own instance.
    """

    def __init__(self, seed: int):
        self.seed = int(seed)
        self._gen = np.random.Generator(np.random.PCG64(self.seed))

    def uniform(self, size=None):
        """Uniform draws on (0, 1], safe to take the log of."""
        return 1.0 - self._gen.random(size)

    def draw_exponential(self, rate: float, size=None):
        if not rate > 0:
            raise DomainError(f"rate must be positive, got {rate!r}")
        return -np.log(self.uniform(size)) / rate

    def draw_gaussian(self, mean: float, std: float, size=None):
        if not std > 0:
            raise DomainError(f"std must be positive, got {std!r}")
        n = 1 if size is None else int(np.prod(size))
        m = (n + 1) // 2
        u1 = self.uniform(m)
        u2 = self.uniform(m)
        r = np.sqrt(-2.0 * np.log(u1))
        z = np.concatenate([r * np.cos(2 * np.pi * u2), r * np.sin(2 * np.pi * u2)])[:n]
        z = mean + std * z
        return float(z[0]) if size is None else z.reshape(size)

    def draw_gamma(self, shape: float, scale: float, size=None):
        if not (shape > 0 and scale > 0):
            raise DomainError(f"shape and scale must be positive, got {shape!r}, {scale!r}")
        n = 1 if size is None else int(np.prod(size))
        if shape < 1.0:
            g = self._gamma_ge1(shape + 1.0, n) * self.uniform(n) ** (1.0 / shape)
        else:
            g = self._gamma_ge1(shape, n)
        g = g * scale
        return float(g[0]) if size is None else g.reshape(size)

    def _gamma_ge1(self, shape: float, n: int) -> np.ndarray:
        d = shape - 1.0 / 3.0
        c = 1.0 / math.sqrt(9.0 * d)
        out = np.empty(n)
        filled = 0
        while filled < n:
            need = n - filled
            # acceptance is above 95% for shape >= 1
            m = need + need // 10 + 16
            z = self.draw_gaussian(0.0, 1.0, m)
            u = self.uniform(m)
            v = (1.0 + c * z) ** 3
            ok = v > 0
            with np.errstate(invalid="ignore", divide="ignore"):
                accept = ok & (np.log(u) < 0.5 * z * z + d - d * v + d * np.log(np.where(ok, v, 1.0)))
            got = (d * v)[accept][:need]
            out[filled:filled + got.size] = got
            filled += got.size
        return out


def worker_seed(base_seed: int, index: int) -> int:
    """Seed for chunk/worker ``index``: base_seed XOR index."""
    return int(base_seed) ^ int(index)
