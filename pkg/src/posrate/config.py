"""Network parameters, service requirements and unit conversions.

Everything inside the package is SI / linear. Decibels, dBm, degrees and
per-kilometre densities only appear in :func:`from_engineering_units`,
:func:`to_engineering_units` and the key-value file readers.
"""

from __future__ import annotations

import dataclasses
import enum
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

from .errors import ConfigError, MissingField, UnitOutOfRange

SPEED_OF_LIGHT = 299_792_458.0

ENGINEERING_KEYS = (
    "lambda_km",
    "p_dbm",
    "beta",
    "theta_deg",
    "h_b_m",
    "alpha",
    "k_db",
    "g0_db",
    "n0",
    "bw_mhz",
    "noise_psd_dbm_hz",
)


def free_space_k_db(carrier_hz: float) -> float:
    """Free-space path-loss coefficient (c / 4 pi f)^2 at 1 m, in dB."""
    return 20.0 * math.log10(SPEED_OF_LIGHT / (4.0 * math.pi * carrier_hz))


# Only lambda, P, G0 and n0 are pinned by the source analysis; the rest are
# standard 28 GHz link-budget values.
DEFAULT_ENGINEERING: dict[str, float] = {
    "lambda_km": 2.0,
    "p_dbm": 20.0,
    "beta": 0.5,
    "theta_deg": 10.0,
    "h_b_m": 10.0,
    "alpha": 2.0,
    "k_db": free_space_k_db(28e9),
    "g0_db": 10.0,
    "n0": 3,
    "bw_mhz": 1000.0,
    "noise_psd_dbm_hz": -174.0 + 10.0,
}


def dbm_to_watt(x: float) -> float:
    return 10.0 ** ((x - 30.0) / 10.0)


def watt_to_dbm(p: float) -> float:
    return 10.0 * math.log10(p) + 30.0


def db_to_linear(x: float) -> float:
    return 10.0 ** (x / 10.0)


def linear_to_db(x: float) -> float:
    return 10.0 * math.log10(x)


def _require(name: str, ok: bool, value) -> None:
    if not ok:
        raise UnitOutOfRange(f"{name}={value!r} is outside its valid range")


def _finite(x) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool) and math.isfinite(x)


@dataclass(frozen=True)
class NetworkModel:
    """Deployment and link parameters of a street-deployed mm-wave network.

    Attributes:
        lambda_bs: BS density along the street [1/m].
        power_total: total BS transmit power P [W].
        beta: fraction of P given to data; 1 - beta funds localization.
        theta: beamwidth [rad].
        h_bs: BS height [m].
        alpha: path-loss exponent.
        k_pl: path-loss coefficient K (linear).
        g0: product of TX and RX directivity gains (linear).
        n_nakagami: Nakagami parameter, integer >= 1.
        bandwidth: operating bandwidth B [Hz].
        noise_psd: noise power spectral density N0 [W/Hz].
    """

    lambda_bs: float
    power_total: float
    beta: float
    theta: float
    h_bs: float
    alpha: float
    k_pl: float
    g0: float
    n_nakagami: int
    bandwidth: float
    noise_psd: float

    def __post_init__(self):
        for name in ("lambda_bs", "power_total", "beta", "theta", "h_bs",
                     "alpha", "k_pl", "g0", "bandwidth", "noise_psd"):
            _require(name, _finite(getattr(self, name)), getattr(self, name))
        _require("lambda_bs", self.lambda_bs > 0, self.lambda_bs)
        _require("power_total", self.power_total > 0, self.power_total)
        _require("beta", 0.0 <= self.beta <= 1.0, self.beta)
        _require("theta", 0.0 < self.theta < math.pi, self.theta)
        _require("h_bs", self.h_bs > 0, self.h_bs)
        _require("alpha", self.alpha >= 2.0, self.alpha)
        _require("k_pl", self.k_pl > 0, self.k_pl)
        _require("g0", self.g0 > 0, self.g0)
        n0 = self.n_nakagami
        _require("n_nakagami", isinstance(n0, int) and not isinstance(n0, bool) and n0 >= 1, n0)
        _require("bandwidth", self.bandwidth > 0, self.bandwidth)
        _require("noise_psd", self.noise_psd > 0, self.noise_psd)
        _require("noise_power", self.noise_power > 0, self.noise_power)

    @property
    def noise_power(self) -> float:
        """sigma_N^2 = N0 * B [W]."""
        return self.noise_psd * self.bandwidth

    @property
    def p_loc(self) -> float:
        return power_split(self)[0]

    @property
    def p_data(self) -> float:
        return power_split(self)[1]

    @property
    def link_gain(self) -> float:
        """K * G0 / sigma_N^2, the SNR per watt before distance loss [1/W]."""
        return self.k_pl * self.g0 / self.noise_power

    def replace(self, **changes) -> "NetworkModel":
        return dataclasses.replace(self, **changes)


def power_split(model: NetworkModel) -> tuple[float, float]:
    """Return (P_L, P_D) = ((1 - beta) P, beta P).

    P_L is formed as P - P_D so the pair sums back to P.
    """
    p_data = model.beta * model.power_total
    return model.power_total - p_data, p_data


def from_engineering_units(spec: Mapping[str, float],
                           defaults: Mapping[str, float] | None = None) -> NetworkModel:
    """Build a :class:`NetworkModel` from conventional units.

    Keys are those of :data:`ENGINEERING_KEYS`. Missing keys are taken from
    ``defaults`` when given, otherwise :class:`MissingField` is raised.
    """
    merged = dict(defaults or {})
    merged.update(spec)
    unknown = set(spec) - set(ENGINEERING_KEYS)
    if unknown:
        raise ConfigError(f"unknown key(s): {', '.join(sorted(unknown))}")
    missing = [k for k in ENGINEERING_KEYS if k not in merged]
    if missing:
        raise MissingField(f"missing field(s): {', '.join(missing)}")
    vals = {}
    for k in ENGINEERING_KEYS:
        try:
            vals[k] = float(merged[k])
        except (TypeError, ValueError):
            raise UnitOutOfRange(f"{k}={merged[k]!r} is not a number") from None
        if not math.isfinite(vals[k]):
            raise UnitOutOfRange(f"{k}={merged[k]!r} is not finite")
    n0 = vals["n0"]
    if n0 != int(n0):
        raise UnitOutOfRange(f"n0={n0!r} must be an integer")
    return NetworkModel(
        lambda_bs=vals["lambda_km"] * 1e-3,
        power_total=dbm_to_watt(vals["p_dbm"]),
        beta=vals["beta"],
        theta=math.radians(vals["theta_deg"]),
        h_bs=vals["h_b_m"],
        alpha=vals["alpha"],
        k_pl=db_to_linear(vals["k_db"]),
        g0=db_to_linear(vals["g0_db"]),
        n_nakagami=int(n0),
        bandwidth=vals["bw_mhz"] * 1e6,
        noise_psd=dbm_to_watt(vals["noise_psd_dbm_hz"]),
    )


def to_engineering_units(model: NetworkModel) -> dict[str, float]:
    """Inverse of :func:`from_engineering_units`."""
    return {
        "lambda_km": model.lambda_bs * 1e3,
        "p_dbm": watt_to_dbm(model.power_total),
        "beta": model.beta,
        "theta_deg": math.degrees(model.theta),
        "h_b_m": model.h_bs,
        "alpha": model.alpha,
        "k_db": linear_to_db(model.k_pl),
        "g0_db": linear_to_db(model.g0),
        "n0": model.n_nakagami,
        "bw_mhz": model.bandwidth * 1e-6,
        "noise_psd_dbm_hz": watt_to_dbm(model.noise_psd),
    }


def default_model(**overrides: float) -> NetworkModel:
    """Default model; ``overrides`` use engineering keys (e.g. ``p_dbm=25``)."""
    return from_engineering_units(overrides, defaults=DEFAULT_ENGINEERING)


class Objective(enum.Enum):
    MAXIMIZE_POSITIONING = "positioning"
    MAXIMIZE_RATE = "rate"


@dataclass(frozen=True)
class ServiceRequirement:
    """QoS targets of one service.

    ``snr_threshold`` is linear; ``rate_threshold`` is in bit/s and maps to
    an SNR threshold 2^(r0/B) - 1. When both are given the stricter wins.
    """

    outage_max: float
    snr_threshold: float | None = None
    rate_threshold: float | None = None
    pos_error_max: float | None = None
    misalign_max: float | None = None
    objective: Objective = Objective.MAXIMIZE_POSITIONING

    def __post_init__(self):
        _require("outage_max", _finite(self.outage_max) and 0.0 <= self.outage_max <= 1.0,
                 self.outage_max)
        if self.snr_threshold is None and self.rate_threshold is None:
            raise MissingField("one of snr_threshold / rate_threshold is required")
        for name in ("snr_threshold", "rate_threshold"):
            v = getattr(self, name)
            if v is not None:
                _require(name, _finite(v) and v > 0, v)
        if self.pos_error_max is not None:
            v = self.pos_error_max
            _require("pos_error_max", not math.isnan(v) and v > 0, v)
        if self.misalign_max is not None:
            v = self.misalign_max
            _require("misalign_max", _finite(v) and 0.0 <= v <= 1.0, v)
        if not isinstance(self.objective, Objective):
            raise UnitOutOfRange(f"objective={self.objective!r} is not an Objective")

    def snr_gamma(self, bandwidth: float) -> float:
        """Linear SNR threshold implied by the requirement."""
        gammas = []
        if self.snr_threshold is not None:
            gammas.append(self.snr_threshold)
        if self.rate_threshold is not None:
            gammas.append(rate_to_snr(self.rate_threshold, bandwidth))
        return max(gammas)


def rate_to_snr(rate: float, bandwidth: float) -> float:
    """Shannon SNR threshold for a rate ``rate`` [bit/s] over ``bandwidth``."""
    return math.expm1(rate / bandwidth * math.log(2.0))


# ---------------------------------------------------------------- key=value IO

REQUIREMENT_KEYS = ("outage_max", "gamma_db", "rate_mbps", "pos_error_m",
                    "misalign_max", "objective")


def parse_key_values(text: str) -> dict[str, str]:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if not key or not value:
            raise ConfigError(f"line {lineno}: empty key or value")
        if key in out:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        out[key] = value
    return out


def load_model(path: str | Path | None) -> NetworkModel:
    """Read a model config file; keys it omits fall back to the defaults."""
    if path is None:
        return default_model()
    kv = parse_key_values(Path(path).read_text(encoding="utf-8"))
    return from_engineering_units(kv, defaults=DEFAULT_ENGINEERING)


def requirement_from_mapping(kv: Mapping[str, str]) -> ServiceRequirement:
    unknown = set(kv) - set(REQUIREMENT_KEYS)
    if unknown:
        raise ConfigError(f"unknown requirement key(s): {', '.join(sorted(unknown))}")
    if "outage_max" not in kv:
        raise MissingField("missing field: outage_max")

    def num(key):
        if key not in kv:
            return None
        try:
            return float(kv[key])
        except ValueError:
            raise UnitOutOfRange(f"{key}={kv[key]!r} is not a number") from None

    gamma_db = num("gamma_db")
    rate_mbps = num("rate_mbps")
    objective = kv.get("objective", "positioning").strip().lower()
    try:
        obj = Objective(objective)
    except ValueError:
        raise UnitOutOfRange(f"objective={objective!r}; expected positioning or rate") from None
    return ServiceRequirement(
        outage_max=num("outage_max"),
        snr_threshold=None if gamma_db is None else db_to_linear(gamma_db),
        rate_threshold=None if rate_mbps is None else rate_mbps * 1e6,
        pos_error_max=num("pos_error_m"),
        misalign_max=num("misalign_max"),
        objective=obj,
    )


def load_requirement(path: str | Path) -> ServiceRequirement:
    return requirement_from_mapping(parse_key_values(Path(path).read_text(encoding="utf-8")))
