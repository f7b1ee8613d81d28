"""Operating characteristics and power-split selection per service.

The planning scheme: fix (P, lambda, theta); the outage constraint gives a
lower limit beta_min on the data share; the positioning-error and
misalignment constraints give an upper limit beta_max; the objective picks
an end of [beta_min, beta_max].
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .config import NetworkModel, Objective, ServiceRequirement, power_split
from .coverage import rate_coverage, snr_coverage
from .errors import Infeasible, NonPositiveInformation, NumericalInconsistency
from .localization import EffectiveBandwidth, bounds, paper_flat_bandwidth
from .misalignment import BoundVariant, HorizonPolicy, mean_misalignment_bound
from .numerics import DEFAULT_QUAD, QuadratureSpec

BETA_TOL = 1e-4
DEFAULT_RATE = 500e6
DEFAULT_GAMMA = 0.1
NO_INFORMATION = "no-information"


@dataclass(frozen=True)
class TradeoffPoint:
    beta: float
    jeffrey: float | None
    rmse: float | None
    rate_coverage: float
    snr_coverage: float
    status: str = "ok"


def tradeoff_curve(model_base: NetworkModel, betas: Sequence[float],
                   quad: QuadratureSpec = DEFAULT_QUAD,
                   rate_threshold: float = DEFAULT_RATE, gamma: float = DEFAULT_GAMMA,
                   f2bar: EffectiveBandwidth | None = None) -> list[TradeoffPoint]:
    """Positioning efficiency and coverage for each beta at a fixed power budget.

    Points where J_B <= 0 get None localization fields and status
    ``"no-information"``.
    """
    betas = list(betas)
    if any(b2 < b1 for b1, b2 in zip(betas, betas[1:])):
        raise ValueError("betas must be sorted")
    f2bar = f2bar or paper_flat_bandwidth(model_base.bandwidth)
    out = []
    for beta in betas:
        m = model_base.replace(beta=float(beta))
        loc = bounds(m, f2bar, quad, strict=False)
        out.append(TradeoffPoint(
            beta=float(beta),
            jeffrey=loc.jeffrey,
            rmse=loc.rmse,
            rate_coverage=rate_coverage(m, rate_threshold, quad),
            snr_coverage=snr_coverage(m, gamma, quad),
            status="ok" if loc.defined else NO_INFORMATION,
        ))
    return out


class _Probe:
    """Evaluates a metric in beta and checks the evaluations stay monotone."""

    def __init__(self, metric: Callable[[float], float], increasing: bool, name: str):
        self.metric = metric
        self.increasing = increasing
        self.name = name
        self.seen: list[tuple[float, float]] = []

    def __call__(self, beta: float) -> float:
        v = self.metric(beta)
        self.seen.append((beta, v))
        pts = sorted(self.seen)
        for (b1, v1), (b2, v2) in zip(pts, pts[1:]):
            lo_v, hi_v = (v1, v2) if self.increasing else (v2, v1)
            if lo_v > hi_v + 1e-12 * max(1.0, abs(hi_v)) and not math.isinf(hi_v):
                raise NumericalInconsistency(
                    f"{self.name} not monotone in beta: {v1!r} at {b1!r}, {v2!r} at {b2!r}")
        return v


def _bisect(bad: float, good: float, ok: Callable[[float], bool], tol: float = BETA_TOL) -> float:
    """Shrink [bad, good] (either order) to width tol; return the good end."""
    while abs(good - bad) > tol:
        mid = 0.5 * (bad + good)
        if ok(mid):
            good = mid
        else:
            bad = mid
    return good


def coverage_target_gamma(model: NetworkModel, req: ServiceRequirement) -> float:
    return req.snr_gamma(model.bandwidth)


def beta_min(model_base: NetworkModel, req: ServiceRequirement,
             quad: QuadratureSpec = DEFAULT_QUAD) -> float:
    """Smallest beta whose SNR coverage meets 1 - outage_max (to BETA_TOL)."""
    target = 1.0 - req.outage_max
    if target <= 0.0:
        return 0.0
    gamma = coverage_target_gamma(model_base, req)
    probe = _Probe(lambda b: snr_coverage(model_base.replace(beta=b), gamma, quad),
                   increasing=True, name="coverage")
    best = probe(1.0)
    if best < target:
        raise Infeasible(
            f"coverage {best:.4f} at beta = 1 is below the required {target:.4f}; "
            "increase the power budget or the BS density")
    if probe(0.0) >= target:
        return 0.0
    return _bisect(0.0, 1.0, lambda b: probe(b) >= target)


def _rmse_metric(model_base: NetworkModel, f2bar: EffectiveBandwidth, quad: QuadratureSpec):
    def rmse(beta):
        loc = bounds(model_base.replace(beta=beta), f2bar, quad, strict=False)
        return math.inf if loc.rmse is None else loc.rmse
    return rmse


def beta_max(model_base: NetworkModel, req: ServiceRequirement,
             f2bar: EffectiveBandwidth | None = None,
             quad: QuadratureSpec = DEFAULT_QUAD) -> float:
    """Largest beta whose positioning RMSE 1/sqrt(J_B) stays within pos_error_max."""
    limit = req.pos_error_max
    if limit is None or math.isinf(limit):
        return 1.0
    f2bar = f2bar or paper_flat_bandwidth(model_base.bandwidth)
    bounds(model_base.replace(beta=0.0), f2bar, quad)  # raises NonPositiveInformation
    probe = _Probe(_rmse_metric(model_base, f2bar, quad), increasing=True, name="rmse")
    at_zero = probe(0.0)
    if at_zero > limit:
        raise Infeasible(
            f"positioning error {at_zero:.4g} m even with all power on localization "
            f"exceeds {limit:g} m; increase the power budget")
    if probe(1.0) <= limit:
        return 1.0
    return _bisect(1.0, 0.0, lambda b: probe(b) <= limit)


def beta_max_misalignment(model: NetworkModel, misalign_max: float,
                          f2bar: EffectiveBandwidth | None = None,
                          quad: QuadratureSpec = DEFAULT_QUAD,
                          variant: BoundVariant = BoundVariant.PAPER_MARKOV,
                          horizon: HorizonPolicy = HorizonPolicy.UNBOUNDED) -> float:
    """Largest beta keeping the mean misalignment bound at model.theta within limit.

    A larger beta leaves less localization power, a larger BCRLB and so a
    larger bound.
    """
    f2bar = f2bar or paper_flat_bandwidth(model.bandwidth)

    def bound(beta):
        loc = bounds(model.replace(beta=beta), f2bar, quad, strict=False)
        if loc.bcrlb is None:
            return math.inf
        return mean_misalignment_bound(model, loc.bcrlb, quad, variant, horizon)

    probe = _Probe(bound, increasing=True, name="misalignment bound")
    if probe(0.0) > misalign_max:
        raise Infeasible(
            f"misalignment bound exceeds {misalign_max:g} at theta = "
            f"{math.degrees(model.theta):.4g} deg even with beta = 0")
    if probe(1.0) <= misalign_max:
        return 1.0
    return _bisect(1.0, 0.0, lambda b: probe(b) <= misalign_max)


@dataclass(frozen=True)
class ConstraintCheck:
    name: str
    required: float
    achieved: float
    satisfied: bool


@dataclass(frozen=True)
class ThetaOption:
    """Planner outcome for one candidate beamwidth."""

    theta: float
    beta_min: float | None
    beta_max: float | None
    beta_selected: float | None
    p_loc: float | None
    p_data: float | None
    objective_value: float | None
    note: str = ""

    @property
    def feasible(self) -> bool:
        return self.beta_selected is not None


@dataclass(frozen=True)
class PowerPlan:
    beta_selected: float
    p_loc: float
    p_data: float
    theta: float
    beta_min: float
    beta_max: float
    objective: Objective
    constraints_report: list[ConstraintCheck]
    options: list[ThetaOption] = field(default_factory=list)


class PlanInfeasible(Infeasible):
    """No candidate beamwidth admits a feasible beta; ``options`` holds the per-theta rows."""

    def __init__(self, message: str, options: list[ThetaOption]):
        super().__init__(message)
        self.options = options


def evaluate_constraints(model: NetworkModel, req: ServiceRequirement,
                         f2bar: EffectiveBandwidth, quad: QuadratureSpec = DEFAULT_QUAD,
                         variant: BoundVariant = BoundVariant.PAPER_MARKOV,
                         horizon: HorizonPolicy = HorizonPolicy.UNBOUNDED) -> list[ConstraintCheck]:
    """Re-evaluate every requirement at the model's (beta, theta)."""
    out = []
    outage = 1.0 - snr_coverage(model, coverage_target_gamma(model, req), quad)
    out.append(ConstraintCheck("outage", req.outage_max, outage, outage <= req.outage_max))
    loc = bounds(model, f2bar, quad, strict=False)
    if req.pos_error_max is not None:
        rmse = math.inf if loc.rmse is None else loc.rmse
        out.append(ConstraintCheck("positioning_error_m", req.pos_error_max, rmse,
                                   rmse <= req.pos_error_max))
    if req.misalign_max is not None:
        mis = (1.0 if loc.bcrlb is None
               else mean_misalignment_bound(model, loc.bcrlb, quad, variant, horizon))
        out.append(ConstraintCheck("misalignment", req.misalign_max, mis, mis <= req.misalign_max))
    return out


def _objective_value(model: NetworkModel, req: ServiceRequirement, f2bar, quad) -> float:
    """Score to maximize: -rmse for positioning, rate (or SNR) coverage for rate."""
    if req.objective is Objective.MAXIMIZE_POSITIONING:
        loc = bounds(model, f2bar, quad, strict=False)
        return -math.inf if loc.rmse is None else -loc.rmse
    if req.rate_threshold is not None:
        return rate_coverage(model, req.rate_threshold, quad)
    return snr_coverage(model, req.snr_gamma(model.bandwidth), quad)


def plan(model_base: NetworkModel, req: ServiceRequirement, theta_candidates: Sequence[float],
         quad: QuadratureSpec = DEFAULT_QUAD, f2bar: EffectiveBandwidth | None = None,
         variant: BoundVariant = BoundVariant.PAPER_MARKOV,
         horizon: HorizonPolicy = HorizonPolicy.UNBOUNDED) -> PowerPlan:
    """Select (beta, theta) for a service.

    For each candidate beamwidth, beta_max is the tighter of the positioning
    and misalignment limits. A positioning service runs at beta_min, a rate
    service at beta_max. Among feasible beamwidths the best objective wins;
    ties go to the smallest beamwidth. Raises :class:`PlanInfeasible` when no
    candidate works.
    """
    thetas = sorted(float(t) for t in theta_candidates)
    if not thetas:
        raise ValueError("theta_candidates is empty")
    f2bar = f2bar or paper_flat_bandwidth(model_base.bandwidth)

    notes = []
    try:
        b_min = beta_min(model_base, req, quad)
    except Infeasible as exc:
        b_min = None
        notes.append(str(exc))
    try:
        b_pos = beta_max(model_base, req, f2bar, quad)
    except (Infeasible, NonPositiveInformation) as exc:
        b_pos = None
        notes.append(str(exc))

    options = []
    for theta in thetas:
        m = model_base.replace(theta=theta)
        b_hi, note = b_pos, "; ".join(notes)
        if b_hi is not None and req.misalign_max is not None:
            try:
                b_hi = min(b_hi, beta_max_misalignment(m, req.misalign_max, f2bar, quad,
                                                       variant, horizon))
            except Infeasible as exc:
                b_hi, note = None, str(exc)
        if b_min is None or b_hi is None or b_min > b_hi:
            if b_min is not None and b_hi is not None:
                note = f"beta_min {b_min:.4f} > beta_max {b_hi:.4f}"
            options.append(ThetaOption(theta, b_min, b_hi, None, None, None, None, note))
            continue
        beta = b_min if req.objective is Objective.MAXIMIZE_POSITIONING else b_hi
        chosen = m.replace(beta=beta)
        p_loc, p_data = power_split(chosen)
        options.append(ThetaOption(theta, b_min, b_hi, beta, p_loc, p_data,
                                   _objective_value(chosen, req, f2bar, quad)))

    feasible = [o for o in options if o.feasible]
    if not feasible:
        raise PlanInfeasible(
            "no (theta, beta) pair satisfies all constraints; "
            "increase the power budget or the BS density", options)
    # max() keeps the first maximal element and options are sorted by theta
    best = max(feasible, key=lambda o: o.objective_value)
    chosen = model_base.replace(theta=best.theta, beta=best.beta_selected)
    return PowerPlan(
        beta_selected=best.beta_selected,
        p_loc=best.p_loc,
        p_data=best.p_data,
        theta=best.theta,
        beta_min=best.beta_min,
        beta_max=best.beta_max,
        objective=req.objective,
        constraints_report=evaluate_constraints(chosen, req, f2bar, quad, variant, horizon),
        options=options,
    )
