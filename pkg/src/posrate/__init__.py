"""Positioning / data-rate dimensioning for street-deployed mm-wave small cells."""

from .config import (DEFAULT_ENGINEERING, NetworkModel, Objective, ServiceRequirement,
                     default_model, from_engineering_units, power_split, to_engineering_units)
from .coverage import rate_coverage, snr_coverage, snr_coverage_closed_alpha2
from .localization import (EffectiveBandwidth, LocalizationBounds, bounds, fisher_conditional,
                           fisher_expected, fisher_expected_closed_alpha2, prior_information)
from .misalignment import BoundVariant, HorizonPolicy, mean_misalignment_bound, min_beamwidth
from .numerics import DEFAULT_QUAD, QuadratureSpec
from .planner import PowerPlan, beta_max, beta_min, plan, tradeoff_curve

__version__ = "0.1.0"
