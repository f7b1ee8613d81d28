"""Localization and data power chosen for a positioning service and a rate
service across operating beamwidths (5 BS/km, 25 dBm).

The rate service carries a misalignment limit, and a narrowband ranging
signal is used so that its positioning and misalignment limits bind.
"""

import math

from _common import parser, save
from posrate import EffectiveBandwidth, Objective, ServiceRequirement, default_model
from posrate.config import watt_to_dbm
from posrate.errors import Infeasible
from posrate.planner import plan

SERVICES = {
    "service1": ServiceRequirement(outage_max=0.1, snr_threshold=0.1,
                                   objective=Objective.MAXIMIZE_POSITIONING),
    "service2": ServiceRequirement(outage_max=0.1, snr_threshold=0.1, pos_error_max=2e-2,
                                   misalign_max=1e-4, objective=Objective.MAXIMIZE_RATE),
}


def main():
    args = parser(__doc__, "fig5_power_allocation.csv").parse_args()
    m = default_model(lambda_km=5.0, p_dbm=25.0)
    f2 = EffectiveBandwidth(1e4)
    rows = []
    for name, req in SERVICES.items():
        for td in (2.0, 4.0, 8.0, 16.0):
            try:
                pl = plan(m, req, [math.radians(td)], f2bar=f2)
            except Infeasible:
                rows.append([name, td, None, None, None, None, False])
                continue
            rows.append([name, td, pl.beta_min, pl.beta_max, watt_to_dbm(pl.p_loc),
                         watt_to_dbm(pl.p_data), True])
    save(args.out, ["service", "theta_deg", "beta_min", "beta_max", "p_loc_dbm", "p_data_dbm",
                    "feasible"], rows)


if __name__ == "__main__":
    main()
