"""SNR coverage at -10 dB against the data share beta, for 1 and 5 BS/km
at 20 and 25 dBm, plus the beta that meets 20% outage."""

import numpy as np

from _common import parser, save
from posrate import ServiceRequirement, beta_min, default_model, snr_coverage
from posrate.errors import Infeasible

GAMMA = 0.1


def main():
    args = parser(__doc__, "fig2_coverage_vs_beta.csv").parse_args()
    rows = []
    for p_dbm in (20.0, 25.0):
        for lam_km in (1.0, 5.0):
            m = default_model(lambda_km=lam_km, p_dbm=p_dbm)
            for b in np.linspace(0.0, 1.0, 41):
                rows.append([p_dbm, lam_km, float(b), snr_coverage(m.replace(beta=float(b)), GAMMA)])
            try:
                bmin = beta_min(m, ServiceRequirement(outage_max=0.2, snr_threshold=GAMMA))
                print(f"P = {p_dbm:g} dBm, lambda = {lam_km:g}/km: beta_min(20% outage) = {bmin:.4f}")
            except Infeasible as exc:
                print(f"P = {p_dbm:g} dBm, lambda = {lam_km:g}/km: {exc}")
    save(args.out, ["p_dbm", "lambda_km", "beta", "snr_coverage"], rows)


if __name__ == "__main__":
    main()
