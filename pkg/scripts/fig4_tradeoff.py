"""Positioning error against 500 Mbps rate coverage along beta, for three
power budgets at 5 BS/km."""

import numpy as np

from _common import parser, save
from posrate import default_model, tradeoff_curve


def main():
    args = parser(__doc__, "fig4_tradeoff.csv").parse_args()
    rows = []
    for p_dbm in (20.0, 25.0, 30.0):
        m = default_model(lambda_km=5.0, p_dbm=p_dbm)
        for pt in tradeoff_curve(m, np.linspace(0.0, 1.0, 51), rate_threshold=500e6):
            rows.append([p_dbm, pt.beta, pt.jeffrey, pt.rmse, pt.rate_coverage, pt.status])
    save(args.out, ["p_dbm", "beta", "jeffrey", "rmse_m", "rate_coverage", "status"], rows)


if __name__ == "__main__":
    main()
