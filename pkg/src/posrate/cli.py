"""Command-line sweeps, planning and validation, all emitting CSV.

Exit codes: 0 ok, 2 configuration, 3 numerical failure, 4 infeasible,
5 validation failure. Errors print one ``error[<code>]: ...`` line on stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .config import (NetworkModel, Objective, db_to_linear, load_model, load_requirement,
                     watt_to_dbm)
from .coverage import snr_coverage
from .errors import ConfigError, DimensioningError, Infeasible
from .localization import bounds, paper_flat_bandwidth
from .misalignment import BoundVariant, mean_misalignment_bound
from .oracle import SimConfig, mc_misalignment
from .planner import PlanInfeasible, plan, tradeoff_curve
from .validation import run_all

EXIT_CONFIG, EXIT_NUMERIC, EXIT_INFEASIBLE, EXIT_VALIDATION = 2, 3, 4, 5

_DOMAINS = {
    "beta": (0.0, 1.0),
    "theta": (0.0, 180.0),
    "gamma": (-math.inf, math.inf),
    "lambda": (0.0, math.inf),
    "power": (-math.inf, math.inf),
}


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


@dataclass(frozen=True)
class SweepSpec:
    """Linear sweep of one variable in engineering units (theta in degrees,
    gamma in dB, lambda in 1/km, power in dBm)."""

    variable: str
    start: float
    stop: float
    steps: int

    def __post_init__(self):
        if self.variable not in _DOMAINS:
            raise ConfigError(f"unknown sweep variable {self.variable!r}")
        if self.steps < 2:
            raise ConfigError("a sweep needs at least 2 steps")
        if not self.start < self.stop:
            raise ConfigError("sweep start must be below stop")
        lo, hi = _DOMAINS[self.variable]
        open_lo = self.variable in ("theta", "lambda")
        if (self.start < lo or (open_lo and self.start <= lo)) or self.stop > hi or \
                (self.variable == "theta" and self.stop >= hi):
            raise ConfigError(f"{self.variable} sweep [{self.start}, {self.stop}] leaves its domain")

    @classmethod
    def parse(cls, variable: str, text: str) -> "SweepSpec":
        parts = text.split(":")
        if len(parts) != 3:
            raise ConfigError(f"expected start:stop:steps, got {text!r}")
        try:
            return cls(variable, float(parts[0]), float(parts[1]), int(parts[2]))
        except ValueError:
            raise ConfigError(f"bad sweep {text!r}") from None

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.steps)


def fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, str):
        return x
    return format(float(x), ".12g")


def write_csv(path: str | None, header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt(v) for v in r])
    text = buf.getvalue()
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8", newline="\n")
    return text


def _floats(text: str) -> list[float]:
    try:
        return [float(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise ConfigError(f"expected a comma-separated list of numbers, got {text!r}") from None


def _load(args) -> NetworkModel:
    try:
        return load_model(args.config)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from None


# ----------------------------------------------------------------- commands


def cmd_coverage_sweep(args) -> int:
    model = _load(args)
    betas = SweepSpec.parse("beta", args.beta).values()
    lambdas = _floats(args.lambdas) if args.lambdas else [model.lambda_bs * 1e3]
    if any(not lk > 0 for lk in lambdas):
        raise ConfigError("densities must be positive")
    gamma = db_to_linear(args.gamma_db)
    rows = []
    for lk in lambdas:
        m = model.replace(lambda_bs=lk * 1e-3)
        for b in betas:
            rows.append([lk, float(b), snr_coverage(m.replace(beta=float(b)), gamma)])
    write_csv(args.out, ["lambda_km", "beta", "snr_coverage"], rows)
    return 0


def cmd_tradeoff(args) -> int:
    model = _load(args)
    betas = SweepSpec.parse("beta", args.beta).values()
    curve = tradeoff_curve(model, [float(b) for b in betas],
                           rate_threshold=args.rate_mbps * 1e6, gamma=db_to_linear(args.gamma_db))
    rows = [[p.beta, p.jeffrey, p.rmse, p.rate_coverage, p.snr_coverage, p.status] for p in curve]
    write_csv(args.out, ["beta", "jeffrey", "rmse", "rate_coverage", "snr_coverage", "status"], rows)
    return 0


def cmd_misalignment_sweep(args) -> int:
    model = _load(args)
    thetas_deg = SweepSpec.parse("theta", args.theta).values()
    if args.bcrlb is not None:
        if not args.bcrlb > 0:
            raise ConfigError("--bcrlb must be positive")
        bcrlb = args.bcrlb
    else:
        bcrlb = bounds(model, paper_flat_bandwidth(model.bandwidth)).bcrlb
    rows = []
    for i, td in enumerate(thetas_deg):
        th = math.radians(float(td))
        paper = mean_misalignment_bound(model, bcrlb, variant=BoundVariant.PAPER_MARKOV, theta=th)
        cheb = mean_misalignment_bound(model, bcrlb, variant=BoundVariant.CHEBYSHEV, theta=th)
        est = mc_misalignment(model, bcrlb, SimConfig(trials=args.trials, seed=args.seed + i), theta=th)
        rows.append([float(td), paper, cheb, est.estimate, est.std_error])
    write_csv(args.out, ["theta_deg", "bound_paper", "bound_chebyshev", "mc_estimate", "mc_stderr"], rows)
    return 0


def _plan_rows(options):
    rows = []
    for o in options:
        rows.append([
            math.degrees(o.theta), o.beta_min, o.beta_max, o.beta_selected,
            None if o.p_loc is None or o.p_loc <= 0 else watt_to_dbm(o.p_loc),
            None if o.p_data is None or o.p_data <= 0 else watt_to_dbm(o.p_data),
            o.feasible,
        ])
    return rows


PLAN_HEADER = ["theta_deg", "beta_min", "beta_max", "beta_selected", "p_loc_dbm", "p_data_dbm",
               "feasible"]


def cmd_plan(args) -> int:
    model = _load(args)
    try:
        req = load_requirement(args.requirements)
    except OSError as exc:
        raise ConfigError(f"cannot read requirements: {exc}") from None
    thetas_deg = _floats(args.thetas)
    if not thetas_deg or any(not 0 < t < 180 for t in thetas_deg):
        raise ConfigError("--thetas must list beamwidths in (0, 180) degrees")
    try:
        result = plan(model, req, [math.radians(t) for t in thetas_deg])
    except PlanInfeasible as exc:
        if args.out:
            write_csv(args.out, PLAN_HEADER, _plan_rows(exc.options))
        raise
    print(f"objective: {'maximize positioning' if req.objective is Objective.MAXIMIZE_POSITIONING else 'maximize rate'}")
    print(f"selected theta: {math.degrees(result.theta):.6g} deg")
    print(f"selected beta: {result.beta_selected:.6g} (feasible range [{result.beta_min:.6g}, "
          f"{result.beta_max:.6g}])")
    print(f"localization power: {fmt(result.p_loc)} W; data power: {fmt(result.p_data)} W")
    for c in result.constraints_report:
        print(f"constraint {c.name}: required {fmt(c.required)}, achieved {fmt(c.achieved)}, "
              f"{'satisfied' if c.satisfied else 'VIOLATED'}")
    if args.out:
        write_csv(args.out, PLAN_HEADER, _plan_rows(result.options))
    return 0


def cmd_validate(args) -> int:
    model = _load(args)
    results = run_all(model, seed=args.seed)
    for r in results:
        print(r.line())
    ok = all(r.passed for r in results)
    print("all gates passed" if ok else "validation FAILED")
    return 0 if ok else EXIT_VALIDATION


# ------------------------------------------------------------------- parser


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(EXIT_CONFIG, message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="posrate", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, seed=False):
        sp.add_argument("--config", help="key = value model file (missing keys use defaults)")
        sp.add_argument("--out", help="CSV output path (default: stdout)")
        if seed:
            sp.add_argument("--seed", type=int, default=42)

    sp = sub.add_parser("coverage-sweep", help="SNR coverage vs power split per density")
    common(sp)
    sp.add_argument("--lambdas", help="densities in 1/km, comma separated")
    sp.add_argument("--gamma-db", type=float, default=-10.0)
    sp.add_argument("--beta", default="0:1:21", help="start:stop:steps")
    sp.set_defaults(func=cmd_coverage_sweep)

    sp = sub.add_parser("tradeoff", help="positioning efficiency vs rate coverage along beta")
    common(sp)
    sp.add_argument("--beta", default="0:1:21")
    sp.add_argument("--rate-mbps", type=float, default=500.0)
    sp.add_argument("--gamma-db", type=float, default=-10.0)
    sp.set_defaults(func=cmd_tradeoff)

    sp = sub.add_parser("misalignment-sweep", help="mean misalignment bounds vs beamwidth")
    common(sp, seed=True)
    sp.add_argument("--theta", default="1:30:30", help="degrees, start:stop:steps")
    sp.add_argument("--bcrlb", type=float, help="override the BCRLB [m^2]")
    sp.add_argument("--trials", type=int, default=100_000)
    sp.set_defaults(func=cmd_misalignment_sweep)

    sp = sub.add_parser("plan", help="select (beta, theta) for a service")
    common(sp)
    sp.add_argument("--requirements", required=True)
    sp.add_argument("--thetas", default="5,10,20,40", help="candidate beamwidths in degrees")
    sp.set_defaults(func=cmd_plan)

    sp = sub.add_parser("validate", help="run the oracle-equivalence gates")
    sp.add_argument("--config")
    sp.add_argument("--seed", type=int, default=42)
    sp.set_defaults(func=cmd_validate)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "trials", 1) < 1:
            raise ConfigError("--trials must be >= 1")
        return args.func(args)
    except CliError as exc:
        code, msg = exc.code, str(exc)
    except ConfigError as exc:
        code, msg = EXIT_CONFIG, str(exc)
    except Infeasible as exc:
        code, msg = EXIT_INFEASIBLE, str(exc)
        if "increase" not in msg:
            msg += " (hint: increase power budget or density)"
    except DimensioningError as exc:
        code, msg = EXIT_NUMERIC, f"{type(exc).__name__}: {exc}"
    msg = " ".join(msg.split())
    print(f"error[{code}]: {msg}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
