"""Command-line front end: sweeps, single-state reports, validation, oracle checks.

Exit-code contract: 0 on success, 1 on invalid input, 2 when a report
finds the state valid but not distillable (so shell pipelines can branch
on distillability).
"""

import argparse
import sys
from dataclasses import dataclass

import numpy as np

from . import dense
from .chain import DEFAULT_RESOLUTION, rate_sweep
from .covariance import (
    BasisProjection,
    conjugate_projection,
    equal_parity_probability,
    fidelity,
    load_covariance,
    standard_projection,
    validate_covariance,
    wick_moment,
)
from .distill import csv_header, report_csv_row, run_protocol, twirl_project
from .linalg import pfaffian

__all__ = ["RunConfig", "main", "oracle_comparison"]

#: Residual tolerance for the dense-oracle agreement suite.
ORACLE_TOL = 1e-8


@dataclass(frozen=True)
class RunConfig:
    """Resolved command-line options for one invocation."""

    command: str
    d_min: int = 2
    d_max: int = 40
    n_keep: int = 2
    conservative_p: bool = False
    resolution: int | None = DEFAULT_RESOLUTION
    output: str | None = None
    plot_data: str | None = None
    figure: str | None = None
    covariance_file: str | None = None
    seed: int = 0
    trials: int = 50

    def __post_init__(self):
        if self.d_min > self.d_max:
            raise ValueError("d_min must not exceed d_max")
        if self.n_keep < 1:
            raise ValueError("n_keep must be at least 1")


def _parse_range(text):
    if ":" in text:
        lo, hi = text.split(":", 1)
        return int(lo), int(hi)
    value = int(text)
    return value, value


def cmd_sweep(config):
    reports = rate_sweep(
        config.d_min,
        config.d_max,
        n_keep=config.n_keep,
        conservative_p=config.conservative_p,
        resolution=config.resolution,
    )
    lines = [csv_header()] + [report_csv_row(r) for r in reports]
    payload = "\n".join(lines) + "\n"
    try:
        if config.output is None:
            sys.stdout.write(payload)
        else:
            with open(config.output, "w", encoding="ascii") as handle:
                handle.write(payload)
        if config.plot_data is not None:
            with open(config.plot_data, "w", encoding="ascii") as handle:
                handle.write("# d rate_per_site\n")
                for r in reports:
                    rps = float("nan") if r.rate_per_site is None else r.rate_per_site
                    handle.write(f"{r.d} {rps:.12g}\n")
    except OSError as err:
        print(f"error: cannot write output: {err}", file=sys.stderr)
        return 1
    if config.figure is not None:
        from .plotting import render_rate_curve

        render_rate_curve(reports, config.figure)
    return 0


def cmd_report(config):
    try:
        cov = load_covariance(config.covariance_file)
    except (OSError, ValueError) as err:
        print(f"error: invalid covariance file: {err}", file=sys.stderr)
        return 1
    report_check = validate_covariance(cov.m, cov.d_a, cov.d_b)
    if not report_check.ok:
        print(f"error: covariance violates invariants: {report_check}", file=sys.stderr)
        return 1
    n_keep = min(config.n_keep, cov.d_a, cov.d_b)
    report = run_protocol(cov, n_keep, conservative_p=config.conservative_p)
    rate_text = "n/a" if report.rate is None else f"{report.rate:.6f}"
    print(f"modes per side:    {cov.d_a} / {cov.d_b} (kept {n_keep})")
    print(f"kept sing. values: {', '.join(f'{s:.6f}' for s in report.singular_values)}")
    print(f"f_plus:            {report.f_plus:.6f}")
    print(f"f_minus:           {report.f_minus:.6f}")
    print(f"p (equal parity):  {report.p:.6f}")
    print(f"isotropic f:       {report.f:.6f}")
    print(f"distillable:       {'yes' if report.distillable else 'no'}")
    print(f"hashing rate:      {rate_text}")
    print(csv_header())
    print(report_csv_row(report))
    if config.figure is not None:
        from .plotting import render_report_figure

        render_report_figure(report, config.figure)
    return 0 if report.distillable else 2


def cmd_validate(config):
    try:
        cov = load_covariance(config.covariance_file)
    except (OSError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    report = validate_covariance(cov.m, cov.d_a, cov.d_b)
    print(report)
    return 0 if report.ok else 1


def oracle_comparison(d_side, trials, seed):
    """Gaussian-formula vs dense Fock-space residuals, per quantity.

    Returns a dict of maximal absolute residuals over ``trials`` random
    valid covariances for every split d_a = d_b in 1..d_side, plus the
    invariant-state reduction check at sector dimension 2.
    """
    rng = np.random.default_rng(seed)
    residuals = {"two_point": 0.0, "four_point": 0.0, "parity": 0.0,
                 "fidelity": 0.0, "twirl": 0.0}
    for d in range(1, d_side + 1):
        dim = 4 * d
        for trial in range(trials):
            cov = dense.random_covariance(d, d, rng, pure=(trial % 5 == 0))
            rho = dense.gaussian_dense_state(cov)
            ops = [op.toarray() for op in dense.majorana_operators(d, d)]

            vecs = [rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
                    for _ in range(4)]
            fields = [sum(v[g] * ops[g] for g in range(dim)) / np.sqrt(2) for v in vecs]
            two_dense = np.trace(rho @ fields[0] @ fields[1])
            two_gauss = wick_moment(cov, vecs[:2])
            residuals["two_point"] = max(residuals["two_point"], abs(two_dense - two_gauss))
            four_dense = np.trace(rho @ fields[0] @ fields[1] @ fields[2] @ fields[3])
            four_gauss = wick_moment(cov, vecs)
            residuals["four_point"] = max(residuals["four_point"], abs(four_dense - four_gauss))

            probs = dense.dense_parity_probabilities(rho, d, d)
            p_dense = probs[0] + probs[3]
            residuals["parity"] = max(
                residuals["parity"], abs(p_dense - equal_parity_probability(cov))
            )

            r = dense.random_orthogonal(2 * d, rng)
            proj = BasisProjection(d, r)
            psi = dense.dense_from_covariance(proj.covariance())
            f_dense = float(np.real(np.vdot(psi, rho @ psi)))
            residuals["fidelity"] = max(
                residuals["fidelity"], abs(f_dense - fidelity(cov, proj))
            )

    # twirl reduction at sector dimension 2 (two modes per side)
    psi_plus = dense.dense_from_covariance(standard_projection(2).covariance())
    for _ in range(max(1, trials // 2)):
        cov = dense.random_covariance(2, 2, rng)
        rho = dense.gaussian_dense_state(cov)
        sigma = dense.dense_twirl(rho, psi_plus, 2, 2)
        probs = dense.dense_parity_probabilities(rho, 2, 2)
        f_plus = fidelity(cov, standard_projection(2))
        f_minus = fidelity(cov, conjugate_projection(2))
        params = twirl_project(
            f_plus, f_minus, probs[0], probs[3], (probs[1] + probs[2]) / 2, 2
        )
        psi_minus = dense.dense_from_covariance(conjugate_projection(2).covariance())
        got_fp = float(np.real(np.vdot(psi_plus, sigma @ psi_plus)))
        got_fm = float(np.real(np.vdot(psi_minus, sigma @ psi_minus)))
        residuals["twirl"] = max(
            residuals["twirl"],
            abs(got_fp - (params.lambda_plus + params.mu_plus)),
            abs(got_fm - (params.lambda_minus + params.mu_plus)),
        )
    return residuals


def cmd_oracle_compare(config):
    if config.d_max > 3:
        print("error: oracle comparison supports at most 3 modes per side", file=sys.stderr)
        return 1
    residuals = oracle_comparison(config.d_max, config.trials, config.seed)
    ok = True
    for name, value in residuals.items():
        status = "ok" if value < ORACLE_TOL else "FAIL"
        ok = ok and value < ORACLE_TOL
        print(f"{name:12s} max residual {value:.3e}  [{status}]")
    return 0 if ok else 1


def build_parser():
    parser = argparse.ArgumentParser(
        prog="fgdistill",
        description="Entanglement distillation analysis for fermionic Gaussian states",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sweep = sub.add_parser("sweep", help="rate sweep over chain block lengths")
    p_sweep.add_argument("--d", default="2:40", help="block length range, e.g. 2:40")
    p_sweep.add_argument("--keep", type=int, default=2, help="modes kept per side")
    p_sweep.add_argument("--conservative-p", action="store_true",
                         help="use p = 1 instead of the measured probability")
    p_sweep.add_argument("--resolution", type=int, default=DEFAULT_RESOLUTION,
                         help="quadrature nodes (0 selects the closed-form kernel)")
    p_sweep.add_argument("--out", default=None, help="CSV output path (default stdout)")
    p_sweep.add_argument("--plot-data", default=None,
                         help="two-column (d, R/d) text file for gnuplot")
    p_sweep.add_argument("--figure", default=None, help="rendered figure path (png/pdf)")

    p_report = sub.add_parser("report", help="analyze one covariance file")
    p_report.add_argument("covariance_file")
    p_report.add_argument("--keep", type=int, default=2)
    p_report.add_argument("--conservative-p", action="store_true")
    p_report.add_argument("--figure", default=None, help="rendered figure path (png/pdf)")

    p_validate = sub.add_parser("validate", help="check covariance invariants")
    p_validate.add_argument("covariance_file")

    p_oracle = sub.add_parser("oracle-compare",
                              help="Gaussian formulas vs dense Fock-space reference")
    p_oracle.add_argument("--d", type=int, default=2, help="modes per side (max 3)")
    p_oracle.add_argument("--trials", type=int, default=50)
    p_oracle.add_argument("--seed", type=int, default=0)
    return parser


def config_from_args(args):
    if args.command == "sweep":
        d_min, d_max = _parse_range(args.d)
        return RunConfig(
            command="sweep",
            d_min=d_min,
            d_max=d_max,
            n_keep=args.keep,
            conservative_p=args.conservative_p,
            resolution=None if args.resolution == 0 else args.resolution,
            output=args.out,
            plot_data=args.plot_data,
            figure=args.figure,
        )
    if args.command == "report":
        return RunConfig(
            command="report",
            n_keep=args.keep,
            conservative_p=args.conservative_p,
            covariance_file=args.covariance_file,
            figure=args.figure,
        )
    if args.command == "validate":
        return RunConfig(command="validate", covariance_file=args.covariance_file)
    return RunConfig(command="oracle-compare", d_min=1, d_max=args.d,
                     seed=args.seed, trials=args.trials)


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        config = config_from_args(args)
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    handler = {
        "sweep": cmd_sweep,
        "report": cmd_report,
        "validate": cmd_validate,
        "oracle-compare": cmd_oracle_compare,
    }[config.command]
    return handler(config)


if __name__ == "__main__":
    sys.exit(main())
