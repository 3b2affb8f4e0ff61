"""Command-line interface.

Subcommands: ``test`` (one test on a CSV file), ``simulate`` (replicated
level/power experiment), ``are`` (asymptotic-efficiency table), ``channing``
(bundled data reproduction) and ``cox-check`` (score/U-statistic equivalence
diagnostics on a file). Exit code 0 on success; error classes map to
distinct nonzero codes (see errors.py).
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import __version__
from .coxscore import cox_score_covariate, cox_score_rankstar
from .datasets import load_channing
from .efficacy import are_table
from .errors import QITestError
from .ingest import InputSpec, ingest_csv
from .kernels import Kernel
from .report import ReportEnvelope, render_test_result_text, rows_to_csv, to_json
from .simulate import SimScenario, run_experiment
from .teststat import STANDARD_PAIRS, quasi_independence_test, reverse_roles, u_numerator


def _default_seed() -> int:
    return int(os.environ.get("QITEST_SEED", "20240001"))


def _add_io_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("path", help="input CSV file")
    p.add_argument("--entry", default="entry", help="entry-time column (name or 0-based index)")
    p.add_argument("--exit", dest="exit_", default="exit", help="exit-time column")
    p.add_argument("--event", default=None,
                   help="event column (0/1); omit to treat every exit as a failure")
    p.add_argument("--delimiter", default=",")
    p.add_argument("--no-header", action="store_true", help="file has no header row")
    p.add_argument("--group-column", default=None)
    p.add_argument("--group-value", default=None)


def _spec_from_args(args) -> InputSpec:
    def col(v):
        if v is None:
            return None
        return int(v) if args.no_header or (isinstance(v, str) and v.isdigit()) else v

    return InputSpec(
        path=args.path,
        entry_column=col(args.entry),
        exit_column=col(args.exit_),
        event_column=col(args.event),
        group_column=col(args.group_column),
        group_value=args.group_value,
        delimiter=args.delimiter,
        header=not args.no_header,
    )


def _emit(args, envelope: ReportEnvelope, text: str, rows=None) -> None:
    if args.format == "json":
        sys.stdout.write(envelope.to_json())
    elif args.format == "csv":
        if rows is None:
            raise QITestError("csv output is not available for this command")
        sys.stdout.write(rows_to_csv(rows))
    else:
        for w in envelope.warnings:
            sys.stdout.write(f"warning: {w}\n")
        sys.stdout.write(text + "\n")


def _cmd_test(args) -> None:
    data, report = ingest_csv(_spec_from_args(args))
    censored = args.mode == "censored" or (args.mode == "auto" and args.event is not None)
    if args.reverse:
        data = reverse_roles(data)
    result = quasi_independence_test(data, args.g, args.h, censored_mode=censored)
    warnings = list(report.warnings)
    if result.assumption_3b_required:
        warnings.append(
            "this kernel pair is valid only when entry and censoring times are "
            "quasi-independent; check with the reversed-role diagnostic "
            "(--reverse with --h sign) before relying on it"
        )
    env = ReportEnvelope(command=_echo(), payload=result, warnings=warnings)
    rows = [result.to_dict()]
    _emit(args, env, render_test_result_text(result), rows)


def _cmd_channing(args) -> None:
    groups = ["men", "women"] if args.group == "both" else [args.group]
    rows = []
    import warnings as _w

    caught = []
    with _w.catch_warnings(record=True) as rec:
        _w.simplefilter("always")
        for grp in groups:
            data = load_channing(grp)
            for g, h in STANDARD_PAIRS:
                r = quasi_independence_test(data, g, h, censored_mode=True)
                rows.append({"group": grp, "table": "association", "g_kernel": g.value,
                             "h_kernel": h.value, "statistic": r.chi_square, "p_value": r.p_value})
            reversed_data = reverse_roles(data)
            for g in (Kernel.SIGN, Kernel.LINEAR, Kernel.RANK):
                r = quasi_independence_test(reversed_data, g, Kernel.SIGN, censored_mode=True)
                rows.append({"group": grp, "table": "reversed-roles", "g_kernel": g.value,
                             "h_kernel": "sign", "statistic": r.chi_square, "p_value": r.p_value})
        caught = [str(w.message) for w in rec]
    env = ReportEnvelope(command=_echo(), payload=rows, warnings=caught)
    lines = [f"{'group':6s} {'table':14s} {'g':6s} {'h':6s} {'statistic':>10s} {'p':>9s}"]
    for row in rows:
        lines.append(f"{row['group']:6s} {row['table']:14s} {row['g_kernel']:6s} "
                     f"{row['h_kernel']:6s} {row['statistic']:10.3f} {row['p_value']:9.3g}")
    _emit(args, env, "\n".join(lines), rows)


def _cmd_simulate(args) -> None:
    scenario = SimScenario(
        family=args.scenario,
        target_n=args.n,
        censoring_target=args.censoring if args.censoring > 0 else None,
        seed=args.seed,
    )
    report = run_experiment(scenario, replicates=args.reps, level=args.level,
                            n_jobs=args.threads)
    rows = report.to_rows()
    env = ReportEnvelope(command=_echo(), payload=rows, seeds=[args.seed])
    lines = [f"scenario {scenario.family.value}, n={scenario.target_n}, "
             f"reps={args.reps}, level={args.level:g}, "
             f"mean censored fraction {report.mean_censored_fraction:.3f}"]
    lines.append(f"{'g':6s} {'h':6s} {'reject':>8s} {'mc se':>8s}")
    for row in rows:
        lines.append(f"{row['g_kernel']:6s} {row['h_kernel']:6s} "
                     f"{row['rejection_rate']:8.4f} {row['monte_carlo_se']:8.4f}")
    if report.degenerate:
        lines.append(f"degenerate replicates excluded: {report.degenerate}")
    _emit(args, env, "\n".join(lines), rows)


def _cmd_are(args) -> None:
    rows = are_table(regularize=not args.no_regularize)
    env = ReportEnvelope(command=_echo(), payload=rows)
    lines = [f"{'model':22s} {'entry':12s} {'psi0':>5s} {'psi1':>5s} {'g':7s} {'ratio':>8s}"]
    for row in rows:
        lines.append(f"{row['model']:22s} {row['entry']:12s} {row['psi0']:5.1f} "
                     f"{row['psi1']:5.1f} {row['g_kernel']:7s} {row['are_vs_sign_sign']:8.3f}")
    _emit(args, env, "\n".join(lines), rows)


def _cmd_cox_check(args) -> None:
    data, report = ingest_csv(_spec_from_args(args))
    covariates = {"identity": lambda x: x, "exp": np.exp, "cube": lambda x: x**3}
    a = covariates[args.covariate]
    rows = []
    sweep = cox_score_covariate(data, a, method="sweep")
    direct = cox_score_covariate(data, a, method="direct")
    sgn = np.sign(np.subtract.outer(data.exit, data.exit))
    from .comparability import lambda_matrix

    lam = lambda_matrix(data)
    u_form = -0.5 * float(np.sum(np.subtract.outer(a(data.entry), a(data.entry)) * sgn * lam))
    rows.append({"statistic": f"covariate({args.covariate})", "sweep": sweep,
                 "direct": direct, "pairwise_form": u_form})
    r_sweep = cox_score_rankstar(data, method="sweep")
    r_direct = cox_score_rankstar(data, method="direct")
    r_u = 0.5 * u_numerator(data, Kernel.SIGN, Kernel.SIGN, censored_mode=True)
    rows.append({"statistic": "rank-in-risk-set", "sweep": r_sweep,
                 "direct": r_direct, "pairwise_form": r_u})
    env = ReportEnvelope(command=_echo(), payload=rows, warnings=list(report.warnings))
    lines = [f"{'statistic':22s} {'sweep':>14s} {'direct':>14s} {'pairwise':>14s}"]
    for row in rows:
        lines.append(f"{row['statistic']:22s} {row['sweep']:14.6g} "
                     f"{row['direct']:14.6g} {row['pairwise_form']:14.6g}")
    _emit(args, env, "\n".join(lines), rows)


def _echo() -> str:
    return "qitest " + " ".join(sys.argv[1:])


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qitest",
                                description="quasi-independence tests for left-truncated survival data")
    p.add_argument("--version", action="version", version=f"qitest {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("test", help="run one test on a CSV file")
    _add_io_args(t)
    t.add_argument("--g", default="sign", help="entry-time kernel: sign, linear or rank")
    t.add_argument("--h", default="sign", help="exit-time kernel: sign, linear or rank")
    t.add_argument("--mode", choices=("auto", "censored", "uncensored"), default="auto")
    t.add_argument("--reverse", action="store_true",
                   help="flip event flags (entry-vs-censoring diagnostic)")
    t.add_argument("--format", choices=("table", "json", "csv"), default="table")
    t.set_defaults(func=_cmd_test)

    s = sub.add_parser("simulate", help="replicated level/power experiment")
    s.add_argument("--scenario", default="exp-null",
                   help="exp-null, exp-linear, exp-nonlinear, normal-null or normal-alt")
    s.add_argument("--n", type=int, default=400, help="post-truncation sample size")
    s.add_argument("--reps", type=int, default=1000)
    s.add_argument("--level", type=float, default=0.05)
    s.add_argument("--censoring", type=float, default=0.0,
                   help="target censored fraction in (0,1); 0 disables censoring")
    s.add_argument("--seed", type=int, default=_default_seed())
    s.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    s.add_argument("--format", choices=("table", "json", "csv"), default="table")
    s.set_defaults(func=_cmd_simulate)

    a = sub.add_parser("are", help="asymptotic relative efficiency table")
    a.add_argument("--no-regularize", action="store_true",
                   help="fail instead of truncating non-integrable covariate transforms")
    a.add_argument("--format", choices=("table", "json", "csv"), default="table")
    a.set_defaults(func=_cmd_are)

    c = sub.add_parser("channing", help="bundled retirement-community data analysis")
    c.add_argument("--group", choices=("men", "women", "both"), default="both")
    c.add_argument("--format", choices=("table", "json", "csv"), default="table")
    c.set_defaults(func=_cmd_channing)

    x = sub.add_parser("cox-check", help="score/U-statistic equivalence diagnostics")
    _add_io_args(x)
    x.add_argument("--covariate", choices=("identity", "exp", "cube"), default="identity")
    x.add_argument("--format", choices=("table", "json", "csv"), default="table")
    x.set_defaults(func=_cmd_cox_check)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except QITestError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return exc.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
