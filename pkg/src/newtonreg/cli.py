"""Command-line interface for the experiment harness and diagnostics.

Subcommands:

* ``example1`` / ``example2`` -- run the benchmark sweeps and write a report
* ``verify-filters``          -- sample the uniform filter bounds and check
                                 iterative-vs-spectral agreement
* ``audit-schedule``          -- check the admissibility conditions of a schedule
* ``source-check``            -- fit the source representation of an initial guess
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

import numpy as np

from . import bvp
from .errors import NewtonRegError
from .filters import all_families, apply_filter_iterative, apply_filter_spectral, \
    filter_from_name, verify_a5_bounds
from .experiments import emit_report, run_example1, run_example2
from .newton import source_condition_diagnostic
from .schedules import ExplicitSchedule, GeometricSchedule, audit


def _add_schedule_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--alpha0", type=float, default=1.0, help="first schedule value")
    p.add_argument("--ratio-r", type=float, default=0.5, help="geometric decay ratio")


def _add_run_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--tau", type=float, default=1.1, help="discrepancy factor, > 1")
    p.add_argument("--delta", type=float, default=None, help="single noise level")
    p.add_argument("--deltas", type=str, default="1e-2,1e-3,1e-4",
                   help="comma-separated noise levels")
    p.add_argument("--seed", type=int, default=None, help="single RNG seed")
    p.add_argument("--seeds", type=str, default="0,1,2,3,4,5,6,7,8,9",
                   help="comma-separated RNG seeds")
    p.add_argument("--filter", type=str, default="landweber",
                   choices=["landweber", "tikhonov", "exponential-euler", "lardy"])
    p.add_argument("--tikhonov-order", type=int, default=1)
    _add_schedule_flags(p)
    p.add_argument("--m", type=int, default=100, help="interior grid points")
    p.add_argument("--n-max", type=int, default=60, help="outer iteration budget")
    p.add_argument("--out", type=str, default=None, help="report path (default stdout)")
    p.add_argument("--format", type=str, default="csv", choices=["csv", "json"])
    p.add_argument("--dump-solution", type=str, default=None,
                   help="write node,value CSV of truth, initial guess and recovery")


def _parse_floats(text: str) -> list[float]:
    return [float(v) for v in text.split(",") if v.strip()]


def _parse_ints(text: str) -> list[int]:
    return [int(v) for v in text.split(",") if v.strip()]


def _run_benchmark(args, runner) -> None:
    deltas = [args.delta] if args.delta is not None else _parse_floats(args.deltas)
    seeds = [args.seed] if args.seed is not None else _parse_ints(args.seeds)
    spec = filter_from_name(args.filter, args.tikhonov_order)
    schedule = GeometricSchedule(args.alpha0, args.ratio_r)
    report = runner(tau=args.tau, deltas=deltas, seeds=seeds, filter_spec=spec,
                    schedule=schedule, m=args.m, n_max=args.n_max)
    if args.out:
        emit_report(report, args.format, args.out)
    else:
        if args.format == "json":
            json.dump(report.to_dicts(), sys.stdout, indent=2)
            sys.stdout.write("\n")
        else:
            writer = csv.DictWriter(sys.stdout, fieldnames=list(report.to_dicts()[0])
                                    if report.rows else ["delta"])
            writer.writeheader()
            for row in report.to_dicts():
                writer.writerow(row)
    if args.dump_solution:
        _dump_solution(args, runner, report)


def _dump_solution(args, runner, report) -> None:
    nodes = bvp.BvpSpec(m=args.m).nodes
    c_true = bvp.true_coefficient(args.m)
    c0 = (bvp.initial_guess_smooth(args.m) if runner is run_example1
          else bvp.initial_guess_rough(args.m))
    best = report.traces[-1].final_x if report.traces else np.full_like(c_true, np.nan)
    with open(args.dump_solution, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["node", "c_true", "c_initial", "c_recovered"])
        for i, t in enumerate(nodes):
            writer.writerow([repr(float(t)), repr(float(c_true[i])),
                             repr(float(c0[i])), repr(float(best[i]))])


def _cmd_example1(args) -> int:
    _run_benchmark(args, run_example1)
    return 0


def _cmd_example2(args) -> int:
    _run_benchmark(args, run_example2)
    return 0


def _cmd_verify_filters(args) -> int:
    schedule = GeometricSchedule(args.alpha0, args.ratio_r)
    rng = np.random.default_rng(0)
    out = []
    for spec in all_families(args.tikhonov_order):
        rep = verify_a5_bounds(spec, schedule, n_max=args.n_max)
        k = rng.standard_normal((12, 12))
        k /= 2.0 * np.linalg.norm(k, 2)
        b = rng.standard_normal(12)
        z_iter = apply_filter_iterative(spec, 0.5, lambda v: k @ v, lambda w: k.T @ w, b)
        z_spec = apply_filter_spectral(spec, 0.5, k, b)
        gap = float(np.linalg.norm(z_iter - z_spec) / np.linalg.norm(z_spec))
        entry = rep.to_dict()
        entry["family"] = spec.label()
        entry["cross_path_relative_gap"] = gap
        out.append(entry)
    json.dump(out, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return 0


def _cmd_audit_schedule(args) -> int:
    if args.explicit:
        sched = ExplicitSchedule(_parse_floats(args.explicit))
    else:
        sched = GeometricSchedule(args.alpha0, args.ratio_r)
    result = audit(sched, args.n_max).to_dict()
    result["schedule"] = sched.label()
    json.dump(result, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return 0


def _cmd_source_check(args) -> int:
    problem = bvp.make_reference_problem(args.m)
    c_true = bvp.true_coefficient(args.m)
    c0 = bvp.initial_guess_smooth(args.m) if args.example == 1 else bvp.initial_guess_rough(args.m)
    diag = source_condition_diagnostic(problem, c_true, c0, args.nu)
    result = diag.to_dict()
    result["example"] = args.example
    result["nu"] = args.nu
    json.dump(result, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="newtonreg",
                                     description="Inexact Newton regularization experiments")
    sub = parser.add_subparsers(dest="command", required=True)

    p1 = sub.add_parser("example1", help="benchmark with the smooth initial guess")
    _add_run_flags(p1)
    p1.set_defaults(func=_cmd_example1)

    p2 = sub.add_parser("example2", help="benchmark with the rough initial guess")
    _add_run_flags(p2)
    p2.set_defaults(func=_cmd_example2)

    pv = sub.add_parser("verify-filters", help="filter bound and cross-path checks")
    pv.add_argument("--tikhonov-order", type=int, default=1)
    pv.add_argument("--n-max", type=int, default=20)
    _add_schedule_flags(pv)
    pv.set_defaults(func=_cmd_verify_filters)

    pa = sub.add_parser("audit-schedule", help="admissibility audit of a schedule")
    _add_schedule_flags(pa)
    pa.add_argument("--explicit", type=str, default=None,
                    help="comma-separated explicit alphas (overrides geometric)")
    pa.add_argument("--n-max", type=int, default=30)
    pa.set_defaults(func=_cmd_audit_schedule)

    ps = sub.add_parser("source-check", help="source-representation diagnostic")
    ps.add_argument("--example", type=int, default=1, choices=[1, 2])
    ps.add_argument("--nu", type=float, default=0.5)
    ps.add_argument("--m", type=int, default=100)
    ps.set_defaults(func=_cmd_source_check)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (NewtonRegError, ValueError) as exc:
        json.dump({"error": type(exc).__name__, "message": str(exc)}, sys.stderr)
        sys.stderr.write("\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
