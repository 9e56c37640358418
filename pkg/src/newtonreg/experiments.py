"""Reproducible convergence experiments on the coefficient-identification testbed.

Two benchmark runs are provided: ``run_example1`` starts from the smooth
initial guess c0 = 1 + t (initial error with a source representation, so a
square-root-in-delta error rate is expected) and ``run_example2`` from
c0 = 2 - t (no source representation, convergence without a rate).  Noise
is Gaussian, rescaled so the h-weighted data perturbation hits the target
noise level exactly, and everything is keyed by explicit seeds so reports
are bit-reproducible apart from timings.
"""

from __future__ import annotations

import csv
import json
import time
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import bvp
from .filters import FilterSpec, Landweber
from .newton import IterationTrace, SolveConfig, solve
from .schedules import AlphaSchedule, GeometricSchedule

CSV_COLUMNS = ["delta", "tau", "filter", "schedule", "seed", "n_delta", "error", "ratio",
               "runtime_ms"]


@dataclass(frozen=True)
class NoiseModel:
    """Seeded Gaussian perturbation with an exact h-weighted magnitude."""

    seed: int
    target_delta: float

    def __post_init__(self):
        if self.target_delta < 0:
            raise ValueError("target_delta must be nonnegative")


def gen_noise(u: np.ndarray, model: NoiseModel, weight: float = 1.0) -> np.ndarray:
    """Add noise of exact weighted norm ``target_delta`` to ``u``."""
    u = np.asarray(u, dtype=float)
    if model.target_delta == 0:
        return u.copy()
    rng = np.random.default_rng(model.seed)
    z = rng.standard_normal(u.shape[0])
    nz = np.sqrt(weight) * np.linalg.norm(z)
    while nz == 0.0:  # pragma: no cover - probability zero
        z = rng.standard_normal(u.shape[0])
        nz = np.sqrt(weight) * np.linalg.norm(z)
    return u + (model.target_delta / nz) * z


@dataclass
class ExperimentRow:
    delta: float
    tau: float
    filter: str
    schedule: str
    seed: int
    n_delta: int
    error: float
    ratio: float
    runtime_ms: float
    termination: str = "discrepancy"
    failure: Optional[str] = None

    def to_dict(self) -> dict:
        return {c: getattr(self, c) for c in CSV_COLUMNS}


@dataclass
class ExperimentReport:
    """Rows of (noise level, seed) runs plus rate aggregates."""

    rows: list[ExperimentRow] = field(default_factory=list)
    traces: list[IterationTrace] = field(default_factory=list)

    def median_ratio(self, delta: float, tau: float) -> float:
        vals = [r.ratio for r in self.rows
                if r.delta == delta and r.tau == tau and np.isfinite(r.error)]
        return float(np.median(vals))

    def median_error(self, delta: float, tau: float) -> float:
        vals = [r.error for r in self.rows
                if r.delta == delta and r.tau == tau and np.isfinite(r.error)]
        return float(np.median(vals))

    def median_n_delta(self, delta: float, tau: float) -> float:
        vals = [r.n_delta for r in self.rows if r.delta == delta and r.tau == tau]
        return float(np.median(vals))

    def rate_slope(self, tau: float) -> float:
        """Fitted slope of log(median error) versus log(delta)."""
        deltas = sorted({r.delta for r in self.rows if r.tau == tau and r.delta > 0})
        if len(deltas) < 2:
            raise ValueError("need at least two noise levels for a rate fit")
        med = [self.median_error(d, tau) for d in deltas]
        slope, _ = np.polyfit(np.log(deltas), np.log(med), 1)
        return float(slope)

    def to_dicts(self) -> list[dict]:
        return [r.to_dict() for r in self.rows]


def _run_benchmark(
    c0: np.ndarray,
    tau: float,
    deltas: Sequence[float],
    seeds: Sequence[int],
    filter_spec: FilterSpec,
    schedule: AlphaSchedule,
    m: int = 100,
    n_max: int = 60,
    keep_traces: bool = True,
) -> ExperimentReport:
    problem = bvp.make_reference_problem(m)
    c_true = bvp.true_coefficient(m)
    u_true = problem.evaluate(c_true)
    report = ExperimentReport()
    for delta in deltas:
        for seed in seeds:
            y_delta = gen_noise(u_true, NoiseModel(seed=seed, target_delta=delta),
                                weight=problem.weight_y)
            cfg = SolveConfig(filter=filter_spec, schedule=schedule, x0=c0,
                              tau=tau, delta=delta, n_max=n_max, scaling_check="off")
            t0 = time.perf_counter()
            failure = None
            try:
                trace = solve(problem, y_delta, cfg, x_truth=c_true)
                error = problem.norm_x(trace.final_x - c_true)
                n_delta = trace.n_final
                termination = trace.termination
            except Exception as exc:  # row-level failures must not kill the sweep
                trace = None
                error = float("nan")
                n_delta = -1
                termination = "failed"
                failure = str(exc)
            runtime_ms = (time.perf_counter() - t0) * 1e3
            ratio = error / np.sqrt(delta) if delta > 0 else float("nan")
            report.rows.append(ExperimentRow(
                delta=float(delta), tau=float(tau), filter=filter_spec.label(),
                schedule=schedule.label(), seed=int(seed), n_delta=int(n_delta),
                error=float(error), ratio=float(ratio), runtime_ms=runtime_ms,
                termination=termination, failure=failure,
            ))
            if keep_traces and trace is not None:
                report.traces.append(trace)
    return report


def run_example1(
    tau: float = 1.1,
    deltas: Sequence[float] = (1e-2, 1e-3, 1e-4),
    seeds: Sequence[int] = tuple(range(10)),
    filter_spec: FilterSpec = Landweber(),
    schedule: Optional[AlphaSchedule] = None,
    m: int = 100,
    n_max: int = 60,
) -> ExperimentReport:
    """Benchmark with the smooth initial guess c0 = 1 + t."""
    if not tau > 1:
        raise ValueError("tau must exceed 1")
    schedule = schedule or GeometricSchedule(1.0, 0.5)
    return _run_benchmark(bvp.initial_guess_smooth(m), tau, deltas, seeds,
                          filter_spec, schedule, m=m, n_max=n_max)


def run_example2(
    tau: float = 1.1,
    deltas: Sequence[float] = (1e-2, 1e-3, 1e-4),
    seeds: Sequence[int] = tuple(range(10)),
    filter_spec: FilterSpec = Landweber(),
    schedule: Optional[AlphaSchedule] = None,
    m: int = 100,
    n_max: int = 60,
) -> ExperimentReport:
    """Benchmark with the rough initial guess c0 = 2 - t (no rate expected)."""
    if not tau > 1:
        raise ValueError("tau must exceed 1")
    schedule = schedule or GeometricSchedule(1.0, 0.5)
    return _run_benchmark(bvp.initial_guess_rough(m), tau, deltas, seeds,
                          filter_spec, schedule, m=m, n_max=n_max)


def emit_report(report: ExperimentReport, format: str, path: str) -> None:
    """Serialize a report to CSV or JSON (runtime_ms is the only unstable field)."""
    if format == "csv":
        with open(path, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS)
            writer.writeheader()
            for row in report.to_dicts():
                writer.writerow({k: (repr(v) if isinstance(v, float) else v)
                                 for k, v in row.items()})
    elif format == "json":
        with open(path, "w") as fh:
            json.dump(report.to_dicts(), fh, indent=2)
            fh.write("\n")
    else:
        raise ValueError(f"unknown format {format!r}; use 'csv' or 'json'")


def parse_report_csv(path: str) -> ExperimentReport:
    report = ExperimentReport()
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            report.rows.append(ExperimentRow(
                delta=float(row["delta"]), tau=float(row["tau"]),
                filter=row["filter"], schedule=row["schedule"],
                seed=int(row["seed"]), n_delta=int(row["n_delta"]),
                error=float(row["error"]), ratio=float(row["ratio"]),
                runtime_ms=float(row["runtime_ms"]),
            ))
    return report
