"""Inexact Newton regularization for nonlinear ill-posed inverse problems."""

from .errors import (
    AsymmetricMatrixError,
    FilterDomainError,
    InnerBudgetError,
    LinearSolveError,
    NewtonRegError,
    ScalingError,
    SingularSystemError,
)
from .estimator import InexactNewtonSolver
from .filters import (
    ExponentialEuler,
    FilterBoundReport,
    IteratedTikhonov,
    Landweber,
    Lardy,
    apply_filter_iterative,
    apply_filter_spectral,
    eval_g,
    eval_residual,
    filter_from_name,
    verify_a5_bounds,
)
from .linalg import (
    SymmetricEigenDecomposition,
    TridiagonalSystem,
    estimate_operator_norm,
    solve_tridiagonal,
    sym_eigen,
)
from .newton import (
    InverseProblem,
    IterationTrace,
    SolveConfig,
    solve,
    source_condition_diagnostic,
)
from .schedules import AlphaSchedule, ExplicitSchedule, GeometricSchedule, ScheduleAudit, audit
from .experiments import (
    ExperimentReport,
    ExperimentRow,
    NoiseModel,
    emit_report,
    gen_noise,
    parse_report_csv,
    run_example1,
    run_example2,
)

__version__ = "0.1.0"

__all__ = [
    "AlphaSchedule",
    "AsymmetricMatrixError",
    "ExperimentReport",
    "ExperimentRow",
    "ExplicitSchedule",
    "ExponentialEuler",
    "FilterBoundReport",
    "FilterDomainError",
    "GeometricSchedule",
    "InexactNewtonSolver",
    "InnerBudgetError",
    "InverseProblem",
    "IterationTrace",
    "IteratedTikhonov",
    "Landweber",
    "Lardy",
    "LinearSolveError",
    "NewtonRegError",
    "NoiseModel",
    "ScalingError",
    "ScheduleAudit",
    "SingularSystemError",
    "SolveConfig",
    "SymmetricEigenDecomposition",
    "TridiagonalSystem",
    "apply_filter_iterative",
    "apply_filter_spectral",
    "audit",
    "emit_report",
    "estimate_operator_norm",
    "eval_g",
    "eval_residual",
    "filter_from_name",
    "gen_noise",
    "parse_report_csv",
    "run_example1",
    "run_example2",
    "solve",
    "solve_tridiagonal",
    "source_condition_diagnostic",
    "sym_eigen",
    "verify_a5_bounds",
]
