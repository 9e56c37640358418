"""Exception types shared across the package."""


class NewtonRegError(Exception):
    """Base class for all package-specific errors."""


class SingularSystemError(NewtonRegError):
    """A linear system turned out to be numerically singular."""


class AsymmetricMatrixError(NewtonRegError, ValueError):
    """A matrix expected to be symmetric was not."""


class FilterDomainError(NewtonRegError, ValueError):
    """The regularization parameter is outside the filter family's range."""


class InnerBudgetError(NewtonRegError):
    """The inner-iteration count required by the filter exceeds the cap."""


class LinearSolveError(NewtonRegError):
    """An inner linear solve (CG or direct) failed to converge."""


class ScalingError(NewtonRegError):
    """The forward operator violates the required norm scaling."""
