"""Exception hierarchy shared by all modules."""


class LeastActionError(Exception):
    """Base class for library errors."""


class DomainError(LeastActionError, ValueError):
    """An argument lies outside the domain of the operation (e.g. rho <= 0)."""


class DegenerateInputError(LeastActionError, ValueError):
    """Inputs for which the requested quantity is undefined (e.g. equal densities)."""


class SolverError(LeastActionError, RuntimeError):
    """A numerical solve failed to converge or hit a singular system."""

    def __init__(self, message: str, residual: float | None = None):
        super().__init__(message)
        self.residual = residual


class VacuumError(SolverError):
    """The two rarefaction curves do not intersect at positive density."""


class HorizonError(LeastActionError, ValueError):
    """Requested time lies at or beyond the first wave interaction."""


class InfeasibleError(LeastActionError, ValueError):
    """A fan subsolution failed its feasibility check."""

    def __init__(self, message: str, violations: list[str] | None = None):
        super().__init__(message)
        self.violations = list(violations or [])
