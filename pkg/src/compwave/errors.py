"""Exception hierarchy shared by all solver modules.

Two families matter for the CLI exit codes: ``ValidationError`` (bad inputs,
exit code 2) and ``SolverError`` (a numerical method failed, exit code 3).
"""


class CompwaveError(Exception):
    """Base class for all package errors."""


class ValidationError(CompwaveError):
    """Inputs violate a documented precondition."""


class SolverError(CompwaveError):
    """A numerical routine could not produce a valid result."""


class IntegrationFailure(SolverError):
    """An initial-value integration could not be completed."""


class StepUnderflow(IntegrationFailure):
    """Adaptive step size collapsed below the resolvable scale (blow-up)."""


class NonFiniteRhs(IntegrationFailure):
    """The right-hand side returned NaN or infinity."""


class NoSignChange(ValidationError):
    """A root bracket does not actually bracket a sign change."""


class SingularPivot(SolverError):
    """Tridiagonal elimination hit a pivot too small to divide by."""


class NoConvergence(SolverError):
    """An iteration exhausted its budget without converging."""


class ExistenceViolation(SolverError):
    """No solution exists in the searched range (or it is numerically degenerate).

    ``reason`` distinguishes which witness search failed:
    ``"no-overshoot-witness"`` or ``"no-undershoot-witness"``.
    """

    def __init__(self, message: str, reason: str = ""):
        super().__init__(message)
        self.reason = reason


class DomainViolation(ValidationError):
    """An argument left the domain where the operation is defined."""


class BracketFailure(SolverError):
    """Endpoint signs of a root bracket did not oppose."""


class NewtonStall(SolverError):
    """Damped Newton stopped making progress."""


class MonotonicityViolation(SolverError):
    """A converged profile is not monotone (signals under-resolution)."""


class StabilityViolation(SolverError):
    """A time step pushed the state outside its invariant bounds."""


class FrontLost(SolverError):
    """No level crossing found when sampling a front position."""


class AssumptionViolation(ValidationError):
    """Raw ecological parameters violate the species-ordering assumption."""
