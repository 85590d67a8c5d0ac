"""Invasion speeds for two-species strongly competitive travelling waves.

Three independent routes to the same quantity cross-validate each other:
the infinite-competition limit speed from the half-line slope function, the
finite-k wavespeed from a collocation eigenvalue solver, and front speeds
measured from direct parabolic simulation.
"""

__version__ = "0.1.0"

from .errors import (
    AssumptionViolation,
    BracketFailure,
    CompwaveError,
    DomainViolation,
    ExistenceViolation,
    FrontLost,
    IntegrationFailure,
    MonotonicityViolation,
    NewtonStall,
    NoConvergence,
    NonFiniteRhs,
    NoSignChange,
    SingularPivot,
    SolverError,
    StabilityViolation,
    StepUnderflow,
    ValidationError,
)
from .halfline import (
    HalfLineProblem,
    HalfLineSolution,
    ShotClass,
    classify_shot,
    eigenvalue_dirichlet,
    gamma,
    principal_eigenvalue_numeric,
    solve_halfline,
)
from .limit import (
    InvaderTag,
    InvaderVerdict,
    LimitParams,
    LimitWave,
    build_limit_profiles,
    classify_invader,
    interface_relation_residual,
    solve_limit_speed,
    speed_invariance_check,
)
from .numerics import (
    Grid1D,
    IvpResult,
    Profile,
    RootBracket,
    bisect_root,
    integrate_ivp,
    solve_tridiagonal,
)
from .pde import (
    FrontSpeedEstimate,
    PdeState,
    compare_with_wave,
    front_like_state,
    measure_front_speed,
    step,
)
from .sweep import (
    RawEcologicalParams,
    SpeedCurve,
    SweepSpec,
    emit_report,
    read_report,
    rescale_parameters,
    run_sweep,
)
from .wave import (
    ContinuationReport,
    Normalization,
    SystemParams,
    TravellingWave,
    continue_in_k,
    interface_condition_estimate,
    segregation_metric,
    solve_wave,
    wave_residual,
)
