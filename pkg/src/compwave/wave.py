"""Finite-competition travelling waves (u_k, v_k, c_k) by collocation.

Second-order centered differences on a uniform grid over [-L, L], Dirichlet
closures (1,0) at the left end and (0,1) at the right, and one scalar phase
condition pinning the translation; the speed c is appended as an unknown.
The Newton system is block tridiagonal (2x2 nodal blocks) plus the c column
and phase row, solved by bordered elimination.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

import numpy as np
from numba import njit

from . import limit
from .errors import (
    MonotonicityViolation,
    NewtonStall,
    SingularPivot,
    SolverError,
    ValidationError,
)
from .numerics import Grid1D, Profile

RESIDUAL_TOL = 1e-8
NEWTON_TARGET = 1e-11
BOUNDARY_TOL = 1e-6
MAX_SPACING = 0.05


class Normalization(enum.Enum):
    """Phase condition pinning the wave's translation invariance."""

    Cross = "cross"   # u(0) = v(0)
    UHalf = "uhalf"   # u(0) = 1/2
    VHalf = "vhalf"   # v(0) = 1/2


@dataclass(frozen=True)
class SystemParams:
    """Rescaled competition system parameters; k > 1 keeps it bistable."""

    k: float
    alpha: float
    r: float
    d: float

    def __post_init__(self):
        if not self.k > 1:
            raise ValidationError(f"k must exceed 1, got {self.k}")
        for name in ("alpha", "r", "d"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ValidationError(f"{name} must be positive and finite, got {v}")

    @property
    def sqrt_rd(self) -> float:
        return math.sqrt(self.r * self.d)


@dataclass(frozen=True)
class TravellingWave:
    """A converged (or candidate) wave; invariants are checked by the solver."""

    params: SystemParams
    c: float
    u: Profile
    v: Profile
    normalization: Normalization
    residual_norm: float

    def __post_init__(self):
        if self.u.grid != self.v.grid:
            raise ValidationError("u and v must share one grid")


@dataclass(frozen=True)
class ContinuationReport:
    """c_k and segregation along an increasing k schedule, with the k->inf speed."""

    k_values: np.ndarray
    c_values: np.ndarray
    segregation_values: np.ndarray
    c_limit: float

    def __post_init__(self):
        k = np.asarray(self.k_values, dtype=float)
        if np.any(np.diff(k) <= 0):
            raise ValidationError("k_values must be strictly increasing")
        if not (len(k) == len(self.c_values) == len(self.segregation_values)):
            raise ValidationError("report arrays must have equal length")


@njit(cache=True, nogil=True)
def _block_thomas(A, B, C, R1, R2, X1, X2):  # pragma: no cover - jitted
    """Solve a block-tridiagonal system with 2x2 blocks for two right sides.

    A[i] diagonal blocks, B[i] super, C[i] sub (C[0] unused), R1/R2 the two
    right-hand sides as (n, 2) arrays. Factorization in Thomas form with 2x2
    pivots; returns the row index of a singular pivot or -1 on success.
    """
    n = A.shape[0]
    for i in range(1, n):
        a = A[i - 1, 0, 0]
        b = A[i - 1, 0, 1]
        c = A[i - 1, 1, 0]
        d = A[i - 1, 1, 1]
        det = a * d - b * c
        if abs(det) <= 1e-300:
            return i - 1
        ia = d / det
        ib = -b / det
        ic = -c / det
        id_ = a / det
        # fac = C[i] @ inv(A[i-1])
        f00 = C[i, 0, 0] * ia + C[i, 0, 1] * ic
        f01 = C[i, 0, 0] * ib + C[i, 0, 1] * id_
        f10 = C[i, 1, 0] * ia + C[i, 1, 1] * ic
        f11 = C[i, 1, 0] * ib + C[i, 1, 1] * id_
        A[i, 0, 0] -= f00 * B[i - 1, 0, 0] + f01 * B[i - 1, 1, 0]
        A[i, 0, 1] -= f00 * B[i - 1, 0, 1] + f01 * B[i - 1, 1, 1]
        A[i, 1, 0] -= f10 * B[i - 1, 0, 0] + f11 * B[i - 1, 1, 0]
        A[i, 1, 1] -= f10 * B[i - 1, 0, 1] + f11 * B[i - 1, 1, 1]
        R1[i, 0] -= f00 * R1[i - 1, 0] + f01 * R1[i - 1, 1]
        R1[i, 1] -= f10 * R1[i - 1, 0] + f11 * R1[i - 1, 1]
        R2[i, 0] -= f00 * R2[i - 1, 0] + f01 * R2[i - 1, 1]
        R2[i, 1] -= f10 * R2[i - 1, 0] + f11 * R2[i - 1, 1]
    for i in range(n - 1, -1, -1):
        r10 = R1[i, 0]
        r11 = R1[i, 1]
        r20 = R2[i, 0]
        r21 = R2[i, 1]
        if i < n - 1:
            r10 -= B[i, 0, 0] * X1[i + 1, 0] + B[i, 0, 1] * X1[i + 1, 1]
            r11 -= B[i, 1, 0] * X1[i + 1, 0] + B[i, 1, 1] * X1[i + 1, 1]
            r20 -= B[i, 0, 0] * X2[i + 1, 0] + B[i, 0, 1] * X2[i + 1, 1]
            r21 -= B[i, 1, 0] * X2[i + 1, 0] + B[i, 1, 1] * X2[i + 1, 1]
        a = A[i, 0, 0]
        b = A[i, 0, 1]
        c = A[i, 1, 0]
        d = A[i, 1, 1]
        det = a * d - b * c
        if abs(det) <= 1e-300:
            return i
        X1[i, 0] = (d * r10 - b * r11) / det
        X1[i, 1] = (-c * r10 + a * r11) / det
        X2[i, 0] = (d * r20 - b * r21) / det
        X2[i, 1] = (-c * r20 + a * r21) / det
    return -1


def default_length(params: SystemParams) -> float:
    return max(40.0, 40.0 * math.sqrt(params.d / params.r))


def default_grid(params: SystemParams, length: float | None = None) -> Grid1D:
    """Uniform grid resolving the interface layer (spacing <= 0.5/sqrt(k))."""
    L = default_length(params) if length is None else length
    h = min(MAX_SPACING, 0.5 / math.sqrt(params.k))
    n = int(math.ceil(2.0 * L / h)) + 1
    if n % 2 == 0:
        n += 1  # keep xi = 0 on the grid for the phase condition
    return Grid1D(-L, L, n)


def seed_wave(params: SystemParams, grid: Grid1D | None = None,
              normalization: Normalization = Normalization.Cross) -> TravellingWave:
    """Logistic-ramp initial guess with c = 0; robust Newton basin at k ~ 10."""
    if grid is None:
        grid = default_grid(params)
    xi = grid.points
    z = np.clip(xi / 1.25, -500.0, 500.0)
    u = 1.0 / (1.0 + np.exp(z))
    v = 1.0 / (1.0 + np.exp(-z))
    return TravellingWave(params=params, c=0.0, u=Profile(grid, u),
                          v=Profile(grid, v), normalization=normalization,
                          residual_norm=math.inf)


def _phase_residual(u: np.ndarray, v: np.ndarray, mid: int,
                    normalization: Normalization) -> float:
    if normalization is Normalization.Cross:
        return u[mid] - v[mid]
    if normalization is Normalization.UHalf:
        return u[mid] - 0.5
    return v[mid] - 0.5


def _residual_arrays(xi: np.ndarray, u: np.ndarray, v: np.ndarray, c: float,
                     params: SystemParams,
                     normalization: Normalization) -> np.ndarray:
    h = xi[1] - xi[0]
    n = len(xi)
    k, alpha, r, d = params.k, params.alpha, params.r, params.d
    F = np.zeros(2 * n + 1)
    Fu = F[:n]
    Fv = F[n:2 * n]
    Fu[0] = u[0] - 1.0
    Fu[-1] = u[-1]
    Fv[0] = v[0]
    Fv[-1] = v[-1] - 1.0
    ui = u[1:-1]
    vi = v[1:-1]
    Fu[1:-1] = ((u[:-2] - 2.0 * ui + u[2:]) / h ** 2
                + c * (u[2:] - u[:-2]) / (2.0 * h)
                + ui * (1.0 - ui) - k * ui * vi)
    Fv[1:-1] = (d * (v[:-2] - 2.0 * vi + v[2:]) / h ** 2
                + c * (v[2:] - v[:-2]) / (2.0 * h)
                + r * vi * (1.0 - vi) - alpha * k * ui * vi)
    F[-1] = _phase_residual(u, v, n // 2, normalization)
    return F


def wave_residual(wave: TravellingWave) -> np.ndarray:
    """Stacked FD residuals: u rows, v rows (Dirichlet mismatches at the ends),
    and the phase equation last."""
    return _residual_arrays(wave.u.grid.points, wave.u.values, wave.v.values,
                            wave.c, wave.params, wave.normalization)


def solve_wave(params: SystemParams,
               initial: TravellingWave | None = None,
               normalization: Normalization = Normalization.Cross,
               *,
               length: float | None = None,
               max_iter: int = 80,
               newton_target: float = NEWTON_TARGET) -> TravellingWave:
    """Damped Newton iteration on (u interior, v interior, c).

    Armijo backtracking (factor 0.5, at most 20 halvings) on the residual
    max-norm; raises NewtonStall when five consecutive steps reduce the
    residual by less than 1%, and MonotonicityViolation when the converged
    profiles are not monotone (under-resolution).
    """
    if initial is None:
        grid = default_grid(params, length)
        initial = seed_wave(params, grid, normalization)
    grid = initial.u.grid
    xi = grid.points
    h = grid.spacing
    n = grid.n_points
    mid = n // 2
    k, alpha, r, d = params.k, params.alpha, params.r, params.d

    u = initial.u.values.copy()
    v = initial.v.values.copy()
    c = float(initial.c)

    # rounding floor of the residual: eps amplified by the FD operator and k
    eps = np.finfo(float).eps
    floor = 4.0 * eps * (2.0 * (1.0 + d) / h ** 2 + (1.0 + alpha) * k + r + 3.0)
    newton_target = max(newton_target, floor)

    A = np.zeros((n, 2, 2))
    B = np.zeros((n, 2, 2))
    C = np.zeros((n, 2, 2))
    ih2 = 1.0 / h ** 2
    i2h = 1.0 / (2.0 * h)

    F = _residual_arrays(xi, u, v, c, params, normalization)
    res = float(np.abs(F).max())
    stall_count = 0
    for _ in range(max_iter):
        if res <= newton_target:
            break
        # Jacobian blocks: rows (u_i, v_i), columns (u_j, v_j)
        A[:] = 0.0
        B[:] = 0.0
        C[:] = 0.0
        A[0, 0, 0] = 1.0
        A[0, 1, 1] = 1.0
        A[-1, 0, 0] = 1.0
        A[-1, 1, 1] = 1.0
        ui = u[1:-1]
        vi = v[1:-1]
        A[1:-1, 0, 0] = -2.0 * ih2 + (1.0 - 2.0 * ui) - k * vi
        A[1:-1, 0, 1] = -k * ui
        A[1:-1, 1, 0] = -alpha * k * vi
        A[1:-1, 1, 1] = -2.0 * d * ih2 + r * (1.0 - 2.0 * vi) - alpha * k * ui
        B[1:-1, 0, 0] = ih2 + c * i2h
        B[1:-1, 1, 1] = d * ih2 + c * i2h
        C[1:-1, 0, 0] = ih2 - c * i2h
        C[1:-1, 1, 1] = d * ih2 - c * i2h

        R1 = np.zeros((n, 2))
        R1[:, 0] = -F[:n]
        R1[:, 1] = -F[n:2 * n]
        R2 = np.zeros((n, 2))
        R2[1:-1, 0] = (u[2:] - u[:-2]) * i2h   # dF/dc
        R2[1:-1, 1] = (v[2:] - v[:-2]) * i2h

        X1 = np.empty((n, 2))
        X2 = np.empty((n, 2))
        bad = _block_thomas(A, B, C, R1, R2, X1, X2)
        if bad >= 0:
            raise SingularPivot(f"singular 2x2 pivot at node {bad} (k={k})")

        # bordered elimination: dw = X1 - dc * X2, phase row fixes dc
        if normalization is Normalization.Cross:
            num = -F[-1] - (X1[mid, 0] - X1[mid, 1])
            den = -(X2[mid, 0] - X2[mid, 1])
        elif normalization is Normalization.UHalf:
            num = -F[-1] - X1[mid, 0]
            den = -X2[mid, 0]
        else:
            num = -F[-1] - X1[mid, 1]
            den = -X2[mid, 1]
        if den == 0.0:
            raise SolverError("phase row lost its c sensitivity")
        dc = num / den
        du = X1[:, 0] - dc * X2[:, 0]
        dv = X1[:, 1] - dc * X2[:, 1]

        lam = 1.0
        accepted = False
        for _ in range(20):
            u_new = u + lam * du
            v_new = v + lam * dv
            c_new = c + lam * dc
            F_new = _residual_arrays(xi, u_new, v_new, c_new, params, normalization)
            res_new = float(np.abs(F_new).max())
            if res_new < res * (1.0 - 1e-4 * lam) or res_new <= newton_target:
                accepted = True
                break
            lam *= 0.5
        if not accepted:
            raise NewtonStall(
                f"backtracking exhausted at residual {res:.3e} (k={k})")
        u, v, c, F = u_new, v_new, c_new, F_new
        if res_new > 0.99 * res:
            stall_count += 1
            if stall_count >= 5:
                raise NewtonStall(
                    f"residual stuck near {res_new:.3e} for 5 steps (k={k})")
        else:
            stall_count = 0
        res = res_new
    else:
        raise NewtonStall(f"no convergence after {max_iter} iterations (k={k})")

    wave = TravellingWave(params=params, c=c, u=Profile(grid, u),
                          v=Profile(grid, v), normalization=normalization,
                          residual_norm=res)
    check_wave(wave)
    return wave


def check_wave(wave: TravellingWave) -> None:
    """Post-hoc verification of the converged-wave invariants."""
    params = wave.params
    u = wave.u.values
    v = wave.v.values
    c = wave.c
    if wave.residual_norm > RESIDUAL_TOL:
        raise SolverError(
            f"residual norm {wave.residual_norm:.2e} exceeds {RESIDUAL_TOL}")
    if not (-2.0 * params.sqrt_rd < c < 2.0):
        raise SolverError(f"speed {c} escaped (-2*sqrt(rd), 2)")
    if (abs(u[0] - 1.0) > BOUNDARY_TOL or abs(u[-1]) > BOUNDARY_TOL
            or abs(v[0]) > BOUNDARY_TOL or abs(v[-1] - 1.0) > BOUNDARY_TOL):
        raise SolverError("boundary values drifted from (1,0) / (0,1)")
    interior_u = u[1:-1]
    interior_v = v[1:-1]
    if np.any(interior_u < -1e-12) or np.any(interior_u > 1.0 + 1e-9):
        raise SolverError("u left [0, 1] in the interior")
    if np.any(interior_v < -1e-12) or np.any(interior_v > 1.0 + 1e-9):
        raise SolverError("v left [0, 1] in the interior")
    # monotone within float noise; exact zeros/ones in the far tails are fine
    if np.any(np.diff(u) > 1e-12):
        raise MonotonicityViolation("u is not nonincreasing (refine the grid)")
    if np.any(np.diff(v) < -1e-12):
        raise MonotonicityViolation("v is not nondecreasing (refine the grid)")
    mid = wave.u.grid.n_points // 2
    phase = _phase_residual(u, v, mid, wave.normalization)
    if abs(phase) > 1e-10:
        raise SolverError(f"phase condition violated by {phase:.2e}")


def segregation_metric(wave: TravellingWave) -> float:
    """max over the grid of u * v; tends to 0 as k grows."""
    return float(np.max(wave.u.values * wave.v.values))


def interface_condition_estimate(wave: TravellingWave) -> float:
    """alpha u'(xi0) + d v'(xi0) at the crossing point u = v.

    Derivatives use centered 4th-order stencils at the nodes adjacent to the
    crossing, linearly interpolated; tends to 0 as k -> infinity.
    """
    u = wave.u.values
    v = wave.v.values
    h = wave.u.grid.spacing
    diff = u - v
    sign_change = np.nonzero(np.diff(np.signbit(diff)))[0]
    if len(sign_change) == 0:
        raise SolverError("profiles do not cross")
    i = int(sign_change[0])
    frac = diff[i] / (diff[i] - diff[i + 1])

    def deriv(arr: np.ndarray, j: int) -> float:
        if j < 2 or j > len(arr) - 3:
            return (arr[min(j + 1, len(arr) - 1)] - arr[max(j - 1, 0)]) / (2 * h)
        return (arr[j - 2] - 8 * arr[j - 1] + 8 * arr[j + 1] - arr[j + 2]) / (12 * h)

    du = (1 - frac) * deriv(u, i) + frac * deriv(u, i + 1)
    dv = (1 - frac) * deriv(v, i) + frac * deriv(v, i + 1)
    return wave.params.alpha * du + wave.params.d * dv


def interpolate_wave(wave: TravellingWave, grid: Grid1D) -> TravellingWave:
    """Resample a wave onto another grid (constant extension past the ends)."""
    xi_old = wave.u.grid.points
    xi_new = grid.points
    u = np.interp(xi_new, xi_old, wave.u.values)
    v = np.interp(xi_new, xi_old, wave.v.values)
    return replace(wave, u=Profile(grid, u), v=Profile(grid, v),
                   residual_norm=math.inf)


def continue_in_k(params: SystemParams, k_schedule,
                  normalization: Normalization = Normalization.Cross) -> ContinuationReport:
    """Solve along an increasing k schedule, warm-starting each step.

    The schedule must start at k <= 20 and grow by at most a factor of 10
    per step. A failed step is retried once through the geometric midpoint
    before giving up. c_limit comes from the infinite-competition relation.
    """
    ks = np.asarray(list(k_schedule), dtype=float)
    if len(ks) == 0 or np.any(np.diff(ks) <= 0):
        raise ValidationError("k_schedule must be strictly increasing")
    if ks[0] > 20.0:
        raise ValidationError(f"k_schedule must start at k <= 20, got {ks[0]}")
    if np.any(ks[1:] / ks[:-1] > 10.0 + 1e-12):
        raise ValidationError("k_schedule must grow by at most 10x per step")

    length = default_length(SystemParams(ks[0], params.alpha, params.r, params.d))
    c_vals = np.empty(len(ks))
    seg_vals = np.empty(len(ks))
    prev: TravellingWave | None = None
    for i, k in enumerate(ks):
        p_k = SystemParams(k, params.alpha, params.r, params.d)
        grid = default_grid(p_k, length)
        if prev is None:
            guess = seed_wave(p_k, grid, normalization)
        else:
            guess = replace(interpolate_wave(prev, grid), params=p_k)
        try:
            wave = solve_wave(p_k, guess, normalization)
        except SolverError:
            if prev is None:
                raise
            k_mid = math.sqrt(prev.params.k * k)
            p_mid = SystemParams(k_mid, params.alpha, params.r, params.d)
            grid_mid = default_grid(p_mid, length)
            bridge = solve_wave(p_mid, replace(interpolate_wave(prev, grid_mid),
                                               params=p_mid), normalization)
            wave = solve_wave(p_k, replace(interpolate_wave(bridge, grid),
                                           params=p_k), normalization)
        c_vals[i] = wave.c
        seg_vals[i] = segregation_metric(wave)
        prev = wave

    c_limit = limit.solve_limit_speed(
        limit.LimitParams(params.alpha, params.r, params.d))
    return ContinuationReport(k_values=ks, c_values=c_vals,
                              segregation_values=seg_vals, c_limit=c_limit)
