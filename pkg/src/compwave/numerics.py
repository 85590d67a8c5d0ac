"""Numerical kernel: adaptive IVP integration, bracketed root finding,
tridiagonal solves and uniform-grid finite differences.

Everything here is deterministic and free of shared mutable state; values are
immutable after construction and safe to pass between threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Sequence

import numpy as np
from numba import njit

from .errors import (
    NonFiniteRhs,
    NoSignChange,
    SingularPivot,
    StepUnderflow,
    ValidationError,
)

# Documented defaults; downstream modules override per task.
DEFAULT_IVP_TOL = 1e-10
DEFAULT_X_TOL = 1e-12
DEFAULT_F_TOL = 1e-12


# ---------------------------------------------------------------------------
# domain types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Grid1D:
    """Uniform 1D grid on [left, right] with n_points nodes."""

    left: float
    right: float
    n_points: int
    spacing: float = field(init=False)

    def __post_init__(self):
        if not (math.isfinite(self.left) and math.isfinite(self.right)):
            raise ValidationError("grid endpoints must be finite")
        if not self.left < self.right:
            raise ValidationError(f"grid needs left < right, got [{self.left}, {self.right}]")
        if self.n_points < 3:
            raise ValidationError(f"grid needs n_points >= 3, got {self.n_points}")
        object.__setattr__(self, "spacing", (self.right - self.left) / (self.n_points - 1))

    @cached_property
    def points(self) -> np.ndarray:
        pts = np.linspace(self.left, self.right, self.n_points)
        pts.flags.writeable = False
        return pts


@dataclass(frozen=True)
class Profile:
    """A function sampled on a Grid1D."""

    grid: Grid1D
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != (self.grid.n_points,):
            raise ValidationError(
                f"profile has {vals.shape} values for a {self.grid.n_points}-point grid")
        if not np.all(np.isfinite(vals)):
            raise ValidationError("profile values must all be finite")
        vals = vals.copy()
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    def derivative_left(self) -> float:
        """One-sided derivative estimate at the left endpoint (4th order)."""
        return one_sided_derivative(self.values, self.grid.spacing, side="left")

    def derivative_right(self) -> float:
        """One-sided derivative estimate at the right endpoint (4th order)."""
        return one_sided_derivative(self.values, self.grid.spacing, side="right")


@dataclass(frozen=True)
class RootBracket:
    """Sign-changing bracket for a scalar root."""

    lo: float
    hi: float
    f_lo: float
    f_hi: float

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValidationError(f"bracket needs lo < hi, got [{self.lo}, {self.hi}]")
        if self.f_lo * self.f_hi > 0:
            raise NoSignChange(
                f"f({self.lo})={self.f_lo} and f({self.hi})={self.f_hi} have the same sign")


@dataclass(frozen=True)
class IvpResult:
    """Accepted-step samples of an IVP solution plus the terminal state."""

    t: np.ndarray
    y: np.ndarray  # shape (len(t), m)
    terminal: np.ndarray


# ---------------------------------------------------------------------------
# adaptive Runge-Kutta integration (Cash-Karp 5(4) with PI step control)
# ---------------------------------------------------------------------------

# Cash-Karp tableau
_CK_A = (
    (0.2,),
    (3.0 / 40.0, 9.0 / 40.0),
    (0.3, -0.9, 1.2),
    (-11.0 / 54.0, 2.5, -70.0 / 27.0, 35.0 / 27.0),
    (1631.0 / 55296.0, 175.0 / 512.0, 575.0 / 13824.0, 44275.0 / 110592.0, 253.0 / 4096.0),
)
_CK_B5 = (37.0 / 378.0, 0.0, 250.0 / 621.0, 125.0 / 594.0, 0.0, 512.0 / 1771.0)
_CK_B4 = (2825.0 / 27648.0, 0.0, 18575.0 / 48384.0, 13525.0 / 55296.0, 277.0 / 14336.0, 0.25)
_CK_C = (0.0, 0.2, 0.3, 0.6, 1.0, 0.875)

# PI controller exponents for an order-5/4 pair
_PI_BETA = 0.08
_PI_ALPHA = 0.2 - 0.75 * _PI_BETA


def integrate_ivp(
    rhs: Callable[[float, np.ndarray], Sequence[float]],
    y0: Sequence[float],
    span: tuple[float, float],
    tol: float = DEFAULT_IVP_TOL,
    max_step: float = math.inf,
    t_eval: Sequence[float] | None = None,
) -> IvpResult:
    """Integrate y' = rhs(t, y) over span with local error per step <= tol.

    Embedded Cash-Karp 5(4) pair with PI step-size control. The returned
    samples are the accepted steps, or exactly ``t_eval`` when given (steps
    are then clamped to land on every requested time). Deterministic for
    identical inputs.

    Raises StepUnderflow when the step collapses below 1e-12 of the span
    (the usual signature of finite-time blow-up) and NonFiniteRhs when the
    field returns NaN/inf.
    """
    t0, t1 = float(span[0]), float(span[1])
    if not (math.isfinite(t0) and math.isfinite(t1)) or t0 == t1:
        raise ValidationError(f"degenerate span {span}")
    if not tol > 0:
        raise ValidationError("tol must be positive")
    if t1 < t0:
        raise ValidationError("backward spans are not supported; negate the field instead")

    y = np.asarray(y0, dtype=float).copy()
    if y.ndim != 1:
        raise ValidationError("y0 must be one-dimensional")

    eval_times = None
    if t_eval is not None:
        eval_times = np.asarray(t_eval, dtype=float)
        if eval_times.ndim != 1 or np.any(np.diff(eval_times) <= 0):
            raise ValidationError("t_eval must be strictly increasing")
        if eval_times[0] < t0 - 1e-14 or eval_times[-1] > t1 + 1e-14:
            raise ValidationError("t_eval must lie inside span")

    span_len = t1 - t0
    h_min = span_len * 1e-12
    h = min(span_len / 100.0, max_step)

    def eval_rhs(t, yv):
        f = np.asarray(rhs(t, yv), dtype=float)
        if not np.all(np.isfinite(f)):
            raise NonFiniteRhs(f"rhs returned non-finite values at t={t}")
        return f

    ts = [t0]
    ys = [y.copy()]
    out_t: list[float] = []
    out_y: list[np.ndarray] = []
    next_eval = 0
    if eval_times is not None:
        while next_eval < len(eval_times) and eval_times[next_eval] <= t0 + 1e-14:
            out_t.append(float(eval_times[next_eval]))
            out_y.append(y.copy())
            next_eval += 1
    t = t0
    err_prev = 1e-4
    k = [np.zeros_like(y) for _ in range(6)]

    while t < t1:
        h = min(h, max_step, t1 - t)
        if eval_times is not None and next_eval < len(eval_times):
            gap = eval_times[next_eval] - t
            if gap > 1e-14:
                h = min(h, gap)
        k[0] = eval_rhs(t, y)
        for s in range(1, 6):
            ys_stage = y + h * sum(a * k[j] for j, a in enumerate(_CK_A[s - 1]))
            k[s] = eval_rhs(t + _CK_C[s] * h, ys_stage)
        y5 = y + h * sum(b * k[j] for j, b in enumerate(_CK_B5) if b)
        y4 = y + h * sum(b * k[j] for j, b in enumerate(_CK_B4) if b)
        scale = tol * (1.0 + np.abs(y5))
        err = float(np.max(np.abs(y5 - y4) / scale))
        if err <= 1.0:
            t += h
            y = y5
            ts.append(t)
            ys.append(y.copy())
            if eval_times is not None:
                while next_eval < len(eval_times) and eval_times[next_eval] <= t + 1e-14:
                    out_t.append(float(eval_times[next_eval]))
                    out_y.append(y.copy())
                    next_eval += 1
            err = max(err, 1e-30)
            fac = 0.9 * err ** (-_PI_ALPHA) * err_prev ** _PI_BETA
            err_prev = err
            fac = min(fac, 5.0)
        else:
            fac = max(0.9 * err ** (-_PI_ALPHA), 0.2)
        h *= max(fac, 0.2)
        if h < h_min and t < t1:
            raise StepUnderflow(
                f"step fell below {h_min:.3e} at t={t:.6g} (possible blow-up)")

    if eval_times is not None:
        t_arr = np.array(out_t)
        y_arr = np.array(out_y)
    else:
        t_arr = np.array(ts)
        y_arr = np.array(ys)
    return IvpResult(t=t_arr, y=y_arr, terminal=y.copy())


# ---------------------------------------------------------------------------
# scalar root bracketing
# ---------------------------------------------------------------------------

def bisect_root(
    f: Callable[[float], float],
    bracket: RootBracket,
    x_tol: float = DEFAULT_X_TOL,
    f_tol: float = DEFAULT_F_TOL,
) -> float:
    """Bisect a continuous f inside the bracket.

    Returns x with |f(x)| <= f_tol or bracket width <= x_tol. Only ever
    evaluates f at midpoints of the current bracket.
    """
    lo, hi = bracket.lo, bracket.hi
    f_lo = bracket.f_lo
    if f_lo == 0.0:
        return lo
    if bracket.f_hi == 0.0:
        return hi
    lo_negative = f_lo < 0.0
    while hi - lo > x_tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break  # float resolution reached
        f_mid = f(mid)
        if abs(f_mid) <= f_tol:
            return mid
        # compare signs, not the product: products of tiny values underflow
        if (f_mid < 0.0) != lo_negative:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


# ---------------------------------------------------------------------------
# tridiagonal solves (Thomas elimination)
# ---------------------------------------------------------------------------

@njit(cache=True, nogil=True)
def _thomas_kernel(sub, diag, sup, rhs, out, work):  # pragma: no cover - jitted
    n = diag.shape[0]
    work[0] = diag[0]
    out[0] = rhs[0]
    for i in range(1, n):
        piv = work[i - 1]
        if abs(piv) <= 1e-14:
            return i - 1
        m = sub[i - 1] / piv
        work[i] = diag[i] - m * sup[i - 1]
        out[i] = rhs[i] - m * out[i - 1]
    piv = work[n - 1]
    if abs(piv) <= 1e-14:
        return n - 1
    out[n - 1] = out[n - 1] / piv
    for i in range(n - 2, -1, -1):
        out[i] = (out[i] - sup[i] * out[i + 1]) / work[i]
    return -1


def solve_tridiagonal(
    sub: Sequence[float],
    diag: Sequence[float],
    sup: Sequence[float],
    rhs: Sequence[float],
) -> np.ndarray:
    """Solve the tridiagonal system (sub, diag, sup) x = rhs by Thomas elimination.

    Raises SingularPivot when an elimination pivot drops to 1e-14 or below.
    """
    diag = np.ascontiguousarray(diag, dtype=float)
    sub = np.ascontiguousarray(sub, dtype=float)
    sup = np.ascontiguousarray(sup, dtype=float)
    rhs = np.ascontiguousarray(rhs, dtype=float)
    n = diag.shape[0]
    if sub.shape != (n - 1,) or sup.shape != (n - 1,) or rhs.shape != (n,):
        raise ValidationError(
            f"inconsistent tridiagonal shapes: sub {sub.shape}, diag {diag.shape}, "
            f"sup {sup.shape}, rhs {rhs.shape}")
    out = np.empty(n)
    work = np.empty(n)
    bad = _thomas_kernel(sub, diag, sup, rhs, out, work)
    if bad >= 0:
        raise SingularPivot(f"pivot magnitude <= 1e-14 at row {bad}")
    return out


# ---------------------------------------------------------------------------
# finite differences
# ---------------------------------------------------------------------------

# 4th-order one-sided first-derivative stencil (5 points).
_ONESIDED5 = np.array([-25.0 / 12.0, 4.0, -3.0, 4.0 / 3.0, -0.25])


def one_sided_derivative(values: np.ndarray, spacing: float, side: str) -> float:
    """4th-order one-sided first derivative at an endpoint of a uniform grid."""
    v = np.asarray(values, dtype=float)
    if v.shape[0] < 5:
        raise ValidationError("one-sided 4th-order stencil needs at least 5 points")
    if side == "left":
        return float(_ONESIDED5 @ v[:5]) / spacing
    if side == "right":
        return -float(_ONESIDED5 @ v[-1:-6:-1]) / spacing
    raise ValidationError(f"side must be 'left' or 'right', got {side!r}")


def second_difference_residual(values: np.ndarray, spacing: float) -> np.ndarray:
    """Centered second derivative at interior nodes of a uniform grid."""
    v = np.asarray(values, dtype=float)
    return (v[:-2] - 2.0 * v[1:-1] + v[2:]) / spacing ** 2


def centered_first_difference(values: np.ndarray, spacing: float) -> np.ndarray:
    """Centered first derivative at interior nodes of a uniform grid."""
    v = np.asarray(values, dtype=float)
    return (v[2:] - v[:-2]) / (2.0 * spacing)
