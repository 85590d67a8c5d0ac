"""Infinite-competition limit: the interface relation, its unique root c_inf,
and the segregated limit profiles.

The limit wave is fully determined by the scalar relation

    alpha * gamma(-c) = sqrt(r d) * gamma(c / sqrt(r d)),

whose left side is decreasing and right side increasing in c, so the root is
unique. Its sign flips exactly at d = alpha^2 / r: below the threshold the
fast-reaction species invades (c > 0), above it the fast-diffusion species
does (c < 0).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import halfline
from .errors import (
    BracketFailure,
    DomainViolation,
    ExistenceViolation,
    SolverError,
    ValidationError,
)
from .numerics import Grid1D, Profile

BRACKET_MARGIN = 1e-6   # gamma is undefined at argument -2; c never attains the endpoints
RESIDUAL_TOL = 1e-8
C_TOL = 1e-8
STANDOFF_TOL = 1e-9
INTERFACE_TOL = 1e-6


@dataclass(frozen=True)
class LimitParams:
    """Nondimensional triple: interspecific ratio, growth ratio, diffusion ratio."""

    alpha: float
    r: float
    d: float

    def __post_init__(self):
        for name in ("alpha", "r", "d"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ValidationError(f"{name} must be positive and finite, got {v}")

    @property
    def threshold(self) -> float:
        return self.alpha ** 2 / self.r

    @property
    def sqrt_rd(self) -> float:
        return math.sqrt(self.r * self.d)


class InvaderTag(enum.Enum):
    UInvades = "u-invades"
    VInvades = "v-invades"
    Standoff = "standoff"


@dataclass(frozen=True)
class InvaderVerdict:
    """Which species wins, the limit speed, and the diffusion threshold alpha^2/r."""

    tag: InvaderTag
    c: float
    threshold: float


@dataclass(frozen=True)
class LimitWave:
    """Segregated limit profiles: u on the left half-line, v on the right."""

    params: LimitParams
    c: float
    u_profile: Profile
    v_profile: Profile
    interface_residual: float


def interface_relation_residual(c: float, params: LimitParams, **gamma_opts) -> float:
    """alpha*gamma(-c) - sqrt(rd)*gamma(c/sqrt(rd)); strictly decreasing in c."""
    srd = params.sqrt_rd
    left_arg = -c
    right_arg = c / srd
    if left_arg <= -2.0 or right_arg <= -2.0:
        raise DomainViolation(
            f"gamma argument out of range at c={c} (needs c in (-2*sqrt(rd), 2))")
    return (params.alpha * halfline.gamma(left_arg, **gamma_opts)
            - srd * halfline.gamma(right_arg, **gamma_opts))


def _endpoint_sign(c: float, params: LimitParams, which: str) -> float:
    """Residual sign at a bracket endpoint, robust to degenerate gamma.

    Near an endpoint one gamma argument approaches -2 where the slope search
    is hopeless; the failed undershoot-witness search certifies
    gamma < SLOPE_FLOOR there, which bounds the residual sign rigorously.
    """
    try:
        return interface_relation_residual(c, params)
    except ExistenceViolation as exc:
        if exc.reason != "no-undershoot-witness":
            raise
        srd = params.sqrt_rd
        if which == "left":
            return params.alpha * halfline.gamma(-c) - srd * halfline.SLOPE_FLOOR
        return params.alpha * halfline.SLOPE_FLOOR - srd * halfline.gamma(c / srd)


def solve_limit_speed(params: LimitParams, c_tol: float = C_TOL) -> float:
    """Unique root of the interface relation, by bisection.

    The bracket is (-2*sqrt(rd) + delta, 2 - delta); endpoint signs are
    verified (+ at the left, - at the right) before bisecting. The returned
    c satisfies |residual| <= 1e-8.
    """
    if not c_tol > 0:
        raise ValidationError("c_tol must be positive")
    srd = params.sqrt_rd
    lo = -2.0 * srd + BRACKET_MARGIN
    hi = 2.0 - BRACKET_MARGIN
    r_lo = _endpoint_sign(lo, params, "left")
    r_hi = _endpoint_sign(hi, params, "right")
    if not (r_lo > 0 and r_hi < 0):
        raise BracketFailure(
            f"endpoint residuals do not oppose: R({lo:.6g})={r_lo:.3e}, "
            f"R({hi:.6g})={r_hi:.3e} (gamma solver fault)")
    mid = 0.5 * (lo + hi)
    r_mid = interface_relation_residual(mid, params)
    while (hi - lo > c_tol) or (abs(r_mid) > RESIDUAL_TOL and hi - lo > 1e-13):
        if r_mid > 0:
            lo = mid
        else:
            hi = mid
        mid = 0.5 * (lo + hi)
        r_mid = interface_relation_residual(mid, params)
    if abs(r_mid) > RESIDUAL_TOL:
        raise BracketFailure(
            f"bisection stalled with residual {r_mid:.3e} at c={mid}")
    return mid


def classify_invader(params: LimitParams, c_tol: float = 1e-10) -> InvaderVerdict:
    """Invasion verdict: sign of c_inf against the threshold d = alpha^2/r."""
    c = solve_limit_speed(params, c_tol=c_tol)
    if c > STANDOFF_TOL:
        tag = InvaderTag.UInvades
    elif c < -STANDOFF_TOL:
        tag = InvaderTag.VInvades
    else:
        tag = InvaderTag.Standoff
    return InvaderVerdict(tag=tag, c=c, threshold=params.threshold)


def build_limit_profiles(params: LimitParams, c: float, *,
                         length: float = halfline.LENGTH) -> LimitWave:
    """Reconstruct the segregated limit wave at a solved speed c.

    u(xi) = y_{-c}(-xi) on [-L, 0]; v(xi) = y_{c/sqrt(rd)}(sqrt(r/d) xi) on
    [0, L*sqrt(d/r)] (the slow-diffusion side is stretched so its own decay
    scale stays resolved). The interface condition alpha*u'(0-) + d*v'(0+) = 0
    is measured with 4th-order one-sided stencils.
    """
    resid = interface_relation_residual(c, params)
    if abs(resid) > 10 * RESIDUAL_TOL:
        raise ValidationError(
            f"c={c} does not solve the interface relation (residual {resid:.2e})")
    srd = params.sqrt_rd
    scale = math.sqrt(params.d / params.r)

    u_half = halfline.solve_halfline(halfline.HalfLineProblem(-c, domain_length=length))
    v_half = halfline.solve_halfline(halfline.HalfLineProblem(c / srd, domain_length=length))

    u_grid = Grid1D(-length, 0.0, u_half.profile.grid.n_points)
    u_profile = Profile(u_grid, u_half.profile.values[::-1])

    v_grid = Grid1D(0.0, length * scale, v_half.profile.grid.n_points)
    v_profile = Profile(v_grid, v_half.profile.values)

    du = u_profile.derivative_right()   # u'(0-)
    dv = v_profile.derivative_left()    # v'(0+)
    interface_residual = abs(params.alpha * du + params.d * dv)

    wave = LimitWave(params=params, c=c, u_profile=u_profile, v_profile=v_profile,
                     interface_residual=interface_residual)
    _check_limit_wave(wave)
    return wave


def _check_limit_wave(wave: LimitWave) -> None:
    c = wave.c
    srd = wave.params.sqrt_rd
    if not (-2.0 * srd < c < 2.0):
        raise SolverError(f"limit speed {c} escaped (-2*sqrt(rd), 2)")
    u = wave.u_profile.values
    v = wave.v_profile.values
    if abs(u[-1]) > 0 or abs(v[0]) > 0:
        raise SolverError("limit profiles must vanish at the interface")
    plateau = 1e-6
    du = np.diff(u)
    if np.any(du[u[:-1] < 1.0 - plateau] >= 0):
        raise SolverError("u must decrease toward the interface")
    dv = np.diff(v)
    if np.any(dv[v[1:] < 1.0 - plateau] <= 0):
        raise SolverError("v must increase away from the interface")
    if wave.interface_residual > INTERFACE_TOL:
        raise SolverError(
            f"interface residual {wave.interface_residual:.2e} exceeds {INTERFACE_TOL}")


def speed_invariance_check(alpha: float, r1: float, d1: float,
                           r2: float, d2: float) -> float:
    """|c(alpha, r1, d1) - c(alpha, r2, d2)| for equal products r*d.

    The interface relation depends on (alpha, r*d) only, so the two solves
    walk identical bisection paths and the difference is at rounding level.
    """
    if abs(r1 * d1 - r2 * d2) > 1e-12 * max(1.0, abs(r1 * d1)):
        raise ValidationError(f"products differ: {r1 * d1} vs {r2 * d2}")
    c1 = solve_limit_speed(LimitParams(alpha, r1, d1))
    c2 = solve_limit_speed(LimitParams(alpha, r2, d2))
    return abs(c1 - c2)
