"""Parameter ingestion, d-sweeps of the invasion speed, and flat-file export.

A sweep computes c_inf over a d grid (optionally c_k per k by continuation),
locates the sign-change abscissa by bisection on d, and writes a CSV plus a
JSON sidecar. Output is byte-stable for identical inputs; numbers carry 17
significant digits so they round-trip losslessly.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import limit, wave
from .errors import AssumptionViolation, CompwaveError, SolverError, ValidationError

TOOL_VERSION = "0.1.0"
SIGN_CHANGE_D_TOL = 1e-8
REFINE_C_TOL = 1e-10


@dataclass(frozen=True)
class RawEcologicalParams:
    """The eight dimensional parameters of the two-species system."""

    d1: float
    d2: float
    r1: float
    r2: float
    a1: float
    a2: float
    k1: float
    k2: float

    def __post_init__(self):
        for name in ("d1", "d2", "r1", "r2", "a1", "a2", "k1", "k2"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ValidationError(f"{name} must be positive and finite, got {v}")


def rescale_parameters(raw: RawEcologicalParams) -> tuple[float, float, float, float]:
    """Nondimensionalize to (k, alpha, d, r).

    k = k1 r2 / (a2 r1), alpha = k2 a2 r1 / (k1 a1 r2), d = d2/d1, r = r2/r1.
    Requires k2 a2 / r2^2 >= k1 a1 / r1^2 (equivalently alpha/r >= 1); callers
    must swap species labels otherwise.
    """
    if raw.k2 * raw.a2 / raw.r2 ** 2 < raw.k1 * raw.a1 / raw.r1 ** 2:
        raise AssumptionViolation(
            "species ordering violated: k2*a2/r2^2 < k1*a1/r1^2 (swap the labels)")
    k = raw.k1 * raw.r2 / (raw.a2 * raw.r1)
    alpha = raw.k2 * raw.a2 * raw.r1 / (raw.k1 * raw.a1 * raw.r2)
    d = raw.d2 / raw.d1
    r = raw.r2 / raw.r1
    if alpha / r < 1.0 - 1e-12:
        raise AssumptionViolation(f"derived alpha/r = {alpha / r} < 1")
    if k > 1.0 and not alpha * k / r > 1.0:
        raise AssumptionViolation("derived alpha*k/r <= 1 despite k > 1")
    return k, alpha, d, r


@dataclass(frozen=True)
class SweepSpec:
    """One d-sweep: fixed (alpha, r), a sorted d grid, optional k column list."""

    alpha: float
    r: float
    d_grid: tuple[float, ...]
    k_list: tuple[float, ...] | None = None
    output_path: str = "sweep.csv"

    def __post_init__(self):
        if not (self.alpha > 0 and self.r > 0):
            raise ValidationError("alpha and r must be positive")
        d = np.asarray(self.d_grid, dtype=float)
        if len(d) < 2 or np.any(np.diff(d) <= 0):
            raise ValidationError("d_grid must be strictly increasing with >= 2 points")
        if np.any(d <= 0):
            raise ValidationError("d_grid entries must be positive")
        object.__setattr__(self, "d_grid", tuple(float(x) for x in d))
        if self.k_list is not None:
            ks = tuple(float(k) for k in self.k_list)
            if any(k <= 1 for k in ks):
                raise ValidationError("k_list entries must exceed 1")
            object.__setattr__(self, "k_list", ks)


@dataclass(frozen=True)
class SpeedCurve:
    """Sampled d -> c_inf map with the located sign-change abscissa."""

    alpha: float
    r: float
    d_values: np.ndarray
    c_inf: np.ndarray
    c_k_columns: dict[float, np.ndarray] | None
    sign_change_d: float | None
    predicted_threshold: float
    diagnostics: tuple[str, ...] = field(default_factory=tuple)


def _continuation_schedule(k_target: float) -> list[float]:
    """Ramp from k = 10 to the target growing by at most 10x per step."""
    if k_target <= 20.0:
        return [k_target]
    schedule = [10.0]
    while schedule[-1] * 10.0 < k_target:
        schedule.append(schedule[-1] * 10.0)
    schedule.append(k_target)
    return schedule


def _solve_point(alpha: float, r: float, d: float) -> float:
    return limit.solve_limit_speed(limit.LimitParams(alpha, r, d))


def _refine_sign_change(alpha: float, r: float, d_lo: float, d_hi: float) -> float:
    """Bisect d between opposite-sign c_inf values down to SIGN_CHANGE_D_TOL."""
    c_lo = limit.solve_limit_speed(limit.LimitParams(alpha, r, d_lo), c_tol=REFINE_C_TOL)
    c_hi = limit.solve_limit_speed(limit.LimitParams(alpha, r, d_hi), c_tol=REFINE_C_TOL)
    if not (c_lo > 0 > c_hi):
        raise SolverError(
            f"sign-change bracket invalid: c({d_lo})={c_lo}, c({d_hi})={c_hi}")
    while d_hi - d_lo > SIGN_CHANGE_D_TOL:
        mid = 0.5 * (d_lo + d_hi)
        c_mid = limit.solve_limit_speed(limit.LimitParams(alpha, r, mid),
                                        c_tol=REFINE_C_TOL)
        if c_mid > 0:
            d_lo = mid
        else:
            d_hi = mid
    return 0.5 * (d_lo + d_hi)


def run_sweep(spec: SweepSpec, threads: int = 1) -> SpeedCurve:
    """Compute c_inf over the d grid, optional c_k columns, and the threshold.

    Per-point failures are recorded as NaN cells with a diagnostic note and
    never abort the sweep. Results are assembled in d order regardless of
    scheduling, so output is identical for any thread count.
    """
    ds = np.asarray(spec.d_grid)
    c_inf = np.full(len(ds), math.nan)
    diagnostics: list[str] = []

    def point(i: int) -> tuple[int, float | None, str | None]:
        try:
            return i, _solve_point(spec.alpha, spec.r, ds[i]), None
        except CompwaveError as exc:
            return i, None, f"d={ds[i]:.6g}: c_inf failed: {exc}"

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(point, range(len(ds))))
    else:
        results = [point(i) for i in range(len(ds))]
    for i, value, note in results:
        if note is not None:
            diagnostics.append(note)
        else:
            c_inf[i] = value

    c_k_columns: dict[float, np.ndarray] | None = None
    if spec.k_list:
        c_k_columns = {k: np.full(len(ds), math.nan) for k in spec.k_list}
        for i, d in enumerate(ds):
            for k in spec.k_list:
                try:
                    schedule = _continuation_schedule(k)
                    report = wave.continue_in_k(
                        wave.SystemParams(schedule[0], spec.alpha, spec.r, d), schedule)
                    c_k_columns[k][i] = report.c_values[-1]
                except CompwaveError as exc:
                    diagnostics.append(f"d={d:.6g}, k={k:.6g}: c_k failed: {exc}")

    sign_change_d = None
    finite = np.isfinite(c_inf)
    for i in range(len(ds) - 1):
        if finite[i] and finite[i + 1] and c_inf[i] > 0 > c_inf[i + 1]:
            try:
                sign_change_d = _refine_sign_change(spec.alpha, spec.r, ds[i], ds[i + 1])
            except CompwaveError as exc:
                diagnostics.append(f"sign-change refinement failed: {exc}")
            break
    # exact standoff on a grid point
    if sign_change_d is None:
        for i, c in enumerate(c_inf):
            if finite[i] and abs(c) <= limit.STANDOFF_TOL:
                sign_change_d = float(ds[i])
                break

    return SpeedCurve(alpha=spec.alpha, r=spec.r, d_values=ds.copy(), c_inf=c_inf,
                      c_k_columns=c_k_columns, sign_change_d=sign_change_d,
                      predicted_threshold=spec.alpha ** 2 / spec.r,
                      diagnostics=tuple(diagnostics))


def _fmt(x: float) -> str:
    """17 significant digits: lossless float round trip."""
    return format(float(x), ".17g")


def emit_report(curve: SpeedCurve, path: str | Path) -> None:
    """Write the curve as CSV plus a JSON sidecar next to it.

    Missing cells become empty fields (never NaN text). Byte-stable for
    identical curves.
    """
    path = Path(path)
    k_keys = sorted(curve.c_k_columns) if curve.c_k_columns else []
    header = ["d", "c_inf"] + [f"c_k_{k:g}" for k in k_keys]
    if curve.diagnostics:
        header.append("diagnostics")
    lines = [",".join(header)]
    notes_by_row: dict[int, list[str]] = {}
    for note in curve.diagnostics:
        for i, d in enumerate(curve.d_values):
            if note.startswith(f"d={d:.6g}"):
                notes_by_row.setdefault(i, []).append(note)
                break
    for i, d in enumerate(curve.d_values):
        cells = [_fmt(d)]
        cells.append(_fmt(curve.c_inf[i]) if math.isfinite(curve.c_inf[i]) else "")
        for k in k_keys:
            val = curve.c_k_columns[k][i]
            cells.append(_fmt(val) if math.isfinite(val) else "")
        if curve.diagnostics:
            cells.append("; ".join(notes_by_row.get(i, [])).replace(",", ";"))
        lines.append(",".join(cells))
    sidecar = {
        "alpha": curve.alpha,
        "r": curve.r,
        "threshold": curve.predicted_threshold,
        "sign_change_d": curve.sign_change_d,
        "tool_version": TOOL_VERSION,
    }
    try:
        path.write_text("\n".join(lines) + "\n")
        path.with_suffix(".json").write_text(
            json.dumps(sidecar, indent=2, sort_keys=True) + "\n")
    except OSError as exc:
        raise CompwaveError(f"cannot write report to {path}: {exc}") from exc


def read_report(path: str | Path) -> SpeedCurve:
    """Parse a CSV written by emit_report back into a SpeedCurve."""
    path = Path(path)
    try:
        text = path.read_text()
        sidecar = json.loads(path.with_suffix(".json").read_text())
    except OSError as exc:
        raise CompwaveError(f"cannot read report from {path}: {exc}") from exc
    lines = [ln for ln in text.splitlines() if ln]
    header = lines[0].split(",")
    has_diag = header[-1] == "diagnostics"
    value_cols = header[2:-1] if has_diag else header[2:]
    k_keys = [float(name[len("c_k_"):]) for name in value_cols]
    ds, cs = [], []
    per_k: dict[float, list[float]] = {k: [] for k in k_keys}
    diagnostics: list[str] = []
    for line in lines[1:]:
        cells = line.split(",")
        ds.append(float(cells[0]))
        cs.append(float(cells[1]) if cells[1] else math.nan)
        for k, cell in zip(k_keys, cells[2:2 + len(k_keys)]):
            per_k[k].append(float(cell) if cell else math.nan)
        if has_diag and cells[-1]:
            diagnostics.append(cells[-1])
    return SpeedCurve(
        alpha=float(sidecar["alpha"]),
        r=float(sidecar["r"]),
        d_values=np.asarray(ds),
        c_inf=np.asarray(cs),
        c_k_columns={k: np.asarray(v) for k, v in per_k.items()} or None,
        sign_change_d=sidecar["sign_change_d"],
        predicted_threshold=float(sidecar["threshold"]),
        diagnostics=tuple(diagnostics),
    )
