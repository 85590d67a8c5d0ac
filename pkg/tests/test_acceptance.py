"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Run with `pytest -s tests/test_acceptance.py` to see the lines as they land.
Timings assume warm JIT caches (the session fixture in conftest warms them).
"""

import math
import time

import numpy as np

from compwave import halfline, limit, pde, sweep, wave

SQRT3_INV = 1.0 / math.sqrt(3.0)


def _report(num: int, name: str, ok: bool, detail: str) -> None:
    status = "PASS" if ok else "FAIL"
    print(f"[acceptance] criterion {num:02d} {status} {name}: {detail}")
    assert ok, f"criterion {num} ({name}): {detail}"


def test_01_gamma_oracle():
    t0 = time.perf_counter()
    g = halfline.gamma(0.0)
    elapsed = time.perf_counter() - t0
    err = abs(g - SQRT3_INV)
    ok = err <= 1e-6 and elapsed < 1.0
    _report(1, "gamma closed form at c=0", ok,
            f"|gamma(0) - 3^-1/2| = {err:.2e} (tol 1e-6), {elapsed:.3f}s < 1s")


def test_02_gamma_monotonicity():
    t0 = time.perf_counter()
    cs = np.linspace(-1.9, 4.0, 60)
    gs = np.array([halfline.gamma(float(c)) for c in cs])
    elapsed = time.perf_counter() - t0
    margins = np.diff(gs)
    ok = bool(np.all(margins > 1e-5)) and elapsed < 30.0
    _report(2, "gamma strictly increasing on [-1.9, 4]", ok,
            f"60 samples, min increment {margins.min():.2e} > 1e-5, {elapsed:.1f}s < 30s")


def test_03_eigenvalue_cross_check():
    t0 = time.perf_counter()
    worst = 0.0
    for c in (0.0, 1.0, 3.0):
        for l in (math.pi, 2.0 * math.pi, 10.0):
            err = abs(halfline.principal_eigenvalue_numeric(c, l, 2000)
                      - halfline.eigenvalue_dirichlet(c, l))
            worst = max(worst, err)
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-4 and elapsed < 10.0
    _report(3, "discrete eigenvalue vs closed form", ok,
            f"worst |error| = {worst:.2e} (tol 1e-4) over 9 cases, {elapsed:.1f}s < 10s")


def test_04_standoff_at_threshold():
    t0 = time.perf_counter()
    pairs = [(0.6, 0.7), (0.6, 1.8), (0.9, 0.7), (0.9, 1.8), (1.2, 0.7),
             (1.2, 1.8), (1.7, 0.7), (1.7, 1.8), (2.3, 0.7), (2.3, 1.8)]
    worst = 0.0
    for alpha, r in pairs:
        c = limit.solve_limit_speed(limit.LimitParams(alpha, r, alpha ** 2 / r))
        worst = max(worst, abs(c))
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-7 and elapsed < 60.0
    _report(4, "standoff when d = alpha^2/r", ok,
            f"worst |c| = {worst:.2e} (tol 1e-7) over 10 pairs, {elapsed:.1f}s < 60s")


def test_05_trichotomy_and_bounds():
    t0 = time.perf_counter()
    alphas = (0.5, 0.75, 1.0, 1.5, 2.0)
    rs = (0.5, 0.75, 1.0, 1.5, 2.0)
    factors = (0.25, 0.5, 1.0, 2.0, 4.0)
    n_checked = 0
    sign_ok = True
    bounds_ok = True
    worst_standoff = 0.0
    for alpha in alphas:
        for r in rs:
            thr = alpha ** 2 / r
            for f in factors:
                d = thr * f
                c = limit.solve_limit_speed(limit.LimitParams(alpha, r, d))
                n_checked += 1
                if not (-2.0 * math.sqrt(r * d) < c < 2.0):
                    bounds_ok = False
                if f == 1.0:
                    worst_standoff = max(worst_standoff, abs(c))
                    if abs(c) > 1e-7:
                        sign_ok = False
                elif math.copysign(1.0, c) != math.copysign(1.0, thr - d):
                    sign_ok = False
    elapsed = time.perf_counter() - t0
    ok = sign_ok and bounds_ok and n_checked == 125 and elapsed < 300.0
    _report(5, "sign trichotomy + strict speed bounds", ok,
            f"{n_checked} points, standoff worst {worst_standoff:.1e}, "
            f"signs {'ok' if sign_ok else 'BAD'}, bounds {'ok' if bounds_ok else 'BAD'}, "
            f"{elapsed:.1f}s < 300s")


def test_06_interface_identity():
    t0 = time.perf_counter()
    cases = [(1.0, 1.0, 1.0), (1.0, 1.0, 4.0), (1.0, 1.0, 0.25), (2.0, 1.0, 4.0),
             (2.0, 1.0, 1.0), (0.5, 2.0, 0.125), (0.5, 0.5, 0.5), (1.5, 0.75, 3.0)]
    worst = 0.0
    for alpha, r, d in cases:
        params = limit.LimitParams(alpha, r, d)
        c = limit.solve_limit_speed(params)
        lw = limit.build_limit_profiles(params, c)
        worst = max(worst, lw.interface_residual)
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-6
    _report(6, "interface condition alpha*u'(0-) + d*v'(0+) = 0", ok,
            f"worst residual {worst:.2e} (tol 1e-6) over {len(cases)} waves, {elapsed:.1f}s")


def test_07_rd_invariance():
    t0 = time.perf_counter()
    cases = [(2.0, 1.0, 2.0, 2.0, 1.0), (1.0, 1.0, 1.0, 4.0, 0.25),
             (0.5, 2.0, 3.0, 6.0, 1.0), (1.5, 1.0, 0.8, 2.0, 0.4),
             (0.8, 0.5, 2.0, 1.0, 1.0), (1.2, 3.0, 1.0, 1.5, 2.0)]
    worst = 0.0
    for alpha, r1, d1, r2, d2 in cases:
        worst = max(worst, limit.speed_invariance_check(alpha, r1, d1, r2, d2))
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-7
    _report(7, "c depends on (alpha, r*d) only", ok,
            f"worst |c1 - c2| = {worst:.2e} (tol 1e-7) over 6 pairs, {elapsed:.1f}s")


def test_08_finite_k_symmetry():
    t0 = time.perf_counter()
    worst = 0.0
    for k in (10.0, 100.0, 1000.0):
        w = wave.solve_wave(wave.SystemParams(k, 1.0, 1.0, 1.0))
        worst = max(worst, abs(w.c))
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-8
    _report(8, "swap symmetry forces c_k = 0", ok,
            f"worst |c_k| = {worst:.2e} (tol 1e-8) at k in {{10,100,1000}}, {elapsed:.1f}s")


def test_09_convergence_in_k():
    t0 = time.perf_counter()
    schedule = [10.0, 100.0, 1000.0, 10000.0]
    all_ok = True
    details = []
    for d in (4.0, 0.25):
        rep = wave.continue_in_k(wave.SystemParams(10.0, 1.0, 1.0, d), schedule)
        gaps = np.abs(rep.c_values - rep.c_limit)
        segs = rep.segregation_values
        monotone_c = bool(np.all(np.diff(gaps) < 0))
        monotone_seg = bool(np.all(np.diff(segs) < 0))
        all_ok = all_ok and monotone_c and monotone_seg
        details.append(f"d={d}: gaps {np.array2string(gaps, precision=4)} "
                       f"segs {np.array2string(segs, precision=5)}")
    elapsed = time.perf_counter() - t0
    ok = all_ok and elapsed < 600.0
    _report(9, "monotone approach of c_k and segregation to the limit", ok,
            "; ".join(details) + f", {elapsed:.1f}s < 600s")


def test_10_speed_bounds_at_every_k():
    t0 = time.perf_counter()
    ok = True
    worst_margin = math.inf
    for (k, alpha, r, d) in [(10.0, 1.0, 1.0, 1.0), (100.0, 1.0, 1.0, 4.0),
                             (1000.0, 1.0, 1.0, 4.0), (100.0, 1.0, 1.0, 0.25),
                             (50.0, 2.0, 1.0, 1.0), (50.0, 0.5, 2.0, 0.5),
                             (200.0, 1.0, 0.5, 2.0)]:
        w = wave.solve_wave(wave.SystemParams(k, alpha, r, d))
        lo = -2.0 * math.sqrt(r * d)
        margin = min(w.c - lo, 2.0 - w.c)
        worst_margin = min(worst_margin, margin)
        if not (lo < w.c < 2.0):
            ok = False
    elapsed = time.perf_counter() - t0
    _report(10, "every converged c_k strictly inside (-2*sqrt(rd), 2)", ok,
            f"smallest margin to a bound {worst_margin:.3f} over 7 solves, {elapsed:.1f}s")


def test_11_pde_extremal_speeds():
    t0 = time.perf_counter()
    params_u = wave.SystemParams(50.0, 1.0, 1.0, 1.0)
    state = pde.front_like_state(params_u, -100.0, 300.0, x0=-98.0, ramp=0.5,
                                 single="u")
    est_u = pde.measure_front_speed(state, params_u, 200.0)
    err_u = abs(est_u.fitted_speed - 2.0) / 2.0
    t1 = time.perf_counter()

    params_v = wave.SystemParams(50.0, 1.0, 1.0, 0.25)  # 2*sqrt(rd) = 1
    state = pde.front_like_state(params_v, -300.0, 100.0, x0=95.0, ramp=0.5,
                                 single="v")
    est_v = pde.measure_front_speed(state, params_v, 200.0, track="v")
    err_v = abs(abs(est_v.fitted_speed) - 1.0) / 1.0
    t2 = time.perf_counter()

    ok = err_u <= 0.05 and err_v <= 0.05 and (t1 - t0) < 120.0 and (t2 - t1) < 120.0
    _report(11, "single-species pulled fronts hit the KPP speeds", ok,
            f"u: {est_u.fitted_speed:.4f} vs 2 ({100 * err_u:.2f}%), "
            f"v: {est_v.fitted_speed:.4f} vs -1 ({100 * err_v:.2f}%), "
            f"tol 5%, {t1 - t0:.0f}s + {t2 - t1:.0f}s each < 120s")


def test_12_cross_solver_consistency():
    t0 = time.perf_counter()
    ok = True
    details = []
    for (alpha, r, d) in [(1.0, 1.0, 1.0), (1.0, 1.0, 0.25), (1.0, 1.0, 4.0),
                          (2.0, 1.0, 1.0)]:
        params = wave.SystemParams(50.0, alpha, r, d)
        w = wave.solve_wave(params)
        diff = pde.compare_with_wave(params, w, 80.0)
        tol = max(0.1, 0.1 * abs(w.c))
        details.append(f"(a={alpha},r={r},d={d}): |pde-c_k|={diff:.3f} tol={tol:.3f}")
        if diff > tol:
            ok = False
    elapsed = time.perf_counter() - t0
    _report(12, "PDE front speed vs c_k at k=50", ok,
            "; ".join(details) + f", {elapsed:.0f}s")


def test_13_sweep_threshold_location():
    t0 = time.perf_counter()
    ok = True
    details = []
    for alpha, r in [(1.0, 1.0), (2.0, 1.0), (2.0, 8.0)]:
        thr = alpha ** 2 / r
        spec = sweep.SweepSpec(alpha=alpha, r=r,
                               d_grid=tuple(np.geomspace(thr / 4.0, 4.0 * thr, 9)))
        curve = sweep.run_sweep(spec)
        err = abs(curve.sign_change_d - thr)
        details.append(f"(alpha={alpha},r={r}): |found-thr|={err:.2e}")
        if err > 1e-6:
            ok = False
    elapsed = time.perf_counter() - t0
    ok = ok and elapsed < 600.0
    _report(13, "sweep locates the sign change at alpha^2/r", ok,
            "; ".join(details) + f", {elapsed:.0f}s < 600s")
