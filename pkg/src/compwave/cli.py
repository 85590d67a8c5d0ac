"""Command-line front end.

Subcommands: gamma, limit-speed, wave, pde, sweep, rescale. A JSON config
file may supply any long-flag value (exact field names); explicit flags win.
Exit codes: 0 success, 2 validation error, 3 solver failure. There is no
--seed anywhere: nothing in the pipeline is randomized.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__, halfline, limit, pde, sweep, wave
from .errors import CompwaveError, SolverError, ValidationError


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ValidationError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ValidationError(f"config {path} must hold a JSON object")
    return data


def _pick(args, config: dict, name: str, required: bool = False):
    value = getattr(args, name.replace("-", "_"), None)
    if value is None:
        value = config.get(name)
    if value is None and required:
        raise ValidationError(f"missing required parameter --{name}")
    return value


def _cmd_gamma(args, config) -> int:
    length = float(_pick(args, config, "length") or halfline.LENGTH)
    tol = float(_pick(args, config, "tol") or halfline.SLOPE_TOL)
    if args.table:
        lo = args.from_ if args.from_ is not None else config.get("from")
        hi = _pick(args, config, "to", required=False)
        steps = _pick(args, config, "steps", required=False)
        if lo is None or hi is None or steps is None:
            raise ValidationError("--table needs --from, --to and --steps")
        lo, hi, steps = float(lo), float(hi), int(steps)
        lines = ["c,gamma"]
        for c in np.linspace(lo, hi, steps):
            g = halfline.gamma(float(c), length=length, slope_tol=tol)
            lines.append(f"{c:.17g},{g:.17g}")
        _emit("\n".join(lines) + "\n", args.out)
    else:
        c = _pick(args, config, "c", required=True)
        print(f"{halfline.gamma(float(c), length=length, slope_tol=tol):.12g}")
    return 0


def _cmd_limit_speed(args, config) -> int:
    params = limit.LimitParams(
        alpha=float(_pick(args, config, "alpha", required=True)),
        r=float(_pick(args, config, "r", required=True)),
        d=float(_pick(args, config, "d", required=True)),
    )
    c_tol = float(_pick(args, config, "ctol") or limit.C_TOL)
    verdict = limit.classify_invader(params, c_tol=min(c_tol, 1e-10))
    print(f"c_inf={verdict.c:.12g} verdict={verdict.tag.value} "
          f"threshold={verdict.threshold:.12g}")
    if args.profiles:
        wave_ = limit.build_limit_profiles(params, verdict.c)
        lines = ["xi,u,v"]
        for x, u in zip(wave_.u_profile.grid.points, wave_.u_profile.values):
            lines.append(f"{x:.17g},{u:.17g},0")
        for x, v in zip(wave_.v_profile.grid.points[1:], wave_.v_profile.values[1:]):
            lines.append(f"{x:.17g},0,{v:.17g}")
        Path(args.profiles).write_text("\n".join(lines) + "\n")
    return 0


def _parse_norm(name: str) -> wave.Normalization:
    table = {"cross": wave.Normalization.Cross, "uhalf": wave.Normalization.UHalf,
             "vhalf": wave.Normalization.VHalf}
    if name not in table:
        raise ValidationError(f"unknown normalization {name!r}")
    return table[name]


def _cmd_wave(args, config) -> int:
    alpha = float(_pick(args, config, "alpha", required=True))
    r = float(_pick(args, config, "r", required=True))
    d = float(_pick(args, config, "d", required=True))
    norm = _parse_norm(str(_pick(args, config, "norm") or "cross"))
    if args.continue_:
        ks_raw = _pick(args, config, "ks", required=True)
        ks = [float(x) for x in (ks_raw.split(",") if isinstance(ks_raw, str) else ks_raw)]
        report = wave.continue_in_k(wave.SystemParams(ks[0], alpha, r, d), ks, norm)
        lines = ["k,c_k,segregation,abs(c_k-c_inf)"]
        for k, c, s in zip(report.k_values, report.c_values, report.segregation_values):
            lines.append(f"{k:.17g},{c:.17g},{s:.17g},{abs(c - report.c_limit):.17g}")
        _emit("\n".join(lines) + "\n", args.out)
        return 0
    k = float(_pick(args, config, "k", required=True))
    params = wave.SystemParams(k, alpha, r, d)
    if k > 20.0:
        schedule = sweep._continuation_schedule(k)
        report_params = wave.SystemParams(schedule[0], alpha, r, d)
        solved = _continue_to(report_params, schedule, norm)
    else:
        solved = wave.solve_wave(params, normalization=norm)
    lines = [f"# c={solved.c:.17g} residual={solved.residual_norm:.17g}", "xi,u,v"]
    for x, u, v in zip(solved.u.grid.points, solved.u.values, solved.v.values):
        lines.append(f"{x:.17g},{u:.17g},{v:.17g}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def _continue_to(base: wave.SystemParams, schedule, norm) -> wave.TravellingWave:
    prev = None
    for k in schedule:
        p_k = wave.SystemParams(k, base.alpha, base.r, base.d)
        grid = wave.default_grid(p_k)
        if prev is None:
            guess = wave.seed_wave(p_k, grid, norm)
        else:
            guess = replace(wave.interpolate_wave(prev, grid), params=p_k)
        prev = wave.solve_wave(p_k, guess, norm)
    return prev


def _cmd_pde(args, config) -> int:
    k = float(_pick(args, config, "k", required=True))
    alpha = float(_pick(args, config, "alpha", required=True))
    r = float(_pick(args, config, "r", required=True))
    d = float(_pick(args, config, "d", required=True))
    t_end = float(_pick(args, config, "tend", required=True))
    dx = float(_pick(args, config, "dx") or pde.DEFAULT_DX)
    dt = float(_pick(args, config, "dt") or pde.DEFAULT_DT)
    params = wave.SystemParams(k, alpha, r, d)
    margin = 20.0 + 2.0 * max(1.0, params.sqrt_rd) * t_end
    state = pde.front_like_state(params, -margin, margin, dx=dx)
    snapshots: list[str] = []
    if args.snapshot_every:
        every = float(args.snapshot_every)
        stepper_state = state
        t = 0.0
        snapshots.append("t,xi,u,v")
        while t < t_end - 1e-9:
            for x, u, v in zip(stepper_state.grid.points[::10],
                               stepper_state.u[::10], stepper_state.v[::10]):
                snapshots.append(f"{t:.17g},{x:.17g},{u:.17g},{v:.17g}")
            n_steps = int(round(every / dt))
            for _ in range(n_steps):
                stepper_state = pde.step(stepper_state, dt, params)
            t += every
    est = pde.measure_front_speed(state, params, t_end, dt=dt)
    if args.snapshot_every and args.out:
        Path(args.out).write_text("\n".join(snapshots) + "\n")
    print(f"speed={est.fitted_speed:.12g} residual={est.fit_residual:.12g}")
    return 0


def _cmd_sweep(args, config) -> int:
    d_grid = _pick(args, config, "d_grid")
    if d_grid is None:
        lo = float(_pick(args, config, "d-from", required=True))
        hi = float(_pick(args, config, "d-to", required=True))
        n = int(_pick(args, config, "d-steps", required=True))
        d_grid = np.geomspace(lo, hi, n).tolist()
    k_list = _pick(args, config, "k_list")
    if isinstance(k_list, str):
        k_list = [float(x) for x in k_list.split(",")]
    out = args.out or config.get("output_path") or "sweep.csv"
    spec = sweep.SweepSpec(
        alpha=float(_pick(args, config, "alpha", required=True)),
        r=float(_pick(args, config, "r", required=True)),
        d_grid=tuple(float(x) for x in d_grid),
        k_list=tuple(k_list) if k_list else None,
        output_path=str(out),
    )
    curve = sweep.run_sweep(spec, threads=int(args.threads or 1))
    sweep.emit_report(curve, spec.output_path)
    sc = "none" if curve.sign_change_d is None else f"{curve.sign_change_d:.12g}"
    print(f"sign_change_d={sc} threshold={curve.predicted_threshold:.12g} "
          f"points={len(curve.d_values)} -> {spec.output_path}")
    return 0


def _cmd_rescale(args, config) -> int:
    raw = sweep.RawEcologicalParams(
        d1=float(_pick(args, config, "d1", required=True)),
        d2=float(_pick(args, config, "d2", required=True)),
        r1=float(_pick(args, config, "r1", required=True)),
        r2=float(_pick(args, config, "r2", required=True)),
        a1=float(_pick(args, config, "a1", required=True)),
        a2=float(_pick(args, config, "a2", required=True)),
        k1=float(_pick(args, config, "k1", required=True)),
        k2=float(_pick(args, config, "k2", required=True)),
    )
    k, alpha, d, r = sweep.rescale_parameters(raw)
    print(f"k={k:.12g} alpha={alpha:.12g} d={d:.12g} r={r:.12g}")
    return 0


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="compwave",
        description="Invasion speeds for strongly competitive travelling waves")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON file supplying parameter defaults")
        p.add_argument("--out", help="output path (default: stdout)")
        p.add_argument("--threads", type=int, help="worker threads for sweeps")

    p = sub.add_parser("gamma", help="half-line slope function gamma(c)")
    p.add_argument("--c", type=float)
    p.add_argument("--length", type=float)
    p.add_argument("--tol", type=float)
    p.add_argument("--table", action="store_true")
    p.add_argument("--from", dest="from_", type=float)
    p.add_argument("--to", type=float)
    p.add_argument("--steps", type=int)
    common(p)
    p.set_defaults(func=_cmd_gamma)

    p = sub.add_parser("limit-speed", help="infinite-competition invasion speed")
    p.add_argument("--alpha", type=float)
    p.add_argument("--r", type=float)
    p.add_argument("--d", type=float)
    p.add_argument("--ctol", type=float)
    p.add_argument("--profiles", help="write limit profiles CSV here")
    common(p)
    p.set_defaults(func=_cmd_limit_speed)

    p = sub.add_parser("wave", help="finite-k travelling wave")
    p.add_argument("--k", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--r", type=float)
    p.add_argument("--d", type=float)
    p.add_argument("--norm", choices=["cross", "uhalf", "vhalf"])
    p.add_argument("--continue", dest="continue_", action="store_true")
    p.add_argument("--ks", help="comma-separated increasing k schedule")
    common(p)
    p.set_defaults(func=_cmd_wave)

    p = sub.add_parser("pde", help="direct front simulation")
    p.add_argument("--k", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--r", type=float)
    p.add_argument("--d", type=float)
    p.add_argument("--tend", type=float)
    p.add_argument("--dx", type=float)
    p.add_argument("--dt", type=float)
    p.add_argument("--snapshot-every", type=float)
    common(p)
    p.set_defaults(func=_cmd_pde)

    p = sub.add_parser("sweep", help="c_inf over a d grid with sign-change location")
    p.add_argument("--alpha", type=float)
    p.add_argument("--r", type=float)
    p.add_argument("--d-from", type=float)
    p.add_argument("--d-to", type=float)
    p.add_argument("--d-steps", type=int)
    p.add_argument("--k-list", dest="k_list")
    common(p)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("rescale", help="raw ecological parameters -> (k, alpha, d, r)")
    for name in ("d1", "d2", "r1", "r2", "a1", "a2", "k1", "k2"):
        p.add_argument(f"--{name}", type=float)
    common(p)
    p.set_defaults(func=_cmd_rescale)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = _load_config(args.config)
        return args.func(args, config)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (SolverError, CompwaveError) as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
