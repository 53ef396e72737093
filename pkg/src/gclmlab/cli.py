"""Command-line entry points: simulate, traveling-wave, verify-profile, fit,
inner-profile, oracle-a0, sweep.

All file output uses 17-significant-digit floats and fixed column orders, so
re-running an identical config byte-reproduces every CSV/JSON artifact.
Exit codes: 0 success, 2 config error, 3 numerical divergence (partial
history flushed), 4 non-convergence within budget.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

import numpy as np

from . import analysis, waves
from .config import ConfigError, PRESETS, load_config
from .profiles import (SingularPointError, c_alpha, castro, clm0,
                       half_case, singular_half_line, steady_residual,
                       steady_triple)
from .rescaling import (DivergenceError, ScalingHistory, compute_fields,
                        reconstruct_physical, run_to_convergence)
from .spline import eval_velocity

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DIVERGED = 3
EXIT_NOT_CONVERGED = 4


def _fmt(x: float) -> str:
    return f"{float(x):.17g}"


def _write_csv(path, header, columns) -> None:
    rows = np.column_stack(columns)
    with open(path, "w") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _write_json(path, obj) -> None:
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _out_root(outdir: str) -> str:
    root = os.environ.get("GCLMLAB_OUT_ROOT", "")
    return os.path.join(root, outdir) if root else outdir


def _snapshot(state, path) -> None:
    fields = compute_fields(state)
    U = fields.U
    if state.a == 0.0:
        # the solver skips the antiderivative kernels for a = 0
        sp = state.ops.op.spline(fields.omega, parity=state.ops.omega_parity)
        U = eval_velocity(sp, state.x)
    _write_csv(path, ("X", "Omega", "HOmega", "U"),
               (state.x, fields.omega, fields.H, U))


def cmd_simulate(args) -> int:
    try:
        cfg = load_config(args.config)
    except (ConfigError, OSError) as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    outdir = _out_root(args.out or cfg.outdir)
    os.makedirs(outdir, exist_ok=True)
    try:
        state = cfg.build_state()
        scheme = cfg.build_scheme()
    except (ConfigError, ValueError) as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG

    history = ScalingHistory()
    t0 = time.time()

    def checkpoint_cb(st, tau):
        _snapshot(st, os.path.join(outdir, f"snapshot_tau{tau:g}.csv"))

    def progress_cb(n, st, res):
        if args.verbose:
            print(f"[{time.time()-t0:7.0f}s] n={n} tau={st.tau:.4f} "
                  f"gamma={-st.c_l/st.c_omega if st.c_omega else float('nan'):.6f} "
                  f"res={res:.3e}", file=sys.stderr, flush=True)

    diverged = False
    try:
        result = run_to_convergence(
            state, scheme, cfl=cfg.cfl, tol=cfg.tol, tau_max=cfg.tau_max,
            max_steps=cfg.max_steps, dt_max=cfg.dt_max,
            residual_mode=cfg.residual_mode or None,
            exclusions=cfg.exclusions, adaptive=cfg.adaptive,
            remesh_every=cfg.remesh_every, history=history,
            checkpoint_taus=cfg.checkpoints, checkpoint_cb=checkpoint_cb,
            progress_cb=progress_cb)
    except DivergenceError as e:
        print(f"divergence: {e}", file=sys.stderr)
        diverged = True

    history.write_csv(os.path.join(outdir, "history.csv"))
    if diverged:
        return EXIT_DIVERGED

    _snapshot(state, os.path.join(outdir, "profile.csv"))
    gamma = -state.c_l / state.c_omega if state.c_omega else float("nan")
    res_last = history.rows[-1][history.COLUMNS.index("residual")] if history.rows else float("nan")
    duration_ok = cfg.tol == 0.0 and result.reason == "tau_max"
    summary = {
        "label": cfg.label, "a": cfg.a, "k": cfg.k, "scheme": cfg.scheme,
        "converged": bool(result.converged or duration_ok),
        "reason": result.reason, "n_steps": result.n_steps,
        "n_remesh": result.n_remesh, "tau_end": state.tau,
        "c_l": state.c_l, "c_omega": state.c_omega, "gamma": gamma,
        "residual": res_last,
    }
    _write_json(os.path.join(outdir, "summary.json"), summary)
    print(f"{cfg.label}: {result.reason} after {result.n_steps} steps, "
          f"tau={state.tau:.3f}, gamma={gamma:.6f} "
          f"({time.time()-t0:.1f}s)", file=sys.stderr)
    if not (result.converged or duration_ok):
        return EXIT_NOT_CONVERGED
    return EXIT_OK


def cmd_traveling_wave(args) -> int:
    try:
        result = waves.solve_fixed_point(args.a, tol=args.tol,
                                         max_iter=args.max_iter)
    except waves.WaveError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    outdir = _out_root(args.out)
    os.makedirs(outdir, exist_ok=True)
    prof = result.profile
    _write_csv(os.path.join(outdir, "wave_profile.csv"), ("x", "omega"),
               (prof.x, prof.values))
    report = waves.check_membership_Da(prof)
    tail = {}
    if result.tail_exponent is not None:
        tail["exponent"] = result.tail_exponent
    if result.support is not None:
        tail["support_radius"] = result.support
    _write_json(os.path.join(outdir, "wave_result.json"), {
        "a": args.a, "r": result.r, "iterations": result.iterations,
        "final_increment": result.final_increment,
        "converged": result.converged, "tail": tail,
        "membership": {k: v for k, v in report.conditions().items()},
        "membership_passed": report.passed,
    })
    print(f"a={args.a}: r={result.r:.8f} after {result.iterations} iterations, "
          f"tail={tail}", file=sys.stderr)
    return EXIT_OK if result.converged else EXIT_NOT_CONVERGED


_PROFILE_KINDS = {
    "clm0": lambda a, alpha: clm0(),
    "half-case": lambda a, alpha: half_case(),
    "castro": lambda a, alpha: castro(a),
    "c-alpha": lambda a, alpha: c_alpha(alpha),
    "singular-halfline": lambda a, alpha: singular_half_line(a),
}


def cmd_verify_profile(args) -> int:
    maker = _PROFILE_KINDS.get(args.kind)
    if maker is None:
        print(f"unknown profile kind {args.kind!r}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        kind = maker(args.a, args.alpha)
        triple = steady_triple(kind)
        points = np.asarray(args.points, dtype=float)
        resid = steady_residual(triple, points)
    except (SingularPointError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    print("X,residual")
    for x, r in zip(points, resid):
        print(f"{_fmt(x)},{_fmt(r)}")
    if args.out:
        _write_csv(args.out, ("X", "residual"), (points, resid))
    print(f"max |residual| = {np.abs(resid).max():.3e}", file=sys.stderr)
    return EXIT_OK


def cmd_fit(args) -> int:
    try:
        hist = ScalingHistory.read_csv(args.history)
        rec = reconstruct_physical(hist)
        if args.quantity == "max-omega":
            v = rec.omega_max_physical()
        elif args.quantity == "halfwidth":
            v = rec.halfwidth_physical()
        else:
            print(f"unknown quantity {args.quantity!r}", file=sys.stderr)
            return EXIT_CONFIG
        ok = np.isfinite(v)
        fit = analysis.fit_power_law(rec.t[ok], v[ok], (args.window[0], args.window[1]))
    except (analysis.FitError, Exception) as e:
        print(f"fit error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    out = {
        "quantity": args.quantity, "window": list(fit.window),
        "eta_crude": fit.eta_crude, "eta": fit.eta, "r2": fit.r2,
        "T_est": fit.T_est, "T_from_tail": rec.T_est,
    }
    if args.out:
        _write_json(args.out, out)
    print(json.dumps(out, indent=2, sort_keys=True))
    return EXIT_OK


def cmd_inner_profile(args) -> int:
    try:
        data = np.loadtxt(args.profile, delimiter=",", skiprows=1, ndmin=2)
        x, om = data[:, 0], data[:, 1]
        from .peaks import peak_geometry
        from .spline import Grid, build_spline
        sp = build_spline(Grid(x), om)
        peak = peak_geometry(sp, x, om)
        xhat = np.linspace(-5.0, 5.0, args.n)
        pts = np.clip(peak.x_m + peak.width * xhat, x[0], x[-1])
        vals = np.asarray(sp(pts)) / peak.amplitude
    except Exception as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    _write_csv(args.out, ("Xhat", "OmegaHat"), (xhat, vals))
    print(f"peak at X={peak.x_m:.6g}, amplitude {peak.amplitude:.6g}, "
          f"halfwidth {peak.width:.6g}", file=sys.stderr)
    return EXIT_OK


def cmd_oracle_a0(args) -> int:
    try:
        cfg = PRESETS["oracle_a0"]
        state = cfg.build_state()
        oracle = analysis.oracle_from_state(state)
        xs = np.linspace(0.0, args.xmax, args.n)
        F, G = analysis.oracle_a0(oracle, xs, args.tau)
    except Exception as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    _write_csv(args.out, ("X", "F", "G"), (xs, F, G))
    return EXIT_OK


def _sweep_one(item):
    cfg_path, out_root = item
    argv = ["simulate", "--config", cfg_path]
    if out_root:
        cfg = load_config(cfg_path)
        argv += ["--out", os.path.join(out_root, cfg.label)]
    return main(argv)


def cmd_sweep(args) -> int:
    from concurrent.futures import ProcessPoolExecutor
    items = [(c, args.out) for c in args.configs]
    codes = []
    with ProcessPoolExecutor(max_workers=args.workers) as pool:
        for code in pool.map(_sweep_one, items):
            codes.append(code)
    bad = [c for c in codes if c != EXIT_OK]
    return bad[0] if bad else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gclmlab",
                                description="gCLM self-similar blowup laboratory")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("simulate", help="run a dynamic-rescaling simulation")
    s.add_argument("--config", required=True,
                   help="config file path or preset name (see --list-presets)")
    s.add_argument("--out", default=None, help="output directory override")
    s.add_argument("--verbose", action="store_true")
    s.set_defaults(fn=cmd_simulate)

    s = sub.add_parser("traveling-wave", help="fixed-point traveling wave profile")
    s.add_argument("--a", type=float, required=True)
    s.add_argument("--tol", type=float, default=1e-8)
    s.add_argument("--max-iter", type=int, default=2000)
    s.add_argument("--out", default="out")
    s.set_defaults(fn=cmd_traveling_wave)

    s = sub.add_parser("verify-profile", help="steady-equation residual table")
    s.add_argument("--kind", required=True, choices=sorted(_PROFILE_KINDS))
    s.add_argument("--a", type=float, default=-1.0)
    s.add_argument("--alpha", type=float, default=0.5)
    s.add_argument("--points", type=float, nargs="+",
                   default=[1.5, 2.0, 5.0])
    s.add_argument("--out", default=None)
    s.set_defaults(fn=cmd_verify_profile)

    s = sub.add_parser("fit", help="blowup power-law exponents from a history")
    s.add_argument("--history", required=True)
    s.add_argument("--quantity", default="max-omega",
                   choices=["max-omega", "halfwidth"])
    s.add_argument("--window", type=float, nargs=2, required=True)
    s.add_argument("--out", default=None)
    s.set_defaults(fn=cmd_fit)

    s = sub.add_parser("inner-profile", help="normalized inner profile from a snapshot")
    s.add_argument("--profile", required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--n", type=int, default=1001)
    s.set_defaults(fn=cmd_inner_profile)

    s = sub.add_parser("oracle-a0", help="closed-form a=0 evolution samples")
    s.add_argument("--tau", type=float, required=True)
    s.add_argument("--xmax", type=float, default=3.0)
    s.add_argument("--n", type=int, default=601)
    s.add_argument("--out", required=True)
    s.set_defaults(fn=cmd_oracle_a0)

    s = sub.add_parser("sweep", help="run several configs on a worker pool")
    s.add_argument("--configs", nargs="+", required=True)
    s.add_argument("--out", default=None)
    s.add_argument("--workers", type=int, default=None)
    s.set_defaults(fn=cmd_sweep)

    s = sub.add_parser("list-presets", help="print available preset names")
    s.set_defaults(fn=lambda a: (print("\n".join(sorted(PRESETS))), EXIT_OK)[1])
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
