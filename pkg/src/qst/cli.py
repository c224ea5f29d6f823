"""Command-line entry point: ``qst evolve | sweep | oracle | reproduce``."""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

import numpy as np

from .dynamics import IntegrationDiverged, evolve_closed_chain, evolve_master, max_fidelity
from .figures import FIGURES, reproduce
from .io import (
    ORACLE_HEADER,
    ConfigError,
    fmt,
    parse_number,
    read_config,
    write_csv,
    write_summary,
    write_sweep,
    write_trajectory,
)
from .model import initial_state
from .sweep import AXES, SweepPointError, SweepSpec, default_t_max, regime_label, run_sweep

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3


def _out_dir(args, cfg=None) -> Path:
    out = args.out or (cfg.output_path if cfg is not None else None) or "."
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def cmd_evolve(args) -> int:
    cfg = read_config(args.config)
    params = cfg.model_params()
    icfg = cfg.integrator(default_t_max(params))
    start = time.perf_counter()
    traj = evolve_master(initial_state(params.theta, params.layout), params, icfg)
    runtime = time.perf_counter() - start
    t_star, f_star = max_fidelity(traj)
    out = _out_dir(args, cfg)
    write_trajectory(out / "trajectory.csv", traj)
    write_summary(out / "summary.txt", cfg, {
        "t_max": icfg.t_max,
        "t_star": t_star,
        "t_star_over_2pi": t_star / (2 * np.pi),
        "F_star": f_star,
        "regime": regime_label(params),
        "samples": len(traj),
        "max_trace_dev": float(traj.trace_dev.max()),
        "max_herm_dev": float(traj.herm_dev.max()),
        "min_eig": float(traj.min_eig.min()),
        "runtime_s": round(runtime, 3),
    })
    print(f"F* = {fmt(f_star)} at t* = {fmt(t_star)} ({regime_label(params)}) -> {out}")
    return EXIT_OK


def _sweep_grid(args) -> tuple[float, ...]:
    if args.values:
        try:
            return tuple(parse_number(v) for v in args.values.split(",") if v.strip())
        except ValueError as exc:
            raise ConfigError(f"--values: {exc}") from None
    if args.start is None or args.stop is None or args.points is None:
        raise ConfigError("sweep needs --from/--to/--points or --values")
    if args.points < 1:
        raise ConfigError(f"sweep grid is empty (--points {args.points})")
    return tuple(np.linspace(args.start, args.stop, args.points))


def cmd_sweep(args) -> int:
    cfg = read_config(args.config)
    grid = _sweep_grid(args)
    base = cfg.model_params()
    try:
        spec = SweepSpec(args.axis, grid, base, cfg.integrator(default_t_max(base)))
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    result = run_sweep(spec, workers=args.workers)
    out = _out_dir(args, cfg)
    path = out / f"sweep_{args.axis}.csv"
    write_sweep(path, result)
    best = result.best()
    print(f"best {args.axis} = {fmt(best.value)}: F* = {fmt(best.F_star)} at t* = {fmt(best.t_star)} -> {path}")
    return EXIT_OK


def cmd_oracle(args) -> int:
    if min(args.g1, args.j, args.g2) < 0 or not args.tmax > 0 or not args.dt > 0:
        raise ConfigError("couplings must be >= 0 and --tmax, --dt positive")
    n = int(np.ceil(args.tmax / args.dt - 1e-9))
    times = np.arange(n + 1) * args.dt
    amps = evolve_closed_chain(args.g1, args.j, args.g2, [1, 0, 0, 0], times)
    probs = np.abs(amps) ** 2
    out = _out_dir(args)
    rows = ((t, t / (2 * np.pi), *p) for t, p in zip(times, probs))
    write_csv(out / "oracle.csv", ORACLE_HEADER, rows)
    k = int(np.argmax(probs[:, 3]))
    print(f"max p4 = {probs[k, 3]:.9f} at t = {times[k]:.6f} -> {out / 'oracle.csv'}")
    return EXIT_OK


def cmd_reproduce(args) -> int:
    if args.figure not in FIGURES:
        raise ConfigError(f"unknown figure id {args.figure!r}; expected one of {', '.join(FIGURES)}")
    out = _out_dir(args)
    tables = reproduce(args.figure, workers=args.workers)
    manifest = [f"figure = {args.figure}\n"]
    for table in tables:
        write_csv(out / table.name, table.header, table.rows)
        manifest.append(f"file = {table.name}\n")
        manifest.extend(f"{table.name}.{k} = {v if isinstance(v, str) else fmt(v)}\n"
                        for k, v in table.meta.items())
    (out / f"{args.figure}_manifest.txt").write_text("".join(manifest))
    print(f"wrote {len(tables)} table(s) for {args.figure} -> {out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qst", description="Qubit-to-NV state transfer simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("evolve", help="integrate one configuration")
    p.add_argument("--config", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("sweep", help="scan one parameter and record peak fidelities")
    p.add_argument("--config", required=True)
    p.add_argument("--axis", required=True, choices=AXES)
    p.add_argument("--from", dest="start", type=float)
    p.add_argument("--to", dest="stop", type=float)
    p.add_argument("--points", type=int)
    p.add_argument("--values", help="comma-separated explicit grid, e.g. 0.003,0.01,0.03")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("oracle", help="exact closed single-excitation chain populations")
    p.add_argument("--g1", type=float, required=True)
    p.add_argument("--j", type=float, required=True)
    p.add_argument("--g2", type=float, required=True)
    p.add_argument("--tmax", type=float, required=True)
    p.add_argument("--dt", type=float, default=0.001)
    p.add_argument("--out")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("reproduce", help="write the data tables behind one figure")
    p.add_argument("figure")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_reproduce)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"qst: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (IntegrationDiverged, SweepPointError) as exc:
        print(f"qst: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
