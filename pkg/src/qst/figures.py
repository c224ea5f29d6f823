"""Parameter presets and data tables for re-plotting the fidelity and population figures."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dynamics import IntegratorConfig, evolve_master
from .io import SWEEP_HEADER, TRAJECTORY_HEADER, trajectory_rows
from .model import DecoherenceRates, ModelParams, initial_state
from .sweep import SweepSpec, run_sweep, transfer_time_large, transfer_time_small

XI = 0.03
ZETA = 0.001
XI_SET = (0.03, 0.01, 0.003)
SWEEP_POINTS = 60
HEATMAP_STRIDE = 10  # keep every 10th trajectory sample in heat-map tables
INTERMEDIATE_T_MAX = 20.0

FIGURES = ("fig1", "fig2a", "fig2b", "fig3a", "fig3b", "fig3c", "fig3d")


@dataclass
class FigureTable:
    name: str
    header: tuple[str, ...]
    rows: list
    meta: dict = field(default_factory=dict)


def _params(**kw) -> ModelParams:
    xi = kw.pop("xi", XI)
    return ModelParams(rates=DecoherenceRates.uniform(xi, ZETA), **{"theta": np.pi / 4, **kw})


def _trajectory_table(name: str, params: ModelParams, t_max: float, **extra) -> FigureTable:
    traj = evolve_master(initial_state(params.theta, params.layout), params, IntegratorConfig(t_max))
    meta = {"g1": params.g1, "g2": params.g2, "J": params.J, "theta": params.theta,
            "xi": params.rates.kappa_a, "zeta": params.rates.gamma_2, "t_max": t_max, **extra}
    return FigureTable(name, TRAJECTORY_HEADER, list(trajectory_rows(traj)), meta)


def _xi_curves(prefix: str, J: float, t_max: float) -> list[FigureTable]:
    return [_trajectory_table(f"{prefix}_xi{xi:g}.csv", _params(J=J, xi=xi), t_max) for xi in XI_SET]


def _sweep_tables(prefix: str, axis: str, grid, base: ModelParams, t_max: float, column: str,
                  workers: int | None) -> list[FigureTable]:
    spec = SweepSpec(axis, tuple(grid), base, IntegratorConfig(t_max))
    result = run_sweep(spec, workers=workers, keep_trajectories=True)
    meta = {"axis": axis, "g1": base.g1, "g2": base.g2, "J": base.J, "theta": base.theta,
            "xi": base.rates.kappa_a, "zeta": base.rates.gamma_2, "t_max": t_max,
            "grid_from": grid[0], "grid_to": grid[-1], "points": len(grid)}
    peaks = FigureTable(f"{prefix}_peaks.csv", SWEEP_HEADER,
                        [(p.value, p.t_star, p.F_star, p.regime) for p in result.points], meta)
    heat_rows = []
    for p in result.points:
        traj = p.trajectory
        values = traj.fidelity if column == "F" else traj.populations[:, 3]
        for k in range(0, len(traj), HEATMAP_STRIDE):
            heat_rows.append((p.value, traj.times[k], traj.t_over_2pi[k], values[k]))
    heat = FigureTable(f"{prefix}_heatmap.csv", (axis, "t", "t_over_2pi", column), heat_rows, meta)
    return [heat, peaks]


def reproduce(figure: str, workers: int | None = 1) -> list[FigureTable]:
    """Data tables behind one figure, one table per curve or heat map."""
    if figure == "fig1":
        return _xi_curves("fig1", 0.1, 2 * transfer_time_small(0.1))
    if figure == "fig2a":
        return _xi_curves("fig2a", 10.0, 2 * transfer_time_large(10.0, 1.0))
    if figure == "fig2b":
        t_max = 2 * transfer_time_large(10.0, 0.8)
        return [_trajectory_table(f"fig2b_g1_{g1:g}.csv", _params(J=10.0, g1=g1), t_max)
                for g1 in (0.8, 1.0, 1.2)]
    if figure == "fig3a":
        grid = np.linspace(0.01, 3.0, SWEEP_POINTS)
        return _sweep_tables("fig3a", "J", grid, _params(J=1.2), INTERMEDIATE_T_MAX, "F", workers)
    if figure == "fig3b":
        return [_trajectory_table("fig3b_populations.csv", _params(J=1.2), INTERMEDIATE_T_MAX)]
    if figure == "fig3c":
        grid = np.linspace(0.01, 3.0, SWEEP_POINTS)
        return _sweep_tables("fig3c", "g1", grid, _params(J=1.2), INTERMEDIATE_T_MAX, "P4", workers)
    if figure == "fig3d":
        grid = np.linspace(0.0, np.pi / 2, 9)
        spec = SweepSpec("theta", tuple(grid), _params(J=1.16), IntegratorConfig(INTERMEDIATE_T_MAX))
        result = run_sweep(spec, workers=workers)
        meta = {"axis": "theta", "g1": 1.0, "g2": 1.0, "J": 1.16, "xi": XI, "zeta": ZETA,
                "t_max": INTERMEDIATE_T_MAX, "points": len(grid)}
        rows = [(p.value, p.t_star, p.F_star, p.regime) for p in result.points]
        return [FigureTable("fig3d_theta.csv", SWEEP_HEADER, rows, meta)]
    raise ValueError(f"unknown figure id {figure!r}; expected one of {', '.join(FIGURES)}")
