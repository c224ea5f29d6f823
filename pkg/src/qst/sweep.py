"""Coupling-regime predictors and one-dimensional parameter sweeps of the transfer fidelity."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .dynamics import IntegrationDiverged, IntegratorConfig, Trajectory, evolve_closed_chain, evolve_master, max_fidelity
from .model import ModelParams, initial_state

AXES = ("J", "g1", "theta", "xi")
REGIME_RATIO = 1 / 3


def transfer_time_small(J: float, k: int = 0) -> float:
    """Transfer instants (2k+1) pi / J of the weak inter-resonator coupling regime."""
    if not J > 0:
        raise ValueError(f"J must be positive, got {J}")
    if k < 0:
        raise ValueError("k must be non-negative")
    return (2 * k + 1) * np.pi / J


def transfer_time_large(J: float, g: float, k: int = 0) -> float:
    """Transfer instants (k + 1/2) pi J / g^2 of the strong inter-resonator coupling regime."""
    if not (J > 0 and g > 0):
        raise ValueError(f"J and g must be positive, got J={J}, g={g}")
    if k < 0:
        raise ValueError("k must be non-negative")
    return (k + 0.5) * np.pi * J / g**2


def pst_optimal_coupling(g: float) -> float:
    """Middle coupling J = 2g/sqrt(3) of a (g, J, g) chain with equally spaced spectrum.

    The spectrum is then {+-sqrt(3) g, +-g/sqrt(3)} and an excitation hops
    end to end with unit probability at t = pi sqrt(3) / (2 g).
    """
    if not g > 0:
        raise ValueError(f"g must be positive, got {g}")
    return 2 * g / np.sqrt(3)


def regime_label(params: ModelParams, ratio: float = REGIME_RATIO) -> str:
    g_lo, g_hi = min(params.g1, params.g2), max(params.g1, params.g2)
    if params.J < ratio * g_lo:
        return "small"
    if params.J > g_hi / ratio:
        return "large"
    return "intermediate"


def default_t_max(params: ModelParams) -> float:
    """Integration window covering at least two transfer periods of the regime."""
    regime = regime_label(params)
    g = min(params.g1, params.g2)
    if regime == "small" and params.J > 0:
        return 2 * transfer_time_small(params.J)
    if regime == "large" and g > 0:
        return 2 * transfer_time_large(params.J, g)
    scale = min(x for x in (params.g1, params.g2, params.J, 1.0) if x > 0)
    return 4 * np.pi / scale


def params_at(base: ModelParams, axis: str, value: float) -> ModelParams:
    if axis == "xi":
        return base.replace(rates=base.rates.with_xi(value))
    if axis in ("J", "g1", "theta"):
        return base.replace(**{axis: value})
    raise ValueError(f"unknown sweep axis {axis!r}; expected one of {AXES}")


@dataclass(frozen=True)
class SweepSpec:
    axis: str
    grid: tuple[float, ...]
    base: ModelParams
    cfg: IntegratorConfig

    def __post_init__(self):
        if self.axis not in AXES:
            raise ValueError(f"unknown sweep axis {self.axis!r}; expected one of {AXES}")
        grid = tuple(float(x) for x in self.grid)
        if not grid:
            raise ValueError("sweep grid is empty")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValueError("sweep grid must be strictly increasing")
        for x in grid:
            params_at(self.base, self.axis, x)  # validates the value
        object.__setattr__(self, "grid", grid)


@dataclass
class SweepPoint:
    value: float
    t_star: float
    F_star: float
    regime: str
    trajectory: Trajectory | None = field(default=None, repr=False)


@dataclass
class SweepResult:
    spec: SweepSpec
    points: list[SweepPoint]

    @property
    def values(self) -> np.ndarray:
        return np.array([p.value for p in self.points])

    @property
    def t_star(self) -> np.ndarray:
        return np.array([p.t_star for p in self.points])

    @property
    def F_star(self) -> np.ndarray:
        return np.array([p.F_star for p in self.points])

    def best(self) -> SweepPoint:
        """Grid point with the highest peak fidelity (first one on ties)."""
        return self.points[int(np.argmax(self.F_star))]


class SweepPointError(RuntimeError):
    def __init__(self, axis: str, index: int, value: float, cause: Exception):
        self.axis, self.index, self.value = axis, index, value
        super().__init__(f"sweep point {index} ({axis} = {value:.6g}) failed: {cause}")


def _run_point(args) -> SweepPoint:
    spec, index, keep = args
    value = spec.grid[index]
    params = params_at(spec.base, spec.axis, value)
    try:
        traj = evolve_master(initial_state(params.theta, params.layout), params, spec.cfg)
    except IntegrationDiverged as exc:
        raise SweepPointError(spec.axis, index, value, exc) from exc
    t_star, f_star = max_fidelity(traj)
    return SweepPoint(value, t_star, f_star, regime_label(params), traj if keep else None)


def run_sweep(spec: SweepSpec, workers: int | None = 1, keep_trajectories: bool = False) -> SweepResult:
    """Evolve every grid point and record its earliest fidelity maximum.

    ``workers > 1`` fans the points out to a process pool; ``None`` uses one
    worker per CPU. Points are returned in grid order either way.
    """
    jobs = [(spec, i, keep_trajectories) for i in range(len(spec.grid))]
    if workers is None:
        workers = os.cpu_count() or 1
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as pool:
            points = list(pool.map(_run_point, jobs))
    else:
        points = [_run_point(job) for job in jobs]
    return SweepResult(spec, points)


def max_transfer_population(g1: float, J: float, g2: float, t_max: float, n_times: int = 20001) -> float:
    """Largest NV population reached from an excited qubit in the closed chain over [0, t_max]."""
    times = np.linspace(0.0, t_max, n_times)
    amps = evolve_closed_chain(g1, J, g2, [1, 0, 0, 0], times)
    return float(np.max(np.abs(amps[:, 3]) ** 2))
