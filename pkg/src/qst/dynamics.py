"""Master-equation integration, the exact closed-chain oracle and transfer observables."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .hilbert import NV, DimensionError, SubsystemLayout, dag, ket_to_dm, partial_trace
from .model import (
    PHI_INDICES,
    TRANSFER_PHASE,
    ModelParams,
    chain_hamiltonian_4,
    collapse_operators,
    hamiltonian_total,
    target_nv_state,
)

DEFAULT_DT = 0.002
DEFAULT_SAMPLES = 2000
STEP_WARNING = 0.05


class IntegrationDiverged(ArithmeticError):
    """Non-finite or exploding density matrix during time stepping."""

    def __init__(self, step: int, time: float):
        self.step = step
        self.time = time
        super().__init__(f"integration diverged at step {step} (t = {time:.6g}); reduce dt")


@dataclass(frozen=True)
class IntegratorConfig:
    """Fixed-step RK4 settings. Times are in units of 1/g2.

    `record_every` is the sampling stride in steps; ``None`` picks the stride
    giving about `DEFAULT_SAMPLES` output samples.
    """

    t_max: float
    dt: float = DEFAULT_DT
    record_every: int | None = None
    method: str = "rk4"

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if not self.t_max > 0:
            raise ValueError(f"t_max must be positive, got {self.t_max}")
        if self.record_every is not None and (int(self.record_every) != self.record_every
                                              or self.record_every < 1):
            raise ValueError(f"record_every must be a positive integer, got {self.record_every}")
        if self.method != "rk4":
            raise ValueError(f"unsupported integration method {self.method!r}")

    @property
    def n_steps(self) -> int:
        return max(1, int(np.ceil(self.t_max / self.dt - 1e-9)))

    @property
    def stride(self) -> int:
        if self.record_every is not None:
            return int(self.record_every)
        return max(1, int(np.ceil(self.n_steps / DEFAULT_SAMPLES)))


@dataclass
class Trajectory:
    """Observables sampled along one evolution.

    ``populations[:, n]`` is the population of the n-th single-excitation
    basis state (phi1..phi4); `fidelity` is the transfer fidelity.
    """

    times: np.ndarray
    populations: np.ndarray
    fidelity: np.ndarray
    trace_dev: np.ndarray
    min_eig: np.ndarray
    herm_dev: np.ndarray
    final_state: np.ndarray | None = field(default=None, repr=False)

    @property
    def t_over_2pi(self) -> np.ndarray:
        return self.times / (2 * np.pi)

    def __len__(self) -> int:
        return len(self.times)


@dataclass(frozen=True)
class ObservableSet:
    """Population indices and fidelity target for one layout and initial angle."""

    layout: SubsystemLayout
    theta: float
    phase: float = TRANSFER_PHASE

    @property
    def indices(self) -> np.ndarray:
        return np.array([self.layout.flatten(idx) for idx in PHI_INDICES])

    @property
    def projectors(self) -> list[np.ndarray]:
        eye = np.eye(self.layout.total, dtype=complex)
        return [np.outer(eye[i], eye[i]) for i in self.indices]

    def populations(self, rho: np.ndarray) -> np.ndarray:
        return np.real(np.diagonal(rho)[self.indices])

    def fidelity(self, rho: np.ndarray) -> float:
        target = target_nv_state(self.theta, self.phase)
        rho_nv = partial_trace(rho, NV, self.layout)
        return float(np.real(target.conj() @ rho_nv @ target))


def populations(rho: np.ndarray, layout: SubsystemLayout | None = None) -> np.ndarray:
    """Populations (P1, P2, P3, P4) of the single-excitation basis states."""
    layout = layout or _layout_of(rho)
    return ObservableSet(layout, 0.0).populations(rho)


def fidelity(rho: np.ndarray, theta: float, layout: SubsystemLayout | None = None,
             phase: float = TRANSFER_PHASE) -> float:
    """Overlap of the NV reduced state with ``cos(theta) e^{i phase}|d> + sin(theta)|m>``.

    The qubit basis maps onto the NV as |1> -> |d>, |0> -> |m>. The default
    `phase` absorbs the fixed factor i acquired by an excitation hopping
    across the four-site chain; ``phase=0`` gives the bare overlap.
    """
    layout = layout or _layout_of(rho)
    return ObservableSet(layout, theta, phase).fidelity(rho)


def _layout_of(rho: np.ndarray) -> SubsystemLayout:
    d = rho.shape[0]
    fock = int(round(np.sqrt(d / 4)))
    if 4 * fock * fock != d:
        raise DimensionError(f"dimension {d} is not 4*N^2; pass the layout explicitly")
    return SubsystemLayout.hybrid(fock)


def lindblad_rhs(rho: np.ndarray, H: np.ndarray, c_ops) -> np.ndarray:
    """Time derivative -i[H, rho] + sum_k rate_k/2 (2 A rho A+ - A+A rho - rho A+A)."""
    if rho.shape != H.shape:
        raise DimensionError(f"rho shape {rho.shape} does not match H shape {H.shape}")
    out = -1j * (H @ rho - rho @ H)
    for rate, A in c_ops:
        if rate == 0:
            continue
        if A.shape != H.shape:
            raise DimensionError(f"collapse operator shape {A.shape} does not match H shape {H.shape}")
        Ad = dag(A)
        AdA = Ad @ A
        out += 0.5 * rate * (2 * A @ rho @ Ad - AdA @ rho - rho @ AdA)
    return out


def liouvillian(H: np.ndarray, c_ops) -> np.ndarray:
    """Matrix of `lindblad_rhs` acting on row-major ``rho.reshape(-1)``."""
    d = H.shape[0]
    L = np.empty((d * d, d * d), dtype=complex)
    E = np.zeros((d, d), dtype=complex)
    for col in range(d * d):
        i, j = divmod(col, d)
        E[i, j] = 1.0
        L[:, col] = lindblad_rhs(E, H, c_ops).reshape(-1)
        E[i, j] = 0.0
    return L


def rk4_step_matrix(L: np.ndarray, dt: float) -> np.ndarray:
    """One classical RK4 step of ``y' = L y`` as a matrix.

    For a linear autonomous system the four RK4 stages collapse to the
    degree-4 Taylor polynomial of ``exp(dt L)``.
    """
    hL = dt * L
    eye = np.eye(L.shape[0], dtype=complex)
    term = eye.copy()
    step = eye.copy()
    for k in range(1, 5):
        term = term @ hL / k
        step += term
    return step


def rk4_step(f, y: np.ndarray, dt: float) -> np.ndarray:
    """Generic stage-by-stage RK4 step for an autonomous right-hand side."""
    k1 = f(y)
    k2 = f(y + 0.5 * dt * k1)
    k3 = f(y + 0.5 * dt * k2)
    k4 = f(y + dt * k3)
    return y + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)


def evolve_master(rho0: np.ndarray, params: ModelParams, cfg: IntegratorConfig,
                  keep_final: bool = False) -> Trajectory:
    """Integrate the master equation from `rho0` and sample observables.

    `rho0` may be a ket or a density matrix on ``params.layout``. Samples are
    taken every ``cfg.stride`` steps up to the first sample at or beyond
    ``cfg.t_max``.
    """
    layout = params.layout
    rho = np.asarray(rho0, dtype=complex)
    if rho.ndim == 1:
        rho = ket_to_dm(rho)
    if rho.shape != (layout.total, layout.total):
        raise DimensionError(f"initial state of shape {rho.shape} does not match layout {layout.dims}")

    H = hamiltonian_total(params, layout)
    c_ops = collapse_operators(params.rates, layout)
    scale = max(np.linalg.norm(H, 2), params.rates.max_rate)
    if cfg.dt * scale > STEP_WARNING:
        warnings.warn(f"dt * max(|H|, rates) = {cfg.dt * scale:.3g} exceeds {STEP_WARNING}; "
                      "RK4 accuracy may suffer", RuntimeWarning, stacklevel=2)

    stride = cfg.stride
    n_samples = int(np.ceil(cfg.n_steps / stride)) + 1
    step = rk4_step_matrix(liouvillian(H, c_ops), cfg.dt)
    propagator = np.linalg.matrix_power(step, stride)

    obs = ObservableSet(layout, params.theta)
    d = layout.total
    times = np.arange(n_samples) * stride * cfg.dt
    pops = np.empty((n_samples, 4))
    fid = np.empty(n_samples)
    trace_dev = np.empty(n_samples)
    min_eig = np.empty(n_samples)
    herm_dev = np.empty(n_samples)

    vec = rho.reshape(-1).copy()
    for k in range(n_samples):
        if k:
            vec = propagator @ vec
        rho = vec.reshape(d, d)
        if not np.all(np.isfinite(vec)) or np.max(np.abs(vec)) > 1e6:
            raise IntegrationDiverged(k * stride, times[k])
        herm = 0.5 * (rho + dag(rho))
        pops[k] = obs.populations(rho)
        fid[k] = obs.fidelity(rho)
        trace_dev[k] = abs(np.trace(rho) - 1)
        herm_dev[k] = np.max(np.abs(rho - dag(rho)))
        min_eig[k] = np.linalg.eigvalsh(herm)[0]

    return Trajectory(times=times, populations=pops, fidelity=fid, trace_dev=trace_dev,
                      min_eig=min_eig, herm_dev=herm_dev,
                      final_state=rho.copy() if keep_final else None)


def evolve_closed_chain(g1: float, J: float, g2: float, amplitudes0, times) -> np.ndarray:
    """Exact single-excitation amplitudes ``exp(-i H4 t) psi0``, one row per time.

    Sites are in chain order: qubit, cavity, mechanics, NV.
    """
    psi0 = np.asarray(amplitudes0, dtype=complex)
    if psi0.shape != (4,):
        raise DimensionError("chain amplitudes must be a 4-vector")
    if abs(np.linalg.norm(psi0) - 1) > 1e-12:
        raise ValueError("initial chain amplitudes must be normalized")
    w, V = np.linalg.eigh(chain_hamiltonian_4(g1, J, g2))
    coeffs = V.T @ psi0
    phases = np.exp(-1j * np.outer(np.asarray(times, dtype=float), w))
    return (phases * coeffs) @ V.T


def max_fidelity(traj: Trajectory | tuple, tol: float = 1e-9) -> tuple[float, float]:
    """Earliest global maximum of the fidelity, refined by a parabola through three samples.

    Accepts a `Trajectory` or a ``(times, values)`` pair.
    """
    if isinstance(traj, Trajectory):
        times, values = traj.times, traj.fidelity
    else:
        times, values = (np.asarray(x, dtype=float) for x in traj)
    if len(times) == 0:
        raise ValueError("cannot take the maximum of an empty trajectory")
    k = int(np.flatnonzero(values >= values.max() - tol)[0])
    t_star, f_star = float(times[k]), float(values[k])
    if 0 < k < len(times) - 1:
        t3, f3 = times[k - 1:k + 2], values[k - 1:k + 2]
        c2, c1, c0 = np.polyfit(t3 - t3[1], f3, 2)
        if c2 < 0:
            dt = -c1 / (2 * c2)
            if abs(dt) <= max(t3[1] - t3[0], t3[2] - t3[1]):
                t_star = float(t3[1] + dt)
                f_star = float(c0 - c1 * c1 / (4 * c2))
    return t_star, f_star
