"""Hamiltonian, dissipators and states of the qubit-cavity-mechanics-NV chain.

Everything is in the interaction picture at exact resonance, in units where
the NV-mechanics coupling ``g2`` sets the frequency scale.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .hilbert import (
    CAVITY,
    MECHANICS,
    NV,
    QUBIT,
    DimensionError,
    SubsystemLayout,
    basis_ket,
    dag,
    embed,
    fock_annihilation,
    qubit_lower,
    qubit_z,
)

# Single-excitation basis, labelled as in the population plots:
# phi1 = |0 m 1 0>, phi2 = |0 m 0 1>, phi3 = |1 m 0 0>, phi4 = |0 d 0 0>.
PHI_INDICES = ((0, 0, 1, 0), (0, 0, 0, 1), (1, 0, 0, 0), (0, 1, 0, 0))
# Position of each chain site (qubit, cavity, mechanics, NV) in the phi labelling.
CHAIN_TO_PHI = (2, 0, 1, 3)
GROUND_INDEX = (0, 0, 0, 0)

# Phase picked up by the transferred amplitude in a real 4-site hopping chain:
# three hops give (-i)^3 = i, so the NV ends in cos(theta) i|d> + sin(theta)|m>.
TRANSFER_PHASE = np.pi / 2


@dataclass(frozen=True)
class DecoherenceRates:
    """Lindblad rates in units of g2.

    ``gamma_*`` are relaxation rates and ``Gamma_*`` dephasing rates; index 1
    is the superconducting qubit and index 2 the NV center.
    """

    kappa_a: float = 0.0
    kappa_b: float = 0.0
    gamma_1: float = 0.0
    Gamma_1: float = 0.0
    gamma_2: float = 0.0
    Gamma_2: float = 0.0

    def __post_init__(self):
        for name, value in self.as_dict().items():
            if not value >= 0:
                raise ValueError(f"decoherence rate {name} must be >= 0, got {value}")

    @classmethod
    def uniform(cls, xi: float, zeta: float) -> "DecoherenceRates":
        """Resonators and qubit share `xi`; NV relaxation and dephasing share `zeta`."""
        return cls(kappa_a=xi, kappa_b=xi, gamma_1=xi, Gamma_1=xi, gamma_2=zeta, Gamma_2=zeta)

    uniform_xi_zeta = uniform

    def with_xi(self, xi: float) -> "DecoherenceRates":
        return replace(self, kappa_a=xi, kappa_b=xi, gamma_1=xi, Gamma_1=xi)

    def scaled(self, factor: float) -> "DecoherenceRates":
        return DecoherenceRates(**{k: v * factor for k, v in self.as_dict().items()})

    def as_dict(self) -> dict[str, float]:
        return {
            "kappa_a": self.kappa_a,
            "kappa_b": self.kappa_b,
            "gamma_1": self.gamma_1,
            "Gamma_1": self.Gamma_1,
            "gamma_2": self.gamma_2,
            "Gamma_2": self.Gamma_2,
        }

    @property
    def max_rate(self) -> float:
        return max(self.as_dict().values())


DEFAULT_RATES = DecoherenceRates.uniform(0.03, 0.001)


@dataclass(frozen=True)
class ModelParams:
    g1: float = 1.0
    g2: float = 1.0
    J: float = 1.0
    theta: float = np.pi / 4
    rates: DecoherenceRates = field(default_factory=DecoherenceRates)
    fock_dim: int = 2

    def __post_init__(self):
        for name in ("g1", "g2", "J"):
            if not getattr(self, name) >= 0:
                raise ValueError(f"coupling {name} must be >= 0, got {getattr(self, name)}")
        if not 0 <= self.theta <= np.pi / 2 + 1e-12:
            raise ValueError(f"theta must lie in [0, pi/2], got {self.theta}")
        if int(self.fock_dim) != self.fock_dim or self.fock_dim < 2:
            raise DimensionError(f"fock_dim must be an integer >= 2, got {self.fock_dim}")

    @property
    def layout(self) -> SubsystemLayout:
        return SubsystemLayout.hybrid(self.fock_dim)

    def replace(self, **changes) -> "ModelParams":
        return replace(self, **changes)

    def scaled(self, factor: float) -> "ModelParams":
        """Multiply every coupling and rate by `factor` (time then scales by 1/factor)."""
        return replace(self, g1=self.g1 * factor, g2=self.g2 * factor, J=self.J * factor,
                       rates=self.rates.scaled(factor))


@dataclass(frozen=True)
class NvDressing:
    delta: float
    omega: float
    vartheta: float
    eigenvalues: tuple[float, float, float]  # (omega_d, omega_m, omega_e)
    states: np.ndarray  # columns |d>, |m>, |e> in the basis {|0>, |b>, |d>}


def nv_dressing(delta: float, omega: float) -> NvDressing:
    """Dressed states of the microwave-driven NV ground-state triplet.

    The drive couples |0> to the bright state |b> = (|-1> + |+1>)/sqrt(2)
    with strength omega/sqrt(2); the dark state |d> is decoupled.

    Parameters
    ----------
    delta : float
        Drive detuning, must be positive.
    omega : float
        Drive strength, non-negative.

    Returns
    -------
    NvDressing
        Mixing angle with ``tan(2 vartheta) = sqrt(2) omega / delta`` and the
        eigenvalues ``(omega_d, omega_m, omega_e)`` obtained by diagonalizing
        the 3x3 Hamiltonian in the basis {|0>, |b>, |d>}.
    """
    if not delta > 0:
        raise ValueError(f"detuning must be positive, got {delta}")
    if not omega >= 0:
        raise ValueError(f"drive strength must be >= 0, got {omega}")
    c = omega / np.sqrt(2)
    h = np.array([[0.0, c, 0.0], [c, delta, 0.0], [0.0, 0.0, delta]])
    w, v = np.linalg.eigh(h[:2, :2])
    omega_m, omega_e = w
    m = v[:, 0] * np.sign(v[0, 0])  # cos(vartheta)|0> - sin(vartheta)|b>
    e = v[:, 1] * (np.sign(v[1, 1]) or 1.0)  # cos(vartheta)|b> + sin(vartheta)|0>
    states = np.zeros((3, 3))
    states[2, 0] = 1.0
    states[:2, 1] = m
    states[:2, 2] = e
    vartheta = 0.5 * np.arctan(np.sqrt(2) * omega / delta)
    return NvDressing(delta=delta, omega=omega, vartheta=float(vartheta),
                      eigenvalues=(float(h[2, 2]), float(omega_m), float(omega_e)), states=states)


def mode_operators(layout: SubsystemLayout) -> dict[str, np.ndarray]:
    """Lowering and sigma-z operators of every subsystem embedded in the full space."""
    n_a, n_b = layout.dims[CAVITY], layout.dims[MECHANICS]
    return {
        "a": embed(fock_annihilation(n_a), CAVITY, layout),
        "b": embed(fock_annihilation(n_b), MECHANICS, layout),
        "sm1": embed(qubit_lower(), QUBIT, layout),
        "sm2": embed(qubit_lower(), NV, layout),
        "sz1": embed(qubit_z(), QUBIT, layout),
        "sz2": embed(qubit_z(), NV, layout),
    }


def _layout_for(params: ModelParams, layout: SubsystemLayout | None) -> SubsystemLayout:
    if layout is None:
        return params.layout
    if layout.dims != params.layout.dims:
        raise DimensionError(f"layout {layout.dims} inconsistent with fock_dim={params.fock_dim}")
    return layout


def hamiltonian_total(params: ModelParams, layout: SubsystemLayout | None = None) -> np.ndarray:
    """Resonant interaction Hamiltonian of the chain.

    H = g1 (s1- a+ + s1+ a) + g2 (b s2+ + b+ s2-) + J (a b+ + a+ b)
    """
    layout = _layout_for(params, layout)
    op = mode_operators(layout)
    a, b, s1, s2 = op["a"], op["b"], op["sm1"], op["sm2"]
    h_qubit = params.g1 * (s1 @ dag(a) + dag(s1) @ a)
    h_nv = params.g2 * (b @ dag(s2) + dag(b) @ s2)
    h_hop = params.J * (a @ dag(b) + dag(a) @ b)
    return h_qubit + h_nv + h_hop


def excitation_number(layout: SubsystemLayout) -> np.ndarray:
    op = mode_operators(layout)
    return sum(dag(op[k]) @ op[k] for k in ("sm1", "sm2", "a", "b"))


def collapse_operators(rates: DecoherenceRates, layout: SubsystemLayout) -> list[tuple[float, np.ndarray]]:
    """(rate, operator) pairs, in the order kappa_a, kappa_b, gamma_1, Gamma_1, gamma_2, Gamma_2.

    Each pair contributes ``rate/2 * (2 A rho A+ - A+A rho - rho A+A)``.
    """
    op = mode_operators(layout)
    return [
        (rates.kappa_a, op["a"]),
        (rates.kappa_b, op["b"]),
        (rates.gamma_1, op["sm1"]),
        (rates.Gamma_1, op["sz1"]),
        (rates.gamma_2, op["sm2"]),
        (rates.Gamma_2, op["sz2"]),
    ]


def _check_theta(theta: float):
    if not 0 <= theta <= np.pi / 2 + 1e-12:
        raise ValueError(f"theta must lie in [0, pi/2], got {theta}")


def initial_state(theta: float, layout: SubsystemLayout) -> np.ndarray:
    """(cos(theta)|1> + sin(theta)|0>) on the qubit, NV in |m>, both modes empty."""
    _check_theta(theta)
    return np.cos(theta) * basis_ket(layout, (1, 0, 0, 0)) + np.sin(theta) * basis_ket(layout, GROUND_INDEX)


def target_nv_state(theta: float, phase: float = 0.0) -> np.ndarray:
    """NV ket ``cos(theta) e^{i phase} |d> + sin(theta) |m>`` in the basis (|m>, |d>)."""
    _check_theta(theta)
    return np.array([np.sin(theta), np.cos(theta) * np.exp(1j * phase)], dtype=complex)


def single_excitation_basis(layout: SubsystemLayout) -> list[np.ndarray]:
    return [basis_ket(layout, idx) for idx in PHI_INDICES]


def chain_hamiltonian_4(g1: float, J: float, g2: float) -> np.ndarray:
    """Single-excitation block in chain order (qubit, cavity, mechanics, NV)."""
    if min(g1, J, g2) < 0:
        raise ValueError("couplings must be non-negative")
    return np.array(
        [[0.0, g1, 0.0, 0.0],
         [g1, 0.0, J, 0.0],
         [0.0, J, 0.0, g2],
         [0.0, 0.0, g2, 0.0]]
    )
