"""Quantum state transfer from a superconducting qubit to an NV center through coupled resonators."""

from .dynamics import (
    IntegrationDiverged,
    IntegratorConfig,
    Trajectory,
    evolve_closed_chain,
    evolve_master,
    fidelity,
    lindblad_rhs,
    max_fidelity,
    populations,
)
from .hilbert import SubsystemLayout, embed, fock_annihilation, partial_trace, qubit_lower
from .model import (
    DEFAULT_RATES,
    DecoherenceRates,
    ModelParams,
    chain_hamiltonian_4,
    collapse_operators,
    hamiltonian_total,
    initial_state,
    nv_dressing,
    target_nv_state,
)
from .sweep import (
    SweepSpec,
    pst_optimal_coupling,
    regime_label,
    run_sweep,
    transfer_time_large,
    transfer_time_small,
)

__version__ = "0.1.0"
