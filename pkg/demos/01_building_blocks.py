# %% [markdown]
# # Building blocks
#
# The hybrid system lives on a four-slot tensor product: a superconducting
# qubit, the NV center (two dressed levels kept), a microwave cavity mode `a`
# and a mechanical mode `b`. Boson modes are truncated at `fock_dim` levels.

# %%
import numpy as np

from qst.hilbert import SubsystemLayout, embed, fock_annihilation, partial_trace, ket_to_dm, NV
from qst.model import (
    DEFAULT_RATES,
    ModelParams,
    chain_hamiltonian_4,
    collapse_operators,
    hamiltonian_total,
    initial_state,
    nv_dressing,
)

layout = SubsystemLayout.hybrid(fock_dim=2)
print(layout.dims, layout.total)

# %% [markdown]
# Local operators are embedded by slot. The annihilator of a 3-level mode has
# sqrt(n) on its superdiagonal.

# %%
print(fock_annihilation(3))
a = embed(fock_annihilation(2), 2, layout)
print(a.shape)

# %% [markdown]
# ## NV dressing
#
# A microwave drive of strength Omega at detuning Delta mixes the bright spin
# combination with |0>. The dark state |d> stays at Delta and the lower dressed
# state |m> is the one used with |d> as the qubit.

# %%
dressing = nv_dressing(delta=1.0, omega=1.0)
print("eigenvalues (d, m, e):", np.round(dressing.eigenvalues, 6))
print("mixing angle:", dressing.vartheta)

# %% [markdown]
# ## Hamiltonian and the single-excitation chain
#
# Restricted to one excitation, the full Hamiltonian is a four-site hopping
# chain qubit -> cavity -> mechanics -> NV with couplings (g1, J, g2).

# %%
p = ModelParams(g1=1.0, g2=1.0, J=1.2, rates=DEFAULT_RATES)
H = hamiltonian_total(p)
print("hermitian:", np.allclose(H, H.conj().T))
print(chain_hamiltonian_4(p.g1, p.J, p.g2))

# %%
for rate, op in collapse_operators(p.rates, layout):
    print(f"rate {rate:.3f}  operator norm {np.linalg.norm(op, 2):.1f}")

# %% [markdown]
# The prepared state holds the superposition on the qubit with the NV in its
# lower dressed level |m> (index 0). Tracing out everything but the NV leaves
# a pure |m><m|.

# %%
rho0 = ket_to_dm(initial_state(np.pi / 4, layout))
print(np.round(partial_trace(rho0, NV, layout).real, 6))
