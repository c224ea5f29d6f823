# %% [markdown]
# # Transfer in the three coupling regimes
#
# The cavity-mechanics coupling J sets how excitation moves along the chain.
# Weak J gives a slow second-order hop through the two modes. Strong J splits
# the modes into normal modes far off resonance, which again gives a slow
# effective exchange. Near J ~ g the chain is close to perfectly transferring
# and the transfer is fastest.

# %%
import numpy as np

from qst.dynamics import IntegratorConfig, evolve_master, max_fidelity
from qst.model import DEFAULT_RATES, ModelParams, initial_state
from qst.sweep import regime_label, transfer_time_large, transfer_time_small

cases = {
    0.1: 2 * transfer_time_small(0.1),
    10.0: 2 * transfer_time_large(10.0, 1.0),
    1.16: 20.0,
}

for J, t_max in cases.items():
    p = ModelParams(J=J, theta=np.pi / 4, rates=DEFAULT_RATES)
    traj = evolve_master(initial_state(p.theta, p.layout), p, IntegratorConfig(t_max))
    t_star, f_star = max_fidelity(traj)
    print(f"J = {J:5.2f} ({regime_label(p):12s})  t* = {t_star:6.2f}  F* = {f_star:.4f}"
          f"  max trace dev {traj.trace_dev.max():.1e}")

# %% [markdown]
# Lower decoherence helps most in the slow regimes, where the excitation
# spends a long time in lossy modes.

# %%
for xi in (0.03, 0.01, 0.003):
    p = ModelParams(J=10.0, rates=DEFAULT_RATES.with_xi(xi))
    traj = evolve_master(initial_state(p.theta, p.layout), p, IntegratorConfig(cases[10.0]))
    print(f"xi = {xi:<6g} F* = {max_fidelity(traj)[1]:.4f}")

# %% [markdown]
# Population bookkeeping: P1..P4 are the one-excitation basis states
# (excitation in cavity, mechanics, qubit, NV).

# %%
p = ModelParams(J=1.2, rates=DEFAULT_RATES)
traj = evolve_master(initial_state(p.theta, p.layout), p, IntegratorConfig(8.0))
for k in range(0, len(traj.times), 250):
    print(f"t = {traj.times[k]:5.2f}  " + "  ".join(f"{x:.3f}" for x in traj.populations[k]))
