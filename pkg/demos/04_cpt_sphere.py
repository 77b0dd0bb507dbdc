# %% [markdown]
# # Trajectories on the CPT Bloch sphere
#
# Under the passive Hamiltonian the CPT-normalized eigenvectors are orthonormal,
# so a state can be drawn on a Bloch sphere built from them. The polar angle is
# frozen while the azimuth winds at `2 omega` and the radius shrinks as
# `exp(-gamma t)`.

# %%
import numpy as np

from antipt import SystemParams
from antipt.cpt import CptFrame, trajectory_csv, trajectory_hm
from antipt.linalg import KET0, KET1

params = SystemParams(0.06, 0.03)
frame = CptFrame.from_params(params)
print("C operator:\n", np.round(frame.C, 6))

psi0 = (KET0 - KET1) / np.sqrt(2)
samples = trajectory_hm(params, psi0, tau_max=50.0, n_steps=11)
for s in samples:
    print(f"t={s.t:5.1f}  R={s.raw.R:.4f}  Theta={s.raw.Theta:.4f}  Phi={s.raw.Phi:+.4f}")

# %% [markdown]
# The same data as CSV, ready for a plotting tool.

# %%
print(trajectory_csv(samples)[:400])

# %% [markdown]
# For gamma/J >= 1 the CPT inner product is no longer defined. Passing
# `allow_continuation=True` still produces coordinates, flagged as non-physical.

# %%
broken = trajectory_hm(SystemParams(0.06, 0.12), psi0, 10.0, 3, allow_continuation=True)
print([s.raw.physical for s in broken])
