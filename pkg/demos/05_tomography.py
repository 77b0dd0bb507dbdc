# %% [markdown]
# # State tomography deep in the broken regime
#
# Measuring in the Z, X and Y bases reconstructs the (unnormalized) density
# matrix. Population lost from the computational subspace shows up as a trace
# below one. Fidelity is computed after trace normalization.

# %%
import numpy as np

from antipt import ShotConfig, SystemParams
from antipt.lab import tomography

params = SystemParams(J=0.15 * 0.4, gamma=0.4)
ideal = tomography(params, 10.0, ShotConfig(n_shots=None))
print("ideal rho:\n", np.round(ideal.rho_exp, 6), "\nfidelity", ideal.fidelity)

fids = [tomography(params, 10.0, ShotConfig(10_000, seed=s)).fidelity for s in range(50)]
print(f"10^4 shots over 50 seeds: median F = {np.median(fids):.5f}, min F = {min(fids):.5f}")
