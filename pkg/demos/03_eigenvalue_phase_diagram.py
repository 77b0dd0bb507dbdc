# %% [markdown]
# # Mapping the eigenvalue phase diagram
#
# For each ratio J/gamma the virtual lab re-calibrates gamma from a decay curve,
# measures one overlap, and turns it into normalized eigenvalues
# `E = -i +- omega/gamma`. Exact probabilities reproduce theory to round-off.
# Finite shots add scatter that grows near the exceptional point at J = gamma.

# %%
import numpy as np

from antipt import ShotConfig, SystemParams, eigenvalues_apt, run_eigenvalue_protocol

gamma = 0.05
ratios = np.round(np.arange(0.2, 2.0001, 0.2), 10)

exact = run_eigenvalue_protocol(gamma, ratios * gamma, ShotConfig(n_shots=None), n_repeats=1)
noisy = run_eigenvalue_protocol(gamma, ratios * gamma, ShotConfig(1000, seed=7), n_repeats=3)

print(" J/g    theory E+            exact E+             1000 shots E+ (std re, im)")
for r, e, n in zip(ratios, exact, noisy):
    th = eigenvalues_apt(SystemParams(r * gamma, gamma))[0]
    print(f"{r:4.1f}  {th.real:+.4f}{th.imag:+.4f}j   {e.E_plus.real:+.4f}{e.E_plus.imag:+.4f}j   "
          f"{n.E_plus.real:+.4f}{n.E_plus.imag:+.4f}j ({n.std_real:.3f}, {n.std_imag:.3f})")

# %% [markdown]
# Below the exceptional point the real part vanishes and the imaginary parts
# split. Above it the imaginary part is pinned at -1 while the real parts split.
