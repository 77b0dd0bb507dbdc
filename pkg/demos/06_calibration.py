# %% [markdown]
# # Calibrating gamma and J
#
# gamma comes from the decay of |1> population under pure dissipation,
# `p1 = exp(-4 gamma t)`. J comes from undamped Rabi oscillations,
# `p1 = sin^2(J t)`. Both fits are one-parameter damped Gauss-Newton solves.

# %%
import numpy as np

from antipt import ShotConfig
from antipt.lab import (calibrate_gamma, calibrate_j, default_decay_times,
                        simulate_dissipation, simulate_rabi)

for cfg in (ShotConfig(n_shots=None), ShotConfig(1000, seed=3)):
    label = "exact" if cfg.exact else f"{cfg.n_shots} shots"
    g = calibrate_gamma(simulate_dissipation(0.022, default_decay_times(0.022), cfg))
    j = calibrate_j(simulate_rabi(0.065, np.linspace(0, 100, 21), cfg))
    print(f"{label:>10}: gamma = {g.value:.6f} +- {g.stderr:.1e}   J = {j.value:.6f} +- {j.stderr:.1e}")

# %% [markdown]
# A Rabi scan sampled too coarsely cannot tell J apart from its aliases. The fit
# then sets `alias_warning` and emits an `AliasWarning`.

# %%
import warnings

with warnings.catch_warnings(record=True) as caught:
    warnings.simplefilter("always")
    res = calibrate_j(simulate_rabi(0.065, np.arange(0, 8) * np.pi / 0.065, ShotConfig(n_shots=None)))
print(res.alias_warning, [w.category.__name__ for w in caught])
