# %% [markdown]
# # Closed-form density-matrix evolution
#
# Starting from |0>, the unnormalized state under `H_APT` has a closed form in
# terms of `omega = sqrt(J^2 - gamma^2)`. Below the exceptional point the
# populations oscillate; above it they decay without oscillating.

# %%
import numpy as np

from antipt import SystemParams
from antipt.analytics import invert_overlap, overlap_p, rho_closed

for J, gamma in [(0.06, 0.004), (0.05, 0.05), (0.02, 0.05)]:
    p = SystemParams(J, gamma)
    print(f"J={J}, gamma={gamma}: regime {p.regime.name}, omega={p.omega:.4g}")
    for tau in (0.0, 25.0, 50.0, 100.0):
        r = rho_closed(p, tau)
        print(f"   tau={tau:5.1f}  rho00={r.rho00:.5f}  rho11={r.rho11:.5f}  "
              f"trace={r.trace:.5f}  P={overlap_p(p, tau):.5f}")

# %% [markdown]
# The overlap `P(tau)` with `(|0> - i|1>)/sqrt2` only depends on `omega`, so one
# measured value gives `omega` back. Imaginary results mark the broken regime.

# %%
tau0 = 1 / 0.03
for J in (0.015, 0.03, 0.045):
    p = SystemParams(J, 0.03)
    print(J, invert_overlap(overlap_p(p, tau0), tau0, 0.03), "exact:", p.omega)
