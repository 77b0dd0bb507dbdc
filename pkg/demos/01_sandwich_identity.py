# %% [markdown]
# # Building anti-PT evolution from a passive Hamiltonian
#
# The hardware only offers the passive Hamiltonian `H_M = [[0, J], [J, -2i gamma]]`:
# a coupling J between |0> and a lossy level |1>. Conjugating a hold under `H_M`
# with two y-rotations turns it into evolution under the anti-PT-symmetric
# Hamiltonian `H_APT`. This script checks that numerically.

# %%
import numpy as np

from antipt import SystemParams, compile_apt_evolution, h_apt, h_m
from antipt.linalg import expm_series, norm

params = SystemParams(J=0.06, gamma=0.004)
print("H_M =\n", h_m(params))
print("H_APT =\n", h_apt(params))

# %% [markdown]
# The compiled sequence lists its segments in the order they are applied.

# %%
seq = compile_apt_evolution(params, tau=50.0)
for seg in seq.segments:
    print(seg)

# %% [markdown]
# Compare the composed propagator with a direct scaling-and-squaring exponential.

# %%
for tau in (1.0, 10.0, 50.0, 200.0):
    u_seq = compile_apt_evolution(params, tau).propagator()
    u_ref = expm_series(-1j * h_apt(params) * tau)
    print(f"tau = {tau:6.1f} us   max |difference| = {norm(u_seq - u_ref):.2e}")

# %% [markdown]
# Sequences serialize to JSON, which is handy for handing them to a pulse compiler.

# %%
print(seq.to_json())
