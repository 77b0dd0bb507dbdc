# %% [markdown]
# # How often does the noisy protocol land inside its error bars?
#
# With 1000 shots and 3 repetitions, each point is accepted when both the real
# and the imaginary part lie within `max(3 std, 0.05)` of theory. The std comes
# from only three repetitions, so a few misses per thousand points are expected,
# mostly close to the exceptional point. This runs 200 seeds (a few seconds).

# %%
import numpy as np

from antipt import ShotConfig, SystemParams, eigenvalues_apt, run_eigenvalue_protocol

gamma = 0.05
ratios = [r for r in np.round(np.arange(0.2, 2.0001, 0.1), 10) if not 0.9 < r < 1.1]
misses = np.zeros(len(ratios), dtype=int)
clean_seeds = 0
for seed in range(200):
    est = run_eigenvalue_protocol(gamma, [r * gamma for r in ratios], ShotConfig(1000, seed=seed), 3)
    ok_all = True
    for i, (r, e) in enumerate(zip(ratios, est)):
        th = eigenvalues_apt(SystemParams(r * gamma, gamma))[0]
        ok = (abs(e.E_plus.real - th.real) <= max(3 * e.std_real, 0.05)
              and abs(e.E_plus.imag - th.imag) <= max(3 * e.std_imag, 0.05))
        misses[i] += not ok
        ok_all &= ok
    clean_seeds += ok_all

print(f"seeds with every point inside: {clean_seeds}/200")
print(f"per-point pass rate: {1 - misses.sum() / (200 * len(ratios)):.4f}")
for r, m in zip(ratios, misses):
    print(f"  J/gamma = {r:3.1f}: {m:3d} misses")
