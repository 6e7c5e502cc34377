# %% [markdown]
# # CHSH: generator model against classical baselines
#
# The generator model reproduces the cosine correlation curves, so at the
# standard settings its CHSH value is 2*sqrt(2).  Two classical models that
# let each particle answer from its own real projection stay at or below 2.

# %%
import math

from bellgen import (
    ChshSettings,
    ClassicalModel,
    analytic_correlation,
    chsh,
    classical_chsh_max,
    ensemble_chsh,
)

N = 50_000  # small for a quick run; the test suite uses 1e6

# %%
for kind in ("photon", "spin"):
    settings = ChshSettings.optimal(kind)
    exact = chsh(settings, analytic_correlation(kind))
    mc = ensemble_chsh(kind, settings, N, seed=1)
    print(f"{kind:6s} analytic {exact.value:+.6f}  monte carlo {mc.value:+.4f} +/- {mc.std_error:.4f}")

# %% Best CHSH each classical baseline can reach (grid search + refinement)
for kind in ("photon", "spin"):
    for model in ClassicalModel:
        print(f"{kind:6s} {model.value:22s} max |S| = {classical_chsh_max(kind, model):.6f}")
print("quantum bound", 2 * math.sqrt(2))
