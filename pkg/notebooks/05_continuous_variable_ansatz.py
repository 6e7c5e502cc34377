# %% [markdown]
# # Continuous-variable ansatz
#
# Position and momentum outcomes are Gaussian around a centre with widths
# tied by a quality factor f, so that sigma_x * sigma_p = 1/2 for every f.

# %%
import numpy as np

from bellgen.cv import CvGenerator, cv_first_moment, cv_sample, cv_width

# %%
for f in map(float, np.logspace(-3, 3, 7)):
    print(f"f = {f:9.3g}  sigma_x = {cv_width('x', f):.3e}  sigma_p = {cv_width('p', f):.3e}  "
          f"product = {cv_width('x', f) * cv_width('p', f)!r}")

# %%
g = CvGenerator("x", center=1.5, f=2.0)
print("first moment:", cv_first_moment(g))
rep = cv_sample(g, seed=5, n=100_000)
print(f"sample mean {rep.mean:.4f} +/- {rep.mean_se:.4f}, "
      f"variance {rep.variance:.4f} (sigma^2 = {g.sigma ** 2:.4f})")
