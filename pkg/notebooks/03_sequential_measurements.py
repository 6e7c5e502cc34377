# %% [markdown]
# # Repeated measurements and memory loss
#
# After a measurement the particle's reference direction is replaced by the
# measurement direction, so a second measurement at angle theta follows the
# Malus-type law: cos^2(theta) for photons, cos^2(theta/2) for spin.

# %%
import math

import numpy as np

from bellgen import Direction2, PhotonFrame
from bellgen.measurement import sequential_joint_analytic, sequential_same_probability

N = 50_000

# %%
print(" theta   photon  cos^2     spin  cos^2(t/2)")
for theta in np.linspace(0, math.pi, 5):
    p = sequential_same_probability("photon", theta, N, seed=3)
    s = sequential_same_probability("spin", theta, N, seed=3)
    print(f"{theta:6.3f}  {p.estimate:.4f}  {math.cos(theta) ** 2:.4f}  "
          f"{s.estimate:.4f}  {math.cos(theta / 2) ** 2:.4f}")

# %% Order matters: measuring a then b is not the same as b then a
frame = PhotonFrame(Direction2(0.0))
a, b = Direction2(math.pi / 8), Direction2(math.pi / 4)
print("a then b:\n", sequential_joint_analytic(frame, a, b))
print("b then a (transposed):\n", sequential_joint_analytic(frame, b, a).T)
