# %% [markdown]
# # Generators and pair correlations
#
# A particle carries a reference frame; measuring along a direction `a`
# evaluates a unit "generator" whose real part is the expected outcome.
# A pair shares its reference direction with opposite orientation, and the
# scalar part of the product of the two generators is the pair correlation.

# %%
import math

import numpy as np

from bellgen import (
    Direction2,
    Direction3,
    PhotonFrame,
    SpinFrame,
    expectation,
    generator,
    pair_correlation_frames,
    partner_frame,
)

# %% A photon frame and its generator at a few angles
frame = PhotonFrame(Direction2(0.0), orientation=1)
for deg in (0, 22.5, 45, 90):
    a = Direction2(math.radians(deg))
    g = generator(a, frame)
    print(f"{deg:5.1f} deg  G = {g.re:+.4f}{g.im:+.4f}i  <S> = {expectation(g):+.4f}")

# %% The pair correlation does not depend on the shared reference direction
a, b = Direction2(0.0), Direction2(math.pi / 8)
rng = np.random.default_rng(0)
values = []
for theta_r in rng.uniform(0, 2 * math.pi, 5):
    f = PhotonFrame(Direction2(theta_r), 1)
    values.append(pair_correlation_frames(a, f, b, partner_frame(f)))
print("photon, theta_ab = pi/8:", np.round(values, 12), "target", math.cos(math.pi / 4))

# %% Same for spin: the correlation is -a.b for every shared frame
a3, b3 = Direction3.in_plane(0.0), Direction3.in_plane(math.pi / 3)
for _ in range(3):
    v = rng.standard_normal(3)
    f = SpinFrame(Direction3.normalized(*v), 1, int(rng.choice([1, -1])))
    print("spin:", round(pair_correlation_frames(a3, f, b3, partner_frame(f)), 12))
