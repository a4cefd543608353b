"""Where the coin components interfere, with and without walls."""

import math

import numpy as np

from qwprobe import Bounded, Unbounded, first_divergence, mu_map

theta, a, T = math.pi / 8, 50, 200

free = mu_map(theta, T, Unbounded(T))
boxed = mu_map(theta, T, Bounded(a))

# %% A coarse text picture of the bounded map on a log scale spanning five
# decades: rows are time, columns every second site.
shades = " .:-=+*#%@"
with np.errstate(divide="ignore"):
    level = np.clip(1 + np.log10(boxed.mu / boxed.mu.max()) / 5, 0, 1)
for t in range(0, T + 1, 8):
    print(f"{t:4d} |" + "".join(shades[int(v * 9)] for v in level[t, ::2]) + "|")

# %% The maps agree until the walls start to matter.
t_split = first_divergence(free, boxed)
print(f"\nmaps first differ at t = {t_split} (walls at +-{a})")
print(f"peak interference at t = {T}: free {free.mu[T].max():.2e}, bounded {boxed.mu[T].max():.2e}")
print(f"total interference at t = {T}: free {free.mu[T].sum():.3f}, bounded {np.sum(boxed.mu[T]):.3f}")
