"""How fast does the walker spread, and what do the walls do to it?

Run with ``python demos/01_spreading.py``.
"""

import math

import numpy as np

from qwprobe import PLUS, Bounded, Unbounded, evolve, probability, std_dev

T = 200

# %% Free walk: the spread grows linearly in t, faster for small coin angles.
for k in (1, 2, 3):
    theta = k * math.pi / 8
    dist = probability(evolve(theta, T))
    peaks = sorted(int(x) for x in dist.sites[np.argsort(dist.probs)[-2:]])
    print(f"theta = {k}pi/8   sigma(t=200) = {std_dev(dist):7.2f}   peaks at x = {peaks}")

# %% The same walk between walls at +-50. The spin flips at each wall, so
# nothing leaks and the distribution stays normalized.
dist = probability(evolve(math.pi / 4, T, Bounded(50)))
print("\nbounded, a = 50:")
print(f"  total probability = {dist.probs.sum():.15f}")
print(f"  sigma = {std_dev(dist):.2f} (the walls cap it near a)")

# %% Until the amplitude reaches a wall both walks are identical.
free = probability(evolve(math.pi / 4, 50, Unbounded(60), PLUS))
boxed = probability(evolve(math.pi / 4, 50, Bounded(50), PLUS))
gap = np.abs(free.probs[10:-10] - boxed.probs).max()
print(f"\nmax |P_free - P_boxed| at t = 50: {gap:.1e}")
