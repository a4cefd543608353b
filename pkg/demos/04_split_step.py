"""Split-step walks: two coins per step, and which angle is easier to learn."""

import math

import numpy as np

from qwprobe import (
    SplitStepSpec,
    evolve,
    evolve_split,
    evolve_split_tangent,
    position_qfi_paper,
    probability,
    reduce_position,
    std_dev,
)

T = 100
grid = [k * math.pi / 32 for k in range(1, 16)]

# %% The spread never beats a single-coin walk at the smaller angle.
theta2 = math.pi / 4
print("theta1/pi  sigma_split  sigma_single(min)")
for theta1 in grid[::2]:
    split = std_dev(probability(evolve_split(SplitStepSpec(theta1, theta2), T)))
    single = std_dev(probability(evolve(min(theta1, theta2), T)))
    print(f"{theta1 / math.pi:8.4f} {split:12.2f} {single:12.2f}")

# %% Position information about theta2 while theta1 = pi/4 is held fixed.
theta1 = math.pi / 4
hw = [position_qfi_paper(reduce_position(evolve_split_tangent(SplitStepSpec(theta1, x), T, "theta2")))
      for x in grid]
best = grid[int(np.argmin(hw))]
print(f"\nH_w(theta2) is smallest at theta2 = {best / math.pi:.4f} pi (theta1 = 0.25 pi)")
