"""Information about the coin angle carried by the walker.

H_f is the quantum Fisher information of the whole state, H_w keeps only
the position and F_x is what a plain position measurement gets. The
Cramer-Rao bound turns any of them into a best-case error bar.
"""

import math

from qwprobe import (
    DetectorWindow,
    classical_fi,
    cramer_rao_bound,
    evolve_tangent,
    full_qfi,
    limited_fi,
    position_qfi_exact,
    position_qfi_paper,
    probability,
    probability_derivative,
    reduce_position,
)

theta = math.pi / 4
window = DetectorWindow.interval(-25, 25)

print(" t      H_f     H_w(approx)  H_w(exact)   F_x      F_x[-25:25]  H_f/t^2")
for t in (1, 10, 25, 50, 100, 150, 200):
    ts = evolve_tangent(theta, t)
    pd = reduce_position(ts)
    dist, dp = probability(ts.base), probability_derivative(ts)
    hf = full_qfi(ts)
    print(f"{t:3d} {hf:10.2f} {position_qfi_paper(pd):11.2f} {position_qfi_exact(pd):11.2f}"
          f" {classical_fi(dist, dp):10.2f} {limited_fi(dist, dp, window):11.2f} {hf / t**2:9.4f}")

# %% After one step the state only picks up a global phase: no information.
ts = evolve_tangent(theta, 1)
print(f"\nH_f at t = 1: {full_qfi(ts):.1e}")

# %% Error bar on theta from 1000 position measurements at t = 100.
ts = evolve_tangent(theta, 100)
f = classical_fi(probability(ts.base), probability_derivative(ts))
print(f"std(theta) >= {math.sqrt(cramer_rao_bound(f, 1000)):.2e} rad with 1000 shots at t = 100")
