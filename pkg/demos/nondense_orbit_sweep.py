"""Pressure of non-dense orbit sets, level by level.

The points whose orbit closure misses a reference point z0 form an
increasing union of word-avoidance subshifts: level n avoids the length-n
prefix of z0.  For a non-transitive z0 the level pressures climb all the
way to the pressure of the full system; this script watches that happen on
the full 2-shift against z0 = 000... and shows the degenerate cases too.
"""

import math

import sftpress as sp

f2 = sp.full_shift(2)
zero = sp.Potential.zero(f2)
z0 = sp.eventually_periodic("", "0")

print("avoid the n-prefix of 000... in the full 2-shift (phi = 0):")
sweep = sp.avoidance_pressure_sweep(f2, zero, z0, 12)
print(f"{'n':>3} {'pressure':>16} {'gap to log 2':>14}")
for lv in sweep.levels:
    print(f"{lv.n:>3} {lv.result.value:>16.12f} {lv.gap_to_full:>14.3e}")
print(f"full pressure: {sweep.full_pressure:.12f} = log 2\n")

# The same sweep with a weight: pressures climb to log 3 instead.
phi = sp.Potential.from_table(f2, 1, {"0": 0.0, "1": math.log(2)})
weighted = sp.avoidance_pressure_sweep(f2, phi, z0, 10)
print("weighted variant (exp(phi) = (1,2)), gaps to log 3:")
print(" ", ["%.1e" % lv.gap_to_full for lv in weighted.levels])

# Level 2 against the alternating point keeps only eventually constant
# sequences: entropy zero, and the level after that is already rich again.
alt = sp.eventually_periodic("", "01")
for n in (2, 3, 4):
    level = sp.avoidance_subshift(f2, alt, n)
    p = sp.pressure(level, zero)
    print(f"avoid the {n}-prefix of (01)^inf: pressure {p.value:.6f}")

# A transitive reference point is rejected: its orbit closure is the whole
# space, so no avoidance level survives the hypothesis.
import numpy as np
swap = sp.Sft(np.array([[0, 1], [1, 0]], dtype=np.uint8), "two-cycle")
try:
    sp.avoidance_pressure_sweep(swap, sp.Potential.zero(swap),
                                sp.eventually_periodic("", "01"), 2)
except ValueError as err:
    print(f"\ntwo-cycle space, z0 = (01)^inf -> rejected: {err}")
