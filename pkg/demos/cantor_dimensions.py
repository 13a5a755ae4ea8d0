"""Hausdorff dimension through the root of the pressure equation.

For an expanding piecewise linear Markov map, coding by branches turns
geometry into symbolic dynamics: the dimension of an invariant set is the
unique s with P(-s log|slope|) = 0.  Avoiding the fixed point 0 of the
times-3 map at cylinder level 1 gives the middle-third Cantor set; deeper
levels approach the full dimension 1, mirroring the pressure sweeps of the
avoidance module.
"""

import math

import sftpress as sp

# times-3 map, coded as the full 3-shift with constant weight log 3
sft3, phi3 = sp.code_map(sp.times_k(3))
z0 = sp.eventually_periodic("", sp.point_to_symbols(sp.times_k(3), 0, 1))

print("times-3 map, avoid the n-cylinder of the fixed point 0:")
sweep = sp.dimension_sweep(sft3, phi3, z0, 7)
for n, res in sweep.levels:
    print(f"  level {n}: dim = {res.s_star:.9f}  (bracket width {res.hi - res.lo:.1e})")
print(f"  middle-third Cantor: log 2 / log 3 = {math.log(2) / math.log(3):.9f}")

# Full invariant sets of the times-k family have dimension exactly 1.
for k in (2, 3, 10):
    sft, phi = sp.code_map(sp.times_k(k))
    print(f"times-{k} full space: dim = {sp.bowen_root(sft, phi).s_star:.12f}")

# A repeller with unequal expansion: a full branch of slope 2 plus a branch
# of slope -4 whose image is the first domain only (golden mean scheme).
from fractions import Fraction
repeller = sp.PiecewiseLinearMarkovMap((
    sp.Branch(Fraction(0), Fraction(1, 2), Fraction(2), Fraction(0)),
    sp.Branch(Fraction(3, 5), Fraction(29, 40), Fraction(-4), Fraction(29, 10)),
), label="repeller-2-4")
sft, phi = sp.code_map(repeller)
print(f"\nrepeller with slopes (2, 4) on transitions {sft.transitions.tolist()}:")
root = sp.bowen_root(sft, phi)
print(f"  symbolic dimension: {root.s_star:.9f}  "
      f"(residual {root.residual:.1e})")

# Geometric cross-check: cover the invariant set by exact cylinder intervals
# and solve the covering-sum equation, no transfer matrix involved.
for depth in (6, 9, 12):
    intervals = sp.cylinder_intervals(repeller, depth)
    oracle = sp.moran_root_from_intervals(list(intervals.values()))
    print(f"  covering-sum root at depth {depth:2d}: {oracle:.6f} "
          f"({len(intervals)} intervals)")
