"""Pressure on subshifts of finite type, two ways.

A subshift of finite type is a set of infinite symbol sequences constrained
by a 0/1 transition matrix.  Its topological pressure for a locally constant
weight function is log of the Perron root of the weighted transition matrix,
and at the same time the growth rate of plain weighted word sums.  This
script computes both on small systems and exhibits the equilibrium measure.
"""

import math

import sftpress as sp

# The golden mean shift: binary sequences with no "11".
gm = sp.golden_mean_shift()
zero = sp.Potential.zero(gm)

print("golden mean shift, words of length 1..8:")
print(" ", [sp.count_words(gm, n) for n in range(1, 9)], "(Fibonacci)")

entropy = sp.pressure(gm, zero)
print(f"entropy via Perron root: {entropy.value:.12f}")
print(f"closed form log((1+sqrt 5)/2): {math.log((1 + math.sqrt(5)) / 2):.12f}")
print(f"certified bracket width: {entropy.error_bound:.2e}")

# The independent route: (1/n) log of the number of n-words.
for n in (4, 8, 12, 16):
    est = sp.pressure_by_words(gm, zero, n)
    print(f"  word-sum estimate at n={n:2d}: {est.value:.9f}")

# A weighted example on the full 2-shift: give the symbol 1 weight 2.
f2 = sp.full_shift(2)
phi = sp.Potential.from_table(f2, 1, {"0": 0.0, "1": math.log(2)})
print(f"\nfull 2-shift with exp(phi) = (1, 2):")
print(f"  spectral pressure : {sp.pressure(f2, phi).value:.12f}")
print(f"  word sum at n=8   : {sp.pressure_by_words(f2, phi, 8).value:.12f}")
print(f"  log 3             : {math.log(3):.12f}")

# The equilibrium state realizes the variational principle: entropy plus
# the integral of phi equals the pressure.
mu = sp.gibbs_markov_measure(f2, phi)
h, integral = sp.entropy_and_integral(mu, f2, phi)
print(f"  equilibrium measure: Bernoulli{tuple(round(float(p), 6) for p in mu.stationary)}")
print(f"  h + integral = {h + integral:.12f}, "
      f"defect = {sp.variational_defect(f2, phi):.2e}")

# Parry measure of the golden mean shift.
parry = sp.gibbs_markov_measure(gm, zero)
h, _ = sp.entropy_and_integral(parry, gm, zero)
print(f"\nParry measure of the golden mean shift: pi = "
      f"{tuple(round(float(p), 6) for p in parry.stationary)}, entropy {h:.12f}")
